//! Harnack constants in the three regimes, and the absolute bounds they
//! imply. The p ≤ 1 constant is solution-free with a fully pinned exponent
//! choice; 1 < p < p_c composes the sup bound with the two-exponent lower
//! route; p_c ≤ p < p_s is the general form whose constant must carry local
//! norms of the solution itself (the singular profile shows why).

use serde::{Deserialize, Serialize};

use crate::constants::{lower, upper, ExponentWindow};
use crate::error::{Error, Result};
use crate::magnitude::Mag;
use crate::params::{self, ProblemParams, RadiiChain};

const E: f64 = std::f64::consts::E;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HarnackRegime {
    /// 0 ≤ p ≤ 1: solution-free constant with the pinned small exponent.
    Sublinear,
    /// 1 < p < p_c: solution-free via the three-radius lower route.
    SubSerrin,
    /// p_c ≤ p < p_s: constant depends on local norms of u.
    General,
}

/// A computed Harnack constant with its regime tag and, for the sublinear
/// regime, the induced exponent bookkeeping.
#[derive(Debug, Clone)]
pub struct HarnackValue {
    pub value: Mag,
    pub regime: HarnackRegime,
    pub n0: Option<i64>,
    pub eps: Option<f64>,
    pub q0: Option<f64>,
    pub notes: Vec<String>,
}

/// Mean integrals of the solution needed by the general-regime constant.
#[derive(Debug, Clone, Copy)]
pub struct HarnackNorms {
    /// ⨍_{B_{R0}} u^{q̄}
    pub mean_q_over: Mag,
    /// ⨍_{B_{R0}} u^{q̲}
    pub mean_q_under: Mag,
    /// ⨍_{B_{R∞}} u^{(p−1)₊}
    pub mean_p_minus_one: Mag,
}

/// n₀ and the induced slack ε for the sublinear constant: n₀ is the first
/// integer n with ε(n) > 0, where
///   ε(n) = (d/(d−2))^{n−1/2} 2^{(d−3)/2}/(dω_d²) − e(d−1).
/// The closed integer-part expression from the statement is compared and a
/// note is attached when the two disagree (possible on half-integer ties).
pub fn sublinear_n0(d: u32) -> (i64, f64, Option<String>) {
    let df = f64::from(d);
    let omega = params::omega_d(d);
    let base = df / (df - 2.0);
    let coeff = 2f64.powf((df - 3.0) / 2.0) / (df * omega * omega);
    let eps_of = |n: f64| base.powf(n - 0.5) * coeff - E * (df - 1.0);
    // first integer with ε(n) > 0
    let crossing = (E * (df - 1.0) / coeff).ln() / base.ln() + 0.5;
    let mut n0 = crossing.floor() as i64 + 1;
    while eps_of(n0 as f64) <= 0.0 {
        n0 += 1;
    }
    while n0 > 1 && eps_of((n0 - 1) as f64) > 0.0 {
        n0 -= 1;
    }
    let stated = ((E * (df - 1.0) / coeff).ln() / base.ln() + 1.5).floor() as i64;
    let note = if stated != n0 {
        Some(format!(
            "integer-part forms disagree: statement gives n0 = {stated}, first-positive gives n0 = {n0}"
        ))
    } else {
        None
    };
    (n0, eps_of(n0 as f64), note)
}

fn harnack_sublinear(params: ProblemParams, chain: &RadiiChain, s2: f64) -> Result<HarnackValue> {
    let d = params.df();
    let omega = params::omega_d(params.d);
    let (n0, eps, note) = sublinear_n0(params.d);
    let q0 = ((d - 2.0) / d).powf(n0 as f64 - 0.5);
    let x =
        (d / (d - 2.0)).powf(n0 as f64 - 0.5) * 2f64.powf((d - 3.0) / 2.0) / (d * omega * omega);

    let (r0, ri) = (chain.r0, chain.r_inf);
    let gap2 = (r0 - ri) * (r0 - ri);
    let lam = params::lambda_p(params.p, params.lambda);

    let ln_first = d / (2.0 * q0)
        * (2f64.powi(params.d as i32) * s2.powi(4) * r0 * r0 / gap2
            * (d * r0 * r0 / gap2 + r0 * r0 / (ri * ri)))
            .ln();
    let ln_mid = 2.0 / q0 * (2f64.powi(params.d as i32) * (x + E) * omega.sqrt() / eps).ln();
    let inner = lam
        + (d - 2.0) / q0
        + gap2 / (ri * ri) * ((d - 2.0) * (d * q0 - (d - 2.0)).abs() / (d * q0).powi(2)).max(0.25);
    let ln_third = d / (2.0 * q0)
        * ((d / (d - 2.0)).powf(d) * 2.0 * (d - 2.0) * d.sqrt()
            / (d.sqrt() - (d - 2.0).sqrt()).powi(3)
            * inner)
            .ln();

    Ok(HarnackValue {
        value: Mag::from_ln(ln_first + ln_mid + ln_third, 0.0),
        regime: HarnackRegime::Sublinear,
        n0: Some(n0),
        eps: Some(eps),
        q0: Some(q0),
        notes: note.into_iter().collect(),
    })
}

fn harnack_sub_serrin(
    params: ProblemParams,
    chain: &RadiiChain,
    window: &ExponentWindow,
    s2: f64,
) -> Result<HarnackValue> {
    let exps = params.exponents();
    let r_bar = chain.r_bar.ok_or_else(|| {
        Error::Geometry("the 1 < p < p_c Harnack constant needs the three-radius chain".into())
    })?;
    let mut notes = Vec::new();
    let mut q_over = window.q_over;
    if !(q_over > exps.q_bar && q_over < exps.p_c) {
        return Err(Error::Regime(format!(
            "need q̄ in ({}, {}), got {q_over}",
            exps.q_bar, exps.p_c
        )));
    }
    let nudged = upper::nudge_q(params.d, params.p, q_over)?;
    if nudged != q_over {
        notes.push(format!(
            "q̄ nudged from {q_over} to {nudged} to pass the integer-part condition"
        ));
        q_over = nudged;
    }
    let q0_cap = lower::small_exponent_threshold_e(params.d);
    let q_under = window.q_under.min(q0_cap).min(q_over);
    if !(q_under > 0.0) {
        return Err(Error::Regime("need a positive small exponent".into()));
    }

    let i_up = upper::sup_bound_constant(params, chain, q_over, s2)?;
    let i_rev = lower::rev_holder_constant(params, q_over, q_under, r_bar, chain.r0, s2)?;
    // the ε = e inf-bound specialization
    let i_low = lower::inf_bound_constant(params.d, q_under, E, chain.r0, chain.r_inf, s2)?;
    let expo = 2.0 * q_over / (2.0 * q_over - params.df() * (params.p - 1.0));
    Ok(HarnackValue {
        value: i_up.mul(i_rev.div(i_low).powf(expo)),
        regime: HarnackRegime::SubSerrin,
        n0: None,
        eps: None,
        q0: Some(q_under),
        notes,
    })
}

/// The exponent pair the general-regime constant actually uses: the nudged
/// q̄ and the threshold-capped q̲. Exposed so callers can compute the mean
/// norms with exactly these exponents.
pub fn general_exponents(params: ProblemParams, window: &ExponentWindow) -> Result<(f64, f64)> {
    let exps = params.exponents();
    if !(window.q > exps.q_bar) {
        return Err(Error::Regime(format!(
            "need q̄ > {}, got {}",
            exps.q_bar, window.q
        )));
    }
    let q_over = upper::nudge_q(params.d, params.p, window.q)?;
    let threshold = lower::small_exponent_threshold(params.df(), window.eps)?;
    Ok((q_over, window.q_under.min(threshold)))
}

fn harnack_general(
    params: ProblemParams,
    chain: &RadiiChain,
    window: &ExponentWindow,
    norms: &HarnackNorms,
    s2: f64,
) -> Result<HarnackValue> {
    let mut notes = vec!["norm exponent q of the mean quotient taken equal to q̄".to_string()];
    let (q_over, q_under) = general_exponents(params, window)?;
    if q_over != window.q {
        notes.push(format!("q̄ nudged from {} to {q_over}", window.q));
    }

    let i_up = upper::sup_bound_constant(params, chain, q_over, s2)?;
    let i_low =
        lower::inf_bound_constant(params.d, q_under, window.eps, chain.r0, chain.r_inf, s2)?;
    let dp1 = params.df() * params.p_minus_one_pos();
    let mu = params.df() / (2.0 * q_over - dp1);
    // quotient (⨍_{B_{R0}} u^{q̄})^{(p−1)₊/q̄} / ⨍_{B_{R∞}} u^{(p−1)₊}, power d/(2q̄−d(p−1)₊)
    let quotient = norms
        .mean_q_over
        .powf(params.p_minus_one_pos() / q_over)
        .div(norms.mean_p_minus_one)
        .powf(mu);
    let tail = norms
        .mean_q_over
        .powf(1.0 / q_over)
        .div(norms.mean_q_under.powf(1.0 / q_under));
    Ok(HarnackValue {
        value: i_up.div(i_low).mul(quotient).mul(tail),
        regime: HarnackRegime::General,
        n0: None,
        eps: Some(window.eps),
        q0: Some(q_under),
        notes,
    })
}

/// Harnack constant dispatch: sup_{B_{R∞}} u ≤ H · inf_{B_{R∞}} u with H from
/// the regime-appropriate theorem. Mean norms of u are required only in the
/// range p_c ≤ p < p_s.
pub fn harnack_constant(
    params: ProblemParams,
    chain: &RadiiChain,
    window: &ExponentWindow,
    u_norms: Option<&HarnackNorms>,
    s2: f64,
) -> Result<HarnackValue> {
    chain.validate()?;
    let exps = params.exponents();
    if params.p >= exps.p_s {
        return Err(Error::Regime(format!(
            "no Harnack bound at or above p_s = {}; got p = {}",
            exps.p_s, params.p
        )));
    }
    if params.p <= 1.0 {
        harnack_sublinear(params, chain, s2)
    } else if params.p < exps.p_c {
        harnack_sub_serrin(params, chain, window, s2)
    } else {
        let norms = u_norms.ok_or_else(|| {
            Error::Regime(
                "the constant depends on u for p_c <= p < p_s: local norms are required".into(),
            )
        })?;
        harnack_general(params, chain, window, norms, s2)
    }
}

/// Absolute local bounds: a sup bound for 1 < p < p_c and an inf bound for
/// 0 ≤ p < 1, both free of any norm of u; "No" outside those windows.
#[derive(Debug, Clone)]
pub struct AbsoluteBounds {
    pub upper: Option<Mag>,
    pub lower: Option<Mag>,
    pub reason: Option<String>,
}

pub fn absolute_bounds(
    params: ProblemParams,
    chain: &RadiiChain,
    window: &ExponentWindow,
    s2: f64,
) -> Result<AbsoluteBounds> {
    chain.validate()?;
    let exps = params.exponents();
    let (r0, ri) = (chain.r0, chain.r_inf);
    let gap2 = (r0 - ri) * (r0 - ri);
    let caccioppoli =
        8.0 * r0.powi(params.d as i32) / (params.lambda * gap2 * ri.powi(params.d as i32));
    if params.p > 1.0 && params.p < exps.p_c {
        let h = harnack_constant(params, chain, window, None, s2)?;
        let upper = h
            .value
            .mul(Mag::exact(caccioppoli).powf(1.0 / (params.p - 1.0)));
        Ok(AbsoluteBounds {
            upper: Some(upper),
            lower: None,
            reason: None,
        })
    } else if params.p < 1.0 {
        let h = harnack_constant(params, chain, window, None, s2)?;
        let lower = h
            .value
            .recip()
            .mul(Mag::exact(1.0 / caccioppoli).powf(1.0 / (1.0 - params.p)));
        Ok(AbsoluteBounds {
            upper: None,
            lower: Some(lower),
            reason: None,
        })
    } else {
        Ok(AbsoluteBounds {
            upper: None,
            lower: None,
            reason: Some(format!(
                "No: absolute bounds exist only for 0 <= p < 1 (lower) and 1 < p < p_c (upper); p = {}",
                params.p
            )),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> RadiiChain {
        RadiiChain::new(0.25, Some(0.5), 0.75, None).unwrap()
    }

    #[test]
    fn sublinear_n0_d3() {
        // d = 3: crossing at 5.1489…, so n0 = 6 and q0 = 3^{−5.5}
        let (n0, eps, note) = sublinear_n0(3);
        assert_eq!(n0, 6);
        assert!(eps > 0.0);
        assert!(note.is_none());
        let q0 = (1.0f64 / 3.0).powf(5.5);
        assert!((q0 - 2.375e-3).abs() < 1e-5);
    }

    #[test]
    fn sublinear_n0_is_first_positive() {
        for d in 3..=10u32 {
            let (n0, eps, _) = sublinear_n0(d);
            assert!(eps > 0.0, "d={d}");
            let df = f64::from(d);
            let omega = params::omega_d(d);
            let coeff = 2f64.powf((df - 3.0) / 2.0) / (df * omega * omega);
            let eps_prev = (df / (df - 2.0)).powf(n0 as f64 - 1.5) * coeff - E * (df - 1.0);
            assert!(eps_prev <= 0.0, "d={d}: n0 not minimal");
        }
    }

    #[test]
    fn sublinear_against_generic_assembly() {
        // Second route: I_{∞,q0}/I_{−∞,q0} through the generic formulas with
        // ε = ε(n0). The two printed forms of the sup-bound constant differ
        // in exactly one place: the generic one weights the max-term with
        // (1−ρ)², the specialized one with (R0−R∞)²/R∞². The quotient of the
        // two routes must therefore be exactly [inner_h/inner_g]^{d/(2q0)}.
        for d in [3u32, 4, 5] {
            for p in [0.0, 0.5, 1.0] {
                let params = ProblemParams::new(d, p, 2.0).unwrap();
                let chain = chain3();
                let s2 = 0.8;
                let h = harnack_sublinear(params, &chain, s2).unwrap();
                let (q0, eps) = (h.q0.unwrap(), h.eps.unwrap());
                let i_up = upper::sup_bound_constant(params, &chain, q0, s2).unwrap();
                let i_low =
                    lower::inf_bound_constant(d, q0, eps, chain.r0, chain.r_inf, s2).unwrap();
                let route_b = i_up.div(i_low);

                let df = f64::from(d);
                let lam = params::lambda_p(p, params.lambda);
                let rho = chain.rho();
                let gap2 = (chain.r0 - chain.r_inf) * (chain.r0 - chain.r_inf);
                let maxterm =
                    ((df - 2.0) * (df * q0 - (df - 2.0)).abs() / (df * q0).powi(2)).max(0.25);
                let inner_h = lam + (df - 2.0) / q0 + gap2 / (chain.r_inf * chain.r_inf) * maxterm;
                let inner_g = lam + (df - 2.0) / q0 + (1.0 - rho) * (1.0 - rho) * maxterm;
                let drift = df / (2.0 * q0) * (inner_h / inner_g).ln();
                assert!(
                    (h.value.ln - route_b.ln - drift).abs() < 1e-8 * h.value.ln.abs().max(1.0),
                    "d={d} p={p}: {} vs {} (drift {drift})",
                    h.value.ln,
                    route_b.ln
                );
            }
        }
    }

    #[test]
    fn harnack_dispatch_regimes() {
        let chain = chain3();
        let w = |params| ExponentWindow::defaults(params);
        let sub = ProblemParams::new(3, 0.5, 1.0).unwrap();
        assert_eq!(
            harnack_constant(sub, &chain, &w(sub), None, 1.0)
                .unwrap()
                .regime,
            HarnackRegime::Sublinear
        );
        let mid = ProblemParams::new(3, 2.0, 1.0).unwrap();
        assert_eq!(
            harnack_constant(mid, &chain, &w(mid), None, 1.0)
                .unwrap()
                .regime,
            HarnackRegime::SubSerrin
        );
        let crit = ProblemParams::new(3, 4.0, 1.0).unwrap();
        assert!(harnack_constant(crit, &chain, &w(crit), None, 1.0).is_err());
        let norms = HarnackNorms {
            mean_q_over: Mag::exact(1.0),
            mean_q_under: Mag::exact(1.0),
            mean_p_minus_one: Mag::exact(1.0),
        };
        assert_eq!(
            harnack_constant(crit, &chain, &w(crit), Some(&norms), 1.0)
                .unwrap()
                .regime,
            HarnackRegime::General
        );
        let beyond = ProblemParams::new(3, 5.0, 1.0).unwrap();
        assert!(harnack_constant(beyond, &chain, &w(beyond), Some(&norms), 1.0).is_err());
    }

    #[test]
    fn general_constant_on_constant_stub_collapses() {
        // with all mean quotients equal to 1, H_p[u] = I_{∞,q̄}/I_{−∞,q̲}
        let params = ProblemParams::new(3, 4.0, 1.0).unwrap();
        let chain = chain3();
        let w = ExponentWindow::defaults(params);
        let ones = HarnackNorms {
            mean_q_over: Mag::ONE,
            mean_q_under: Mag::ONE,
            mean_p_minus_one: Mag::ONE,
        };
        let h = harnack_constant(params, &chain, &w, Some(&ones), 1.0).unwrap();
        let q_over = upper::nudge_q(3, 4.0, w.q).unwrap();
        let i_up = upper::sup_bound_constant(params, &chain, q_over, 1.0).unwrap();
        let threshold = lower::small_exponent_threshold(3.0, w.eps).unwrap();
        let i_low = lower::inf_bound_constant(
            3,
            w.q_under.min(threshold),
            w.eps,
            chain.r0,
            chain.r_inf,
            1.0,
        )
        .unwrap();
        assert!((h.value.ln - (i_up.ln - i_low.ln)).abs() < 1e-10);
    }

    #[test]
    fn sub_serrin_composition_identity() {
        // H_p = I_{∞,q̄} (I_{q̄,q̲}/I_{−∞,q̲})^{2q̄/(2q̄−d(p−1))}
        let params = ProblemParams::new(3, 2.0, 1.0).unwrap();
        let chain = chain3();
        let w = ExponentWindow::defaults(params);
        let h = harnack_constant(params, &chain, &w, None, 1.0).unwrap();
        let q_over = upper::nudge_q(3, 2.0, w.q_over).unwrap();
        let q_under = w
            .q_under
            .min(lower::small_exponent_threshold_e(3))
            .min(q_over);
        let i_up = upper::sup_bound_constant(params, &chain, q_over, 1.0).unwrap();
        let i_rev = lower::rev_holder_constant(params, q_over, q_under, 0.5, 0.75, 1.0).unwrap();
        let i_low = lower::inf_bound_constant(3, q_under, E, 0.75, 0.25, 1.0).unwrap();
        let expo = 2.0 * q_over / (2.0 * q_over - 3.0);
        let want = i_up.ln + expo * (i_rev.ln - i_low.ln);
        assert!((h.value.ln - want).abs() < 1e-9 * want.abs().max(1.0));
    }

    #[test]
    fn absolute_bounds_regimes() {
        let chain = chain3();
        let p1 = ProblemParams::new(3, 1.0, 1.0).unwrap();
        let b = absolute_bounds(p1, &chain, &ExponentWindow::defaults(p1), 1.0).unwrap();
        assert!(b.upper.is_none() && b.lower.is_none());
        assert!(b.reason.as_deref().unwrap_or("").starts_with("No"));

        let p2 = ProblemParams::new(3, 2.0, 1.0).unwrap();
        let b2 = absolute_bounds(p2, &chain, &ExponentWindow::defaults(p2), 1.0).unwrap();
        assert!(b2.upper.is_some() && b2.lower.is_none());

        let half = ProblemParams::new(3, 0.5, 1.0).unwrap();
        let bh = absolute_bounds(half, &chain, &ExponentWindow::defaults(half), 1.0).unwrap();
        assert!(bh.upper.is_none() && bh.lower.is_some());

        let zero = ProblemParams::new(3, 0.0, 1.0).unwrap();
        let bz = absolute_bounds(zero, &chain, &ExponentWindow::defaults(zero), 1.0).unwrap();
        assert!(bz.lower.is_some());
    }

    #[test]
    fn absolute_upper_decreasing_in_lambda() {
        let chain = chain3();
        let small = ProblemParams::new(3, 2.0, 1.0).unwrap();
        let large = ProblemParams::new(3, 2.0, 4.0).unwrap();
        let bu = absolute_bounds(small, &chain, &ExponentWindow::defaults(small), 1.0).unwrap();
        let bl = absolute_bounds(large, &chain, &ExponentWindow::defaults(large), 1.0).unwrap();
        assert!(bl.upper.unwrap().ln < bu.upper.unwrap().ln);
        // and the lower bound increases in λ for p < 1
        let s = ProblemParams::new(3, 0.5, 1.0).unwrap();
        let l = ProblemParams::new(3, 0.5, 4.0).unwrap();
        let bs = absolute_bounds(s, &chain, &ExponentWindow::defaults(s), 1.0).unwrap();
        let blg = absolute_bounds(l, &chain, &ExponentWindow::defaults(l), 1.0).unwrap();
        assert!(blg.lower.unwrap().ln > bs.lower.unwrap().ln);
    }
}
