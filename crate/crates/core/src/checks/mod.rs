//! Executable checks: each bound becomes a comparison of two computed sides
//! with quadrature error bars, reported as a margin rhs/lhs.
//!
//! A check never asserts a hand-tuned margin; it compares against 1. Margins
//! far above 1 are expected (the explicit constants are wildly non-sharp);
//! a margin below 1 on a fixture satisfying the hypotheses means a bug, not
//! a counterexample.

pub mod counterexample;
pub mod moser;

use serde::{Deserialize, Serialize};

use crate::constants::{self, coeff, gradient, harnack, lower, upper, ExponentWindow, PRegime};
use crate::cutoff::CutoffProfile;
use crate::error::{Error, Result};
use crate::magnitude::Mag;
use crate::norms;
use crate::params::{self, RadiiChain};
use crate::profile::RadialProfile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "reason")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
    Inapplicable(String),
}

/// One verified inequality: both sides, the margin rhs/lhs, and the verdict.
/// Sides whose magnitude leaves the f64 range keep their log10 fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub regime: String,
    pub anchors: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub lhs_log10: Option<f64>,
    pub rhs_log10: Option<f64>,
    pub margin: Option<f64>,
    pub margin_log10: Option<f64>,
    pub error_allowance: f64,
    pub notes: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }

    fn inapplicable(name: &str, anchors: &str, regime: &str, reason: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: CheckStatus::Inapplicable(reason.into()),
            regime: regime.into(),
            anchors: anchors.into(),
            lhs: None,
            rhs: None,
            lhs_log10: None,
            rhs_log10: None,
            margin: None,
            margin_log10: None,
            error_allowance: 0.0,
            notes: Vec::new(),
        }
    }

    /// Decide pass/fail from lhs ≤ rhs with the error allowance from both
    /// error bars; margins inside the allowance band are inconclusive.
    fn decide(
        name: &str,
        anchors: &str,
        regime: &str,
        lhs: Mag,
        rhs: Mag,
        notes: Vec<String>,
    ) -> Self {
        let ea = (lhs.rel_err + rhs.rel_err).min(0.5);
        let margin_ln = rhs.ln - lhs.ln;
        let status = if margin_ln >= (1.0 + ea).ln() {
            CheckStatus::Pass
        } else if margin_ln < (1.0 - ea).ln() {
            CheckStatus::Fail
        } else {
            CheckStatus::Inconclusive
        };
        let fin = |x: f64| if x.is_finite() { Some(x) } else { None };
        CheckResult {
            name: name.into(),
            status,
            regime: regime.into(),
            anchors: anchors.into(),
            lhs: fin(lhs.value()),
            rhs: fin(rhs.value()),
            lhs_log10: fin(lhs.log10()),
            rhs_log10: fin(rhs.log10()),
            margin: fin(margin_ln.exp()),
            margin_log10: fin(margin_ln / std::f64::consts::LN_10),
            error_allowance: ea,
            notes,
        }
    }
}

fn regime_tag(profile: &RadialProfile) -> &'static str {
    PRegime::of(profile.params()).tag()
}

fn sup_mag(profile: &RadialProfile, r: f64) -> Result<Mag> {
    let si = norms::sup_inf(profile, r)?;
    let sup = si
        .sup
        .ok_or_else(|| Error::Divergent("sup over a ball containing the singularity".into()))?;
    Ok(Mag::new(
        sup,
        if profile.is_nonincreasing() {
            0.0
        } else {
            1e-9
        },
    ))
}

fn inf_mag(profile: &RadialProfile, r: f64) -> Result<Mag> {
    let si = norms::sup_inf(profile, r)?;
    if !(si.inf > 0.0) {
        return Err(Error::Parameter("infimum not positive on the ball".into()));
    }
    Ok(Mag::new(
        si.inf,
        if profile.is_nonincreasing() {
            0.0
        } else {
            1e-9
        },
    ))
}

fn guard_solution(profile: &RadialProfile, name: &str, anchors: &str) -> Option<CheckResult> {
    if !profile.certifies_solution() {
        return Some(CheckResult::inapplicable(
            name,
            anchors,
            regime_tag(profile),
            "fixture does not certify the equation (hypothesis guard)",
        ));
    }
    None
}

/// The sup-bound family holds one-sidedly, so subsolution fixtures are
/// admitted there; everything else needs the full solution certificate.
fn guard_subsolution(profile: &RadialProfile, name: &str, anchors: &str) -> Option<CheckResult> {
    if !profile.certifies_subsolution() {
        return Some(CheckResult::inapplicable(
            name,
            anchors,
            regime_tag(profile),
            "fixture does not certify even a subsolution (hypothesis guard)",
        ));
    }
    None
}

fn err_to_result(name: &str, anchors: &str, regime: &str, e: Error) -> CheckResult {
    CheckResult::inapplicable(name, anchors, regime, e.to_string())
}

/// Caccioppoli budget: λ∫_{B_R} uᵖ/(u+δ) + ∫_{B_R}|∇log(u+δ)|² against the
/// geometric right side; plus the norm-free L^{p−1} variant when p > 1.
pub fn check_caccioppoli(
    profile: &RadialProfile,
    chain: &RadiiChain,
    delta: f64,
) -> Vec<CheckResult> {
    const NAME: &str = "caccioppoli";
    const ANCHOR: &str = "caccioppoli.quantitative";
    let tag = regime_tag(profile);
    if let Some(na) = guard_solution(profile, NAME, ANCHOR) {
        return vec![na];
    }
    if PRegime::of(profile.params()) == PRegime::OutOfRange {
        return vec![CheckResult::inapplicable(
            NAME,
            ANCHOR,
            tag,
            "p >= p_s: outside the theory",
        )];
    }
    let run = || -> Result<Vec<CheckResult>> {
        chain.validate()?;
        let p = profile.params();
        let r = chain.r_bar_or_mid();
        let rhs = Mag::exact(upper::caccioppoli_bound(p.d, chain.r0, r)?);

        let dm1 = p.d as i32 - 1;
        let pts = if profile.is_singular_at_origin() {
            crate::quad::graded_breakpoints(0.0, r, 32, 4.0)
        } else {
            crate::quad::graded_breakpoints(0.0, r, 8, 1.0)
        };
        let source = crate::quad::integrate(
            |t: f64| {
                let u = profile.u(t);
                u.max(0.0).powf(p.p) / (u + delta) * t.powi(dm1)
            },
            &pts,
            1e-11,
        );
        let grad = norms::log_gradient_integral(profile, delta, r)?;
        let sd = params::surface_factor(p.d);
        let lhs_v = p.lambda * sd * source.value + grad.value;
        let lhs = Mag::new(
            lhs_v,
            (p.lambda * sd * source.abs_error + grad.abs_error) / lhs_v.max(1e-300),
        );
        let mut out = vec![CheckResult::decide(NAME, ANCHOR, tag, lhs, rhs, vec![])];

        if p.p > 1.0 {
            let power = norms::lq_norm_mag(profile, p.p - 1.0, r)?.powf(p.p - 1.0);
            let lhs_abs = Mag::exact(p.lambda).mul(power);
            out.push(CheckResult::decide(
                "caccioppoli.absolute",
                "caccioppoli.power-integral",
                tag,
                lhs_abs,
                rhs,
                vec![],
            ));
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![err_to_result(NAME, ANCHOR, tag, e)])
}

/// Two-ball sup bound ‖u‖_{∞,R∞} ≤ I_{∞,q}·(mean norms).
pub fn check_upper(profile: &RadialProfile, chain: &RadiiChain, q_in: f64, s2: f64) -> CheckResult {
    const NAME: &str = "upper.moser";
    const ANCHOR: &str = "upper.moser.q";
    let tag = regime_tag(profile);
    if let Some(na) = guard_subsolution(profile, NAME, ANCHOR) {
        return na;
    }
    let p = profile.params();
    let exps = p.exponents();
    if p.p >= exps.p_s {
        return CheckResult::inapplicable(NAME, ANCHOR, tag, "p >= p_s: outside the theory");
    }
    if profile.is_singular_at_origin() {
        return CheckResult::inapplicable(
            NAME,
            ANCHOR,
            tag,
            "sup over the origin is infinite; the bound must fail here (see counterexample.singular)",
        );
    }
    let run = || -> Result<CheckResult> {
        let mut notes = Vec::new();
        let q = upper::nudge_q(p.d, p.p, q_in)?;
        if q != q_in {
            notes.push(format!(
                "q nudged from {q_in} to {q} (integer-part condition)"
            ));
        }
        let lhs = sup_mag(profile, chain.r_inf)?;
        let i_up = upper::sup_bound_constant(p, chain, q, s2)?;
        let mean_q = norms::mean_integral_mag(profile, q, chain.r0)?;
        let rhs = if p.p > 1.0 {
            let mu = p.df() / (2.0 * q - p.df() * (p.p - 1.0));
            let mean_p1 = norms::mean_integral_mag(profile, p.p - 1.0, chain.r_inf)?;
            i_up.mul(mean_q.powf((1.0 + (p.p - 1.0) * mu) / q))
                .mul(mean_p1.powf(-mu))
        } else {
            i_up.mul(mean_q.powf(1.0 / q))
        };
        Ok(CheckResult::decide(NAME, ANCHOR, tag, lhs, rhs, notes))
    };
    run().unwrap_or_else(|e| err_to_result(NAME, ANCHOR, tag, e))
}

/// Second-form sup bound through the coefficient route: for p > 1 with
/// b = λu^{p−1} ∈ L^r, for p ≤ 1 with the bounded-coefficient limit.
pub fn check_upper_second_form(
    profile: &RadialProfile,
    chain: &RadiiChain,
    q0: f64,
    r_over: f64,
    s2: f64,
) -> CheckResult {
    const NAME: &str = "upper.second-form";
    const ANCHOR: &str = "upper.second-form";
    let tag = regime_tag(profile);
    if let Some(na) = guard_subsolution(profile, NAME, ANCHOR) {
        return na;
    }
    let p = profile.params();
    let exps = p.exponents();
    if p.p >= exps.p_s {
        return CheckResult::inapplicable(NAME, ANCHOR, tag, "p >= p_s: outside the theory");
    }
    if profile.is_singular_at_origin() {
        return CheckResult::inapplicable(NAME, ANCHOR, tag, "sup over the origin is infinite");
    }
    let run = || -> Result<CheckResult> {
        chain.validate()?;
        let (r_inf, r_mid, r_outer) = coeff::second_form_radii(chain);
        let lhs = sup_mag(profile, r_inf)?;
        let u_q0 = norms::lq_norm_mag(profile, q0, r_outer)?;
        let rhs = if p.p > 1.0 {
            if !(r_over > exps.q_bar) {
                return Err(Error::Regime(format!(
                    "need r̄ > d(p−1)/2 = {}, got {r_over}",
                    exps.q_bar
                )));
            }
            let u_rbar = norms::lq_norm_mag(profile, r_over, r_mid)?;
            coeff::second_form_multiplier(p, chain, q0, r_over, u_rbar, s2)?.mul(u_q0)
        } else {
            // bounded coefficient: ‖b‖_∞ on the middle ball; u is monotone
            // so u^{p−1} peaks where u is smallest
            let si = norms::sup_inf(profile, r_mid)?;
            let b_sup = p.lambda * si.inf.powf(p.p - 1.0);
            let (a1, a2, a3) =
                coeff::coefficient_bound_constants(q0, None, p.d, r_outer, r_inf, s2)?;
            let bracket =
                constants::mag_sum(&[Mag::exact(a2), Mag::exact(a3 * b_sup.powf(0.5 * p.df()))]);
            a1.mul(bracket.powf(p.df() / (2.0 * q0)))
                .div(Mag::exact((r_mid - r_inf).powf(p.df() / q0)))
                .mul(u_q0)
        };
        Ok(CheckResult::decide(NAME, ANCHOR, tag, lhs, rhs, vec![]))
    };
    run().unwrap_or_else(|e| err_to_result(NAME, ANCHOR, tag, e))
}

/// Plain lower bound inf_{B_{R∞}} u ≥ I_{−∞,q}·‖u‖_{q,R0}/|B_{R0}|^{1/q}.
pub fn check_lower(
    profile: &RadialProfile,
    chain: &RadiiChain,
    q: f64,
    eps: f64,
    s2: f64,
) -> CheckResult {
    const NAME: &str = "lower.q";
    const ANCHOR: &str = "lower.q";
    let tag = regime_tag(profile);
    if let Some(na) = guard_solution(profile, NAME, ANCHOR) {
        return na;
    }
    let p = profile.params();
    if p.p >= p.exponents().p_s {
        return CheckResult::inapplicable(NAME, ANCHOR, tag, "p >= p_s: outside the theory");
    }
    let run = || -> Result<CheckResult> {
        chain.validate()?;
        if !profile.is_singular_at_origin() && chain.r0 >= profile.positivity_radius() {
            return Err(Error::Geometry(
                "chain must sit strictly inside the positivity region".into(),
            ));
        }
        let i_low = lower::inf_bound_constant(p.d, q, eps, chain.r0, chain.r_inf, s2)?;
        let norm = norms::lq_norm_mag(profile, q, chain.r0)?;
        let measure = Mag::exact(params::ball_measure(p.d, chain.r0));
        let lhs = i_low.mul(norm).div(measure.powf(1.0 / q));
        let rhs = inf_mag(profile, chain.r_inf)?;
        Ok(CheckResult::decide(NAME, ANCHOR, tag, lhs, rhs, vec![]))
    };
    run().unwrap_or_else(|e| err_to_result(NAME, ANCHOR, tag, e))
}

/// Three-radius lower bound for 1 < p < p_c, reaching the exponent window
/// above d(p−1)/2.
pub fn check_lower_pc(
    profile: &RadialProfile,
    chain: &RadiiChain,
    q_over: f64,
    s2: f64,
) -> CheckResult {
    const NAME: &str = "lower.pc";
    const ANCHOR: &str = "lower.pc";
    let tag = regime_tag(profile);
    if let Some(na) = guard_solution(profile, NAME, ANCHOR) {
        return na;
    }
    let p = profile.params();
    let exps = p.exponents();
    if !(p.p > 1.0 && p.p < exps.p_c) {
        return CheckResult::inapplicable(
            NAME,
            ANCHOR,
            tag,
            "three-radius route needs 1 < p < p_c",
        );
    }
    let run = || -> Result<CheckResult> {
        chain.validate()?;
        let r_bar = chain
            .r_bar
            .ok_or_else(|| Error::Geometry("three-radius chain required".into()))?;
        let q_under = lower::small_exponent_threshold_e(p.d).min(q_over);
        let i_low = lower::inf_bound_constant(
            p.d,
            q_under,
            std::f64::consts::E,
            chain.r0,
            chain.r_inf,
            s2,
        )?;
        let i_rev = lower::rev_holder_constant(p, q_over, q_under, r_bar, chain.r0, s2)?;
        let norm = norms::lq_norm_mag(profile, q_over, r_bar)?;
        let measure = Mag::exact(params::ball_measure(p.d, r_bar));
        let lhs = i_low.div(i_rev).mul(norm).div(measure.powf(1.0 / q_over));
        let rhs = inf_mag(profile, chain.r_inf)?;
        Ok(CheckResult::decide(NAME, ANCHOR, tag, lhs, rhs, vec![]))
    };
    run().unwrap_or_else(|e| err_to_result(NAME, ANCHOR, tag, e))
}

/// Supersolution reverse Hölder quotient at the small exponent:
/// κ-factor·‖u+δ‖_{q,R0}/|B|^{1/q} ≤ ‖u+δ‖_{−q,R0}·|B|^{1/q}.
pub fn check_rev_holder(
    profile: &RadialProfile,
    chain: &RadiiChain,
    q: f64,
    delta: f64,
    eps: f64,
) -> CheckResult {
    const NAME: &str = "rev-holder";
    const ANCHOR: &str = "rev-holder.supersolution";
    let tag = regime_tag(profile);
    if let Some(na) = guard_solution(profile, NAME, ANCHOR) {
        return na;
    }
    let p = profile.params();
    if p.p >= p.exponents().p_s {
        return CheckResult::inapplicable(NAME, ANCHOR, tag, "p >= p_s: outside the theory");
    }
    let run = || -> Result<CheckResult> {
        chain.validate()?;
        let threshold = lower::small_exponent_threshold(p.df(), eps)?;
        if !(q > 0.0 && q <= threshold * (1.0 + 1e-12)) {
            return Err(Error::Regime(format!(
                "need 0 < q <= q0(d,eps) = {threshold}, got {q}"
            )));
        }
        let e = std::f64::consts::E;
        let kappa = Mag::from_ln(
            2.0 / q * (eps / (2f64.powi(p.d as i32) * (e * p.df() + eps))).ln(),
            0.0,
        );
        let plus = norms::lq_norm_shifted_mag(profile, delta, q, chain.r0)?;
        let minus = norms::lq_norm_shifted_mag(profile, delta, -q, chain.r0)?;
        let measure = Mag::exact(params::ball_measure(p.d, chain.r0));
        let lhs = kappa.mul(plus).div(measure.powf(1.0 / q));
        let rhs = minus.mul(measure.powf(1.0 / q));
        Ok(CheckResult::decide(NAME, ANCHOR, tag, lhs, rhs, vec![]))
    };
    run().unwrap_or_else(|e| err_to_result(NAME, ANCHOR, tag, e))
}

/// Two-exponent reverse Hölder for 1 < p < p_c, verified on the middle ball.
pub fn check_rev_holder_pc(
    profile: &RadialProfile,
    chain: &RadiiChain,
    q_over: f64,
    q0: f64,
    s2: f64,
) -> CheckResult {
    const NAME: &str = "rev-holder.pc";
    const ANCHOR: &str = "rev-holder.pc";
    let tag = regime_tag(profile);
    if let Some(na) = guard_solution(profile, NAME, ANCHOR) {
        return na;
    }
    let p = profile.params();
    let exps = p.exponents();
    if !(p.p > 1.0 && p.p < exps.p_c) {
        return CheckResult::inapplicable(
            NAME,
            ANCHOR,
            tag,
            "two-exponent route needs 1 < p < p_c",
        );
    }
    let run = || -> Result<CheckResult> {
        chain.validate()?;
        let r_bar = chain
            .r_bar
            .ok_or_else(|| Error::Geometry("three-radius chain required".into()))?;
        let i_rev = lower::rev_holder_constant(p, q_over, q0, r_bar, chain.r0, s2)?;
        let lhs = norms::lq_norm_mag(profile, q_over, r_bar)?
            .div(Mag::exact(params::ball_measure(p.d, r_bar)).powf(1.0 / q_over));
        let rhs = i_rev.mul(
            norms::lq_norm_mag(profile, q0, chain.r0)?
                .div(Mag::exact(params::ball_measure(p.d, chain.r0)).powf(1.0 / q0)),
        );
        Ok(CheckResult::decide(NAME, ANCHOR, tag, lhs, rhs, vec![]))
    };
    run().unwrap_or_else(|e| err_to_result(NAME, ANCHOR, tag, e))
}

/// Harnack inequality sup ≤ H·inf on the inner ball, with H from the
/// regime-appropriate constant; u-dependent only for p_c ≤ p < p_s.
pub fn check_harnack(
    profile: &RadialProfile,
    chain: &RadiiChain,
    window: &ExponentWindow,
    s2: f64,
) -> CheckResult {
    const NAME: &str = "harnack";
    const ANCHOR: &str = "harnack";
    let tag = regime_tag(profile);
    if let Some(na) = guard_solution(profile, NAME, ANCHOR) {
        return na;
    }
    let p = profile.params();
    let exps = p.exponents();
    if p.p >= exps.p_s {
        return CheckResult::inapplicable(NAME, ANCHOR, tag, "p >= p_s: outside the theory");
    }
    let run = || -> Result<CheckResult> {
        chain.validate()?;
        let u_norms = if p.p >= exps.p_c {
            let (q_over, q_under) = harnack::general_exponents(p, window)?;
            Some(harnack::HarnackNorms {
                mean_q_over: norms::mean_integral_mag(profile, q_over, chain.r0)?,
                mean_q_under: norms::mean_integral_mag(profile, q_under, chain.r0)?,
                mean_p_minus_one: norms::mean_integral_mag(
                    profile,
                    p.p_minus_one_pos().max(1e-12),
                    chain.r_inf,
                )?,
            })
        } else {
            None
        };
        let h = harnack::harnack_constant(p, chain, window, u_norms.as_ref(), s2)?;
        let lhs = sup_mag(profile, chain.r_inf)?;
        let rhs = h.value.mul(inf_mag(profile, chain.r_inf)?);
        let mut notes = h.notes;
        if let Some(q0) = h.q0 {
            notes.push(format!("small exponent in use: {q0}"));
        }
        Ok(CheckResult::decide(NAME, ANCHOR, tag, lhs, rhs, notes))
    };
    run().unwrap_or_else(|e| err_to_result(NAME, ANCHOR, tag, e))
}

/// Absolute bounds: norm-free sup ceiling (1 < p < p_c) and inf floor
/// (0 ≤ p < 1); explicitly inapplicable elsewhere.
pub fn check_absolute(
    profile: &RadialProfile,
    chain: &RadiiChain,
    window: &ExponentWindow,
    s2: f64,
) -> Vec<CheckResult> {
    let tag = regime_tag(profile);
    let p = profile.params();
    let mut out = Vec::new();
    if let Some(na) = guard_solution(profile, "absolute.upper", "absolute.upper") {
        let mut nb = na.clone();
        nb.name = "absolute.lower".into();
        nb.anchors = "absolute.lower".into();
        return vec![na, nb];
    }
    let bounds = match harnack::absolute_bounds(p, chain, window, s2) {
        Ok(b) => b,
        Err(e) => {
            out.push(err_to_result(
                "absolute.upper",
                "absolute.upper",
                tag,
                e.clone(),
            ));
            out.push(err_to_result("absolute.lower", "absolute.lower", tag, e));
            return out;
        }
    };
    match bounds.upper {
        Some(ceiling) => {
            let res = sup_mag(profile, chain.r_inf)
                .map(|lhs| {
                    CheckResult::decide(
                        "absolute.upper",
                        "absolute.upper",
                        tag,
                        lhs,
                        ceiling,
                        vec![],
                    )
                })
                .unwrap_or_else(|e| err_to_result("absolute.upper", "absolute.upper", tag, e));
            out.push(res);
        }
        None => out.push(CheckResult::inapplicable(
            "absolute.upper",
            "absolute.upper",
            tag,
            bounds
                .reason
                .clone()
                .unwrap_or_else(|| "No: needs 1 < p < p_c".into()),
        )),
    }
    match bounds.lower {
        Some(floor) => {
            let res = inf_mag(profile, chain.r_inf)
                .map(|rhs| {
                    CheckResult::decide("absolute.lower", "absolute.lower", tag, floor, rhs, vec![])
                })
                .unwrap_or_else(|e| err_to_result("absolute.lower", "absolute.lower", tag, e));
            out.push(res);
        }
        None => out.push(CheckResult::inapplicable(
            "absolute.lower",
            "absolute.lower",
            tag,
            bounds
                .reason
                .unwrap_or_else(|| "No: needs 0 <= p < 1".into()),
        )),
    }
    out
}

/// Gradient bounds: sup|∇u| on the inner ball against K[u]‖u‖_{2,R0}, plus
/// the norm-free ceiling in the window 1 < p < p_c.
pub fn check_gradient(
    profile: &RadialProfile,
    chain: &RadiiChain,
    window: &ExponentWindow,
    s2: f64,
) -> Vec<CheckResult> {
    let tag = regime_tag(profile);
    let p = profile.params();
    let exps = p.exponents();
    let mut out = Vec::new();
    if let Some(na) = guard_solution(profile, "gradient.upper", "gradient.upper") {
        let mut nb = na.clone();
        nb.name = "gradient.absolute".into();
        nb.anchors = "gradient.absolute".into();
        return vec![na, nb];
    }
    if profile.is_singular_at_origin() {
        out.push(CheckResult::inapplicable(
            "gradient.upper",
            "gradient.upper",
            tag,
            "gradient unbounded over the singularity",
        ));
        out.push(CheckResult::inapplicable(
            "gradient.absolute",
            "gradient.absolute",
            tag,
            "gradient unbounded over the singularity",
        ));
        return out;
    }
    let upper_res = || -> Result<CheckResult> {
        chain.validate()?;
        if p.p >= exps.p_s {
            return Err(Error::Regime("p >= p_s: outside the theory".into()));
        }
        let sup_norm = if p.p >= exps.p_c {
            norms::sup_inf(profile, chain.r0)?.sup
        } else {
            None
        };
        let bp = gradient::nonlinearity_weight(p, chain, window, sup_norm, s2)?;
        let k = gradient::gradient_multiplier(p, chain, bp, s2)?;
        let si = norms::sup_inf(profile, chain.r_inf)?;
        let grad = si
            .sup_grad
            .ok_or_else(|| Error::Divergent("gradient unbounded on the inner ball".into()))?;
        let lhs = Mag::new(grad.max(1e-300), 1e-9);
        let rhs = k.mul(norms::lq_norm_mag(profile, 2.0, chain.r0)?);
        Ok(CheckResult::decide(
            "gradient.upper",
            "gradient.upper",
            tag,
            lhs,
            rhs,
            vec![],
        ))
    }();
    out.push(
        upper_res.unwrap_or_else(|e| err_to_result("gradient.upper", "gradient.upper", tag, e)),
    );

    if p.p > 1.0 && p.p < exps.p_c {
        let abs_res = || -> Result<CheckResult> {
            let k = gradient::gradient_absolute_multiplier(p, chain, window, s2)?;
            let si = norms::sup_inf(profile, chain.r_inf)?;
            let grad = si
                .sup_grad
                .ok_or_else(|| Error::Divergent("gradient unbounded on the inner ball".into()))?;
            let lhs = Mag::new(grad.max(1e-300), 1e-9);
            Ok(CheckResult::decide(
                "gradient.absolute",
                "gradient.absolute",
                tag,
                lhs,
                k,
                vec![],
            ))
        }();
        out.push(
            abs_res.unwrap_or_else(|e| {
                err_to_result("gradient.absolute", "gradient.absolute", tag, e)
            }),
        );
    } else {
        out.push(CheckResult::inapplicable(
            "gradient.absolute",
            "gradient.absolute",
            tag,
            "norm-free gradient ceiling needs 1 < p < p_c",
        ));
    }
    out
}

/// Energy identity as an executable check: the relative residual must stay
/// below the stated threshold. This is the detector the negative control
/// (a multiplicatively perturbed profile) must trip.
pub fn check_energy(
    profile: &RadialProfile,
    chain: &RadiiChain,
    alpha: f64,
    delta: f64,
    threshold: f64,
) -> CheckResult {
    const NAME: &str = "energy.identity";
    const ANCHOR: &str = "energy.identity";
    let tag = regime_tag(profile);
    if let Some(na) = guard_solution(profile, NAME, ANCHOR) {
        return na;
    }
    if PRegime::of(profile.params()) == PRegime::OutOfRange {
        return CheckResult::inapplicable(NAME, ANCHOR, tag, "p >= p_s: outside the theory");
    }
    let run = || -> Result<CheckResult> {
        let cutoff = CutoffProfile::new(chain.r_inf, chain.r0)?;
        let sides = norms::energy_identity_sides(profile, &cutoff, alpha, delta)?;
        let residual = sides.residual.max(1e-18);
        let lhs = Mag::new(residual, 0.0);
        let rhs = Mag::new(threshold, 0.0);
        Ok(CheckResult::decide(
            NAME,
            ANCHOR,
            tag,
            lhs,
            rhs,
            vec![format!(
                "alpha = {alpha}, delta = {delta}, sides = ({:.6e}, {:.6e})",
                sides.lhs, sides.rhs
            )],
        ))
    };
    run().unwrap_or_else(|e| err_to_result(NAME, ANCHOR, tag, e))
}
