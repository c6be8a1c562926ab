//! Constants of the sup bounds: the iteration-ratio constant c₁ with its
//! integer-part bookkeeping, the exponent nudge, the two-ball sup-bound
//! constant and the quantitative Caccioppoli right side.

use crate::error::{Error, Result};
use crate::magnitude::Mag;
use crate::params::{self, ProblemParams, RadiiChain};

/// c₁ together with the iteration index k₀ (only meaningful on the small-q
/// branch) and the admissibility flag of the integer-part condition.
#[derive(Debug, Clone, Copy)]
pub struct C1Result {
    pub c1: f64,
    pub k0: Option<i64>,
    pub admissible: bool,
}

/// Tolerance for "is an integer" tests on log ratios; binary64 log ratios
/// sitting near integers are otherwise flaky.
pub const INTEGER_TOL: f64 = 1e-9;

/// The ratio bound c₁ = sup_n β_n/|β_n − 1| of the exponent schedule.
///
/// For q > d/(d−2) the schedule starts above 1 and the bound is closed form.
/// For q < d/(d−2) the schedule straddles 1: k₀ indexes the straddle and the
/// log ratio must stay away from integers, otherwise some β_n lands on the
/// pole and the choice of q is inadmissible (reported, never nudged here).
pub fn c1_and_k0(d: u32, p: f64, q: f64) -> Result<C1Result> {
    let df = f64::from(d);
    let dp1 = df * (p - 1.0).max(0.0);
    if !(q > dp1 / 2.0) {
        return Err(Error::Regime(format!(
            "need q > d(p−1)₊/2 = {}, got q = {q}",
            dp1 / 2.0
        )));
    }
    let serrin = df / (df - 2.0);
    if q > serrin * (1.0 + INTEGER_TOL) {
        let denom = (df - 2.0) * q - df;
        return Ok(C1Result {
            c1: (df - 2.0) * q / denom,
            k0: None,
            admissible: true,
        });
    }
    if (q - serrin).abs() <= serrin * INTEGER_TOL {
        // β₀ = 1 exactly: the schedule starts on the pole
        return Ok(C1Result {
            c1: f64::INFINITY,
            k0: None,
            admissible: false,
        });
    }
    // small-q branch: only reachable for p < p_c, where 2* − d(p−1)₊ > 0
    let num = 2.0 * df / (df - 2.0) - dp1;
    debug_assert!(num > 0.0, "small-q branch requires p < p_c");
    let a = (num / (2.0 * q - dp1)).ln() / (df / (df - 2.0)).ln();
    let k0 = a.floor() as i64;
    let admissible = (a - a.round()).abs() > INTEGER_TOL;
    let mut c1 = f64::NEG_INFINITY;
    for i in 0..=1i64 {
        let beta = (df / (df - 2.0)).powi((k0 - 1 + i) as i32) * (q - dp1 / 2.0)
            + (p - 1.0).max(0.0) * (df - 2.0) / 2.0;
        c1 = c1.max(beta / (beta - 1.0).abs());
    }
    Ok(C1Result {
        c1,
        k0: Some(k0),
        admissible,
    })
}

/// Largest point of the grid q(1 − 2⁻ᵏ·10⁻³) that passes the integer-part
/// condition; q itself when it is already admissible. An admissible point
/// always exists in any open interval, so this never walks below the window.
pub fn nudge_q(d: u32, p: f64, q: f64) -> Result<f64> {
    let first = c1_and_k0(d, p, q)?;
    if first.admissible {
        return Ok(q);
    }
    let dp1 = f64::from(d) * (p - 1.0).max(0.0);
    for k in (0..=40u32).rev() {
        let cand = q * (1.0 - 2f64.powi(-(k as i32)) * 1e-3);
        if cand <= dp1 / 2.0 {
            continue;
        }
        if let Ok(res) = c1_and_k0(d, p, cand) {
            if res.admissible {
                return Ok(cand);
            }
        }
    }
    Err(Error::InadmissibleExponent {
        q,
        reason: "no admissible point found on the nudge grid".into(),
    })
}

/// The two-ball sup-bound constant I_{∞,q}: the factor in
///   ‖u‖_{∞,R∞} ≤ I_{∞,q} (⨍_{B_{R0}} u^q)^{(1+(p−1)μ)/q} (⨍_{B_{R∞}} u^{p−1})^{−μ}
/// with μ = d/(2q − d(p−1)₊); for p ≤ 1 the u^{p−1} factor is absent.
pub fn sup_bound_constant(
    params: ProblemParams,
    chain: &RadiiChain,
    q: f64,
    s2: f64,
) -> Result<Mag> {
    chain.validate()?;
    let d = params.df();
    let dp1 = d * params.p_minus_one_pos();
    let c1r = c1_and_k0(params.d, params.p, q)?;
    if !c1r.admissible {
        return Err(Error::InadmissibleExponent {
            q,
            reason: "log-ratio integer-part condition fails; nudge q first".into(),
        });
    }
    let rho = chain.rho();
    let outer_exp = d / (2.0 * q - dp1);

    // ω_d carries the exponent 2(p−1)₊/(d(p−1)), zero when p ≤ 1
    let omega_exp = if params.p > 1.0 { 2.0 / d } else { 0.0 };
    let ln_first = c1r.c1.ln() + 2.0 * s2.ln() + omega_exp * params::omega_d(params.d).ln()
        - 2.0 * (1.0 - rho).ln();

    let lam = params::lambda_p(params.p, params.lambda);
    let max_term = ((d - 2.0) * (d * q - (d - 2.0)).abs() / (d * q).powi(2)).max(0.25);
    let inner = lam + (d - 2.0) / q + (1.0 - rho) * (1.0 - rho) * max_term;
    let ln_second = d * (d / (d - 2.0)).ln()
        + (2.0 * (d - 2.0) / (d.sqrt() - (d - 2.0).sqrt()).powi(2)).ln()
        + inner.ln();

    Ok(Mag::from_ln(outer_exp * (ln_first + ln_second), 0.0))
}

/// Right side 8 ω_d R₀^d/(R₀−R)² of the quantitative Caccioppoli estimate.
pub fn caccioppoli_bound(d: u32, r0: f64, r: f64) -> Result<f64> {
    if !(0.0 < r && r < r0) {
        return Err(Error::Geometry(format!(
            "need 0 < R < R0, got R = {r}, R0 = {r0}"
        )));
    }
    Ok(8.0 * params::omega_d(d) * r0.powi(d as i32) / ((r0 - r) * (r0 - r)))
}
