//! Constants of the lower-bound route: exponential-integrability (κ)
//! constants, the small-exponent threshold q₀, the inf-bound constant I₋∞
//! and the two-exponent reverse Hölder constant.

use crate::error::{Error, Result};
use crate::magnitude::Mag;
use crate::params::{self, ProblemParams};
use crate::special;

const E: f64 = std::f64::consts::E;

/// (κ₀, κ₁, κ₃) of the exponential-integrability lemmas on a convex domain
/// with the stated diameter and volume; κ₂ > (d−1)e is the free parameter.
pub fn john_nirenberg_constants(
    d: u32,
    diam: f64,
    vol: f64,
    kappa2: f64,
) -> Result<(f64, f64, f64)> {
    if d < 3 {
        return Err(Error::Dimension { d, min: 3 });
    }
    if !(diam > 0.0 && vol > 0.0) {
        return Err(Error::Parameter(
            "diameter and volume must be positive".into(),
        ));
    }
    let df = f64::from(d);
    if !(kappa2 > (df - 1.0) * E) {
        return Err(Error::Regime(format!(
            "need kappa2 > (d−1)e = {}, got {kappa2}",
            (df - 1.0) * E
        )));
    }
    let omega = params::omega_d(d);
    let diam_d = diam.powi(d as i32);
    let kappa0 = df * vol * kappa2 / diam_d;
    let kappa1 = omega * diam_d * (kappa2 + E) / (kappa2 - (df - 1.0) * E);
    let kappa3 = vol
        + diam_d / (2.0 * std::f64::consts::PI).sqrt() * df * E * omega / (kappa2 - (df - 1.0) * E);
    Ok((kappa0, kappa1, kappa3))
}

/// The threshold q₀(d, ε) = 2^{(d−3)/2} / (d ω_d² [e(d−1)+ε]) below which the
/// reverse Hölder inequality for supersolutions holds. Real d ≥ 1 is allowed
/// for scan mode (the threshold is plotted as a function of dimension).
pub fn small_exponent_threshold(d: f64, eps: f64) -> Result<f64> {
    if !(d >= 1.0) {
        return Err(Error::Parameter(format!(
            "threshold scan needs d >= 1, got {d}"
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::Parameter("need eps > 0".into()));
    }
    let omega = special::ball_volume_real(d);
    Ok(2f64.powf((d - 3.0) / 2.0) / (d * omega * omega * (E * (d - 1.0) + eps)))
}

/// The ε = e specialization used by the three-radius route: q₀ = 2^{(d−3)/2}/(d²ω²e).
pub fn small_exponent_threshold_e(d: u32) -> f64 {
    let df = f64::from(d);
    let omega = params::omega_d(d);
    2f64.powf((df - 3.0) / 2.0) / (df * df * omega * omega * E)
}

/// The inf-bound constant I_{−∞,q̲} of
///   inf_{B_{R∞}} u ≥ I_{−∞,q̲} ‖u‖_{q̲,R₀} / |B_{R₀}|^{1/q̲},
/// valid for 0 < q̲ ≤ q₀(d, ε).
pub fn inf_bound_constant(d: u32, q: f64, eps: f64, r0: f64, r_inf: f64, s2: f64) -> Result<Mag> {
    let df = f64::from(d);
    let threshold = small_exponent_threshold(df, eps)?;
    if !(q > 0.0 && q <= threshold * (1.0 + 1e-12)) {
        return Err(Error::Regime(format!(
            "need 0 < q <= q0(d,eps) = {threshold}, got q = {q}"
        )));
    }
    if !(0.0 < r_inf && r_inf < r0) {
        return Err(Error::Geometry("need 0 < R∞ < R0".into()));
    }
    let omega = params::omega_d(d);
    let gap = r0 - r_inf;
    let first =
        2f64.powi(d as i32) * s2 * s2 * (df * r0 * r0 / (gap * gap) + r0 * r0 / (r_inf * r_inf));
    let second = eps / (2f64.powi(d as i32) * (E * df + eps) * omega.sqrt());
    Ok(Mag::from_ln(
        -df / (2.0 * q) * first.ln() + 2.0 / q * second.ln(),
        0.0,
    ))
}

/// The two-exponent reverse Hölder constant I_{q̄,q₀} of
///   ‖u‖_{q̄,R̄}/|B_{R̄}|^{1/q̄} ≤ I_{q̄,q₀} ‖u‖_{q₀,R₀}/|B_{R₀}|^{1/q₀},
/// for supersolutions with 1 < p < p_c, d(p−1)/2 < q̄ < d/(d−2) and
/// 0 < q₀ ≤ q̄. Two branches split at q₀ = (d−2)q̄/d, boundary assigned to
/// the Hölder branch as printed; a discontinuity across it is allowed.
pub fn rev_holder_constant(
    params: ProblemParams,
    q_over: f64,
    q0: f64,
    r_bar: f64,
    r0: f64,
    s2: f64,
) -> Result<Mag> {
    let d = params.df();
    let exps = params.exponents();
    let two_star = exps.two_star;
    if !(params.p > 1.0 && params.p < exps.p_c) {
        return Err(Error::Regime(format!(
            "two-exponent reverse Hölder needs 1 < p < p_c = {}, got p = {}",
            exps.p_c, params.p
        )));
    }
    if !(q_over > exps.q_bar && q_over < exps.p_c) {
        return Err(Error::Regime(format!(
            "need q̄ in (d(p−1)/2, d/(d−2)) = ({}, {}), got {q_over}",
            exps.q_bar, exps.p_c
        )));
    }
    if !(q0 > 0.0 && q0 <= q_over) {
        return Err(Error::Regime(format!("need 0 < q0 <= q̄, got q0 = {q0}")));
    }
    if !(0.0 < r_bar && r_bar < r0) {
        return Err(Error::Geometry("need 0 < R̄ < R0".into()));
    }
    let omega = params::omega_d(params.d);
    let gap = r0 - r_bar;
    let ln = if q0 >= (d - 2.0) * q_over / d {
        // plain Hölder between the two exponents
        let bracket = 2.0 * d * q_over * s2 * s2 / (two_star - 2.0 * q_over)
            + s2 * s2 * gap * gap / (r_bar * r_bar);
        two_star / (2.0 * q_over) * bracket.ln()
            + two_star / q_over * (omega.powf(1.0 / d) * r0 / gap).ln()
            + d / q_over * (r0 / r_bar).ln()
    } else {
        // telescoped extension down to q0
        let bracket = 2.0 * d * q_over * s2 * s2 / (two_star - 2.0 * q_over) * (r_bar * r_bar)
            / (gap * gap)
            + s2 * s2;
        ((d - 2.0) * q_over / (2.0 * q0) - d / 2.0) * 2f64.ln()
            + 3f64.ln()
            + (q_over - q0) * d / (2.0 * q_over * q0) * bracket.ln()
            + (d / q0 - d / q_over)
                * (4.0 * omega.powf(1.0 / d) * (q_over - q0) / (q0 * q_over)).ln()
            + d / q_over * (r0 / r_bar).ln()
    };
    Ok(Mag::from_ln(ln, 0.0))
}
