//! Gradient bound constants: the nonlinearity weight b_p, the multiplier of
//! ‖∇u‖_{∞,R∞} ≤ K[u]·‖u‖_{2,R0}, and the norm-free gradient ceiling in the
//! window 1 < p < p_c.

use crate::constants::{harnack, mag_sum, ExponentWindow};
use crate::error::{Error, Result};
use crate::magnitude::Mag;
use crate::params::{self, ProblemParams, RadiiChain};

/// The weight b_{p,R0}[u] entering the linearized equation for the
/// incremental quotients:
///   1 for p = 1; the absolute-bound expression for 0 ≤ p < p_c, p ≠ 1;
///   ‖u‖_{∞,R0}^{p−1} for p_c ≤ p < p_s (a sup norm must be supplied there).
pub fn nonlinearity_weight(
    params: ProblemParams,
    chain: &RadiiChain,
    window: &ExponentWindow,
    sup_norm: Option<f64>,
    s2: f64,
) -> Result<Mag> {
    let exps = params.exponents();
    if params.p >= exps.p_s {
        return Err(Error::Regime(format!(
            "gradient bounds need p < p_s = {}, got {}",
            exps.p_s, params.p
        )));
    }
    if params.p == 1.0 {
        return Ok(Mag::ONE);
    }
    if params.p < exps.p_c {
        let h = harnack::harnack_constant(params, chain, window, None, s2)?;
        let (r0, ri) = (chain.r0, chain.r_inf);
        let base = 8.0 * r0.powi(params.d as i32)
            / (params.lambda * (r0 - ri) * (r0 - ri) * ri.powi(params.d as i32));
        Ok(h.value.powf((params.p - 1.0).abs()).mul(Mag::exact(base)))
    } else {
        let sup = sup_norm.ok_or_else(|| {
            Error::Regime("p_c <= p < p_s: a sup norm of u on B_{R0} is required".into())
        })?;
        if !(sup > 0.0) {
            return Err(Error::Parameter("sup norm must be positive".into()));
        }
        Ok(Mag::exact(sup).powf(params.p - 1.0))
    }
}

/// The gradient-bound multiplier K[u] of ‖∇u‖_{∞,R∞} ≤ K[u]·‖u‖_{2,R0}:
///   (15/(R0−R∞))^{d/2} [λ b_p + 18d/(R0−R∞)²]^{1/2} (2d^d/2^d)^{d²/8} ×
///   [16(d+2) + (R0−R∞)²/(9R∞²) + (dS₂²(p∨1)/(d−2))^{d/2} · 4(R0−R∞)²/(9(d−2)) ·
///    |B_{R0}|^{(d−2)/d} (λ b_p)^{d/2}]^{d/4}.
pub fn gradient_multiplier(
    params: ProblemParams,
    chain: &RadiiChain,
    bp: Mag,
    s2: f64,
) -> Result<Mag> {
    chain.validate()?;
    let d = params.df();
    let (r0, ri) = (chain.r0, chain.r_inf);
    let gap = r0 - ri;
    let lam_bp = Mag::exact(params.lambda).mul(bp);

    let front = Mag::from_ln(0.5 * d * (15.0 / gap).ln(), 0.0);
    let energy = mag_sum(&[lam_bp, Mag::exact(18.0 * d / (gap * gap))]).powf(0.5);
    let lead = Mag::from_ln(d * d / 8.0 * (2.0 * d.powf(d) / 2f64.powf(d)).ln(), 0.0);

    let t1 = Mag::exact(16.0 * (d + 2.0));
    let t2 = Mag::exact(gap * gap / (9.0 * ri * ri));
    let shape = Mag::from_ln(
        0.5 * d * (d * s2 * s2 * params.p.max(1.0) / (d - 2.0)).ln()
            + (4.0 * gap * gap / (9.0 * (d - 2.0))).ln()
            + (d - 2.0) / d * params::ball_measure(params.d, r0).ln(),
        0.0,
    );
    let t3 = shape.mul(lam_bp.powf(0.5 * d));
    let bracket = mag_sum(&[t1, t2, t3]).powf(0.25 * d);

    Ok(front.mul(energy).mul(lead).mul(bracket))
}

/// The norm-free gradient ceiling for 1 < p < p_c, assembled from the
/// gradient multiplier with the absolute-bound substitutions: b_p from its
/// sub-Serrin branch and ‖u‖_{2,R0} replaced through the absolute sup bound,
///   K = K[u(b_p-absolute)] · |B_{R∞}|^{1/2} · H_p · (8R0^d/(λ(R0−R∞)²R∞^d))^{1/(p−1)}.
pub fn gradient_absolute_multiplier(
    params: ProblemParams,
    chain: &RadiiChain,
    window: &ExponentWindow,
    s2: f64,
) -> Result<Mag> {
    let exps = params.exponents();
    if !(params.p > 1.0 && params.p < exps.p_c) {
        return Err(Error::Regime(format!(
            "absolute gradient bound needs 1 < p < p_c = {}, got {}",
            exps.p_c, params.p
        )));
    }
    let bp = nonlinearity_weight(params, chain, window, None, s2)?;
    let k = gradient_multiplier(params, chain, bp, s2)?;
    let h = harnack::harnack_constant(params, chain, window, None, s2)?;
    let (r0, ri) = (chain.r0, chain.r_inf);
    let abs_sup = h.value.mul(
        Mag::exact(
            8.0 * r0.powi(params.d as i32)
                / (params.lambda * (r0 - ri) * (r0 - ri) * ri.powi(params.d as i32)),
        )
        .powf(1.0 / (params.p - 1.0)),
    );
    let inner_measure = Mag::exact(params::ball_measure(params.d, ri)).powf(0.5);
    Ok(k.mul(inner_measure).mul(abs_sup))
}
