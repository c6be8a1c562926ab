//! Constants of the unbounded-coefficient route: the Young-splitting
//! constant, the reverse Poincaré constant, the one-shot iteration constant
//! K⁽³⁾, the telescoping lemma constant, the extension multiplier and the
//! A-constants with their nonlinear specialization.

use crate::constants::mag_sum;
use crate::error::{Error, Result};
use crate::magnitude::Mag;
use crate::params::{self, ProblemParams, RadiiChain};

fn guard_r(r: f64, d: u32) -> Result<()> {
    if !(r > 0.5 * f64::from(d)) {
        return Err(Error::Regime(format!(
            "need r > d/2 = {}, got r = {r}",
            0.5 * f64::from(d)
        )));
    }
    Ok(())
}

/// K⁽¹⁾_{r,d} = (2r−d)/(rd) · [rd/(d+r(d−2))]^{(d+r(d−2))/(2r−d)}.
pub fn young_constant(r: f64, d: u32) -> Result<f64> {
    guard_r(r, d)?;
    if d < 3 {
        return Err(Error::Dimension { d, min: 3 });
    }
    let df = f64::from(d);
    let exp = (df + r * (df - 2.0)) / (2.0 * r - df);
    let ln = ((2.0 * r - df) / (r * df)).ln() + exp * (r * df / (df + r * (df - 2.0))).ln();
    Ok(ln.exp())
}

/// Bounds on the cutoff data entering the reverse Poincaré constant.
#[derive(Debug, Clone, Copy)]
pub struct PhiBounds {
    pub sup_phi: f64,
    pub sup_grad: f64,
    pub sup_laplacian: f64,
}

/// The reverse Poincaré constant K⁽²⁾[b] for subsolutions of −Δu = b·u:
///   (α+1)/α · [2‖φ‖∞‖Δφ‖∞ + ‖∇φ‖²∞
///     + S₂^{2[d+r(d−2)]/(2r−d)} ((α+1)²/(2α))^{rd/(2r−d)} K⁽¹⁾ ‖φ‖²∞ |B_R|^{2/2*} ‖b‖_r^{rd/(2r−d)}].
pub fn reverse_poincare_constant(
    alpha: f64,
    r: f64,
    d: u32,
    radius: f64,
    b_norm: f64,
    phi: PhiBounds,
    s2: f64,
) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Regime(format!(
            "reverse Poincaré needs alpha > 0, got {alpha}"
        )));
    }
    guard_r(r, d)?;
    if b_norm < 0.0 {
        return Err(Error::Parameter(
            "coefficient norm must be nonnegative".into(),
        ));
    }
    let df = f64::from(d);
    let m = r * df / (2.0 * r - df);
    let two_star = 2.0 * df / (df - 2.0);
    let measure = params::ball_measure(d, radius);
    let b_term = s2.powf(2.0 * (df + r * (df - 2.0)) / (2.0 * r - df))
        * ((alpha + 1.0) * (alpha + 1.0) / (2.0 * alpha)).powf(m)
        * young_constant(r, d)?
        * phi.sup_phi
        * phi.sup_phi
        * measure.powf(2.0 / two_star)
        * b_norm.powf(m);
    Ok((alpha + 1.0) / alpha
        * (2.0 * phi.sup_phi * phi.sup_laplacian + phi.sup_grad * phi.sup_grad + b_term))
}

/// One-shot iteration constant K⁽³⁾_q[b] of the bound
/// ‖u‖_{∞,R∞} ≤ K⁽³⁾_q[b]/(R₀−R∞)^{d/q} ‖u‖_{q,R₀}; `r = None` selects the
/// bounded-coefficient limit r → ∞.
pub fn moser_constant(
    q: f64,
    r: Option<f64>,
    d: u32,
    r0: f64,
    r_inf: f64,
    b_norm: f64,
    s2: f64,
) -> Result<Mag> {
    if !(q > 1.0) {
        return Err(Error::Regime(format!(
            "iteration constant needs q > 1, got {q}"
        )));
    }
    if !(0.0 < r_inf && r_inf < r0) {
        return Err(Error::Geometry("need 0 < R∞ < R0".into()));
    }
    let df = f64::from(d);
    let two_star = 2.0 * df / (df - 2.0);
    let measure = params::ball_measure(d, r0);
    let gap = r0 - r_inf;

    // the exponent pair (m, lead): m = rd/(2r−d) → d/2, lead → d²/(4q)
    let (m, lead_exp, shape_ln) = match r {
        Some(rv) => {
            guard_r(rv, d)?;
            let m = rv * df / (2.0 * rv - df);
            (
                m,
                rv * df * df / (2.0 * (2.0 * rv - df) * q),
                ((2.0 * rv - df) / (rv * df)).ln()
                    + (1.0 + m) * (q * rv * df / ((q - 1.0) * (df + rv * (df - 2.0)))).ln(),
            )
        }
        None => {
            let m = 0.5 * df;
            (
                m,
                df * df / (4.0 * q),
                (2.0 / df).ln() + (1.0 + m) * (q * df / ((q - 1.0) * (df - 2.0))).ln(),
            )
        }
    };

    let lead = Mag::from_ln(lead_exp * (q * df.powf(df) / 2f64.powf(df)).ln(), 0.0);
    let term1 = Mag::exact(8.0 * q * (df + 2.0) / (q - 1.0));
    let term3 = Mag::exact((gap / r_inf) * (gap / r_inf));
    let bracket = if b_norm > 0.0 {
        let term2 = Mag::from_ln(
            m * (s2 * s2 / 2.0).ln()
                + shape_ln
                + 2.0 * gap.ln()
                + (2.0 / two_star) * measure.ln()
                + m * b_norm.ln(),
            0.0,
        );
        mag_sum(&[term1, term2, term3])
    } else {
        mag_sum(&[term1, term3])
    };
    Ok(lead.mul(bracket.powf(df / (2.0 * q))))
}

/// Telescoping-lemma constant c(α,λ,θ) = 1/[(1−λ)^α (1 − θ/λ^α)].
pub fn de_giorgi_constant(alpha: f64, lam: f64, theta: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Regime("need alpha > 0".into()));
    }
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::Regime("need 0 <= theta < 1".into()));
    }
    let floor = theta.powf(1.0 / alpha);
    if !(lam > floor && lam < 1.0) {
        return Err(Error::Regime(format!(
            "need lambda in (theta^(1/alpha), 1) = ({floor}, 1), got {lam}"
        )));
    }
    Ok(1.0 / ((1.0 - lam).powf(alpha) * (1.0 - theta / lam.powf(alpha))))
}

/// Multiplier that extends a two-radius bound ‖u‖_{q̄,r} ≤ K/(R−r)^γ ‖u‖_{q̲,R}
/// down to any exponent q₀ ≤ q̲:
///   3·2^{σ/(1−σ)} [(4γ/(1−σ))^γ K/(R₀−R∞)^γ]^{1/(1−σ)},
/// σ = q̄(q̲−q₀)/(q̲(q̄−q₀)).
pub fn extension_multiplier(
    q_over: f64,
    q_under: f64,
    q0: f64,
    gamma: f64,
    k: Mag,
    r0: f64,
    r_inf: f64,
) -> Result<Mag> {
    if !(0.0 < q0 && q0 <= q_under && q_under < q_over) {
        return Err(Error::Regime(format!(
            "need 0 < q0 <= q_under < q_over, got {q0}, {q_under}, {q_over}"
        )));
    }
    if !(gamma > 0.0 && r_inf > 0.0 && r0 > r_inf) {
        return Err(Error::Parameter("need gamma > 0 and 0 < R∞ < R0".into()));
    }
    let sigma_ratio = q_over * (q_under - q0) / (q0 * (q_over - q_under));
    let bracket_exp = q_under * (q_over - q0) / (q0 * (q_over - q_under)); // = 1/(1−σ)
    let ln = 3f64.ln()
        + sigma_ratio * 2f64.ln()
        + bracket_exp
            * (gamma * (4.0 * gamma * bracket_exp).ln() + k.ln - gamma * (r0 - r_inf).ln());
    Ok(Mag::from_ln(ln, bracket_exp * k.rel_err))
}

/// The three constants (A⁽¹⁾, A⁽²⁾, A⁽³⁾) of
///   ‖u‖_{∞,R∞} ≤ A⁽¹⁾/(R−R∞)^{d/q0} [A⁽²⁾ + A⁽³⁾‖b‖_r^{rd/(2r−d)}]^{d/(2q0)} ‖u‖_{q0,R},
/// with the branch at q0 = 1 assigned to the sublinear side as printed.
/// `r = None` selects the bounded-coefficient limit. A jump across q0 = 1 is
/// expected: the two branches come from different iterations.
pub fn coefficient_bound_constants(
    q0: f64,
    r: Option<f64>,
    d: u32,
    radius_outer: f64,
    r_inf: f64,
    s2: f64,
) -> Result<(Mag, f64, f64)> {
    if !(q0 > 0.0) {
        return Err(Error::Regime("need q0 > 0".into()));
    }
    if !(0.0 < r_inf && r_inf < radius_outer) {
        return Err(Error::Geometry("need 0 < R∞ < R".into()));
    }
    let df = f64::from(d);
    let (m, lead_exp) = match r {
        Some(rv) => {
            guard_r(rv, d)?;
            (
                rv * df / (2.0 * rv - df),
                rv * df * df / (2.0 * (2.0 * rv - df) * q0),
            )
        }
        None => (0.5 * df, df * df / (4.0 * q0)),
    };
    let gap2 = (radius_outer - r_inf) * (radius_outer - r_inf);
    let measure_pow = params::ball_measure(d, radius_outer).powf((df - 2.0) / df);

    let (a1, a2, a3) = if q0 > 1.0 {
        let a1 = Mag::from_ln(lead_exp * (q0 * df.powf(df) / 2f64.powf(df)).ln(), 0.0);
        let a2 = 8.0 * q0 * (df + 2.0) / (q0 - 1.0) + gap2 / (r_inf * r_inf);
        let shape = match r {
            Some(rv) => {
                (2.0 * rv - df) / (rv * df)
                    * (q0 * rv * df / ((q0 - 1.0) * (df + rv * (df - 2.0)))).powf(1.0 + m)
            }
            None => 2.0 / df * (q0 * df / ((q0 - 1.0) * (df - 2.0))).powf(1.0 + m),
        };
        let a3 = (s2 * s2 / 2.0).powf(m) * shape * gap2 * measure_pow;
        (a1, a2, a3)
    } else {
        let a1 = Mag::from_ln(
            3f64.ln()
                + (2.0 * df + 1.0) / q0 * 2f64.ln()
                + df / q0 * (df / q0).ln()
                + lead_exp * ((q0 + 1.0) * df.powf(df) / 2f64.powf(df)).ln(),
            0.0,
        );
        let a2 = 8.0 * (q0 + 1.0) * (df + 2.0) / q0 + gap2 / (r_inf * r_inf);
        let shape = match r {
            Some(rv) => {
                (2.0 * rv - df) / (rv * df)
                    * ((q0 + 1.0) * rv * df / (q0 * (df + rv * (df - 2.0)))).powf(1.0 + m)
            }
            None => 2.0 / df * ((q0 + 1.0) * df / (q0 * (df - 2.0))).powf(1.0 + m),
        };
        let a3 = (s2 * s2 / 2.0).powf(m) * shape * gap2 * measure_pow;
        (a1, a2, a3)
    };
    Ok((a1, a2, a3))
}

/// The coefficient-norm bracket of the nonlinear case b = λu^{p−1}:
///   ‖b‖_r^{rd/(2r−d)} = λ^{d(p−1)/(2r̄−d(p−1))} ‖u‖_{r̄,R0}^{d(p−1)r̄/(2r̄−d(p−1))}
/// with r̄ = r(p−1) > d(p−1)/2.
pub fn nonlinear_coefficient_power(params: ProblemParams, r_over: f64, u_norm: Mag) -> Result<Mag> {
    if !(params.p > 1.0) {
        return Err(Error::Regime(
            "nonlinear coefficient route needs p > 1".into(),
        ));
    }
    let d = params.df();
    let dp1 = d * (params.p - 1.0);
    if !(r_over > dp1 / 2.0) {
        return Err(Error::Regime(format!(
            "need r̄ > d(p−1)/2 = {}, got {r_over}",
            dp1 / 2.0
        )));
    }
    let lam_exp = dp1 / (2.0 * r_over - dp1);
    Ok(Mag::from_ln(lam_exp * params.lambda.ln(), 0.0).mul(u_norm.powf(lam_exp * r_over)))
}

/// The three-radius instantiation (R∞, R₀, R) the second-form bound uses:
/// sup on B_{R∞}, coefficient norm on B_{R₀}, solution norm on B_R.
pub fn second_form_radii(chain: &RadiiChain) -> (f64, f64, f64) {
    match chain.r {
        Some(r) => (chain.r_inf, chain.r0, r),
        None => (chain.r_inf, chain.r_bar_or_mid(), chain.r0),
    }
}

/// Full right-side multiplier of the second-form sup bound:
///   A⁽¹⁾/(R₀−R∞)^{d/q0} [A⁽²⁾ + A⁽³⁾·λ^{…}‖u‖_{r̄,R0}^{…}]^{d/(2q0)},
/// where ‖u‖_{r̄} lives on the middle ball and the A-constants carry the
/// outer radius R.
pub fn second_form_multiplier(
    params: ProblemParams,
    chain: &RadiiChain,
    q0: f64,
    r_over: f64,
    u_norm: Mag,
    s2: f64,
) -> Result<Mag> {
    chain.validate()?;
    let d = params.df();
    let (r_inf, r_mid, r_outer) = second_form_radii(chain);
    let r_coeff = r_over / (params.p - 1.0);
    let (a1, a2, a3) =
        coefficient_bound_constants(q0, Some(r_coeff), params.d, r_outer, r_inf, s2)?;
    let b_power = nonlinear_coefficient_power(params, r_over, u_norm)?;
    let bracket = mag_sum(&[Mag::exact(a2), Mag::exact(a3).mul(b_power)]);
    Ok(a1
        .mul(bracket.powf(d / (2.0 * q0)))
        .div(Mag::exact((r_mid - r_inf).powf(d / q0))))
}
