//! Weighted radial quadrature over balls: L^q norms for any real q ≠ 0
//! (negative exponents included), means, suprema, the energy-identity sides
//! and a divergence classifier for the singular profile.
//!
//! Norms are unnormalized, ‖u‖_{q,R} = (∫_{B_R} u^q dx)^{1/q}; the negative
//! branch ‖u‖_{−q} = (∫ u^{−q})^{−1/q} is the same formula, which is the one
//! convention that makes the reverse Hölder quotient ‖u‖_q/‖u‖_{−q}
//! compatible with its exponential-integrability proof.

use crate::cutoff::CutoffProfile;
use crate::error::{Error, Result};
use crate::magnitude::Mag;
use crate::params;
use crate::profile::RadialProfile;
use crate::quad;

/// A computed norm with its quadrature error estimate.
#[derive(Debug, Clone, Copy)]
pub struct NormValue {
    pub value: f64,
    pub abs_error: f64,
    pub refinement_level: u32,
    pub divergent: bool,
}

const NORM_TOL: f64 = 1e-11;

fn guard_radius(profile: &RadialProfile, r: f64) -> Result<()> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!(
            "ball radius must be positive, got {r}"
        )));
    }
    if r > profile.domain_end() * (1.0 + 1e-12) {
        return Err(Error::Parameter(format!(
            "radius {r} beyond profile domain {}",
            profile.domain_end()
        )));
    }
    Ok(())
}

fn radial_breakpoints(profile: &RadialProfile, q: f64, r: f64) -> Vec<f64> {
    if profile.is_singular_at_origin() {
        // grade toward the origin; exponent picked from the power of r at 0
        let gamma = profile.singular_exponent().unwrap_or(0.0);
        let d = profile.params().df();
        let e = d - 1.0 - gamma * q; // integrand ~ r^e near 0
        let s = if e >= 3.0 {
            1.5
        } else {
            (8.0 / (e + 1.0).max(0.12)).clamp(2.0, 60.0)
        };
        quad::graded_breakpoints(0.0, r, 32, s)
    } else {
        quad::graded_breakpoints(0.0, r, 8, 1.0)
    }
}

fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// ln ∫_{B_R} (u+δ)^q dx with a relative error bound and the evaluation
/// count, computed in log space.
fn ball_integral_shifted_ln(
    profile: &RadialProfile,
    delta: f64,
    q: f64,
    r: f64,
) -> Result<(Mag, usize)> {
    guard_radius(profile, r)?;
    let d = profile.params().d;
    if q < 0.0 && delta == 0.0 {
        if r > profile.positivity_radius() {
            return Err(Error::Parameter(format!(
                "negative exponent needs u > 0 on the ball; radius {r} exceeds the positivity radius {}",
                profile.positivity_radius()
            )));
        }
        if !(profile.u(r.min(profile.domain_end())) > 0.0) {
            return Err(Error::Parameter(
                "negative exponent with u touching 0".into(),
            ));
        }
    }
    if profile.is_singular_at_origin() && q > 0.0 {
        let gamma = profile.singular_exponent().expect("singular profile");
        if gamma * q >= profile.params().df() * (1.0 - 1e-12) {
            return Err(Error::Divergent(format!(
                "u^q is not integrable at the origin: decay exponent {gamma} with q = {q}"
            )));
        }
    }
    let pts = radial_breakpoints(profile, q, r);
    let dm1 = f64::from(d) - 1.0;
    let ln_delta = if delta > 0.0 { Some(delta.ln()) } else { None };
    let (m, evals) = quad::integrate_ln_counted(
        |t| {
            let lu = profile.ln_u(t);
            let shifted = match ln_delta {
                Some(ld) => ln_add_exp(lu, ld),
                None => lu,
            };
            q * shifted + dm1 * t.ln()
        },
        &pts,
        NORM_TOL,
    );
    Ok((
        Mag::from_ln(params::surface_factor(d).ln() + m.ln, m.rel_err),
        evals,
    ))
}

/// ln ∫_{B_R} u^q dx with a relative error bound, computed in log space.
fn ball_integral_ln(profile: &RadialProfile, q: f64, r: f64) -> Result<Mag> {
    Ok(ball_integral_shifted_ln(profile, 0.0, q, r)?.0)
}

/// ‖u+δ‖_{q,R} as a log-space magnitude.
pub fn lq_norm_shifted_mag(profile: &RadialProfile, delta: f64, q: f64, r: f64) -> Result<Mag> {
    if q == 0.0 {
        return Err(Error::Parameter("norm exponent q must be nonzero".into()));
    }
    Ok(ball_integral_shifted_ln(profile, delta, q, r)?
        .0
        .powf(1.0 / q))
}

/// ‖u‖_{q,R} as a log-space magnitude.
pub fn lq_norm_mag(profile: &RadialProfile, q: f64, r: f64) -> Result<Mag> {
    if q == 0.0 {
        return Err(Error::Parameter("norm exponent q must be nonzero".into()));
    }
    Ok(ball_integral_ln(profile, q, r)?.powf(1.0 / q))
}

/// ‖u‖_{q,R} with value and error estimate. The refinement level counts the
/// doublings of quadrature effort over the base mesh.
///
/// For the singular profile with a non-integrable exponent the norm is
/// flagged divergent instead of erroring; the analytic test 2q/(p−1) ≥ d
/// decides, matching what quadrature refinement observes.
pub fn lq_norm(profile: &RadialProfile, q: f64, r: f64) -> Result<NormValue> {
    if q == 0.0 {
        return Err(Error::Parameter("norm exponent q must be nonzero".into()));
    }
    match ball_integral_shifted_ln(profile, 0.0, q, r) {
        Ok((int, evals)) => {
            let mag = int.powf(1.0 / q);
            let value = mag.value();
            let base = 3 * 12 * radial_breakpoints(profile, q, r).len().max(2);
            Ok(NormValue {
                value,
                abs_error: value * mag.rel_err,
                refinement_level: (evals.max(base) / base).ilog2().max(1),
                divergent: false,
            })
        }
        Err(Error::Divergent(_)) => Ok(NormValue {
            value: f64::INFINITY,
            abs_error: f64::INFINITY,
            refinement_level: 0,
            divergent: true,
        }),
        Err(e) => Err(e),
    }
}

/// ⨍_{B_R} u^q dx as a log-space magnitude.
pub fn mean_integral_mag(profile: &RadialProfile, q: f64, r: f64) -> Result<Mag> {
    if q == 0.0 {
        return Err(Error::Parameter(
            "mean-integral exponent q must be nonzero".into(),
        ));
    }
    let int = ball_integral_ln(profile, q, r)?;
    let measure = params::ball_measure(profile.params().d, r);
    Ok(int.div(Mag::exact(measure)))
}

/// ⨍_{B_R} u^q dx.
pub fn mean_integral(profile: &RadialProfile, q: f64, r: f64) -> Result<f64> {
    Ok(mean_integral_mag(profile, q, r)?.value())
}

/// Supremum/infimum data on the closed ball of radius R.
#[derive(Debug, Clone, Copy)]
pub struct SupInf {
    /// None means the sup is +∞ (singular profile over the origin).
    pub sup: Option<f64>,
    pub inf: f64,
    /// None when the gradient is unbounded on the ball.
    pub sup_grad: Option<f64>,
}

fn refine_max<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> f64 {
    // golden-section refinement of a bracketed interior maximum
    let phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

fn scan_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut best_i = 0usize;
    for i in 0..=n {
        let r = lo + (hi - lo) * (i as f64) / (n as f64);
        let v = f(r);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let h = (hi - lo) / (n as f64);
    let a = lo + h * best_i.saturating_sub(1) as f64;
    let b = (lo + h * (best_i + 1) as f64).min(hi);
    if b > a {
        best.max(refine_max(&f, a, b))
    } else {
        best
    }
}

/// (sup u, inf u, sup|u′|) on B_R. Exact at the endpoints for monotone
/// profiles, dense scan with local refinement otherwise.
pub fn sup_inf(profile: &RadialProfile, r: f64) -> Result<SupInf> {
    guard_radius(profile, r)?;
    if profile.is_singular_at_origin() {
        return Ok(SupInf {
            sup: None,
            inf: profile.u(r),
            sup_grad: None,
        });
    }
    let (sup, inf) = if profile.is_nonincreasing() {
        (profile.u(0.0), profile.u(r))
    } else {
        let s = scan_max(|t| profile.u(t), 0.0, r, 4096);
        let i = -scan_max(|t| -profile.u(t), 0.0, r, 4096);
        (s, i)
    };
    let sup_grad = scan_max(|t| profile.du(t).abs(), 0.0, r, 4096);
    Ok(SupInf {
        sup: Some(sup),
        inf,
        sup_grad: Some(sup_grad),
    })
}

/// Both sides of the local energy identity
///   4α ∫ |∇(u+δ)^{(α+1)/2}|² φ = λ(α+1)² ∫ uᵖ(u+δ)^α φ + (α+1) ∫ (u+δ)^{α+1} Δφ
/// for the radial cutoff, plus the symmetrized relative residual.
#[derive(Debug, Clone, Copy)]
pub struct EnergySides {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

pub fn energy_identity_sides(
    profile: &RadialProfile,
    cutoff: &CutoffProfile,
    alpha: f64,
    delta: f64,
) -> Result<EnergySides> {
    if (alpha + 1.0).abs() < 1e-12 {
        return Err(Error::Parameter("energy identity needs alpha != -1".into()));
    }
    if delta < 0.0 {
        return Err(Error::Parameter("delta must be nonnegative".into()));
    }
    if delta == 0.0 && alpha <= -1.0 {
        return Err(Error::Parameter(
            "delta = 0 is only admissible for alpha > -1".into(),
        ));
    }
    if cutoff.r0 > profile.domain_end() * (1.0 + 1e-12) {
        return Err(Error::Geometry(
            "cutoff support exceeds the profile domain".into(),
        ));
    }
    if profile.is_singular_at_origin() {
        return Err(Error::Regime(
            "energy identity over the origin is not evaluated for the singular profile".into(),
        ));
    }
    if delta == 0.0 && cutoff.r0 > profile.positivity_radius() {
        return Err(Error::Geometry(
            "delta = 0 needs the cutoff supported inside the positivity region".into(),
        ));
    }

    let p = profile.params();
    let (d, pw, lambda) = (p.d, p.p, p.lambda);
    let sd = params::surface_factor(d);
    let dm1 = d as i32 - 1;
    let pts = cutoff.breakpoints(cutoff.r0);
    let a1 = alpha + 1.0;

    let grad_term = quad::integrate(
        |r: f64| {
            let (u, du, _) = profile.eval2(r);
            let c = cutoff.eval(r, d);
            (u + delta).powf(alpha - 1.0) * du * du * c.phi * r.powi(dm1)
        },
        &pts,
        1e-11,
    );
    let source_term = quad::integrate(
        |r: f64| {
            let (u, _, _) = profile.eval2(r);
            let c = cutoff.eval(r, d);
            u.max(0.0).powf(pw) * (u + delta).powf(alpha) * c.phi * r.powi(dm1)
        },
        &pts,
        1e-11,
    );
    let laplace_term = quad::integrate(
        |r: f64| {
            let (u, _, _) = profile.eval2(r);
            let c = cutoff.eval(r, d);
            (u + delta).powf(a1) * c.laplacian * r.powi(dm1)
        },
        &pts,
        1e-11,
    );

    let lhs = alpha * a1 * a1 * sd * grad_term.value;
    let rhs = lambda * a1 * a1 * sd * source_term.value + a1 * sd * laplace_term.value;
    let residual = (lhs - rhs).abs() / (lhs.abs() + rhs.abs() + 1.0);
    Ok(EnergySides { lhs, rhs, residual })
}

/// ∫_{B_R} |∇ log(u+δ)|² dx by radial quadrature.
pub fn log_gradient_integral(
    profile: &RadialProfile,
    delta: f64,
    r: f64,
) -> Result<quad::QuadResult> {
    guard_radius(profile, r)?;
    if delta == 0.0 && r >= profile.positivity_radius() {
        return Err(Error::Geometry(
            "delta = 0 needs the ball strictly inside the positivity region".into(),
        ));
    }
    let d = profile.params().d;
    let dm1 = d as i32 - 1;
    let pts = radial_breakpoints(profile, 1.0, r);
    let mut q = quad::integrate(
        |t: f64| {
            let (u, du, _) = profile.eval2(t);
            let ratio = du / (u + delta);
            ratio * ratio * t.powi(dm1)
        },
        &pts,
        1e-11,
    );
    let sd = params::surface_factor(d);
    q.value *= sd;
    q.abs_error *= sd;
    Ok(q)
}

/// Verdict of the integrability probe for ∫_{B_R} u^q dx.
#[derive(Debug, Clone, PartialEq)]
pub enum Divergence {
    Finite { value: f64, abs_error: f64 },
    Divergent { threshold_exponent: f64 },
    Inconclusive { reason: String },
}

/// Classify ∫_{B_R} u^q by a refinement trend (shrinking inner cutoff; more
/// than 10× growth across the refinements flags divergence) combined with
/// the analytic exponent test. The two must agree; disagreement near the
/// integrability threshold is reported as inconclusive.
pub fn divergence_probe(
    profile: &RadialProfile,
    q: f64,
    r: f64,
    budget: u32,
) -> Result<Divergence> {
    if !(q > 0.0) {
        return Err(Error::Parameter("divergence probe needs q > 0".into()));
    }
    if budget < 2 {
        return Err(Error::Parameter(
            "budget exhausted: need at least 2 refinement levels for a stable classification"
                .into(),
        ));
    }
    if !profile.is_singular_at_origin() {
        let n = lq_norm(profile, q, r.min(profile.domain_end()))?;
        let value = n.value.powf(q);
        return Ok(Divergence::Finite {
            value,
            abs_error: n.abs_error * q.abs() * value.max(1.0),
        });
    }

    let d = profile.params().df();
    let gamma = profile.singular_exponent().expect("singular profile");
    let threshold_q = d / gamma; // = d(p−1)/2
    let exponent_divergent = q >= threshold_q * (1.0 - 1e-9);

    let levels = budget.min(4);
    let dm1 = d - 1.0;
    let ln_q = |t: f64| q * profile.ln_u(t) + dm1 * t.ln();
    let mut ln_values = Vec::with_capacity(levels as usize + 1);
    for level in 0..=levels {
        let eps = r * (-5.0 * f64::from(1u32 << level)).exp();
        let pts: Vec<f64> = {
            // geometric subdivision of [eps, r]
            let n = 24 + 8 * level as usize;
            let (la, lb) = (eps.ln(), r.ln());
            (0..=n)
                .map(|i| (la + (lb - la) * i as f64 / n as f64).exp())
                .collect()
        };
        let m = quad::integrate_ln(ln_q, &pts, 1e-9);
        ln_values.push(m.ln);
    }
    let growth = ln_values[levels as usize] - ln_values[0];
    let trend_divergent = growth > 10f64.ln();

    match (trend_divergent, exponent_divergent) {
        (true, true) => Ok(Divergence::Divergent {
            threshold_exponent: threshold_q,
        }),
        (false, false) => {
            let sd = params::surface_factor(profile.params().d);
            let value = sd * ln_values[levels as usize].exp();
            let prev = sd * ln_values[levels as usize - 1].exp();
            Ok(Divergence::Finite {
                value,
                abs_error: (value - prev).abs(),
            })
        }
        (trend, exp) => Ok(Divergence::Inconclusive {
            reason: format!(
                "refinement trend says divergent={trend} but the exponent test says divergent={exp}"
            ),
        }),
    }
}
