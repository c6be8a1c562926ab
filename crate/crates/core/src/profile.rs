//! Radial profiles of −Δu = λuᵖ on balls: closed forms where they exist,
//! adaptive shooting from the center otherwise, and the exact singular
//! profile that defeats the sup bounds in the supercritical window.
//!
//! Profiles are immutable after construction. Sampled profiles interpolate
//! with cubic Hermite on the stored (u, u′) pairs; closed forms evaluate
//! exactly everywhere.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ode;
use crate::params::ProblemParams;

/// How the profile was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// p = 0 closed form u0 − λr²/(2d).
    SourceOnly,
    /// p = 1, d = 3 closed form u0·sin(√λ r)/(√λ r).
    LinearSinc,
    /// p = 5, d = 3 closed form u0 (1 + λu0⁴r²/3)^{−1/2}.
    AubinTalenti,
    /// A r^{−2/(p−1)} for p_c < p < p_s; unbounded at the origin.
    Singular,
    /// Adaptive Runge–Kutta shooting from u(0) = u0, u′(0) = 0.
    Shooting,
    /// Test fixture built from an arbitrary closure; not a solution claim.
    Synthetic,
}

/// What the profile certifies about the equation. Hypothesis guards in the
/// verification suite key off this: two-sided checks need a solution, the
/// sup-bound family also accepts subsolutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// Constructed as an (approximate) solution of the equation.
    Solution,
    /// One-sided: −Δu ≤ λuᵖ (e.g. a solution shifted up by a constant).
    Subsolution,
    /// A synthetic fixture with no claim on the equation.
    Stub,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    r: f64,
    u: f64,
    du: f64,
}

#[derive(Debug, Clone, Copy)]
struct SeriesStart {
    u0: f64,
    a2: f64,
    a4: f64,
    r_start: f64,
}

type ClosedEval = Arc<dyn Fn(f64) -> (f64, f64, f64) + Send + Sync>;

#[derive(Clone)]
pub struct RadialProfile {
    kind: ProfileKind,
    params: ProblemParams,
    samples: Arc<Vec<Sample>>,
    series: Option<SeriesStart>,
    closed: Option<ClosedEval>,
    positivity_radius: f64,
    domain_end: f64,
    /// Decay exponent γ = 2/(p−1) for the singular profile.
    gamma: Option<f64>,
    certificate: Certificate,
    /// Suggested base radius for verification geometry when the positivity
    /// radius is infinite.
    geometry_hint: f64,
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialProfile")
            .field("kind", &self.kind)
            .field("params", &self.params)
            .field("samples", &self.samples.len())
            .field("positivity_radius", &self.positivity_radius)
            .field("domain_end", &self.domain_end)
            .finish()
    }
}

impl RadialProfile {
    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn params(&self) -> ProblemParams {
        self.params
    }

    /// Largest r with u > 0 on [0, r), as far as the construction can tell.
    pub fn positivity_radius(&self) -> f64 {
        self.positivity_radius
    }

    /// End of the interval on which the profile can be evaluated.
    pub fn domain_end(&self) -> f64 {
        self.domain_end
    }

    pub fn is_singular_at_origin(&self) -> bool {
        self.gamma.is_some()
    }

    pub fn singular_exponent(&self) -> Option<f64> {
        self.gamma
    }

    pub fn certificate(&self) -> Certificate {
        self.certificate
    }

    pub fn certifies_solution(&self) -> bool {
        self.certificate == Certificate::Solution
    }

    /// Solution or subsolution: enough for the one-sided sup-bound family.
    pub fn certifies_subsolution(&self) -> bool {
        matches!(
            self.certificate,
            Certificate::Solution | Certificate::Subsolution
        )
    }

    /// Base radius for default verification geometry.
    pub fn geometry_radius(&self) -> f64 {
        if self.positivity_radius.is_finite() {
            self.positivity_radius.min(self.domain_end)
        } else {
            self.geometry_hint.min(self.domain_end)
        }
    }

    /// (u, u′, u″) at radius r ∈ [0, domain_end].
    pub fn eval2(&self, r: f64) -> (f64, f64, f64) {
        if let Some(closed) = &self.closed {
            return closed(r);
        }
        if let Some(series) = &self.series {
            if r <= series.r_start {
                let r2 = r * r;
                return (
                    series.u0 + series.a2 * r2 + series.a4 * r2 * r2,
                    2.0 * series.a2 * r + 4.0 * series.a4 * r2 * r,
                    2.0 * series.a2 + 12.0 * series.a4 * r2,
                );
            }
        }
        self.hermite(r)
    }

    pub fn u(&self, r: f64) -> f64 {
        self.eval2(r).0
    }

    pub fn du(&self, r: f64) -> f64 {
        self.eval2(r).1
    }

    /// ln u(r); exact for the singular closed form so that probes can reach
    /// radii where u itself overflows.
    pub fn ln_u(&self, r: f64) -> f64 {
        if let (Some(gamma), ProfileKind::Singular) = (self.gamma, self.kind) {
            let a = singular_amplitude(self.params).expect("validated at construction");
            return a.ln() - gamma * r.ln();
        }
        let u = self.u(r);
        if u > 0.0 {
            u.ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    fn hermite(&self, r: f64) -> (f64, f64, f64) {
        let s = &self.samples;
        assert!(!s.is_empty(), "profile has no samples and no closed form");
        assert!(
            r <= self.domain_end * (1.0 + 1e-12),
            "evaluation at r = {r} beyond domain end {}",
            self.domain_end
        );
        let last = s.len() - 1;
        if r <= s[0].r {
            return (s[0].u, s[0].du, 0.0);
        }
        if r >= s[last].r {
            return (s[last].u, s[last].du, 0.0);
        }
        let idx = s.partition_point(|smp| smp.r <= r) - 1;
        let (lo, hi) = (s[idx], s[idx + 1]);
        let h = hi.r - lo.r;
        let t = (r - lo.r) / h;
        let (t2, t3) = (t * t, t * t * t);
        let u = (2.0 * t3 - 3.0 * t2 + 1.0) * lo.u
            + (t3 - 2.0 * t2 + t) * h * lo.du
            + (-2.0 * t3 + 3.0 * t2) * hi.u
            + (t3 - t2) * h * hi.du;
        let du = ((6.0 * t2 - 6.0 * t) * lo.u
            + (3.0 * t2 - 4.0 * t + 1.0) * h * lo.du
            + (-6.0 * t2 + 6.0 * t) * hi.u
            + (3.0 * t2 - 2.0 * t) * h * hi.du)
            / h;
        let ddu = ((12.0 * t - 6.0) * lo.u
            + (6.0 * t - 4.0) * h * lo.du
            + (-12.0 * t + 6.0) * hi.u
            + (6.0 * t - 2.0) * h * hi.du)
            / (h * h);
        (u, du, ddu)
    }

    /// Strong-form residual sup over the grid:
    ///   |u″ + (d−1)u′/r + λuᵖ| / (1 + λuᵖ).
    ///
    /// Radial classical solutions are weak solutions, so this is the
    /// practical certificate. The residual is scaled by the source term so
    /// it stays meaningful where the terms blow up (near the origin of the
    /// singular profile the unscaled terms exceed 1/ε_machine). At r = 0 the
    /// radial Laplacian degenerates to d·u″(0).
    pub fn residual(&self, grid: &[f64]) -> Result<f64> {
        let d = self.params.df();
        let (p, lambda) = (self.params.p, self.params.lambda);
        let mut worst: f64 = 0.0;
        for &r in grid {
            if r < 0.0 || r > self.domain_end * (1.0 + 1e-12) {
                return Err(Error::Parameter(format!(
                    "residual grid point {r} outside validity interval [0, {}]",
                    self.domain_end
                )));
            }
            if self.is_singular_at_origin() && r == 0.0 {
                return Err(Error::Parameter(
                    "singular profile has no value at r = 0".into(),
                ));
            }
            let (u, du, ddu) = self.eval2(r);
            let source = lambda * u.max(0.0).powf(p);
            let res = if r == 0.0 {
                d * ddu + source
            } else {
                ddu + (d - 1.0) * du / r + source
            };
            worst = worst.max(res.abs() / (1.0 + source.abs()));
        }
        Ok(worst)
    }

    /// u′ ≤ 0 on all stored or scanned points.
    pub fn is_nonincreasing(&self) -> bool {
        if self.samples.is_empty() {
            let n = 2000;
            let hi = self.geometry_radius();
            let lo = if self.is_singular_at_origin() {
                hi * 1e-6
            } else {
                0.0
            };
            (0..=n).all(|i| {
                let r = lo + (hi - lo) * i as f64 / n as f64;
                self.du(r) <= 1e-12
            })
        } else {
            self.samples.iter().all(|s| s.du <= 1e-12)
        }
    }

    /// A copy with u and its derivatives multiplied by (1 + factor).
    ///
    /// The copy still claims to be a solution; it is the negative control the
    /// verification suite must be able to catch.
    pub fn perturbed(&self, factor: f64) -> RadialProfile {
        let base = self.clone();
        let scale = 1.0 + factor;
        RadialProfile {
            kind: self.kind,
            params: self.params,
            samples: Arc::new(Vec::new()),
            series: None,
            closed: Some(Arc::new(move |r| {
                let (u, du, ddu) = base.eval2(r);
                (scale * u, scale * du, scale * ddu)
            })),
            positivity_radius: self.positivity_radius,
            domain_end: self.domain_end,
            gamma: self.gamma,
            certificate: self.certificate,
            geometry_hint: self.geometry_hint,
        }
    }

    /// The subsolution fixture u + c: since −Δ(u+c) = λuᵖ ≤ λ(u+c)ᵖ for
    /// c ≥ 0, the shift turns a solution into a subsolution. Only the
    /// one-sided sup-bound checks accept it.
    pub fn shifted_up(&self, c: f64) -> Result<RadialProfile> {
        if !(c >= 0.0) {
            return Err(Error::Parameter("shift must be nonnegative".into()));
        }
        if self.certificate != Certificate::Solution {
            return Err(Error::Regime(
                "subsolution shift starts from a solution fixture".into(),
            ));
        }
        if self.is_singular_at_origin() {
            return Err(Error::Regime(
                "shift of the singular profile is not exposed".into(),
            ));
        }
        let base = self.clone();
        Ok(RadialProfile {
            kind: ProfileKind::Synthetic,
            params: self.params,
            samples: Arc::new(Vec::new()),
            series: None,
            closed: Some(Arc::new(move |r| {
                let (u, du, ddu) = base.eval2(r);
                (u + c, du, ddu)
            })),
            positivity_radius: if c > 0.0 {
                self.domain_end
            } else {
                self.positivity_radius
            },
            domain_end: self.domain_end,
            gamma: None,
            certificate: Certificate::Subsolution,
            geometry_hint: self.geometry_hint,
        })
    }

    /// The scaling map v(r) = μ^{2/(p−1)} u(μr), which carries solutions to
    /// solutions with the same λ when p > 1.
    pub fn rescaled(&self, mu: f64) -> Result<RadialProfile> {
        if self.params.p <= 1.0 {
            return Err(Error::Regime("scaling family needs p > 1".into()));
        }
        let alpha = 2.0 / (self.params.p - 1.0);
        let base = self.clone();
        let amp = mu.powf(alpha);
        Ok(RadialProfile {
            kind: ProfileKind::Synthetic,
            params: self.params,
            samples: Arc::new(Vec::new()),
            series: None,
            closed: Some(Arc::new(move |r| {
                let (u, du, ddu) = base.eval2(mu * r);
                (amp * u, amp * mu * du, amp * mu * mu * ddu)
            })),
            positivity_radius: self.positivity_radius / mu,
            domain_end: self.domain_end / mu,
            gamma: self.gamma,
            certificate: self.certificate,
            geometry_hint: self.geometry_hint / mu,
        })
    }
}

fn closed_profile(
    kind: ProfileKind,
    params: ProblemParams,
    closed: ClosedEval,
    positivity_radius: f64,
    domain_end: f64,
    geometry_hint: f64,
    certificate: Certificate,
) -> RadialProfile {
    RadialProfile {
        kind,
        params,
        samples: Arc::new(Vec::new()),
        series: None,
        closed: Some(closed),
        positivity_radius,
        domain_end,
        gamma: None,
        certificate,
        geometry_hint,
    }
}

/// Exact solution for p = 0: u0 − λr²/(2d), positive up to √(2d·u0/λ).
pub fn explicit_p0(params: ProblemParams, u0: f64) -> Result<RadialProfile> {
    if params.p != 0.0 {
        return Err(Error::Regime(format!(
            "explicit p=0 form requested with p = {}",
            params.p
        )));
    }
    if !(u0 > 0.0) {
        return Err(Error::Parameter("center value u0 must be positive".into()));
    }
    let (d, lambda) = (params.df(), params.lambda);
    let r_plus = (2.0 * d * u0 / lambda).sqrt();
    let c = lambda / (2.0 * d);
    Ok(closed_profile(
        ProfileKind::SourceOnly,
        params,
        Arc::new(move |r| (u0 - c * r * r, -2.0 * c * r, -2.0 * c)),
        r_plus,
        r_plus,
        r_plus,
        Certificate::Solution,
    ))
}

/// Exact solution for p = 1 in d = 3: u0 sin(√λ r)/(√λ r), positive up to π/√λ.
pub fn explicit_linear_d3(lambda: f64, u0: f64) -> Result<RadialProfile> {
    let params = ProblemParams::new(3, 1.0, lambda)?;
    if !(u0 > 0.0) {
        return Err(Error::Parameter("center value u0 must be positive".into()));
    }
    let a = lambda.sqrt();
    let r_plus = std::f64::consts::PI / a;
    let eval = Arc::new(move |r: f64| {
        let x = a * r;
        if x < 0.07 {
            // series through x⁸ keeps the truncation below the roundoff of
            // the cancellation-prone closed form near the origin
            let x2 = x * x;
            let x4 = x2 * x2;
            let sinc = 1.0 - x2 / 6.0 + x4 / 120.0 - x4 * x2 / 5040.0 + x4 * x4 / 362880.0;
            let dsinc = -x / 3.0 + x * x2 / 30.0 - x * x4 / 840.0 + x * x4 * x2 / 45360.0;
            let ddsinc =
                -1.0 / 3.0 + x2 / 10.0 - x4 / 168.0 + x4 * x2 / 6480.0 - x4 * x4 / 443_520.0;
            (u0 * sinc, u0 * a * dsinc, u0 * a * a * ddsinc)
        } else {
            let (s, c) = x.sin_cos();
            let sinc = s / x;
            let dsinc = c / x - s / (x * x);
            let ddsinc = -s / x - 2.0 * c / (x * x) + 2.0 * s / (x * x * x);
            (u0 * sinc, u0 * a * dsinc, u0 * a * a * ddsinc)
        }
    });
    Ok(closed_profile(
        ProfileKind::LinearSinc,
        params,
        eval,
        r_plus,
        r_plus,
        r_plus,
        Certificate::Solution,
    ))
}

/// Exact solution for p = 5 in d = 3: u0 (1 + λu0⁴ r²/3)^{−1/2}.
pub fn aubin_talenti_d3(lambda: f64, u0: f64) -> Result<RadialProfile> {
    let params = ProblemParams::new(3, 5.0, lambda)?;
    if !(u0 > 0.0) {
        return Err(Error::Parameter("center value u0 must be positive".into()));
    }
    let k2 = lambda * u0.powi(4) / 3.0;
    let eval = Arc::new(move |r: f64| {
        let w = 1.0 + k2 * r * r;
        let u = u0 * w.powf(-0.5);
        let du = -u0 * k2 * r * w.powf(-1.5);
        let ddu = -u0 * k2 * w.powf(-1.5) + 3.0 * u0 * k2 * k2 * r * r * w.powf(-2.5);
        (u, du, ddu)
    });
    let hint = 3.0 / k2.sqrt();
    Ok(closed_profile(
        ProfileKind::AubinTalenti,
        params,
        eval,
        f64::INFINITY,
        f64::INFINITY,
        hint,
        Certificate::Solution,
    ))
}

fn singular_amplitude(params: ProblemParams) -> Result<f64> {
    let exps = params.exponents();
    if !(params.p > exps.p_c && params.p < exps.p_s) {
        return Err(Error::Regime(format!(
            "singular profile exists only for p_c < p < p_s; got p = {}, window ({}, {})",
            params.p, exps.p_c, exps.p_s
        )));
    }
    let gamma = 2.0 / (params.p - 1.0);
    Ok((gamma * (params.df() - 2.0 - gamma) / params.lambda).powf(1.0 / (params.p - 1.0)))
}

/// The unbounded local weak solution u = A r^{−γ}, γ = 2/(p−1), existing for
/// p_c < p < p_s. It is the counterexample: no u-independent sup bound can
/// hold on a ball containing its origin.
pub fn singular_profile(params: ProblemParams) -> Result<RadialProfile> {
    let a = singular_amplitude(params)?;
    let gamma = 2.0 / (params.p - 1.0);
    let eval = Arc::new(move |r: f64| {
        let u = a * r.powf(-gamma);
        (u, -gamma * u / r, gamma * (gamma + 1.0) * u / (r * r))
    });
    Ok(RadialProfile {
        kind: ProfileKind::Singular,
        params,
        samples: Arc::new(Vec::new()),
        series: None,
        closed: Some(eval),
        positivity_radius: f64::INFINITY,
        domain_end: f64::INFINITY,
        gamma: Some(gamma),
        certificate: Certificate::Solution,
        geometry_hint: 1.0,
    })
}

/// A constant function on [0, domain]; not a solution, used to exercise
/// hypothesis guards and norm conventions.
pub fn constant_stub(params: ProblemParams, value: f64, domain: f64) -> RadialProfile {
    assert!(value > 0.0 && domain > 0.0);
    closed_profile(
        ProfileKind::Synthetic,
        params,
        Arc::new(move |_| (value, 0.0, 0.0)),
        f64::INFINITY,
        domain,
        domain,
        Certificate::Stub,
    )
}

/// Synthetic profile from a closure returning (u, u′, u″); test fixture.
pub fn from_fn<F>(params: ProblemParams, f: F, domain: f64, positivity: f64) -> RadialProfile
where
    F: Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static,
{
    closed_profile(
        ProfileKind::Synthetic,
        params,
        Arc::new(f),
        positivity,
        domain,
        domain,
        Certificate::Stub,
    )
}

/// Options for the shooting constructor.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Local error tolerance of the adaptive integrator.
    pub tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-10 }
    }
}

/// Integrate u″ + (d−1)u′/r + λuᵖ = 0 from u(0) = u0, u′(0) = 0 out to
/// r_max, stopping early where u crosses zero.
///
/// The origin is removable: the quartic series starts the integration at
/// 10⁻³ of the natural length scale. The step cap is tied to √tol so the
/// cubic-Hermite interpolation error (the dominant residual term) scales
/// linearly with the requested tolerance.
pub fn solve_lane_emden(
    params: ProblemParams,
    u0: f64,
    r_max: f64,
    opts: SolveOptions,
) -> Result<RadialProfile> {
    if !(u0 > 0.0) {
        return Err(Error::Parameter(format!(
            "center value u0 must be positive, got {u0}"
        )));
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::Parameter(format!(
            "r_max must be positive and finite, got {r_max}"
        )));
    }
    let (d, p, lambda) = (params.df(), params.p, params.lambda);
    let r_scale = (2.0 * d * u0.powf(1.0 - p) / lambda).sqrt();
    let r_start = 1e-3 * r_scale.min(r_max);

    let a2 = -lambda * u0.powf(p) / (2.0 * d);
    let a4 = lambda * lambda * p * u0.powf(2.0 * p - 1.0) / (8.0 * d * (d + 2.0));
    let series = SeriesStart {
        u0,
        a2,
        a4,
        r_start,
    };
    let y_start = [
        u0 + a2 * r_start * r_start + a4 * r_start.powi(4),
        2.0 * a2 * r_start + 4.0 * a4 * r_start.powi(3),
    ];

    let rhs = move |r: f64, y: &ode::State| -> ode::State {
        [y[1], -(d - 1.0) / r * y[1] - lambda * y[0].max(0.0).powf(p)]
    };

    // Coarse pass to locate the zero crossing (if any) inside [r_start, r_max].
    let coarse = ode::integrate(
        rhs,
        r_start,
        y_start,
        r_max,
        &ode::Options {
            rel_tol: 1e-10,
            abs_tol: 1e-12 * u0,
            h_init: 1e-4 * r_scale,
            h_max: 0.02 * r_scale,
            max_steps: 2_000_000,
        },
        |_, y| y[0] <= 0.0,
    )?;
    let crossed = coarse.last().map(|s| s.y[0] <= 0.0).unwrap_or(false);
    let r_hat = if crossed {
        let n = coarse.len();
        let (lo, hi) = (&coarse[n - 2], &coarse[n - 1]);
        // secant estimate of the crossing inside the last step
        lo.t + (hi.t - lo.t) * lo.y[0] / (lo.y[0] - hi.y[0])
    } else {
        r_max
    };
    let span = if crossed { r_hat.min(r_max) } else { r_max };

    // Fine pass: the step cap controls the Hermite interpolation residual.
    let cap = (1.5e-4 * (opts.tol / 1e-10).sqrt()).clamp(1e-5, 2e-2);
    let fine = ode::integrate(
        rhs,
        r_start,
        y_start,
        span,
        &ode::Options {
            rel_tol: opts.tol,
            abs_tol: opts.tol * u0 * 1e-2,
            h_init: 1e-5 * r_scale,
            h_max: cap * span,
            max_steps: 20_000_000,
        },
        |_, y| y[0] <= 0.0,
    )?;

    let mut samples: Vec<Sample> = Vec::with_capacity(fine.len());
    for step in &fine {
        if step.y[0] <= 0.0 {
            break;
        }
        samples.push(Sample {
            r: step.t,
            u: step.y[0],
            du: step.y[1],
        });
    }
    if samples.len() < 4 {
        return Err(Error::Solver(
            "profile crossed zero almost immediately".into(),
        ));
    }

    let last = samples[samples.len() - 1];
    let positivity = if crossed || fine.last().map(|s| s.y[0] <= 0.0).unwrap_or(false) {
        // refine the root from the last positive node by bisection on the ODE
        // tangent line; the step is tiny, linear is enough
        let guess = last.r - last.u / last.du.min(-1e-300);
        guess.max(last.r)
    } else {
        r_max
    };

    Ok(RadialProfile {
        kind: ProfileKind::Shooting,
        params,
        samples: Arc::new(samples),
        series: Some(series),
        closed: None,
        positivity_radius: positivity,
        domain_end: last.r,
        gamma: None,
        certificate: Certificate::Solution,
        geometry_hint: positivity.min(r_max),
    })
}
