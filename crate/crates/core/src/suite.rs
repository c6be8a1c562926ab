//! Default fixtures and the suite runner: build a solution for (d, p, λ, u0),
//! place the verification geometry strictly inside its positivity region and
//! run every applicable check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checks::{self, CheckResult, CheckStatus};
use crate::constants::{self, ExponentWindow};
use crate::error::{Error, Result};
use crate::params::{ProblemParams, RadiiChain};
use crate::profile::{self, RadialProfile, SolveOptions};

/// Options of a suite run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Override for the Sobolev constant; default is the optimal whole-space value.
    pub s2_override: Option<f64>,
    /// Local tolerance of the shooting integrator.
    pub solver_tol: f64,
    /// Multiplicative perturbation injected into the fixture (negative control).
    pub perturbation: Option<f64>,
    /// Restrict to checks whose name starts with one of these prefixes.
    pub selection: Option<Vec<String>>,
    /// Scale factor on the default geometry (the 1/4, 1/2, 3/4 radii).
    pub geometry_scale: f64,
    /// Override the sup-bound norm exponent.
    pub q_override: Option<f64>,
    /// Override the John–Nirenberg slack ε.
    pub eps_override: Option<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            s2_override: None,
            solver_tol: 1e-10,
            perturbation: None,
            selection: None,
            geometry_scale: 1.0,
            q_override: None,
            eps_override: None,
        }
    }
}

/// Fixture constructor: exact closed forms where they exist, shooting
/// elsewhere, integrating far enough to find the positivity radius.
pub fn build_fixture(params: ProblemParams, u0: f64, tol: f64) -> Result<RadialProfile> {
    if params.p == 0.0 {
        return profile::explicit_p0(params, u0);
    }
    if params.p == 1.0 && params.d == 3 {
        return profile::explicit_linear_d3(params.lambda, u0);
    }
    let r_scale = (2.0 * params.df() * u0.powf(1.0 - params.p) / params.lambda).sqrt();
    profile::solve_lane_emden(params, u0, 40.0 * r_scale, SolveOptions { tol })
}

/// Default geometry: R∞, R̄, R₀ at 1/4, 1/2, 3/4 of the positivity radius,
/// keeping every hypothesis strict with room to spare.
pub fn default_chain(profile: &RadialProfile) -> Result<RadiiChain> {
    let base = profile.geometry_radius();
    if !(base > 0.0 && base.is_finite()) {
        return Err(Error::Geometry(
            "profile has no finite geometry radius".into(),
        ));
    }
    RadiiChain::new(0.25 * base, Some(0.5 * base), 0.75 * base, None)
}

/// Aggregated counts of a suite run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inapplicable: usize,
    pub inconclusive: usize,
    /// Smallest decided margin; None when it leaves the f64 range.
    pub worst_margin: Option<f64>,
    /// Smallest decided margin in log10 (margins are reported, not asserted).
    pub worst_margin_log10: Option<f64>,
}

pub fn summarize(results: &[CheckResult]) -> Summary {
    let mut s = Summary {
        pass: 0,
        fail: 0,
        inapplicable: 0,
        inconclusive: 0,
        worst_margin: None,
        worst_margin_log10: None,
    };
    for r in results {
        match r.status {
            CheckStatus::Pass => s.pass += 1,
            CheckStatus::Fail => s.fail += 1,
            CheckStatus::Inconclusive => s.inconclusive += 1,
            CheckStatus::Inapplicable(_) => s.inapplicable += 1,
        }
        if matches!(r.status, CheckStatus::Pass | CheckStatus::Fail) {
            if let Some(m) = r.margin_log10 {
                s.worst_margin_log10 = Some(s.worst_margin_log10.map_or(m, |w: f64| w.min(m)));
            }
        }
    }
    if let Some(m) = s.worst_margin_log10 {
        let lin = 10f64.powf(m);
        if lin.is_finite() {
            s.worst_margin = Some(lin);
        }
    }
    s
}

/// Run every check of the default suite for one problem instance.
///
/// Checks are pure and run in parallel; results come back sorted by name so
/// reports are deterministic.
pub fn run_default(
    params: ProblemParams,
    u0: f64,
    opts: &SuiteOptions,
) -> Result<Vec<CheckResult>> {
    run_with(params, u0, None, opts)
}

/// Suite run with an explicit radii chain (must sit inside the fixture's
/// positivity region).
pub fn run_with(
    params: ProblemParams,
    u0: f64,
    chain_override: Option<RadiiChain>,
    opts: &SuiteOptions,
) -> Result<Vec<CheckResult>> {
    let s2 = constants::sobolev_constant(params.d, opts.s2_override)?;
    let mut fixture = build_fixture(params, u0, opts.solver_tol)?;
    if let Some(factor) = opts.perturbation {
        fixture = fixture.perturbed(factor);
    }
    let chain = match chain_override {
        Some(c) => {
            c.validate()?;
            c
        }
        None => {
            if !(opts.geometry_scale > 0.0 && opts.geometry_scale < 4.0 / 3.0) {
                return Err(Error::Geometry(format!(
                    "geometry scale must lie in (0, 4/3), got {}",
                    opts.geometry_scale
                )));
            }
            default_chain(&fixture)?.scaled(opts.geometry_scale)
        }
    };
    if chain.r0 >= fixture.geometry_radius() * (1.0 + 1e-9) {
        return Err(Error::Geometry(format!(
            "outer radius {} reaches beyond the fixture's validity radius {}",
            chain.r0,
            fixture.geometry_radius()
        )));
    }
    let mut window = ExponentWindow::defaults(params);
    if let Some(q) = opts.q_override {
        window.q = q;
    }
    if let Some(eps) = opts.eps_override {
        window.eps = eps;
        window.q_under = constants::lower::small_exponent_threshold(params.df(), eps)? * 0.5;
    }
    let exps = params.exponents();
    let q_rev = constants::lower::small_exponent_threshold(params.df(), window.eps)?;
    let q_trace = exps.two_star / 2.0 * window.beta0;
    let r_over = exps.q_bar + 1.5;

    type Job<'a> = Box<dyn Fn() -> Vec<CheckResult> + Send + Sync + 'a>;
    let fx = &fixture;
    let ch = &chain;
    let w = &window;
    let mut jobs: Vec<Job> = vec![
        Box::new(move || checks::check_caccioppoli(fx, ch, 0.0)),
        Box::new(move || vec![checks::check_upper(fx, ch, w.q, s2)]),
        Box::new(move || vec![checks::check_upper_second_form(fx, ch, 0.5, r_over, s2)]),
        Box::new(move || vec![checks::check_lower(fx, ch, w.q_under, w.eps, s2)]),
        Box::new(move || vec![checks::check_lower_pc(fx, ch, w.q_over, s2)]),
        Box::new(move || vec![checks::check_rev_holder(fx, ch, q_rev, 0.0, w.eps)]),
        Box::new(move || {
            vec![checks::check_rev_holder_pc(
                fx,
                ch,
                w.q_over,
                w.q_under
                    .min(constants::lower::small_exponent_threshold_e(params.d)),
                s2,
            )]
        }),
        Box::new(move || vec![checks::check_harnack(fx, ch, w, s2)]),
        Box::new(move || checks::check_absolute(fx, ch, w, s2)),
        Box::new(move || checks::check_gradient(fx, ch, w, s2)),
        Box::new(move || vec![checks::moser::moser_trace_check(fx, ch, q_trace, 6, s2)]),
        Box::new(move || vec![checks::check_energy(fx, ch, w.alpha, 0.0, 1e-6)]),
    ];
    if params.p > exps.p_c && params.p < exps.p_s {
        jobs.push(Box::new(move || {
            vec![checks::counterexample::counterexample_singular(params, ch)]
        }));
    }

    let mut results: Vec<CheckResult> = jobs.par_iter().flat_map(|job| job()).collect();
    if let Some(selection) = &opts.selection {
        results.retain(|r| selection.iter().any(|s| r.name.starts_with(s.as_str())));
        if results.is_empty() {
            return Err(Error::Parameter(format!(
                "selection {selection:?} matches no checks"
            )));
        }
    }
    results.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(results)
}
