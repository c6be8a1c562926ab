//! Cross-module coherence: the behaviors that tie solutions, norms,
//! constants and checks together.

use ellbounds_core::constants::{self, lower, ExponentWindow};
use ellbounds_core::params::{self, ProblemParams, RadiiChain};
use ellbounds_core::profile::SolveOptions;
use ellbounds_core::{checks, norms, profile, suite};

fn p2_fixture() -> profile::RadialProfile {
    let params = ProblemParams::new(3, 2.0, 1.0).unwrap();
    suite::build_fixture(params, 1.0, 1e-10).unwrap()
}

#[test]
fn caccioppoli_margins_converge_as_delta_vanishes() {
    // margins for δ in {1, 0.1, 0.01, 0} approach the δ = 0 margin
    let fx = p2_fixture();
    let chain = suite::default_chain(&fx).unwrap();
    let margin = |delta: f64| {
        let r = &checks::check_caccioppoli(&fx, &chain, delta)[0];
        assert!(r.passed(), "caccioppoli failed at delta={delta}");
        r.margin_log10.unwrap()
    };
    let at_zero = margin(0.0);
    let mut gaps: Vec<f64> = [1.0, 0.1, 0.01]
        .iter()
        .map(|&d| (margin(d) - at_zero).abs())
        .collect();
    assert!(gaps[0] > gaps[2], "no convergence trend: {gaps:?}");
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!(
        gaps[0] < 0.02,
        "delta = 0.01 margin still far from the limit"
    );
}

#[test]
fn upper_bound_margin_survives_raising_q() {
    // a constant valid at q stays valid at any q' > q
    let fx = p2_fixture();
    let chain = suite::default_chain(&fx).unwrap();
    let s2 = constants::sobolev_constant(3, None).unwrap();
    for q in [3.5, 4.5, 6.0] {
        let r = checks::check_upper(&fx, &chain, q, s2);
        assert!(r.passed(), "upper bound failed at q={q}: {r:?}");
    }
}

#[test]
fn second_form_both_branches_pass() {
    let fx = p2_fixture();
    let chain = suite::default_chain(&fx).unwrap();
    let s2 = constants::sobolev_constant(3, None).unwrap();
    for q0 in [0.5, 2.0] {
        let r = checks::check_upper_second_form(&fx, &chain, q0, 3.0, s2);
        assert!(r.passed(), "second form failed at q0={q0}: {r:?}");
    }
    // r̄ below the integrability floor is a regime error, not a failure
    let params = ProblemParams::new(5, 2.0, 1.0).unwrap();
    let fx5 = suite::build_fixture(params, 1.0, 1e-10).unwrap();
    let chain5 = suite::default_chain(&fx5).unwrap();
    let r = checks::check_upper_second_form(&fx5, &chain5, 0.5, 2.0, s2);
    assert!(matches!(
        r.status,
        ellbounds_core::CheckStatus::Inapplicable(_)
    ));
}

#[test]
fn rev_holder_uniform_in_delta() {
    let fx = p2_fixture();
    let chain = suite::default_chain(&fx).unwrap();
    let q = lower::small_exponent_threshold(3.0, 0.1).unwrap();
    for delta in [0.0, 1.0] {
        let r = checks::check_rev_holder(&fx, &chain, q, delta, 0.1);
        assert!(r.passed(), "reverse Hölder failed at delta={delta}: {r:?}");
    }
}

#[test]
fn lower_check_guards_chain_outside_positivity() {
    let params = ProblemParams::new(3, 0.0, 2.0).unwrap();
    let fx = profile::explicit_p0(params, 1.0).unwrap();
    let r_plus = fx.positivity_radius();
    let chain = RadiiChain::two_ball(0.3 * r_plus, r_plus).unwrap();
    let r = checks::check_lower(&fx, &chain, 0.01, 0.1, 1.0);
    assert!(
        matches!(r.status, ellbounds_core::CheckStatus::Inapplicable(_)),
        "chain touching the positivity radius must be guarded: {r:?}"
    );
}

#[test]
fn harnack_sublinear_margin_on_shooting_profile() {
    // p = 1/2 in d = 3: solution-free constant, margin at least 1
    let params = ProblemParams::new(3, 0.5, 1.0).unwrap();
    let fx = suite::build_fixture(params, 1.0, 1e-10).unwrap();
    let chain = suite::default_chain(&fx).unwrap();
    let w = ExponentWindow::defaults(params);
    let s2 = constants::sobolev_constant(3, None).unwrap();
    let r = checks::check_harnack(&fx, &chain, &w, s2);
    assert!(r.passed(), "{r:?}");
}

#[test]
fn moser_trace_closed_form_schedule() {
    // d=3, p=1, β0=1 (q = 3): β_n = 3^n, gaps telescope to R0−R∞
    let fx = profile::explicit_linear_d3(1.0, 1.0).unwrap();
    let chain = suite::default_chain(&fx).unwrap();
    let trace = checks::moser::moser_trace(&fx, &chain, 3.0, 6, 1.0).unwrap();
    assert!((trace.beta0 - 1.0).abs() < 1e-12);
    for step in &trace.steps {
        assert!(!step.skipped);
        let want = 3f64.powi(step.n as i32);
        assert!(
            (step.beta - want).abs() < 1e-9 * want,
            "beta_{} = {}",
            step.n,
            step.beta
        );
        assert!(step.margin_log10 >= 0.0, "step {} margin below 1", step.n);
    }
    assert!(trace.telescope_defect < 1e-12);
    assert!(trace.summary.passed());
}

#[test]
fn moser_trace_exponent_limit() {
    // p=2, d=3, q=4: β_n (2/2*)^n → β0 − (d−2)(p−1)/2 = 4/3 − 1/2 = 5/6
    let fx = p2_fixture();
    let chain = suite::default_chain(&fx).unwrap();
    let trace = checks::moser::moser_trace(&fx, &chain, 4.0, 6, 1.0).unwrap();
    assert!((trace.beta_limit - 5.0 / 6.0).abs() < 1e-12);
    assert!(trace.summary.passed());
}

#[test]
fn moser_trace_skips_unit_exponent_steps() {
    // engineer β_2 = 1: with p ≤ 1, β_n = (2*/2)^n β0, so β0 = (2/2*)^2
    let params = ProblemParams::new(3, 0.5, 1.0).unwrap();
    let fx = suite::build_fixture(params, 1.0, 1e-10).unwrap();
    let chain = suite::default_chain(&fx).unwrap();
    let q = 3.0 * (1.0f64 / 9.0); // β0 = q(d−2)/d = 1/9 → β_2 = 1
    let trace = checks::moser::moser_trace(&fx, &chain, q, 4, 1.0).unwrap();
    assert!(
        trace.steps.iter().any(|s| s.skipped),
        "pole step not skipped"
    );
    assert!(trace.summary.passed());
}

#[test]
fn sobolev_override_moves_constants_in_the_safe_direction() {
    // every sup-type constant is nondecreasing in S₂ and every inf-type
    // constant nonincreasing: an overestimated S₂ only weakens margins
    let params = ProblemParams::new(3, 2.0, 1.0).unwrap();
    let chain = RadiiChain::new(0.25, Some(0.5), 0.75, None).unwrap();
    let w = ExponentWindow::defaults(params);
    let up = |s2: f64| {
        constants::upper::sup_bound_constant(params, &chain, 4.0, s2)
            .unwrap()
            .ln
    };
    assert!(up(2.0) >= up(1.0) + 2f64.ln());
    let low = |s2: f64| {
        lower::inf_bound_constant(3, 0.003, 0.1, 0.75, 0.25, s2)
            .unwrap()
            .ln
    };
    assert!(low(2.0) < low(1.0));
    let h = |s2: f64| {
        constants::harnack::harnack_constant(params, &chain, &w, None, s2)
            .unwrap()
            .value
            .ln
    };
    assert!(h(2.0) > h(1.0));
}

#[test]
fn scaling_family_maps_solutions_to_solutions() {
    // u solves with λ ⇒ μ^{2/(p−1)} u(μ·) solves with the same λ (p > 1)
    let params = ProblemParams::new(3, 2.0, 1.0).unwrap();
    let base = profile::solve_lane_emden(params, 1.0, 5.0, SolveOptions::default()).unwrap();
    for mu in [0.5, 2.0, 3.0] {
        let scaled = base.rescaled(mu).unwrap();
        let hi = scaled.domain_end() * 0.95;
        let grid: Vec<f64> = (1..400).map(|i| hi * i as f64 / 400.0).collect();
        let res = scaled.residual(&grid).unwrap();
        assert!(res < 1e-6, "mu={mu}: residual {res}");
    }
}

#[test]
fn suite_constant_stub_marks_hypothesis_guards() {
    let params = ProblemParams::new(3, 2.0, 1.0).unwrap();
    let stub = profile::constant_stub(params, 2.0, 2.0);
    let chain = RadiiChain::new(0.25, Some(0.5), 0.75, None).unwrap();
    let res = checks::check_caccioppoli(&stub, &chain, 0.0);
    assert!(matches!(
        res[0].status,
        ellbounds_core::CheckStatus::Inapplicable(_)
    ));
}

#[test]
fn rev_holder_constant_stub_norm_ratio_is_one() {
    // on a constant profile the normalized ‖·‖_q/‖·‖_{−q} ratio is exactly 1,
    // so the margin is exactly the κ-factor
    let params = ProblemParams::new(3, 1.0, 1.0).unwrap();
    let stub = profile::constant_stub(params, 3.0, 2.0);
    let q = 0.05;
    let plus = norms::lq_norm_shifted_mag(&stub, 0.0, q, 1.0).unwrap();
    let minus = norms::lq_norm_shifted_mag(&stub, 0.0, -q, 1.0).unwrap();
    let measure = params::ball_measure(3, 1.0);
    let ratio = plus.ln - (1.0 / q) * measure.ln() - (minus.ln + (1.0 / q) * measure.ln());
    assert!(ratio.abs() < 1e-9, "normalized ratio not 1: {ratio}");
}

#[test]
fn sweep_equivalents_are_deterministic() {
    // two runs of the same suite produce identical margins
    let params = ProblemParams::new(4, 0.5, 4.0).unwrap();
    let a = suite::run_default(params, 5.0, &suite::SuiteOptions::default()).unwrap();
    let b = suite::run_default(params, 5.0, &suite::SuiteOptions::default()).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b.iter()) {
        assert_eq!(x.name, y.name);
        assert_eq!(
            x.margin_log10.map(f64::to_bits),
            y.margin_log10.map(f64::to_bits)
        );
    }
}

#[test]
fn geometry_scale_stays_inside_positivity() {
    let params = ProblemParams::new(3, 0.0, 2.0).unwrap();
    let opts = suite::SuiteOptions {
        geometry_scale: 1.3,
        ..Default::default()
    };
    let res = suite::run_default(params, 1.0, &opts).unwrap();
    assert_eq!(suite::summarize(&res).fail, 0);
    let too_big = suite::SuiteOptions {
        geometry_scale: 1.35,
        ..Default::default()
    };
    assert!(suite::run_default(params, 1.0, &too_big).is_err());
}

#[test]
fn singular_profile_satisfies_caccioppoli_and_lower_bounds() {
    // the singular profile is a genuine local weak solution: the budget
    // estimates and the small-exponent lower bound must hold on it even
    // though every sup-type check is out of reach
    let params = ProblemParams::new(5, 2.0, 1.0).unwrap();
    let sing = profile::singular_profile(params).unwrap();
    let chain = RadiiChain::new(0.25, Some(0.5), 0.75, None).unwrap();

    let cacc = checks::check_caccioppoli(&sing, &chain, 0.0);
    assert!(
        cacc[0].passed(),
        "caccioppoli on the singular profile: {:?}",
        cacc[0]
    );
    let absolute_variant = cacc
        .iter()
        .find(|r| r.name == "caccioppoli.absolute")
        .unwrap();
    assert!(absolute_variant.passed(), "{absolute_variant:?}");

    let q = lower::small_exponent_threshold(5.0, 0.1).unwrap() * 0.5;
    let low = checks::check_lower(&sing, &chain, q, 0.1, 1.0);
    assert!(low.passed(), "lower bound on the singular profile: {low:?}");

    let rh = checks::check_rev_holder(
        &sing,
        &chain,
        lower::small_exponent_threshold(5.0, 0.1).unwrap(),
        0.0,
        0.1,
    );
    assert!(
        rh.passed(),
        "reverse Hölder on the singular profile: {rh:?}"
    );
}

#[test]
fn upper_bound_on_wide_linear_geometry() {
    // closed-form linear solution in d = 3 with λ = 1 on the explicit
    // two-ball geometry R∞ = 1, R0 = 2 (inside the positivity radius π)
    let fx = profile::explicit_linear_d3(1.0, 1.0).unwrap();
    let chain = RadiiChain::two_ball(1.0, 2.0).unwrap();
    let s2 = constants::sobolev_constant(3, None).unwrap();
    let r = checks::check_upper(&fx, &chain, 2.0, s2);
    assert!(r.passed(), "{r:?}");
}

#[test]
fn singular_amplitude_d4() {
    // d = 4, p = 2.5, λ = 1: γ = 4/3 and A = [γ(d−2−γ)]^{2/3} = (8/9)^{2/3},
    // so u(1) = A; the closed form must also satisfy the equation on [1e-3, 1]
    let params = ProblemParams::new(4, 2.5, 1.0).unwrap();
    let sing = profile::singular_profile(params).unwrap();
    let gamma = sing.singular_exponent().unwrap();
    assert!((gamma - 4.0 / 3.0).abs() < 1e-12);
    let amplitude = sing.u(1.0);
    let want = (8.0f64 / 9.0).powf(2.0 / 3.0);
    assert!((amplitude - want).abs() < 1e-12, "{amplitude} vs {want}");
    let grid: Vec<f64> = (0..=500)
        .map(|i| 1e-3 + (1.0 - 1e-3) * i as f64 / 500.0)
        .collect();
    assert!(sing.residual(&grid).unwrap() <= 1e-10);
}

#[test]
fn divergence_probe_budget_guard() {
    let sing = profile::singular_profile(ProblemParams::new(5, 2.0, 1.0).unwrap()).unwrap();
    assert!(norms::divergence_probe(&sing, 2.0, 1.0, 1).is_err());
}

#[test]
fn shifted_subsolution_passes_sup_bounds_only() {
    // u + c is a subsolution: the one-sided sup bounds must still hold,
    // while the two-sided and lower checks refuse the fixture
    let fx = p2_fixture();
    let sub = fx.shifted_up(0.5).unwrap();
    let chain = suite::default_chain(&fx).unwrap();
    let s2 = constants::sobolev_constant(3, None).unwrap();

    let up = checks::check_upper(&sub, &chain, 4.0, s2);
    assert!(up.passed(), "sup bound on the shifted subsolution: {up:?}");
    let sf = checks::check_upper_second_form(&sub, &chain, 0.5, 3.0, s2);
    assert!(sf.passed(), "{sf:?}");

    let low = checks::check_lower(&sub, &chain, 0.001, 0.1, s2);
    assert!(matches!(
        low.status,
        ellbounds_core::CheckStatus::Inapplicable(_)
    ));
    let cacc = checks::check_caccioppoli(&sub, &chain, 0.0);
    assert!(matches!(
        cacc[0].status,
        ellbounds_core::CheckStatus::Inapplicable(_)
    ));
    let energy = checks::check_energy(&sub, &chain, 1.0, 0.0, 1e-6);
    assert!(matches!(
        energy.status,
        ellbounds_core::CheckStatus::Inapplicable(_)
    ));
}

#[test]
fn even_dimension_suite_is_clean() {
    // d = 6 is outside the acceptance grid but inside the theory
    for p in [0.5, 1.2] {
        let params = ProblemParams::new(6, p, 1.0).unwrap();
        let res = suite::run_default(params, 1.0, &suite::SuiteOptions::default()).unwrap();
        let s = suite::summarize(&res);
        assert_eq!(s.fail, 0, "d=6 p={p}: {res:?}");
        assert_eq!(s.inconclusive, 0);
    }
}
