//! The supercritical counterexample, executed: for p_c < p < p_s the exact
//! singular profile is a genuine local weak solution whose q-norms diverge
//! exactly from q = d(p−1)/2 upward. That divergence is what forces the
//! Harnack constant to depend on u in this window.

use crate::checks::{CheckResult, CheckStatus};
use crate::constants::{ExponentWindow, PRegime};
use crate::error::Result;
use crate::norms::{self, Divergence};
use crate::params::{ProblemParams, RadiiChain};
use crate::profile;

/// Build the singular profile and assert, in order:
/// residual tiny on [10⁻³, 1]; divergence exactly at and above the threshold
/// exponent, finiteness safely below it; unbounded sup over the origin; and
/// the general Harnack check inapplicable for want of a finite norm.
pub fn counterexample_singular(params: ProblemParams, chain: &RadiiChain) -> CheckResult {
    let tag = PRegime::of(params).tag();
    let run = || -> Result<(bool, Vec<String>)> {
        chain.validate()?;
        let sing = profile::singular_profile(params)?;
        let mut ok = true;
        let mut notes = Vec::new();

        let grid: Vec<f64> = (0..=1000)
            .map(|i| 1e-3 + (1.0 - 1e-3) * i as f64 / 1000.0)
            .collect();
        let residual = sing.residual(&grid)?;
        if residual > 1e-8 {
            ok = false;
        }
        notes.push(format!("closed-form residual on [1e-3, 1]: {residual:.3e}"));

        let threshold = params.df() * (params.p - 1.0) / 2.0;
        let probes = [
            (threshold, true),
            (threshold + 0.25, true),
            (threshold - 0.1, false),
        ];
        for (q, want_divergent) in probes {
            let verdict = norms::divergence_probe(&sing, q, chain.r0, 4)?;
            let got_divergent = matches!(verdict, Divergence::Divergent { .. });
            if got_divergent != want_divergent || matches!(verdict, Divergence::Inconclusive { .. })
            {
                ok = false;
                notes.push(format!("q = {q}: unexpected verdict {verdict:?}"));
            } else {
                notes.push(format!(
                    "q = {q}: {}",
                    if got_divergent { "divergent" } else { "finite" }
                ));
            }
        }
        notes.push(format!("divergence threshold q = {threshold}"));

        let si = norms::sup_inf(&sing, chain.r_inf)?;
        if si.sup.is_some() {
            ok = false;
            notes.push("sup over the origin unexpectedly finite".into());
        } else {
            notes.push("sup over the origin: unbounded, as it must be".into());
        }

        let window = ExponentWindow::defaults(params);
        let s2 = crate::constants::sobolev_constant(params.d, None)?;
        let harnack = crate::checks::check_harnack(&sing, chain, &window, s2);
        match harnack.status {
            CheckStatus::Inapplicable(reason) => notes.push(format!(
                "general Harnack check inapplicable as expected: {reason}"
            )),
            other => {
                ok = false;
                notes.push(format!("general Harnack check unexpectedly ran: {other:?}"));
            }
        }
        Ok((ok, notes))
    };
    match run() {
        Ok((ok, notes)) => CheckResult {
            name: "counterexample.singular".into(),
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            regime: tag.into(),
            anchors: "counterexample.singular".into(),
            lhs: Some(1.0),
            rhs: Some(1.0),
            lhs_log10: Some(0.0),
            rhs_log10: Some(0.0),
            margin: Some(1.0),
            margin_log10: Some(0.0),
            error_allowance: 0.0,
            notes,
        },
        Err(e) => CheckResult {
            name: "counterexample.singular".into(),
            status: CheckStatus::Inapplicable(e.to_string()),
            regime: tag.into(),
            anchors: "counterexample.singular".into(),
            lhs: None,
            rhs: None,
            lhs_log10: None,
            rhs_log10: None,
            margin: None,
            margin_log10: None,
            error_allowance: 0.0,
            notes: Vec::new(),
        },
    }
}
