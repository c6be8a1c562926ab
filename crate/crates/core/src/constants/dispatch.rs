//! Regime dispatch and the self-documenting constant report.
//!
//! The dispatcher reproduces the applicability summary of the theory: which
//! bound family applies in which p-window, with the reason recorded whenever
//! a family does not apply.

use serde::{Deserialize, Serialize};

use crate::constants::{self, gradient, harnack, lower, upper, ExponentWindow};
use crate::error::Result;
use crate::magnitude::Mag;
use crate::params::{self, ProblemParams, RadiiChain};

/// The p-windows of the theory in dimension d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PRegime {
    /// 0 ≤ p < 1
    Sublinear,
    /// p = 1
    Linear,
    /// 1 < p < p_c
    SubSerrin,
    /// p_c ≤ p < p_s
    Critical,
    /// p ≥ p_s: outside the theory
    OutOfRange,
}

impl PRegime {
    pub fn of(params: ProblemParams) -> PRegime {
        let exps = params.exponents();
        if params.p < 1.0 {
            PRegime::Sublinear
        } else if params.p == 1.0 {
            PRegime::Linear
        } else if params.p < exps.p_c {
            PRegime::SubSerrin
        } else if params.p < exps.p_s {
            PRegime::Critical
        } else {
            PRegime::OutOfRange
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            PRegime::Sublinear => "0<=p<1",
            PRegime::Linear => "p=1",
            PRegime::SubSerrin => "1<p<p_c",
            PRegime::Critical => "p_c<=p<p_s",
            PRegime::OutOfRange => "p>=p_s",
        }
    }
}

/// Applicability of the bound families per regime; the columns of the
/// summary table. `None` in a field means the family does not apply there
/// and carries the reason.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Applicability {
    pub name: &'static str,
    pub applicable: bool,
    pub detail: String,
}

/// The per-regime applicability rows: upper bounds (both forms), lower
/// bounds (plain and three-radius), Harnack, absolute (both sides), gradient
/// (plain and absolute).
pub fn applicability(regime: PRegime) -> Vec<Applicability> {
    let yes = |name, detail: &str| Applicability {
        name,
        applicable: true,
        detail: detail.into(),
    };
    let no = |name, detail: &str| Applicability {
        name,
        applicable: false,
        detail: detail.into(),
    };
    match regime {
        PRegime::Sublinear => vec![
            yes("upper.moser", "any q > 0"),
            yes("upper.second-form", "bounded-coefficient route"),
            yes("lower.q", "0 < q <= q0(d,eps)"),
            no("lower.pc", "three-radius route needs 1 < p < p_c"),
            yes("harnack", "solution-free constant (sublinear)"),
            no("absolute.upper", "No: absolute sup bound needs 1 < p < p_c"),
            yes("absolute.lower", "norm-free inf bound"),
            yes("gradient.upper", "b_p from the absolute inf bound"),
            no("gradient.absolute", "needs 1 < p < p_c"),
            no("rev-holder.pc", "two-exponent route needs 1 < p < p_c"),
        ],
        PRegime::Linear => vec![
            yes("upper.moser", "any q > 0; constant also carries lambda"),
            yes("upper.second-form", "bounded-coefficient route"),
            yes("lower.q", "0 < q <= q0(d,eps)"),
            no("lower.pc", "three-radius route needs 1 < p < p_c"),
            yes("harnack", "solution-free constant (sublinear family)"),
            no("absolute.upper", "No: impossible at p = 1"),
            no("absolute.lower", "No: impossible at p = 1"),
            yes("gradient.upper", "b_p = 1"),
            no("gradient.absolute", "needs 1 < p < p_c"),
            no("rev-holder.pc", "two-exponent route needs 1 < p < p_c"),
        ],
        PRegime::SubSerrin => vec![
            yes("upper.moser", "q > d(p-1)/2"),
            yes("upper.second-form", "coefficient u^{p-1} in L^r, r > d/2"),
            yes("lower.q", "0 < q <= q0(d,eps)"),
            yes("lower.pc", "d(p-1)/2 < q < d/(d-2)"),
            yes("harnack", "solution-free constant (three-radius route)"),
            yes("absolute.upper", "norm-free sup bound"),
            no("absolute.lower", "No: inf bound needs 0 <= p < 1"),
            yes("gradient.upper", "b_p from the absolute sup bound"),
            yes("gradient.absolute", "norm-free gradient ceiling"),
            yes("rev-holder.pc", "two-exponent reverse Hoelder"),
        ],
        PRegime::Critical => vec![
            yes("upper.moser", "q > d(p-1)/2"),
            yes("upper.second-form", "coefficient u^{p-1} in L^r, r > d/2"),
            yes("lower.q", "0 < q <= q0(d,eps)"),
            no("lower.pc", "three-radius route needs p < p_c"),
            yes("harnack", "constant must depend on u in this window"),
            no(
                "absolute.upper",
                "No: singular solutions defeat any norm-free sup bound",
            ),
            no("absolute.lower", "No: inf bound needs 0 <= p < 1"),
            yes("gradient.upper", "b_p = sup-norm branch"),
            no("gradient.absolute", "needs p < p_c"),
            no("rev-holder.pc", "two-exponent route needs p < p_c"),
        ],
        PRegime::OutOfRange => vec![
            no("upper.moser", "p >= p_s: outside the theory"),
            no("upper.second-form", "p >= p_s: outside the theory"),
            no("lower.q", "p >= p_s: outside the theory"),
            no("lower.pc", "p >= p_s: outside the theory"),
            no("harnack", "p >= p_s: outside the theory"),
            no("absolute.upper", "p >= p_s: outside the theory"),
            no("absolute.lower", "p >= p_s: outside the theory"),
            no("gradient.upper", "p >= p_s: outside the theory"),
            no("gradient.absolute", "p >= p_s: outside the theory"),
            no("rev-holder.pc", "p >= p_s: outside the theory"),
        ],
    }
}

/// One named constant in the report. Values beyond the f64 range stay
/// reportable through the log10 field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub name: String,
    pub value: Option<f64>,
    pub log10: Option<f64>,
    pub regime: String,
    pub applicable: bool,
    pub detail: String,
    pub anchor: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantReport {
    pub regime: String,
    pub entries: Vec<ConstantEntry>,
    pub applicability: Vec<ApplicabilityOwned>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApplicabilityOwned {
    pub name: String,
    pub applicable: bool,
    pub detail: String,
}

fn entry_value(name: &str, mag: Mag, regime: &str, detail: &str, anchor: &str) -> ConstantEntry {
    let v = mag.value();
    ConstantEntry {
        name: name.into(),
        value: if v.is_finite() { Some(v) } else { None },
        log10: Some(mag.log10()),
        regime: regime.into(),
        applicable: true,
        detail: detail.into(),
        anchor: anchor.into(),
    }
}

fn entry_na(name: &str, regime: &str, detail: &str, anchor: &str) -> ConstantEntry {
    ConstantEntry {
        name: name.into(),
        value: None,
        log10: None,
        regime: regime.into(),
        applicable: false,
        detail: detail.into(),
        anchor: anchor.into(),
    }
}

/// Evaluate every constant that applies to (params, chain, window) and list
/// the inapplicable ones with their reason.
pub fn constant_report(
    params: ProblemParams,
    chain: &RadiiChain,
    window: &ExponentWindow,
    s2: f64,
) -> Result<ConstantReport> {
    chain.validate()?;
    let regime = PRegime::of(params);
    let tag = regime.tag();
    let exps = params.exponents();
    let mut entries = Vec::new();

    let push_plain =
        |entries: &mut Vec<ConstantEntry>, name: &str, v: f64, detail: &str, anchor: &str| {
            entries.push(ConstantEntry {
                name: name.into(),
                value: Some(v),
                log10: Some(v.log10()),
                regime: tag.into(),
                applicable: true,
                detail: detail.into(),
                anchor: anchor.into(),
            });
        };

    push_plain(
        &mut entries,
        "omega_d",
        params::omega_d(params.d),
        "unit ball volume",
        "geometry.ball-volume",
    );
    push_plain(
        &mut entries,
        "sobolev_s2",
        s2,
        "Sobolev constant in use",
        "sobolev.constant",
    );
    push_plain(
        &mut entries,
        "lambda_p",
        params::lambda_p(params.p, params.lambda),
        "energy-step coefficient",
        "upper.energy-step",
    );
    push_plain(
        &mut entries,
        "two_star",
        exps.two_star,
        "Sobolev conjugate",
        "exponents.two-star",
    );
    push_plain(
        &mut entries,
        "p_c",
        exps.p_c,
        "absolute-bound threshold",
        "exponents.serrin",
    );
    push_plain(
        &mut entries,
        "p_s",
        exps.p_s,
        "sup-bound threshold",
        "exponents.sobolev",
    );
    push_plain(
        &mut entries,
        "p_1",
        exps.p_1,
        "boundary very-weak threshold (metadata only)",
        "exponents.brezis-turner",
    );
    if exps.q_bar > 0.0 {
        push_plain(
            &mut entries,
            "q_bar",
            exps.q_bar,
            "integrability floor of the sup bound",
            "exponents.q-bar",
        );
    }
    let q0 = lower::small_exponent_threshold(params.df(), window.eps)?;
    push_plain(
        &mut entries,
        "q0_threshold",
        q0,
        "small-exponent ceiling of the lower bounds",
        "lower.q0-threshold",
    );
    push_plain(
        &mut entries,
        "caccioppoli_rhs",
        upper::caccioppoli_bound(params.d, chain.r0, chain.r_bar_or_mid())?,
        "quantitative Caccioppoli right side on the middle ball",
        "caccioppoli.quantitative",
    );
    push_plain(
        &mut entries,
        "young_k1",
        coeff_young(window.r_coeff, params.d)?,
        "Young-splitting constant",
        "coefficient.young",
    );

    if regime == PRegime::OutOfRange {
        entries.push(entry_na("sup_bound_I", tag, "p >= p_s", "upper.moser.q"));
    } else {
        let q = upper::nudge_q(params.d, params.p, window.q.max(exps.q_bar + 0.5))?;
        entries.push(entry_value(
            "sup_bound_I",
            upper::sup_bound_constant(params, chain, q, s2)?,
            tag,
            &format!("two-ball sup-bound constant at q = {q}"),
            "upper.moser.q",
        ));
        entries.push(entry_value(
            "inf_bound_I",
            lower::inf_bound_constant(
                params.d,
                window.q_under.min(q0),
                window.eps,
                chain.r0,
                chain.r_inf,
                s2,
            )?,
            tag,
            &format!("inf-bound constant at q = {}", window.q_under.min(q0)),
            "lower.q",
        ));
    }

    if regime == PRegime::SubSerrin {
        if let Some(r_bar) = chain.r_bar {
            let q_over = upper::nudge_q(params.d, params.p, window.q_over)?;
            let q_under = window
                .q_under
                .min(lower::small_exponent_threshold_e(params.d))
                .min(q_over);
            entries.push(entry_value(
                "rev_holder_I",
                lower::rev_holder_constant(params, q_over, q_under, r_bar, chain.r0, s2)?,
                tag,
                &format!("two-exponent constant at (q_over, q_under) = ({q_over}, {q_under})"),
                "rev-holder.pc",
            ));
        }
    } else {
        entries.push(entry_na(
            "rev_holder_I",
            tag,
            "needs 1 < p < p_c",
            "rev-holder.pc",
        ));
    }

    match harnack::harnack_constant(params, chain, window, None, s2) {
        Ok(h) => entries.push(entry_value(
            "harnack_H",
            h.value,
            tag,
            "solution-free Harnack constant",
            "harnack",
        )),
        Err(e) => entries.push(entry_na("harnack_H", tag, &e.to_string(), "harnack")),
    }

    match harnack::absolute_bounds(params, chain, window, s2) {
        Ok(b) => {
            match b.upper {
                Some(m) => entries.push(entry_value(
                    "absolute_upper",
                    m,
                    tag,
                    "norm-free sup ceiling",
                    "absolute.upper",
                )),
                None => entries.push(entry_na(
                    "absolute_upper",
                    tag,
                    b.reason
                        .as_deref()
                        .unwrap_or("No: inf side only in this regime"),
                    "absolute.upper",
                )),
            }
            match b.lower {
                Some(m) => entries.push(entry_value(
                    "absolute_lower",
                    m,
                    tag,
                    "norm-free inf floor",
                    "absolute.lower",
                )),
                None => entries.push(entry_na(
                    "absolute_lower",
                    tag,
                    b.reason
                        .as_deref()
                        .unwrap_or("No: sup side only in this regime"),
                    "absolute.lower",
                )),
            }
        }
        Err(e) => {
            entries.push(entry_na(
                "absolute_upper",
                tag,
                &e.to_string(),
                "absolute.upper",
            ));
            entries.push(entry_na(
                "absolute_lower",
                tag,
                &e.to_string(),
                "absolute.lower",
            ));
        }
    }

    if regime == PRegime::SubSerrin {
        entries.push(entry_value(
            "gradient_absolute_K",
            gradient::gradient_absolute_multiplier(params, chain, window, s2)?,
            tag,
            "norm-free gradient ceiling",
            "gradient.absolute",
        ));
    } else {
        entries.push(entry_na(
            "gradient_absolute_K",
            tag,
            "needs 1 < p < p_c",
            "gradient.absolute",
        ));
    }

    Ok(ConstantReport {
        regime: tag.into(),
        entries,
        applicability: applicability(regime)
            .into_iter()
            .map(|a| ApplicabilityOwned {
                name: a.name.into(),
                applicable: a.applicable,
                detail: a.detail,
            })
            .collect(),
    })
}

fn coeff_young(r: f64, d: u32) -> Result<f64> {
    constants::coeff::young_constant(r, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_classification() {
        let mk = |p| ProblemParams::new(3, p, 1.0).unwrap();
        assert_eq!(PRegime::of(mk(0.0)), PRegime::Sublinear);
        assert_eq!(PRegime::of(mk(0.99)), PRegime::Sublinear);
        assert_eq!(PRegime::of(mk(1.0)), PRegime::Linear);
        assert_eq!(PRegime::of(mk(2.0)), PRegime::SubSerrin);
        assert_eq!(PRegime::of(mk(3.0)), PRegime::Critical); // p_c itself
        assert_eq!(PRegime::of(mk(4.0)), PRegime::Critical);
        assert_eq!(PRegime::of(mk(5.0)), PRegime::OutOfRange); // p_s itself
    }

    #[test]
    fn applicability_matches_the_summary_table() {
        let find = |rows: &[Applicability], name: &str| -> bool {
            rows.iter().find(|r| r.name == name).expect(name).applicable
        };
        let sub = applicability(PRegime::Sublinear);
        assert!(find(&sub, "absolute.lower") && !find(&sub, "absolute.upper"));
        assert!(!find(&sub, "lower.pc") && !find(&sub, "gradient.absolute"));
        let lin = applicability(PRegime::Linear);
        assert!(!find(&lin, "absolute.lower") && !find(&lin, "absolute.upper"));
        let mid = applicability(PRegime::SubSerrin);
        assert!(find(&mid, "absolute.upper") && !find(&mid, "absolute.lower"));
        assert!(
            find(&mid, "lower.pc")
                && find(&mid, "gradient.absolute")
                && find(&mid, "rev-holder.pc")
        );
        let crit = applicability(PRegime::Critical);
        assert!(!find(&crit, "absolute.upper") && !find(&crit, "absolute.lower"));
        assert!(find(&crit, "harnack") && find(&crit, "upper.moser"));
        let out = applicability(PRegime::OutOfRange);
        assert!(out.iter().all(|r| !r.applicable));
    }

    #[test]
    fn report_covers_all_families_per_regime() {
        for p in [0.0, 0.5, 1.0, 2.0, 4.0] {
            let params = ProblemParams::new(3, p, 1.0).unwrap();
            let chain = RadiiChain::new(0.25, Some(0.5), 0.75, None).unwrap();
            let w = ExponentWindow::defaults(params);
            let s2 = crate::constants::sobolev_constant(3, None).unwrap();
            let rep = constant_report(params, &chain, &w, s2).unwrap();
            assert!(rep.entries.iter().any(|e| e.name == "harnack_H"));
            assert!(rep.entries.iter().any(|e| e.name == "absolute_upper"));
            assert!(rep.entries.iter().any(|e| e.name == "absolute_lower"));
            for e in &rep.entries {
                assert!(!e.anchor.is_empty(), "empty anchor on {}", e.name);
                if e.applicable {
                    assert!(
                        e.log10.map(f64::is_finite).unwrap_or(false),
                        "{} has no finite log10",
                        e.name
                    );
                }
            }
            // p = 1 carries the "No" absolute rows
            if p == 1.0 {
                let up = rep
                    .entries
                    .iter()
                    .find(|e| e.name == "absolute_upper")
                    .unwrap();
                assert!(!up.applicable && up.detail.contains("No"));
            }
        }
    }

    #[test]
    fn finiteness_on_a_stratified_sample() {
        // stratified random sample over admissible tuples: every applicable
        // constant must come back with a finite log; inadmissible tuples
        // must error, never produce NaN
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let mut checked = 0usize;
        while checked < 10_000 {
            let d = *[3u32, 4, 5, 6].get(rng.random_range(0..4)).unwrap();
            let p: f64 = rng.random_range(0.0..2.2);
            let lambda = rng.random_range(0.2..5.0);
            let params = match ProblemParams::new(d, p, lambda) {
                Ok(v) => v,
                Err(_) => continue,
            };
            if PRegime::of(params) == PRegime::OutOfRange {
                continue;
            }
            let ri = rng.random_range(0.1..0.5);
            let rb = rng.random_range(ri + 0.05..0.8);
            let r0 = rng.random_range(rb + 0.05..1.2);
            let chain = RadiiChain::new(ri, Some(rb), r0, None).unwrap();
            let w = ExponentWindow::defaults(params);
            let s2 = 0.7;
            let rep = constant_report(params, &chain, &w, s2).unwrap();
            for e in rep.entries {
                if e.applicable {
                    let l = e.log10.unwrap();
                    assert!(l.is_finite(), "{} not finite at d={d} p={p}", e.name);
                }
            }
            checked += 1;
        }
    }
}
