//! Every explicit constant of the quantitative local theory, as pure
//! functions of the problem parameters, the radii chain and the exponent
//! choices. All formulas are assembled in log space ([`Mag`]) because several
//! of them (anything carrying a d/(2q) exponent with a small q) leave the
//! f64 range by hundreds of decades while staying perfectly meaningful.

pub mod coeff;
pub mod dispatch;
pub mod gradient;
pub mod harnack;
pub mod lower;
pub mod upper;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnitude::Mag;
use crate::params::ProblemParams;
use crate::special;

pub use dispatch::{constant_report, ConstantEntry, ConstantReport, PRegime};

/// Exponent choices threaded through the two-exponent constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentWindow {
    /// Norm exponent of the sup bound (must exceed q̄ = d(p−1)₊/2).
    pub q: f64,
    /// Large exponent of the two-exponent lower/Harnack bounds.
    pub q_over: f64,
    /// Small exponent of the lower bounds (capped by the threshold q₀).
    pub q_under: f64,
    /// John–Nirenberg slack ε > 0.
    pub eps: f64,
    /// Energy exponent α ≠ −1 for the identity check.
    pub alpha: f64,
    /// L^r integrability exponent of the coefficient b (needs r > d/2).
    pub r_coeff: f64,
    /// Seed exponent of the iteration trace, β₀ = 2q/2*.
    pub beta0: f64,
}

impl ExponentWindow {
    /// Sensible defaults for a problem: exponents placed strictly inside
    /// every window the theorems require, away from the branch poles.
    pub fn defaults(params: ProblemParams) -> Self {
        let exps = params.exponents();
        let d = params.df();
        let serrin = exps.p_c;
        let mut q = exps.q_bar + 2.0;
        if (q - serrin).abs() < 0.15 {
            q = exps.q_bar + 2.5;
        }
        let q_over = if params.p > 1.0 && params.p < exps.p_c {
            0.5 * (exps.q_bar + serrin)
        } else {
            q
        };
        let eps = 0.1;
        let q_under = lower::small_exponent_threshold(d, eps).expect("d >= 3") * 0.5;
        let beta0 = 1.0f64.max((d - 2.0) * params.p_minus_one_pos() / 2.0 + 1.0);
        Self {
            q,
            q_over,
            q_under,
            eps,
            alpha: 1.0,
            r_coeff: 0.5 * d + 1.5,
            beta0,
        }
    }
}

/// The Sobolev constant S₂ used by every bound.
///
/// The theory names the best constant of the ball inequality but never
/// evaluates it, so the default here is the classical optimal whole-space
/// constant for exponent 2,
///   S₂(d) = (π d(d−2))^{−1/2} (Γ(d)/Γ(d/2))^{1/d},
/// exposed as an overridable value. Every downstream constant is monotone in
/// S₂, so overriding with any upper estimate only weakens margins, it never
/// invalidates a verification.
pub fn sobolev_constant(d: u32, override_value: Option<f64>) -> Result<f64> {
    if d < 3 {
        return Err(Error::Dimension { d, min: 3 });
    }
    if let Some(v) = override_value {
        if !(v > 0.0) {
            return Err(Error::Parameter(format!(
                "Sobolev constant must be positive, got {v}"
            )));
        }
        return Ok(v);
    }
    let df = f64::from(d);
    let ln = -0.5 * (std::f64::consts::PI * df * (df - 2.0)).ln()
        + (special::ln_gamma(df) - special::ln_gamma(df / 2.0)) / df;
    Ok(ln.exp())
}

/// Log-sum-exp over positive terms given as magnitudes; the relative error
/// of the sum is bounded by the largest term error.
pub(crate) fn mag_sum(terms: &[Mag]) -> Mag {
    let shift = terms.iter().map(|t| t.ln).fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Mag::from_ln(f64::NEG_INFINITY, 0.0);
    }
    let sum: f64 = terms.iter().map(|t| (t.ln - shift).exp()).sum();
    let rel = terms.iter().map(|t| t.rel_err).fold(0.0, f64::max);
    Mag::from_ln(shift + sum.ln(), rel)
}
