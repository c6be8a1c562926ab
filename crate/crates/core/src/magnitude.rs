//! Positive quantities carried in log space.
//!
//! Several of the explicit constants reach magnitudes far beyond the f64
//! range (exponents like d/(2q) with q ~ 1e−3 produce values around 10^600),
//! so every constant and every verification margin is assembled as a `Mag`:
//! natural log of a positive value plus a propagated relative error.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mag {
    /// Natural logarithm of the (positive) value.
    pub ln: f64,
    /// Relative error bound on the value (first order).
    pub rel_err: f64,
}

// The operator traits are implemented below; the named mul/div stay for
// method chains.
#[allow(clippy::should_implement_trait)]
impl Mag {
    pub const ONE: Mag = Mag {
        ln: 0.0,
        rel_err: 0.0,
    };

    pub fn exact(value: f64) -> Self {
        assert!(
            value > 0.0,
            "Mag::exact needs a positive value, got {value}"
        );
        Self {
            ln: value.ln(),
            rel_err: 0.0,
        }
    }

    pub fn new(value: f64, rel_err: f64) -> Self {
        assert!(value > 0.0, "Mag::new needs a positive value, got {value}");
        Self {
            ln: value.ln(),
            rel_err,
        }
    }

    pub fn from_ln(ln: f64, rel_err: f64) -> Self {
        Self { ln, rel_err }
    }

    /// Linear-space value; may overflow to +∞ (or underflow to 0) when the
    /// magnitude leaves the f64 range. Use `ln` or `log10` for reporting.
    pub fn value(&self) -> f64 {
        self.ln.exp()
    }

    pub fn log10(&self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }

    pub fn mul(self, other: Mag) -> Mag {
        Mag {
            ln: self.ln + other.ln,
            rel_err: self.rel_err + other.rel_err,
        }
    }

    pub fn div(self, other: Mag) -> Mag {
        Mag {
            ln: self.ln - other.ln,
            rel_err: self.rel_err + other.rel_err,
        }
    }

    pub fn powf(self, e: f64) -> Mag {
        Mag {
            ln: self.ln * e,
            rel_err: self.rel_err * e.abs(),
        }
    }

    pub fn recip(self) -> Mag {
        Mag {
            ln: -self.ln,
            rel_err: self.rel_err,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.ln.is_finite() && self.rel_err.is_finite()
    }
}

impl std::ops::Mul for Mag {
    type Output = Mag;
    fn mul(self, rhs: Mag) -> Mag {
        Mag::mul(self, rhs)
    }
}

impl std::ops::Div for Mag {
    type Output = Mag;
    fn div(self, rhs: Mag) -> Mag {
        Mag::div(self, rhs)
    }
}
