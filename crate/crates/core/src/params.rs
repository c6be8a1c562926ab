//! Problem and geometry domain types, critical exponents, ball volumes and
//! the small numerical identities the rest of the crate leans on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

/// One instance of the equation −Δu = λ uᵖ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    /// Space dimension, d ≥ 3.
    pub d: u32,
    /// Nonlinearity exponent, p ≥ 0.
    pub p: f64,
    /// Coefficient λ > 0.
    pub lambda: f64,
}

impl ProblemParams {
    pub fn new(d: u32, p: f64, lambda: f64) -> Result<Self> {
        if d < 3 {
            return Err(Error::Dimension { d, min: 3 });
        }
        if !(p >= 0.0) {
            return Err(Error::Parameter(format!("p must be >= 0, got {p}")));
        }
        if !(lambda > 0.0) {
            return Err(Error::Parameter(format!(
                "lambda must be > 0, got {lambda}"
            )));
        }
        Ok(Self { d, p, lambda })
    }

    pub fn df(&self) -> f64 {
        f64::from(self.d)
    }

    /// (p − 1)₊
    pub fn p_minus_one_pos(&self) -> f64 {
        (self.p - 1.0).max(0.0)
    }

    pub fn exponents(&self) -> CriticalExponents {
        CriticalExponents::for_problem(self.d, self.p).expect("d validated at construction")
    }
}

/// The exponent landscape of the problem in dimension d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalExponents {
    /// Sobolev conjugate 2* = 2d/(d−2).
    pub two_star: f64,
    /// Serrin exponent p_c = d/(d−2); absolute bounds stop here.
    pub p_c: f64,
    /// Sobolev nonlinearity exponent p_s = (d+2)/(d−2) = 2* − 1.
    pub p_s: f64,
    /// Brezis–Turner exponent p₁ = (d+1)/(d−1). Exposed as metadata only;
    /// it governs boundary very-weak-solution theory, which is out of scope.
    pub p_1: f64,
    /// Integrability threshold q̄ = d(p−1)₊/2 below which sup-bounds fail.
    pub q_bar: f64,
}

/// Critical exponents for dimension d; `q_bar` additionally needs p.
pub fn critical_exponents(d: u32, p: f64) -> Result<CriticalExponents> {
    CriticalExponents::for_problem(d, p)
}

impl CriticalExponents {
    pub fn for_problem(d: u32, p: f64) -> Result<Self> {
        if d < 3 {
            return Err(Error::Dimension { d, min: 3 });
        }
        let df = f64::from(d);
        Ok(Self {
            two_star: 2.0 * df / (df - 2.0),
            p_c: df / (df - 2.0),
            p_s: (df + 2.0) / (df - 2.0),
            p_1: (df + 1.0) / (df - 1.0),
            q_bar: df * (p - 1.0).max(0.0) / 2.0,
        })
    }
}

/// Nested verification radii 0 < R∞ < R̄ < R₀ ≤ R.
///
/// `r_bar` is only needed by the three-radius lower/Harnack bounds in the
/// window 1 < p < p_c; `r` only by the second-form upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiiChain {
    pub r_inf: f64,
    pub r_bar: Option<f64>,
    pub r0: f64,
    pub r: Option<f64>,
}

impl RadiiChain {
    pub fn new(r_inf: f64, r_bar: Option<f64>, r0: f64, r: Option<f64>) -> Result<Self> {
        let chain = Self {
            r_inf,
            r_bar,
            r0,
            r,
        };
        chain.validate()?;
        Ok(chain)
    }

    pub fn two_ball(r_inf: f64, r0: f64) -> Result<Self> {
        Self::new(r_inf, None, r0, None)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_inf > 0.0 && self.r_inf.is_finite()) {
            return Err(Error::Geometry(format!(
                "r_inf must be positive, got {}",
                self.r_inf
            )));
        }
        if !(self.r0 > self.r_inf) {
            return Err(Error::Geometry(format!(
                "need r_inf < r0, got r_inf={}, r0={}",
                self.r_inf, self.r0
            )));
        }
        if let Some(rb) = self.r_bar {
            if !(self.r_inf < rb && rb < self.r0) {
                return Err(Error::Geometry(format!(
                    "need r_inf < r_bar < r0, got {} / {rb} / {}",
                    self.r_inf, self.r0
                )));
            }
        }
        if let Some(r) = self.r {
            if !(r >= self.r0) {
                return Err(Error::Geometry(format!(
                    "need r0 <= r, got r0={}, r={r}",
                    self.r0
                )));
            }
        }
        Ok(())
    }

    /// Ratio ρ = R∞/R₀ ∈ (0,1).
    pub fn rho(&self) -> f64 {
        self.r_inf / self.r0
    }

    pub fn r_bar_or_mid(&self) -> f64 {
        self.r_bar.unwrap_or(0.5 * (self.r_inf + self.r0))
    }

    /// Outermost radius; falls back to R₀ when no enclosing R was given.
    pub fn outer(&self) -> f64 {
        self.r.unwrap_or(self.r0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            r_inf: self.r_inf * factor,
            r_bar: self.r_bar.map(|v| v * factor),
            r0: self.r0 * factor,
            r: self.r.map(|v| v * factor),
        }
    }
}

/// Unit-ball volume ω_d together with its Stirling approximant and the
/// e^{α_d} band bracketing the exact value (1/(6d+1) ≤ α_d ≤ 1/(6d)).
#[derive(Debug, Clone, Copy)]
pub struct BallVolume {
    pub value: f64,
    pub stirling: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
}

/// ω_d via log-Γ. Panics only on d = 0.
pub fn ball_volume(d: u32) -> BallVolume {
    assert!(d >= 1, "ball volume needs d >= 1");
    let df = f64::from(d);
    let (stirling, alpha_lo, alpha_hi) = special::ball_volume_stirling(df);
    BallVolume {
        value: special::ball_volume_real(df),
        stirling,
        alpha_lo,
        alpha_hi,
    }
}

/// ω_d as a plain number; the common case.
pub fn omega_d(d: u32) -> f64 {
    ball_volume(d).value
}

/// |B_R| = ω_d R^d.
pub fn ball_measure(d: u32, radius: f64) -> f64 {
    omega_d(d) * radius.powi(d as i32)
}

/// Surface factor s_d = d ω_d, so that ∫_{B_R} f(|x|) dx = s_d ∫₀^R f r^{d−1} dr.
pub fn surface_factor(d: u32) -> f64 {
    f64::from(d) * omega_d(d)
}

/// Λ_p = 2 for p ≠ 1 and λ/4 for p = 1, the coefficient the energy step of
/// the sup-bound iteration absorbs.
pub fn lambda_p(p: f64, lambda: f64) -> f64 {
    if p == 1.0 {
        lambda / 4.0
    } else {
        2.0
    }
}

/// Closed forms and brute-force partial sums of the geometric series in the
/// ratio s = 2/2* = (d−2)/d.
#[derive(Debug, Clone, Copy)]
pub struct SeriesIdentities {
    /// Σ_{j≥1} s^j = (d−2)/2.
    pub geom_total: f64,
    /// Σ_{j≥1} j s^j = d(d−2)/4.
    pub weighted_total: f64,
    /// Σ_{j=k+1}^∞ s^j = (d/2) s^{k+1}.
    pub tail: f64,
    /// Σ_{j=1}^k s^j = (d−2)/2 · (1 − s^k).
    pub head: f64,
    /// The same four sums by brute-force summation (tail/total truncated at
    /// machine precision), for cross-checking the closed forms.
    pub brute: [f64; 4],
}

/// Evaluate the series identities for dimension d with split index k.
pub fn series_identities(d: u32, k: u32) -> Result<SeriesIdentities> {
    if d < 3 {
        return Err(Error::Dimension { d, min: 3 });
    }
    let df = f64::from(d);
    let s = (df - 2.0) / df;

    let geom_total = (df - 2.0) / 2.0;
    let weighted_total = df * (df - 2.0) / 4.0;
    let tail = 0.5 * df * s.powi(k as i32 + 1);
    let head = 0.5 * (df - 2.0) * (1.0 - s.powi(k as i32));

    let mut geom_bf = 0.0;
    let mut weighted_bf = 0.0;
    let mut tail_bf = 0.0;
    let mut head_bf = 0.0;
    let mut term = 1.0;
    for j in 1..10_000u32 {
        term *= s;
        geom_bf += term;
        weighted_bf += f64::from(j) * term;
        if j > k {
            tail_bf += term;
        } else {
            head_bf += term;
        }
        if term < 1e-18 {
            break;
        }
    }

    Ok(SeriesIdentities {
        geom_total,
        weighted_total,
        tail,
        head,
        brute: [geom_bf, weighted_bf, tail_bf, head_bf],
    })
}

/// Evaluates both sides of the two power-gap inequalities
///   (a−b)(aᵖ−bᵖ) ≤ (p∨1)·max{a^{p−1}, b^{p−1}}·(a−b)²       (p > 0)
///   aᵖ − bᵖ ≥ p b^{p−1}(a−b)                                  (p ≥ 1)
/// and returns the two satisfaction flags.
///
/// When one of a, b is zero and p < 1 the infinite branch of the max is
/// dropped: the inequality stays valid with the finite branch, and the
/// convention 0^{p−1}·0 = 0 keeps the a = b = 0 case total.
pub fn power_gap_inequality(a: f64, b: f64, p: f64) -> Result<(bool, bool)> {
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::Parameter(
            "power gap inequality needs a, b >= 0".into(),
        ));
    }
    if !(p > 0.0) {
        return Err(Error::Parameter("power gap inequality needs p > 0".into()));
    }

    let guarded_pow = |x: f64, e: f64| -> Option<f64> {
        if x > 0.0 {
            Some(x.powf(e))
        } else if e > 0.0 {
            Some(0.0)
        } else if e == 0.0 {
            Some(1.0) // convention 0⁰ = 1
        } else {
            None // 0^{negative}: infinite branch, dropped inside the max
        }
    };

    let lhs1 = (a - b) * (a.powf(p) - b.powf(p));
    let max_pow = match (guarded_pow(a, p - 1.0), guarded_pow(b, p - 1.0)) {
        (Some(x), Some(y)) => x.max(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => 0.0, // a = b = 0: both sides vanish
    };
    let rhs1 = p.max(1.0) * max_pow * (a - b) * (a - b);
    let first = lhs1 <= rhs1 * (1.0 + 1e-12) + 1e-300;

    let second = if p >= 1.0 {
        let rhs2 = p * guarded_pow(b, p - 1.0).unwrap_or(0.0) * (a - b);
        a.powf(p) - b.powf(p) >= rhs2 - 1e-12 * rhs2.abs().max(1.0)
    } else {
        true // second inequality only claimed for p >= 1
    };

    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_d3_and_d4() {
        let e = critical_exponents(3, 2.0).unwrap();
        assert_eq!(e.two_star, 6.0);
        assert_eq!(e.p_c, 3.0);
        assert_eq!(e.p_s, 5.0);
        assert_eq!(e.p_1, 2.0);
        assert_eq!(e.q_bar, 1.5); // d(p−1)₊/2 = 3·1/2

        let e4 = critical_exponents(4, 0.5).unwrap();
        assert_eq!(e4.two_star, 4.0);
        assert_eq!(e4.p_c, 2.0);
        assert_eq!(e4.p_s, 3.0);
        assert_eq!(e4.q_bar, 0.0); // q̄ vanishes for p ≤ 1
    }

    #[test]
    fn exponent_ordering_and_ps_identity() {
        for d in 3..=12 {
            let e = critical_exponents(d, 2.0).unwrap();
            assert!(1.0 < e.p_c && e.p_c < e.p_s && e.p_s < e.two_star);
            assert!((e.p_s - (e.two_star - 1.0)).abs() < 1e-12, "p_s = 2* − 1");
        }
    }

    #[test]
    fn dimension_below_three_rejected() {
        assert!(matches!(
            critical_exponents(2, 1.0),
            Err(Error::Dimension { .. })
        ));
        assert!(ProblemParams::new(2, 1.0, 1.0).is_err());
    }

    #[test]
    fn ball_volumes() {
        let pi = std::f64::consts::PI;
        assert!((omega_d(3) - 4.0 * pi / 3.0).abs() < 1e-12);
        assert!((omega_d(4) - pi * pi / 2.0).abs() < 1e-12);
    }

    #[test]
    fn ball_volume_recursion() {
        // ω_d = ω_{d−2} · 2π/d
        for d in 3..=20u32 {
            let lhs = omega_d(d);
            let rhs = omega_d(d - 2) * 2.0 * std::f64::consts::PI / f64::from(d);
            assert!(
                (lhs - rhs).abs() < 1e-12 * lhs.max(1.0),
                "recursion off at d={d}"
            );
        }
    }

    #[test]
    fn ball_volume_stirling_band() {
        // exact = stirling · e^{−α_d} with α_d in [1/(6d+1), 1/(6d)]
        for d in 3..=20u32 {
            let bv = ball_volume(d);
            let alpha = (bv.stirling / bv.value).ln();
            assert!(
                alpha >= bv.alpha_lo - 1e-9 && alpha <= bv.alpha_hi + 1e-9,
                "d={d}: alpha={alpha}, band=[{}, {}]",
                bv.alpha_lo,
                bv.alpha_hi
            );
        }
    }

    #[test]
    fn lambda_p_rule() {
        assert_eq!(lambda_p(2.0, 7.0), 2.0);
        assert_eq!(lambda_p(1.0, 8.0), 2.0); // λ/4 = 2
        assert_eq!(lambda_p(0.0, 1.0), 2.0);
    }

    #[test]
    fn series_closed_forms_d3() {
        let s = series_identities(3, 0).unwrap();
        assert!((s.geom_total - 0.5).abs() < 1e-12); // Σ (1/3)^j = 1/2
        assert!((s.weighted_total - 0.75).abs() < 1e-12); // Σ j (1/3)^j = 3/4
    }

    #[test]
    fn series_head_sum_d4_k2() {
        // Σ_{j=1}^{2} (1/2)^j = 3/4, against the brute-force sum
        let s = series_identities(4, 2).unwrap();
        assert!((s.head - 0.75).abs() < 1e-12);
        assert!((s.head - s.brute[3]).abs() < 1e-12);
    }

    #[test]
    fn series_match_brute_force_up_to_d12() {
        for d in 3..=12 {
            for k in [0u32, 1, 2, 5, 9] {
                let s = series_identities(d, k).unwrap();
                assert!((s.geom_total - s.brute[0]).abs() < 1e-12, "geom d={d}");
                assert!(
                    (s.weighted_total - s.brute[1]).abs() < 1e-12,
                    "weighted d={d}"
                );
                assert!((s.tail - s.brute[2]).abs() < 1e-12, "tail d={d} k={k}");
                assert!((s.head - s.brute[3]).abs() < 1e-12, "head d={d} k={k}");
            }
        }
    }

    #[test]
    fn power_gap_examples() {
        // a=b: equality at 0
        let (f, s) = power_gap_inequality(2.0, 2.0, 3.0).unwrap();
        assert!(f && s);
        // a=2, b=1, p=2: LHS 3 ≤ RHS 4
        let (f, _) = power_gap_inequality(2.0, 1.0, 2.0).unwrap();
        assert!(f);
        // a=1, b=0, p=1/2: the guarded max keeps the finite branch, equality
        let (f, _) = power_gap_inequality(1.0, 0.0, 0.5).unwrap();
        assert!(f);
        // a=b=0 with p<1: total by the 0-convention
        let (f, _) = power_gap_inequality(0.0, 0.0, 0.5).unwrap();
        assert!(f);
    }

    #[test]
    fn chain_invariants() {
        assert!(RadiiChain::new(0.25, Some(0.5), 0.75, Some(1.0)).is_ok());
        assert!(RadiiChain::new(0.5, None, 0.25, None).is_err());
        assert!(RadiiChain::new(0.25, Some(0.8), 0.75, None).is_err());
        assert!(RadiiChain::new(0.25, None, 0.75, Some(0.5)).is_err());
        let c = RadiiChain::two_ball(0.5, 1.0).unwrap();
        assert!((c.rho() - 0.5).abs() < 1e-15);
    }
}
