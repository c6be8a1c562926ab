//! The explicit radial cutoff: 1 on B_{R1}, two matched quadratic pieces on
//! the annulus, 0 outside B_{R0}. Piecewise C² in r with continuous gradient,
//! and small enough derivative bounds to drive every energy estimate.

use crate::error::{Error, Result};
use crate::params;
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    /// Inner plateau radius R1.
    pub r1: f64,
    /// Support radius R0.
    pub r0: f64,
}

/// Pointwise cutoff data: value, radial derivative, Laplacian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffPoint {
    pub phi: f64,
    pub dphi: f64,
    pub laplacian: f64,
}

/// Exact suprema of |∇φ| and |Δφ| plus the certification flag against the
/// stated bounds 4/(R0−R1) and 4d/(R0−R1)².
#[derive(Debug, Clone, Copy)]
pub struct CutoffBounds {
    pub sup_grad: f64,
    pub sup_laplacian: f64,
    pub certified: bool,
}

impl CutoffProfile {
    pub fn new(r1: f64, r0: f64) -> Result<Self> {
        if !(0.0 < r1 && r1 < r0 && r0.is_finite()) {
            return Err(Error::Geometry(format!(
                "cutoff needs 0 < r1 < r0, got {r1}, {r0}"
            )));
        }
        Ok(Self { r1, r0 })
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.r0 + self.r1)
    }

    fn width(&self) -> f64 {
        self.r0 - self.r1
    }

    /// φ, φ′ and Δφ = φ″ + (d−1)φ′/r at radius r.
    ///
    /// On the plateau everything vanishes, including the r → 0 case of the
    /// (d−1)/r term.
    pub fn eval(&self, r: f64, d: u32) -> CutoffPoint {
        assert!(r >= 0.0, "radius must be nonnegative");
        let l2 = self.width() * self.width();
        let dm1 = f64::from(d - 1);
        if r <= self.r1 {
            CutoffPoint {
                phi: 1.0,
                dphi: 0.0,
                laplacian: 0.0,
            }
        } else if r <= self.midpoint() {
            let t = r - self.r1;
            let dphi = -4.0 * t / l2;
            CutoffPoint {
                phi: 1.0 - 2.0 * t * t / l2,
                dphi,
                laplacian: -4.0 / l2 + dm1 * dphi / r,
            }
        } else if r <= self.r0 {
            let t = self.r0 - r;
            let dphi = -4.0 * t / l2;
            CutoffPoint {
                phi: 2.0 * t * t / l2,
                dphi,
                laplacian: 4.0 / l2 + dm1 * dphi / r,
            }
        } else {
            CutoffPoint {
                phi: 0.0,
                dphi: 0.0,
                laplacian: 0.0,
            }
        }
    }

    /// Exact suprema from the piecewise formulas.
    ///
    /// |∇φ| peaks at the midpoint with value 2/(R0−R1). |Δφ| peaks at the
    /// midpoint approached from the inner quadratic piece, where both terms
    /// of φ″ + (d−1)φ′/r carry the same sign.
    pub fn bounds(&self, d: u32) -> CutoffBounds {
        let l = self.width();
        let sup_grad = 2.0 / l;
        let dm1 = f64::from(d - 1);
        let base = 4.0 / (l * l);
        let mid_term = dm1 * l / (self.r0 + self.r1);
        let sup_inner = base * (1.0 + mid_term);
        // On the outer piece Δφ runs monotonically from base·(1 − mid_term)
        // up to base at r = R0.
        let sup_outer = base.max(base * (1.0 - mid_term).abs());
        let sup_laplacian = sup_inner.max(sup_outer);
        let certified = sup_grad <= 4.0 / l + 1e-12
            && sup_laplacian <= 4.0 * f64::from(d) / (l * l) * (1.0 + 1e-12);
        CutoffBounds {
            sup_grad,
            sup_laplacian,
            certified,
        }
    }

    /// Quadrature breakpoints of the support intersected with [0, hi].
    pub fn breakpoints(&self, hi: f64) -> Vec<f64> {
        let mut pts = vec![0.0];
        for c in [self.r1, self.midpoint(), self.r0] {
            if c < hi {
                pts.push(c);
            }
        }
        pts.push(hi.min(self.r0));
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        pts
    }

    /// ∫_{B_{R0}} |∇φ|²/φ dx.
    ///
    /// On the outer piece the ratio is the constant 8/(R0−R1)², so only the
    /// inner quadratic piece needs quadrature; the 0/0 at the support edge
    /// never materializes.
    pub fn grad_energy_over_phi(&self, d: u32, rel_tol: f64) -> quad::QuadResult {
        let l2 = self.width() * self.width();
        let dm1 = d as i32 - 1;
        let inner = quad::integrate(
            |r: f64| {
                let t = r - self.r1;
                let phi = 1.0 - 2.0 * t * t / l2;
                (16.0 * t * t / (l2 * l2)) / phi * r.powi(dm1)
            },
            &[self.r1, self.midpoint()],
            rel_tol,
        );
        let sd = params::surface_factor(d);
        let m = self.midpoint();
        let outer = 8.0 / l2 * (self.r0.powi(d as i32) - m.powi(d as i32)) / f64::from(d);
        quad::QuadResult {
            value: sd * (inner.value + outer),
            abs_error: sd * inner.abs_error,
            evaluations: inner.evaluations,
            converged: inner.converged,
        }
    }
}
