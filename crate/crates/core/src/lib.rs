//! Numerical laboratory for the quantitative local theory of −Δu = λuᵖ on
//! balls of ℝ^d, d ≥ 3: every explicit constant of the local upper, lower,
//! Harnack, absolute and gradient bounds as a pure function, exact and
//! shooting radial solutions to test them against, weighted radial
//! quadrature for the norms, and an executable check per inequality —
//! including the supercritical counterexample where the sup bounds must
//! break down.
//!
//! The crate is organized along the pipeline:
//!
//! * [`params`] — problem/geometry types, critical exponents, ball volumes
//!   and the small numerical identities everything else uses;
//! * [`cutoff`] — the explicit piecewise-quadratic radial test function;
//! * [`profile`] — radial solutions: closed forms, adaptive shooting, the
//!   singular counterexample profile;
//! * [`quad`] / [`norms`] — adaptive Gauss–Legendre quadrature (log-space
//!   capable) and the L^q-norm layer over profiles;
//! * [`constants`] — the explicit constant formulas, in log space;
//! * [`checks`] / [`suite`] — one executable check per bound plus the
//!   default fixture runner.

// Parameter guards are written as `if !(x > y)` on purpose: the negated
// comparison also rejects NaN inputs through the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod constants;
pub mod cutoff;
pub mod error;
pub mod magnitude;
pub mod norms;
pub mod ode;
pub mod params;
pub mod profile;
pub mod quad;
pub mod special;
pub mod suite;

pub use checks::{CheckResult, CheckStatus};
pub use constants::{ExponentWindow, PRegime};
pub use error::{Error, Result};
pub use magnitude::Mag;
pub use params::{CriticalExponents, ProblemParams, RadiiChain};
pub use profile::{Certificate, ProfileKind, RadialProfile};
pub use suite::{summarize, SuiteOptions, Summary};
