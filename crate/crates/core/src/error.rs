use thiserror::Error;

/// Errors raised by the bound formulas, the radial solver and the quadrature
/// layer. Inadmissible parameters always surface as a typed error, never as a
/// NaN or infinity leaking out of a formula.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least {min}, got {d}")]
    Dimension { d: u32, min: u32 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid radii chain: {0}")]
    Geometry(String),

    #[error("outside the regime of the formula: {0}")]
    Regime(String),

    #[error("exponent q = {q} is inadmissible: {reason}")]
    InadmissibleExponent { q: f64, reason: String },

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("quadrature failure: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
