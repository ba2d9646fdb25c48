use thiserror::Error;

/// Errors surfaced by the profile and transform layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension must be at least 3, got n = {0}")]
    DimensionTooSmall(usize),

    #[error("weight exponent alpha must exceed -1, got {0}")]
    InvalidWeightExponent(f64),

    #[error("quadrature point count must be at least 1")]
    EmptyRule,

    #[error("quadrature did not converge: refinements differ by {residual:.3e} (tolerance {tolerance:.1e})")]
    QuadratureNonConvergent { residual: f64, tolerance: f64 },

    #[error("degree {i} out of range for {what} in dimension {n}: valid range is {range}")]
    DegreeOutOfRange {
        what: &'static str,
        n: usize,
        i: usize,
        range: &'static str,
    },

    #[error("operator {name} is singular at harmonic degree {k} (multiplier {value:.3e})")]
    SingularOperator {
        name: String,
        k: usize,
        value: f64,
    },

    #[error("inverse transform {name} is ill-conditioned: condition number {cond:.3e} exceeds 1e10")]
    IllConditioned { name: String, cond: f64 },

    #[error("band limits disagree: {left} vs {right}")]
    BandLimitMismatch { left: usize, right: usize },

    #[error("dimension or degree mismatch: {0}")]
    Mismatch(String),

    #[error("unsupported (body, order) pair: {0}")]
    Capability(String),

    #[error("profile truncation error estimate {estimate:.3e} exceeds tolerance {tolerance:.1e}")]
    Truncation { estimate: f64, tolerance: f64 },

    #[error("kappa index {0} below the Gamma-continuation range (>= -1)")]
    KappaRange(i64),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
