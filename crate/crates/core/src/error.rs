use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("points coincide (separation {separation:e})")]
    CoincidentPoints { separation: f64 },

    #[error("edge length must be positive and finite, got {0}")]
    NonPositiveEdge(f64),

    #[error("weight must be positive and finite, got {0}")]
    InvalidWeight(f64),

    #[error("tetrahedron is degenerate (signed volume {volume:e}, threshold {threshold:e})")]
    DegenerateTetrahedron { volume: f64, threshold: f64 },

    #[error("triangle is degenerate")]
    DegenerateTriangle,

    #[error("weights are equal within relative tolerance; the closed form is singular")]
    EqualWeights,

    #[error("complex branch assembly left an imaginary part of {imag_defect:e}")]
    BranchCancellationFailure { imag_defect: f64 },

    #[error("all polynomial coefficients are zero")]
    ZeroPolynomial,

    #[error("no real root in the admissible interval")]
    RootNotFound,

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no sign change bracketed below {limit:e}")]
    NoBracket { limit: f64 },

    #[error("argument outside the formula's domain: {0}")]
    OutOfDomain(&'static str),

    #[error("stretched tetrahedron violates the floating condition at vertex A{}", .vertex + 1)]
    FloatingViolated { vertex: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
