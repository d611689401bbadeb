use thiserror::Error;

/// Errors surfaced by the algebra and verification layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Two operands live in different algebras (generator count or ring).
    #[error("mismatched algebra: {0}")]
    MismatchedAlgebra(String),

    /// A value violates a precondition (wrong grading, nonzero body, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// Singular input: a required body or denominator is not invertible.
    #[error("singular input: {0}")]
    SingularInput(String),

    /// An operator was evaluated on or too close to a coefficient pole.
    #[error("singular evaluation point: denominator {denominator} ~ {value:e} at {point}")]
    DegeneratePoint {
        denominator: String,
        value: f64,
        point: String,
    },

    /// Quadrature failed to reach its accuracy target.
    #[error("quadrature accuracy miss: estimated error {estimate:e} exceeds target {target:e}")]
    AccuracyMiss { estimate: f64, target: f64 },

    /// Bad run configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
