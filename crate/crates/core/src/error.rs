use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation hit a pole or an excluded locus (k = 0, mu in {0, 1, k^2}, ...).
    #[error("singular configuration: {0}")]
    Singular(String),

    /// A parameter function fails a structural requirement (e.g. mu'(0) = 0).
    #[error("degenerate parameter: {0}")]
    Degenerate(String),

    #[error("division by the zero function")]
    DivisionByZero,

    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,

    /// Null-space extraction could not make a clean rank decision.
    #[error("ambiguous numerical rank: {0}")]
    AmbiguousRank(String),

    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),

    /// Grid doubling up to the cap never produced two equal consecutive counts.
    #[error("zero count unstable up to {max_grid} grid points (last counts {counts:?})")]
    CountUnstable { max_grid: usize, counts: Vec<usize> },

    #[error("non-finite function value at {at}")]
    NonFinite { at: f64 },

    /// The function vanished on every probe sample.
    #[error("function is possibly identically zero")]
    PossiblyIdenticallyZero,

    /// An internal algebraic invariant did not hold (e.g. a recursion denominator vanished).
    #[error("structural error: {0}")]
    Structural(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
