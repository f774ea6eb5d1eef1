//! Error type shared by all qcc operations.

use thiserror::Error;

/// Errors raised by exact-arithmetic and combinatorial operations.
///
/// `NonExactDivision` deserves a note: inside the mutation engine it signals a
/// genuine invariant violation (a cluster variable failed to be a Laurent
/// polynomial over the initial torus), so the CLI maps it to a distinct exit
/// code from ordinary input-validation failures.
#[derive(Debug, Error)]
pub enum Error {
    /// An exchange matrix that must be inverted (to build the skew form) is singular.
    #[error("exchange matrix is singular; use a principal completion instead")]
    SingularMatrix,

    /// Right division in the quantum torus left a nonzero remainder.
    #[error("division is not exact: {0}")]
    NonExactDivision(String),

    /// A scalar that must have only integral q-powers has fractional ones,
    /// or does not specialize to an integer.
    #[error("scalar cannot be specialized at an integer: {0}")]
    FractionalPower(String),

    /// A vertex sequence fails the sink/source admissibility conditions.
    #[error("sequence is not admissible: {0}")]
    NotAdmissible(String),

    /// Subrepresentation enumeration would exceed the configured budget.
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    /// An element does not factor through the exchange-matrix column lattice.
    #[error("element is not compatible with the exchange matrix: {0}")]
    NotBCompatible(String),

    /// A requested polygon diagonal has adjacent (or equal) endpoints.
    #[error("endpoints do not span a diagonal: {0}")]
    AdjacentVertices(String),

    /// Malformed or inconsistent input data.
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
