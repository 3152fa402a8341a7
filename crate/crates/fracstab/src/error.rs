//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by order validation, pencil assembly, the eigensolvers,
/// the oracles, the simulator and problem-file parsing.
#[derive(Debug, Error)]
pub enum Error {
    /// Order-vector validation or normalization failure.
    #[error("invalid orders: {0}")]
    Orders(String),

    /// Problem-file parse or validation failure; the message names the field.
    #[error("problem file: {0}")]
    Problem(String),

    /// Dimension mismatch between a matrix and the order vector.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Linear-algebra kernel failure (factorization breakdown, QR
    /// non-convergence, …).
    #[error("linear algebra: {0}")]
    LinAlg(String),

    /// Eigensolver failure: non-convergence or an unmet residual certificate.
    #[error("eigensolver: {0}")]
    Eigensolver(String),

    /// Rational approximation could not be certified within the caps.
    #[error("rational approximation: {0}")]
    Rationalize(String),

    /// Verification oracle failure (ill-conditioned interpolation,
    /// root-finder non-convergence, …).
    #[error("verification oracle: {0}")]
    Verify(String),

    /// Time-domain simulation failure.
    #[error("simulation: {0}")]
    Simulate(String),

    /// I/O failure while reading inputs or writing outputs.
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}
