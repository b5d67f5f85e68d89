use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated. The message names the
    /// offending field or index.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The adaptive quadrature reached its size cap without satisfying the
    /// stop rule. The weight function is too ill-conditioned for the
    /// requested tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureDivergence(String),

    /// A patch or constraint file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
