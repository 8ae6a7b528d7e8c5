use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// Partiality is part of the model: an operation whose Y-side intermediate
/// leaves the generator's codomain returns [`Error::Domain`] instead of
/// producing a meaningless number.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("{0} is not on the Cantor line")]
    NotInCantorSet(String),

    #[error("precision limit exceeded: {0}")]
    Precision(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("normalization violated: {0}")]
    Normalization(String),

    /// The generator has no exact rational evaluation for this input.
    #[error("no exact evaluation: {0}")]
    Inexact(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(what: impl std::fmt::Display) -> Self {
        Error::Domain(what.to_string())
    }
}
