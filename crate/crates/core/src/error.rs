use thiserror::Error;

/// Errors raised by the Fock-space algebra, state builders, information
/// measures and optimizer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("occupation {occupation} out of range for mode `{label}` of dimension {dim}")]
    Index {
        label: String,
        occupation: usize,
        dim: usize,
    },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "truncation error at r = {r}: {detail} (tol = {tol:e}); increase the cutoff or loosen the tolerance"
    )]
    Truncation { r: f64, tol: f64, detail: String },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("objective failed at alpha2 = {alpha2}, qR = {q_r}: {source}")]
    AtPoint {
        alpha2: f64,
        q_r: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for truncation failures, including ones wrapped with an optimizer point.
    pub fn is_truncation(&self) -> bool {
        match self {
            Error::Truncation { .. } => true,
            Error::AtPoint { source, .. } => source.is_truncation(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
