use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A numerical procedure failed to meet its accuracy contract.
    #[error("numerical error in {op}: {msg}")]
    Numerics { op: &'static str, msg: String },

    /// Fock-space truncation too small for the requested tolerance.
    #[error(
        "truncation error: tail mass {tail:.3e} exceeds tolerance {tol:.3e} at n_max = {n_max}"
    )]
    Truncation { tail: f64, tol: f64, n_max: usize },

    /// Configuration rejected, with the offending key and constraint.
    #[error("config error: {0}")]
    Config(String),

    /// Two redundant computation routes disagree beyond tolerance.
    #[error("inconsistency in {op}: {msg}")]
    Inconsistency { op: &'static str, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable short tag for machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Numerics { .. } => "numerics",
            Error::Truncation { .. } => "truncation",
            Error::Config(_) => "config",
            Error::Inconsistency { .. } => "inconsistency",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    pub fn numerics(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Numerics {
            op,
            msg: msg.into(),
        }
    }

    pub fn inconsistency(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Inconsistency {
            op,
            msg: msg.into(),
        }
    }
}
