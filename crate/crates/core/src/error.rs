use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("elements belong to different orders (a = {left} vs a = {right})")]
    ParamMismatch { left: String, right: String },

    #[error("element is not a unit (norm {norm})")]
    NotAUnit { norm: String },

    #[error("precision exhausted at {bits} bits: {what}")]
    PrecisionExhausted { bits: u32, what: String },

    #[error("exact verification failed: {0}")]
    VerificationFailed(String),

    #[error("interval certification failed: {0}")]
    CertificationFailed(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("mismatch against fixture: {0}")]
    MismatchAgainstFixture(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn precision(bits: u32, what: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            bits,
            what: what.into(),
        }
    }
}
