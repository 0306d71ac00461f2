use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] hilbert_roi_core::Error),

    #[error("{format} parse error at byte {position}: {message}")]
    Parse {
        format: &'static str,
        position: usize,
        message: String,
    },

    #[error("unsupported geometry type `{0}` (only POLYGON is supported)")]
    UnsupportedType(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("invalid corpus spec: {0}")]
    Spec(String),

    #[error("hilbert and naive results differ: {0}")]
    Mismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(format: &'static str, position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            format,
            position,
            message: message.into(),
        }
    }

    /// Process exit code: 3 for integrity failures, 2 for other data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Integrity(_)
            | Error::Mismatch(_)
            | Error::Core(hilbert_roi_core::Error::Integrity(_)) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
