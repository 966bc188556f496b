use thiserror::Error;

/// Errors raised by grid construction, interpolation, refinement and the
/// experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {point:?} lies outside the domain (dimension {dimension}: {value} not in [{lower}, {upper}])")]
    OutOfDomain {
        point: Vec<f64>,
        dimension: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("incomplete dataset: no value for grid point {0}")]
    IncompleteDataset(String),

    #[error("incomplete selection: no true value supplied for selected point {0}")]
    IncompleteSelection(String),

    #[error("unknown point id {0}")]
    UnknownPoint(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed {what}: {message}")]
    Parse { what: String, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub(crate) fn parse(what: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            what: what.into(),
            message: message.to_string(),
        }
    }

    /// Process exit code for command-line front ends: 2 for invalid
    /// arguments, 3 for incomplete data, 4 for I/O and file-format failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_)
            | Error::OutOfDomain { .. }
            | Error::NonFinite(_) => 2,
            Error::IncompleteDataset(_) | Error::IncompleteSelection(_) | Error::UnknownPoint(_) => 3,
            Error::Io { .. } | Error::Parse { .. } => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
