use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("integration failed at step {step} (t = {time}): {quantity} = {value:e}")]
    Integration {
        step: usize,
        time: f64,
        quantity: &'static str,
        value: f64,
    },

    #[error("singular denominator {value:e} in `{field}` equation at t = {time}")]
    SingularDenominator {
        field: &'static str,
        time: f64,
        value: f64,
    },

    #[error("configuration error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. } | Error::Config { .. } => 2,
            Error::Integration { .. } | Error::SingularDenominator { .. } => 3,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
