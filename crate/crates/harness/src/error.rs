use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {field}: {message}")]
    Validation { field: String, message: String },

    #[error("target '{0}' has no reference sampler")]
    MissingReferenceSampler(String),

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error(transparent)]
    Sampler(#[from] geomc::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Runtime(String),
}

impl HarnessError {
    pub fn validation(field: &str, message: impl Into<String>) -> Self {
        HarnessError::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn schema(path: impl std::fmt::Display, message: impl Into<String>) -> Self {
        HarnessError::Schema {
            path: path.to_string(),
            message: message.into(),
        }
    }

    /// Process exit status: 2 for bad input, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Validation { .. } | HarnessError::MissingReferenceSampler(_) | HarnessError::Schema { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
