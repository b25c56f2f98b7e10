use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the simulator can report.
///
/// Callers that need to map failures onto process exit codes should use
/// [`Error::is_range`]: range errors are numeric limits hit by otherwise valid
/// input, everything else is a configuration problem.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument {value} is outside the domain ({reason})")]
    Domain {
        function: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{parameter} = {value:e} exceeds the representable range (limit {limit:e})")]
    Range {
        parameter: String,
        value: f64,
        limit: f64,
    },

    #[error("invalid {field} = {value}: {reason}")]
    InvalidParameter {
        field: String,
        value: f64,
        reason: String,
    },

    #[error("model supports no bound level (lambda*q - 1/2 = {excess} must be > 0)")]
    NoBoundLevel { excess: f64 },

    #[error("level n = {n} exceeds n_max = {n_max}")]
    LevelOutOfBounds { n: usize, n_max: usize },

    #[error("finite-difference setup rejected: {reason}")]
    FiniteDifference {
        reason: String,
        boundary_amplitude: Option<f64>,
    },

    #[error("{parameter}: {source}")]
    Endpoint {
        parameter: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("{0}")]
    Incompatible(String),

    #[error("configuration error at {path}: {message}")]
    Config { path: String, message: String },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, value: f64, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            value,
            reason: reason.into(),
        }
    }

    pub(crate) fn range(parameter: impl Into<String>, value: f64, limit: f64) -> Self {
        Error::Range {
            parameter: parameter.into(),
            value,
            limit,
        }
    }

    /// Attach the name of the parameter whose evaluation failed.
    pub(crate) fn named(self, parameter: &'static str) -> Self {
        match self {
            Error::Range { parameter: inner, value, limit } => Error::Range {
                parameter: format!("{parameter} ({inner})"),
                value,
                limit,
            },
            other => Error::Endpoint {
                parameter,
                source: Box::new(other),
            },
        }
    }

    /// True when the failure is a numeric range limit rather than bad input.
    pub fn is_range(&self) -> bool {
        match self {
            Error::Range { .. } => true,
            Error::Endpoint { source, .. } => source.is_range(),
            _ => false,
        }
    }
}
