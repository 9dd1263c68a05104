use thiserror::Error;

/// Errors raised by every module of the toolkit.
///
/// Each variant records the module it came from and the query that failed so
/// the command line front end can report both.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("[{module}] argument error: {message}")]
    Argument { module: &'static str, message: String },

    #[error("[{module}] unsupported: {message}")]
    Feature { module: &'static str, message: String },

    #[error("[{module}] precondition failed: {message}")]
    Precondition { module: &'static str, message: String },

    #[error("[{module}] construction failed: {message}")]
    Construction { module: &'static str, message: String },

    #[error("[{module}] resource cap exceeded: {message}")]
    Resource { module: &'static str, message: String },

    #[error("[{module}] precision exhausted: {message}")]
    Precision { module: &'static str, message: String },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("[{module}] internal self-check failed: {message}")]
    Internal { module: &'static str, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn argument(module: &'static str, message: impl Into<String>) -> Self {
        Error::Argument { module, message: message.into() }
    }

    pub fn feature(module: &'static str, message: impl Into<String>) -> Self {
        Error::Feature { module, message: message.into() }
    }

    pub fn precondition(module: &'static str, message: impl Into<String>) -> Self {
        Error::Precondition { module, message: message.into() }
    }

    pub fn construction(module: &'static str, message: impl Into<String>) -> Self {
        Error::Construction { module, message: message.into() }
    }

    pub fn resource(module: &'static str, message: impl Into<String>) -> Self {
        Error::Resource { module, message: message.into() }
    }

    pub fn precision(module: &'static str, message: impl Into<String>) -> Self {
        Error::Precision { module, message: message.into() }
    }

    pub fn internal(module: &'static str, message: impl Into<String>) -> Self {
        Error::Internal { module, message: message.into() }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument { .. }
            | Error::Feature { .. }
            | Error::Precondition { .. }
            | Error::Construction { .. }
            | Error::Parse { .. } => 2,
            Error::Resource { .. } => 3,
            Error::Precision { .. } => 4,
            Error::Internal { .. } => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Argument { .. } => "argument",
            Error::Feature { .. } => "unsupported",
            Error::Precondition { .. } => "precondition",
            Error::Construction { .. } => "construction",
            Error::Resource { .. } => "resource",
            Error::Precision { .. } => "precision",
            Error::Parse { .. } => "parse",
            Error::Internal { .. } => "internal",
        }
    }

    /// Name of the originating module, `"parser"` for parse errors.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Argument { module, .. }
            | Error::Feature { module, .. }
            | Error::Precondition { module, .. }
            | Error::Construction { module, .. }
            | Error::Resource { module, .. }
            | Error::Precision { module, .. }
            | Error::Internal { module, .. } => module,
            Error::Parse { .. } => "parser",
        }
    }
}
