use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Block limits or variance split samples do not exist for this break.
    #[error("degenerate split: {0}")]
    DegenerateSplit(String),

    /// All multipliers vanished, so the bootstrap scale `ŝ_h` is zero.
    #[error("degenerate multiplier draw: {0}")]
    DegenerateMultiplier(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("component {index} ({label}): {source}")]
    Component {
        index: usize,
        label: String,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateSplit(msg.into())
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }

    /// Attach the component index and label to an error raised while
    /// processing one column.
    pub fn in_component(self, index: usize, label: &str) -> Self {
        Error::Component {
            index,
            label: label.to_string(),
            source: Box::new(self),
        }
    }

    /// Stable machine-readable name of the innermost variant.
    pub fn kind(&self) -> &'static str {
        match self.root() {
            Error::InvalidInput(_) => "invalid_input",
            Error::DegenerateSplit(_) => "degenerate_split",
            Error::DegenerateMultiplier(_) => "degenerate_multiplier",
            Error::Config(_) => "config",
            Error::Parse(_) => "parse",
            Error::Io { .. } => "io",
            Error::Component { .. } => unreachable!("root strips component wrappers"),
        }
    }

    /// The innermost error, with component wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Component { source, .. } => source.root(),
            other => other,
        }
    }
}
