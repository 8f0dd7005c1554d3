use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("composite dimension {requested} exceeds the configured cap {cap}")]
    CapacityExceeded { requested: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invariant `{invariant}` violated: {detail}")]
    Validation {
        invariant: &'static str,
        detail: String,
    },

    #[error("argument outside its domain: {0}")]
    Domain(String),

    #[error("enumeration of {count} items exceeds the guard {guard}")]
    EnumerationGuard { count: f64, guard: f64 },

    #[error("typical set is empty ({0})")]
    EmptyTypicalSet(String),

    #[error("sample budget exhausted: partial net of {size} members reaches covering radius {radius}")]
    PartialNet { size: usize, radius: f64 },

    #[error("word is not typical: {0}")]
    NonTypicalWord(String),

    #[error("layout mismatch: {0}")]
    Layout(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Validation {
            invariant,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
