use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("pole at point ({0})")]
    Pole(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("unknown identifier '{name}' at column {column}")]
    UnknownIdentifier { name: String, column: usize },

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("tensors live on different charts")]
    ChartMismatch,

    #[error("expected {expected} tensor: {detail}")]
    Symmetry { expected: &'static str, detail: String },

    #[error("invalid index or slot: {0}")]
    InvalidIndex(String),

    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),

    #[error("{path}:{line}: {message}")]
    Manifest { path: String, line: usize, message: String },

    #[error("{0} requires a one-form eta")]
    MissingEta(&'static str),

    #[error("unknown tensor '{0}'")]
    UnknownTensor(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
