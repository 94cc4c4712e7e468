use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("horizon exceeded: {context} needs {requested} letters, cap is {cap}")]
    HorizonExceeded {
        requested: usize,
        cap: usize,
        context: String,
    },

    #[error("empty range [{i}, {j}]")]
    EmptyRange { i: usize, j: usize },

    #[error("undefined input: {0}")]
    UndefinedInput(String),

    #[error("insufficient data: need {need} letters, have {have}")]
    InsufficientData { need: usize, have: usize },

    #[error("invalid letter {0}: alphabet is {{0,1}}")]
    InvalidLetter(u8),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("parse error at column {position}: {reason}")]
    Parse { position: usize, reason: String },

    #[error("shape error: {k} does not divide word length {len}")]
    Shape { len: usize, k: usize },

    #[error("cap exceeded: no block length up to {largest_tried} gives a {k}-anti-power")]
    CapExceeded { k: usize, largest_tried: usize },

    #[error("unsupported class: {0}")]
    UnsupportedClass(String),

    #[error("classification inconsistency: {0}")]
    ClassificationInconsistency(String),

    #[error("factor {factor} was enumerated but not found in a prefix of length {scanned}")]
    UnconfirmedFactor { factor: String, scanned: usize },

    /// A construction produced something its theorem forbids. Always an
    /// implementation bug; `dump` carries the full frame as JSON.
    #[error("theorem violation: {reason}\n{dump}")]
    TheoremViolation { reason: String, dump: String },
}

impl Error {
    /// Process exit status used by the CLI and the C ABI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::HorizonExceeded { .. } => 2,
            Error::CapExceeded { .. } => 3,
            Error::UnsupportedClass(_)
            | Error::ClassificationInconsistency(_)
            | Error::UnconfirmedFactor { .. } => 4,
            Error::TheoremViolation { .. } => 5,
            _ => 1,
        }
    }

    pub(crate) fn horizon(requested: usize, cap: usize, context: impl Into<String>) -> Self {
        Error::HorizonExceeded {
            requested,
            cap,
            context: context.into(),
        }
    }
}
