use thiserror::Error;

/// Errors raised by the core operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("code {code} out of range for depth {depth} (radix {radix})")]
    CodeOutOfRange { code: u64, depth: usize, radix: u64 },

    #[error("operands belong to different odometer systems")]
    SystemMismatch,

    #[error("clopen set is empty")]
    EmptySet,

    #[error("table is not a permutation: codes {first} and {second} both map to {image}")]
    NotBijective { first: u64, second: u64, image: u64 },

    #[error("element is not positive")]
    NotPositive,

    #[error("element is not periodic on the requested part")]
    NotPeriodic,

    #[error("refinement exceeded the depth cap of {cap} levels")]
    DepthOverflow { cap: usize },

    #[error("depth {depth} is too large to tabulate")]
    TooLarge { depth: usize },

    #[error("tail base sequences do not agree")]
    TailMismatch,

    #[error("cannot separate the welding sets from their translates within the depth cap")]
    OverlapError,

    #[error("component element cannot be written in powers of the welded map")]
    NotInFullGroup,

    #[error("invalid odometer system: {0}")]
    InvalidSystem(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            column,
            message: message.into(),
        }
    }

    pub(crate) fn invariant(message: impl Into<String>) -> Self {
        Error::Invariant(message.into())
    }

    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
