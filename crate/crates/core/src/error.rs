use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring exponent s={0} (supported: 1..=8)")]
    InvalidRing(u32),

    #[error("coordinate {value} out of range for Z_{modulus}")]
    CoordinateOutOfRange { value: i64, modulus: u32 },

    #[error("{metric} weight is only defined for Z4 (and Z2), got Z_{modulus}")]
    MetricUnsupported { metric: &'static str, modulus: u32 },

    #[error("length or ring mismatch: {0}")]
    Mismatch(String),

    #[error("operation requires Z4, got Z_{0}")]
    RequiresZ4(u32),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
