//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed rational `{0}`")]
    BadRational(String),

    #[error("malformed stream literal: {0}")]
    BadStreamLiteral(String),

    #[error("stream base {0} is negative; bases must be nonnegative rationals")]
    NegativeBase(String),

    #[error("coefficient list has length {got}, expected period {period}")]
    PeriodMismatch { period: usize, got: usize },

    #[error("worldspec parse error at line {line}: {msg}")]
    Worldspec { line: usize, msg: String },

    #[error("malformed schedule literal: {0}")]
    BadSchedule(String),

    #[error("schedule is not a bijection of the positive integers: {witness}")]
    NotBijective { witness: String },

    #[error(
        "birth step {step} does not equal segment duration {duration}; \
         realized per-period utilities need one birth per grid period"
    )]
    NonCommensurableGrid { step: String, duration: String },

    #[error("worlds have different birth schedules: {0}")]
    ScheduleMismatch(String),

    #[error("populations cannot be unified into a common universe: {0}")]
    NoCommonUniverse(String),

    #[error("oracle discrepancy: {0}")]
    Discrepancy(String),

    #[error("witness not applicable: {0}")]
    NotApplicable(String),

    #[error(
        "schedule composes a non-integer slope {alpha} with base {base}; \
         the image stream leaves the exponential-periodic class"
    )]
    UnrepresentableComposition { alpha: String, base: String },

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
