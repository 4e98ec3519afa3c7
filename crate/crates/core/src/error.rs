use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid truncation: prec {prec} is below exponent {exponent}")]
    InvalidTruncation { exponent: i64, prec: i64 },

    #[error("coefficient of q^{exponent} is unknown (series valid through q^{prec})")]
    UnknownCoefficient { exponent: i64, prec: i64 },

    #[error("series is not invertible over the integers: leading coefficient {0} is not a unit")]
    NonUnit(String),

    #[error("series is zero to the available precision and cannot be inverted")]
    NonInvertible,

    #[error("{what} = {value} is out of range (limit {limit})")]
    OutOfRange { what: &'static str, value: i64, limit: i64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precision budget {required} exceeds the allowed cap {cap}")]
    BudgetExceeded { required: i64, cap: i64 },

    #[error("precision {given} is below the required {required}")]
    InsufficientPrecision { required: i64, given: i64 },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("cache file error: {0}")]
    Cache(String),
}
