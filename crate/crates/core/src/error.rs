use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Domain and solver errors raised by the estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("assignment probability must lie strictly between 0 and 1, got {0}")]
    InvalidProbability(f64),

    #[error("free variable x{index} = {value} lies outside [0, {upper}]")]
    FreeVariableOutOfBounds {
        index: usize,
        value: u64,
        upper: u64,
    },

    #[error("structural zero violated: cell ({row}, {col}) holds {value} but must be 0")]
    StructuralZero { row: usize, col: usize, value: u64 },

    #[error("the {0} arm is empty; the reduced form is undefined")]
    EmptyArm(&'static str),

    #[error("binomial trial count must be nonnegative, got {0}")]
    NegativeTrials(i64),

    #[error("type counts total {types} but group counts total {groups}")]
    TotalMismatch { types: u64, groups: u64 },

    #[error("{what} has {size} candidates, above the exact enumeration cap of {cap}; {hint}")]
    EnumerationCap {
        what: &'static str,
        size: u128,
        cap: u128,
        hint: &'static str,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
