use thiserror::Error;

/// Errors produced by the fidelity-metric library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice size L = {0} is not supported (need L >= 2)")]
    LatticeTooSmall(usize),

    #[error("{what} index {index} out of range (0..{len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("L = {l} exceeds the {what} enumeration budget (max L = {max})")]
    BudgetExceeded {
        what: &'static str,
        l: usize,
        max: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration violates the even-parity arrow rule at site {0}")]
    InvalidConfig(usize),

    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("distributions have mismatched lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("distribution is not normalized (sum = {0})")]
    NotNormalized(f64),

    #[error("infidelity {infidelity:e} at step {delta:e} is below the floating-point noise floor")]
    StepTooSmall { delta: f64, infidelity: f64 },

    #[error("fit failed: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
