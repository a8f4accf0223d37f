use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the kernel. All operations are total on
/// their documented domains; these variants cover contract violations and
/// resource limits, not mathematical disagreements (those are reported, not
/// raised).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable x{0} has no assigned value at the evaluation point")]
    MissingAssignment(u32),
    #[error("denominator factor {0} vanishes at the evaluation point")]
    PoleAtPoint(String),
    #[error("a subset factor needs at least one variable index")]
    EmptySubset,
    #[error("variable index {index} out of range for k = {k}")]
    IndexOutOfRange { index: u32, k: u32 },
    #[error("expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("k = {k} exceeds the configured budget {budget}")]
    BudgetExceeded { k: u32, budget: u32 },
    #[error("rejected {0} degenerate sample points without filling the quota")]
    DegeneratePointExhaustion(u64),
    #[error("exponent entries must be positive integers for this operation")]
    NonIntegerExponent,
    #[error("images do not form a permutation of 1..={0}")]
    InvalidPermutation(usize),
    #[error("{0}")]
    Parse(String),
}
