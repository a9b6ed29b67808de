use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("alphabet mismatch: rank {left} vs rank {right}")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("alphabet rank must be between 1 and 26, got {0}")]
    InvalidRank(usize),
    #[error("cannot parse word {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("empty word where a nonempty word is required")]
    EmptyWord,
    #[error("relator {index} is not cyclically reduced")]
    NotCyclicallyReduced { index: usize },
    #[error("relators {first} and {second} are equal up to cyclic shift and inversion")]
    DuplicateRelator { first: usize, second: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("subgroup {index} has finite index {finite_index}; only infinite-index subgroups are accepted")]
    FiniteIndexSubgroup { index: usize, finite_index: usize },
    #[error("census of {census} tuples exceeds the exhaustive budget of {budget}")]
    BudgetExceeded { census: u128, budget: u128 },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("path violates the criterion hypotheses: {0}")]
    HypothesisViolation(String),
    #[error("distortion bound violated at n = {n}")]
    BoundViolated { n: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
