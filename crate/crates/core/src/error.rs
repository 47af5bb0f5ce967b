use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    /// `pos` is a byte offset for expressions and a line number for fixture files.
    Parse { pos: usize, msg: String },
    #[error("index outside the evaluated domain: {0}")]
    OutOfDomain(String),
    #[error("invalid scale: value {value} at index {index} is below 1")]
    InvalidScale { index: String, value: String },
    #[error("arithmetic: {0}")]
    Arithmetic(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("not a bijection: {0}")]
    NotBijective(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("power iteration did not converge after {iterations} iterations (block {block})")]
    NoConvergence { block: u64, iterations: usize },
    #[error("ratio is not summable on the prefix: {0}")]
    NotSummable(String),
    #[error("chain construction stalled at step {step}: no m <= {max_m} works")]
    ChainStalled { step: usize, max_m: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
