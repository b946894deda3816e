use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("unsupported parameters (n, k) = ({n}, {k}): {reason}")]
    Unsupported { n: usize, k: usize, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("under-truncation: {what} needs max degree >= {required}, got {actual}")]
    UnderTruncation {
        what: String,
        required: usize,
        actual: usize,
    },

    #[error("vector has support in degree {degree}, outside the operator domain")]
    Truncation { degree: usize },

    #[error("operators live on different graded bases")]
    BasisMismatch,

    #[error("search budget exceeded: colength {requested} > budget {budget}")]
    BudgetExceeded { requested: usize, budget: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn not_coprime(n: usize, k: usize) -> Self {
        Error::Unsupported {
            n,
            k,
            reason: "gcd(n, k) != 1, torus fixed points are not isolated".into(),
        }
    }
}
