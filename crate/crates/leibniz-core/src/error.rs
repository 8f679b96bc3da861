use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Rank decisions over polynomial entries are not attempted; instantiate
    /// the parameters first.
    #[error("operation requires rational entries; found polynomial entries")]
    PolynomialEntries,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("basis-change matrix is singular")]
    SingularMap,

    #[error("subspace is not invariant under the given right multiplication")]
    NotInvariant,

    #[error("unknown derivation pattern `{0}`")]
    UnknownPattern(String),

    #[error("complement size {got} exceeds the cap {cap} for this nilradical")]
    CapExceeded { got: usize, cap: usize },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("dimension {n} out of range for family {family}: {constraint}")]
    BadDim {
        family: String,
        n: usize,
        constraint: String,
    },

    #[error("parameter `{param}` violates constraint: {constraint}")]
    BadParam { param: String, constraint: String },

    #[error("cyclic substitution through `{0}`")]
    CyclicSubstitution(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: usize },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
