use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("empty tree text")]
    EmptyInput,

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("vertex {vertex} out of range for a tree of size {size}")]
    BadVertex { vertex: usize, size: usize },

    #[error("vertex {0} is the root")]
    RootVertex(usize),

    #[error("n = {n} is below the required minimum {min}")]
    SizeTooSmall { n: i64, min: usize },

    #[error("labeling covers {got} vertices but the tree has {expected}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("duplicate sample point x = {0}")]
    DuplicateSample(i64),

    #[error("polynomial of degree {degree} does not fit a basis anchored at {anchor}")]
    DegreeTooLarge { degree: usize, anchor: usize },

    #[error("basis coefficient {index} = {value} is not an integer")]
    NonInteger { index: usize, value: String },

    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },

    #[error("tree {0} is not in a qualifying class")]
    NotQualifying(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,

    #[error("root iteration did not converge after {0} steps")]
    NoConvergence(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
