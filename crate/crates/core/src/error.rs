use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("edge list contains no edges")]
    EmptyDocument,

    #[error("invalid edge weight {weight} between {u} and {v}: weights must be finite and nonnegative")]
    InvalidWeight { u: usize, v: usize, weight: f64 },

    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("vertex index {index} out of range for a graph with {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("vertex set is empty")]
    EmptySet,

    #[error("sets overlap at vertex {0}")]
    Overlap(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("graph has zero volume (no edges); the null model is undefined")]
    ZeroVolume,

    #[error("graph is disconnected ({components} components); spectral analysis assumes a connected graph")]
    Disconnected { components: usize },

    #[error("graph is not regular: {0}")]
    NotRegular(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigensolver did not converge for a {n}x{n} matrix within {max_iter} iterations (max |entry| {max_abs:e})")]
    NoConvergence { n: usize, max_iter: usize, max_abs: f64 },

    #[error("eigenpair certificate failed: residual {residual:e} exceeds {bound:e}")]
    Certificate { residual: f64, bound: f64 },

    #[error("vector is zero")]
    ZeroVector,

    #[error("eigenvector is constant; no cut found")]
    NoCut,

    #[error("graph has {n} vertices, above the oracle cap of {cap}")]
    OracleCap { n: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("eigenvector index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
