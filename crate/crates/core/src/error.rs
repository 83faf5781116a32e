use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} in {context}")]
    DimensionMismatch {
        left: String,
        right: String,
        context: &'static str,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("empty matrix: rows and cols must be >= 1")]
    EmptyMatrix,

    #[error("matrix is not unitary: ||M*M - I||_F = {residual:.3e} > {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },

    #[error(
        "eigenvalue clustering is unstable: arc gap {gap:.3e} lies in the ambiguous band \
         [{:.3e}, {:.3e}] around cluster_tol = {cluster_tol:.3e}",
        cluster_tol / 2.0, 2.0 * cluster_tol
    )]
    ClusteringUnstable { gap: f64, cluster_tol: f64 },

    #[error(
        "matrix is not a symmetric unitary: unitary residual {unitary_residual:.3e}, \
         symmetry residual {symmetry_residual:.3e}"
    )]
    NotSymmetricUnitary {
        unitary_residual: f64,
        symmetry_residual: f64,
    },

    #[error(
        "operator is not a conjugation: unitary residual {unitary_residual:.3e}, \
         symmetry residual {symmetry_residual:.3e}"
    )]
    NotConjugation {
        unitary_residual: f64,
        symmetry_residual: f64,
    },

    #[error(
        "block {index} is not a symmetric unitary: unitary residual {unitary_residual:.3e}, \
         symmetry residual {symmetry_residual:.3e}"
    )]
    InvalidBlock {
        index: usize,
        unitary_residual: f64,
        symmetry_residual: f64,
    },

    #[error("block dimensions {given:?} do not match cluster multiplicities {expected:?}")]
    BlockDimsMismatch {
        given: Vec<usize>,
        expected: Vec<usize>,
    },

    #[error(
        "not a member of the conjugation family: off-block-diagonal mass {off_block_mass:.3e}"
    )]
    NotMember { off_block_mass: f64 },

    #[error("cluster index {index} out of range (d = {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("measures live over different cluster sets ({left} vs {right} clusters)")]
    ClusterSetMismatch { left: usize, right: usize },

    #[error("grid function out of range at index {index}: s = {value} not in [0, 1]")]
    RangeError { index: usize, value: f64 },

    #[error(
        "invalid Phi symbol at grid point {grid_index}: unitary residual {unitary_residual:.3e}, \
         symmetry residual {symmetry_residual:.3e}"
    )]
    InvalidPhi {
        grid_index: usize,
        unitary_residual: f64,
        symmetry_residual: f64,
    },

    #[error("bad grid partition: {reason}")]
    BadPartition { reason: String },

    #[error("too many clusters for enumeration: d = {d} exceeds {max}")]
    TooManyClusters { d: usize, max: usize },

    #[error("bad parameters: {reason}")]
    BadParams { reason: String },

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(
        context: &'static str,
        left: impl std::fmt::Display,
        right: impl std::fmt::Display,
    ) -> Self {
        Error::DimensionMismatch {
            left: left.to_string(),
            right: right.to_string(),
            context,
        }
    }
}
