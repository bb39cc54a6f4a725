use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid tensor shape: {0}")]
    InvalidShape(String),
    #[error("multi-index component {axis} = {index} out of range for dimension {dim}")]
    IndexOutOfRange { axis: usize, index: usize, dim: usize },
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("factor {0} of the tensor map is singular")]
    SingularFactor(usize),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid factor permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("vector is not decomposable (singular value ratio {ratio:e})")]
    NotDecomposable { ratio: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("degenerate body: {0}")]
    DegenerateBody(String),
    #[error("dimension too large: {0}")]
    DimensionTooLarge(String),
    #[error("body is not polytopal in a supported representation: {0}")]
    NotPolytopal(String),
    #[error("invalid exponent p = {0}")]
    InvalidP(f64),
    #[error("section body {factor} is degenerate (unbounded or empty interior)")]
    DegenerateSection { factor: usize },
    #[error("verdict changes between anchors; tolerance is too close to a boundary")]
    NumericallyAmbiguous,
    #[error("section families are not proportional: {0}")]
    NotProportional(String),
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("matrix is not a Kronecker product (relative residual {residual:e})")]
    NotKronecker { residual: f64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },
    #[error("closure property failed: {0}")]
    ClosureFailed(String),
}
