use thiserror::Error;

use crate::lattice::Signature;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Gram matrix is not symmetric")]
    NotSymmetric,

    #[error("Gram matrix is degenerate")]
    DegenerateForm,

    #[error("group closure exceeded the cap of {0} elements")]
    CapExceeded(usize),

    #[error("generator {0} is not an invertible integer matrix")]
    NotLatticePreserving(usize),

    #[error("group element {0} does not preserve the quadratic form")]
    NotIsometry(usize),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("all generators are zero")]
    DegenerateInput,

    #[error("cone is not simplicial")]
    NotSimplicial,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("invariant subspace of dimension {dim} has signature {signature:?}, expected (1, {})", dim - 1)]
    SignatureAnomaly { dim: usize, signature: Signature },

    #[error("not an algebra automorphism: {0}")]
    NotAutomorphism(String),

    #[error("target is not in the interior of the cone of squares")]
    NotInterior,

    #[error("point is not in the plus cone of the ambient cone")]
    NotInPlusCone,

    #[error("chamber reduction exceeded {0} reflections")]
    IterationCap(usize),

    #[error("precondition failure: {0}")]
    PreconditionFailure(String),

    #[error("PSD factor {0} is moved by the group")]
    PsdOrbitUnsupported(usize),

    #[error("block structure violation: {0}")]
    BlockStructureViolation(String),

    #[error("descended cone degenerates: {0}")]
    DegenerateB(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
