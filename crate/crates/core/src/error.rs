use thiserror::Error;

/// Errors raised by constructors and computations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QkError {
    #[error("size cap exceeded: {what} needs {requested} matrix entries, cap is {cap}")]
    SizeCap {
        what: String,
        requested: u128,
        cap: usize,
    },
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("degree {degree} out of range (valid: {valid})")]
    DegreeOutOfRange { degree: usize, valid: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("group axiom violated: {0}")]
    GroupAxiom(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("boundary composite is nonzero: {0}")]
    NotAComplex(String),
    #[error("simplicial identity violated: {0}")]
    SimplicialIdentity(String),
    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),
    #[error("unsupported field: {0}")]
    Field(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("hom-set is infinite: {0}; pass finite coefficients or work over a finite field")]
    InfiniteHomSet(String),
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),
}

impl QkError {
    pub fn is_size_cap(&self) -> bool {
        matches!(self, QkError::SizeCap { .. } | QkError::Guard(_))
    }
}

pub type Result<T> = std::result::Result<T, QkError>;
