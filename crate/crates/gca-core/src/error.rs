use thiserror::Error;

use crate::coeff::Field;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GcaError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("generator `{name}` has positive degree {degree}")]
    PositiveDegree { name: String, degree: i32 },
    #[error("elements belong to different algebras")]
    MixedAlgebras,
    #[error("degree mismatch for `{name}`: expected {expected}, found {found}")]
    DegreeMismatch { name: String, expected: i32, found: String },
    #[error("inhomogeneous element {0}")]
    Inhomogeneous(String),
    #[error("`{0}` is not invertible in this algebra")]
    NotInvertible(String),
    #[error("unit `{0}` must be a nonconstant polynomial in degree-0 generators")]
    BadUnit(String),
    #[error("coefficient {0} lies outside the field {1}")]
    FieldMismatch(String, Field),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("invalid morphism: {0}")]
    Morphism(String),
}

pub type Result<T> = std::result::Result<T, GcaError>;
