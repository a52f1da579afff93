use thiserror::Error;

use crate::families::Family;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("group closure has {found} elements, expected {expected}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("labels {first} and {second} share the vector {vector}")]
    VectorCollision { first: String, second: String, vector: String },

    #[error("family {family} is not defined for t = {t}")]
    InvalidParameter { family: Family, t: usize },

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("row is not a circulant complex Hadamard matrix")]
    NotCchm,

    #[error("coset {coset} of the Hadamard subset is malformed: {detail}")]
    MalformedCosetHit { coset: usize, detail: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
