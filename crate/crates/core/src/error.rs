use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at parameter point: denominator {denominator} vanishes")]
    PoleAtPoint { denominator: String },
    #[error("parameter `{0}` has no assigned value")]
    MissingParameter(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("sector operation in an algebra without lattice sectors")]
    SectorMismatch,
    #[error("state lies in a lattice sector not handled by this path")]
    UnsupportedSector,
    #[error("graded component is infinite-dimensional (even generator `{0}` of weight 0)")]
    InfiniteDimensional(String),
    #[error("invalid Lie algebra data: {0}")]
    InvalidLieData(String),
    #[error("invalid algebra definition: {0}")]
    InvalidAlgebra(String),
    #[error("coordinate change has a non-invertible linear term")]
    NonInvertibleLinearTerm,
    #[error("state is not primary: L_{mode} does not annihilate it")]
    NotPrimary { mode: i64 },
    #[error("fields are not local up to degree {0}")]
    NotLocalUpTo(i64),
    #[error("algebra has no conformal vector")]
    NotConformal,
    #[error("truncation orders differ ({0} vs {1})")]
    TruncationMismatch(usize, usize),
    #[error("non-integral conformal degree {0} where an integral one is required")]
    NonIntegralDegree(String),
    #[error("{0}")]
    Unsupported(String),
}
