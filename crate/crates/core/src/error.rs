use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// Domain violations (bad alternation, dimension mismatches, boundary letters
/// in interior positions) are separated from arithmetic overflow, which is
/// always reported rather than wrapped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate arithmetic overflowed")]
    Overflow,

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("interior letter must be strictly positive in lex order")]
    NonPositiveLetter,

    #[error("adjacent letters must come from different copies")]
    AlternationViolation,

    #[error("boundary vector is malformed: {0}")]
    BadBoundaryVector(&'static str),

    #[error("boundary letters may only terminate a word")]
    BoundaryLetterPlacement,

    #[error("period of an eventually periodic word must be nonempty")]
    EmptyPeriod,

    #[error("cannot build a groupoid point: the shift relation does not hold")]
    NotShiftEquivalent,

    #[error("element is not homogeneous")]
    NotHomogeneous,

    #[error("operand must be supported in grade zero")]
    NotGradeZero,

    #[error("matrix unit generators must satisfy l(p) = l(q)")]
    UnequalLengths,

    #[error("generator list must be nonempty")]
    NoGenerators,

    #[error("partition refinement exceeded the internal bound")]
    RefinementOverflow,

    #[error("matrix unit system failed verification")]
    UnverifiedSystem,

    #[error("small generator set is not contained in the large one")]
    NotNested,

    #[error("cannot express a unit in the refined system")]
    ExpressionFailure,

    #[error("the two boundary points coincide")]
    EqualPoints,

    #[error("the set is empty")]
    EmptySet,

    #[error("character exponent must be nonnegative")]
    NegativeExponent,

    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
}

impl Error {
    pub fn parse(at: usize, msg: impl Into<String>) -> Self {
        Error::Parse { at, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
