use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bundle rank must be at least 3, got {0}")]
    RankTooSmall(i64),

    #[error("invalid complete intersection: {0}")]
    InvalidSpec(String),

    #[error("invalid class: {0}")]
    InvalidClass(String),

    #[error("classes live over different projective bundles")]
    AmbientMismatch,

    #[error("expected a class of codimension {expected}, got codimension {found}")]
    CodimMismatch { expected: i64, found: i64 },

    #[error("codimension {codim} out of range 1..={max}")]
    CodimOutOfRange { codim: i64, max: i64 },

    #[error("binomial lower index must be non-negative, got {0}")]
    NegativeBinomialIndex(i64),

    #[error("{count} factors exceed the subset-enumeration limit of {limit}")]
    TooManyFactors { count: usize, limit: usize },

    #[error("twist h = {h} outside the admissible range (h >= {min})")]
    TwistOutOfRange { h: i64, min: i64 },

    #[error("pushforward degree is not an integer: {0}")]
    NonIntegralDegree(String),

    #[error("leading coefficient of the margin polynomial vanishes; no asymptotic threshold")]
    DegenerateLeadingCoefficient,

    #[error("certified threshold {0} does not fit in a machine integer")]
    ThresholdOverflow(String),

    #[error("invalid Harder-Narasimhan data: {0}")]
    InvalidHarderNarasimhan(String),

    #[error("invalid weighted filtration: {0}")]
    InvalidFiltration(String),

    #[error("invalid contact datum: {0}")]
    InvalidContact(String),

    #[error("improper intersection: dimensions {y} + {z} - {n} < 0")]
    ImproperIntersection { y: i64, z: i64, n: i64 },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// True for errors that signal a mathematical inconsistency rather than bad input.
    pub fn is_inconsistency(&self) -> bool {
        matches!(self, Error::Inconsistency(_) | Error::NonIntegralDegree(_))
    }
}
