use thiserror::Error;

/// Errors produced anywhere in the pipeline.
///
/// Every variant maps onto one of three outcome classes (see [`Error::class`]):
/// bad input, a violated geometric hypothesis, or an internal consistency
/// failure.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid character table: {0}")]
    CharacterTable(String),

    #[error("non-integral multiplicity {value} for character {index} (residual {residual:e})")]
    NonIntegral {
        index: usize,
        value: f64,
        residual: f64,
    },

    #[error("cannot halve virtual module: multiplicity {value} of character {index} is odd")]
    OddMultiplicity { index: usize, value: i64 },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("discriminant 4A^3 + 27B^2 vanishes identically")]
    ZeroDiscriminant,

    #[error("invalid Weierstrass data: {0}")]
    InvalidSurface(String),

    #[error("non-minimal Weierstrass model: {}", format_violations(.0))]
    NonMinimal(Vec<MinimalityViolation>),

    #[error("isotrivial family: the j-invariant is constant")]
    Isotrivial,

    #[error("valuation triple ({v_a}, {v_b}, {v_d}) matches no Kodaira type")]
    UnclassifiedFiber {
        v_a: String,
        v_b: String,
        v_d: String,
    },

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("branch point {0} cannot be matched against the discriminant clusters")]
    UnmatchedBranch(String),

    #[error("Tjurina class unavailable: a branch point carries a multiplicative fiber")]
    TjurinaUnavailable,

    #[error("invalid bundle: {0}")]
    InvalidBundle(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

/// One offending place reported by the minimality check.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MinimalityViolation {
    pub place: String,
    pub v_a: String,
    pub v_b: String,
    /// Smallest admissible `n` when the violation sits at infinity.
    pub suggested_n: Option<u32>,
}

fn format_violations(v: &[MinimalityViolation]) -> String {
    v.iter()
        .map(|x| {
            let mut s = format!("{} (vA={}, vB={})", x.place, x.v_a, x.v_b);
            if let Some(n) = x.suggested_n {
                s.push_str(&format!(", try n={n}"));
            }
            s
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Coarse classification used for CLI exit codes and FFI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Hypothesis,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NonMinimal(_)
            | Error::Isotrivial
            | Error::Hypothesis(_)
            | Error::TjurinaUnavailable
            | Error::UnmatchedBranch(_) => ErrorClass::Hypothesis,
            Error::Internal(_) | Error::UnclassifiedFiber { .. } => ErrorClass::Internal,
            _ => ErrorClass::Input,
        }
    }

    /// Process exit code: 2 config/input, 3 hypothesis, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Input => 2,
            ErrorClass::Hypothesis => 3,
            ErrorClass::Internal => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
