use crate::manifold::ManifoldKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("manifold kind mismatch: expected {expected}, found {found}")]
    KindMismatch {
        expected: ManifoldKind,
        found: ManifoldKind,
    },

    #[error("tangent vector is not attached to the given base point")]
    BaseMismatch,

    #[error("point lies on or near the cut locus (distance {distance:.6} rad)")]
    CutLocus { distance: f64 },

    #[error("mean iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid tangent vector: {0}")]
    InvalidTangent(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid mask: {0}")]
    InvalidMask(String),

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("scheme variant not applicable: {0}")]
    UnsupportedVariant(String),

    #[error("polynomial division left a nonzero remainder (max |r| = {max_abs:e}); mask is not affine invariant")]
    NonZeroRemainder { max_abs: f64 },

    #[error("sequence length {len} is not divisible by {divisor}")]
    LengthNotDivisible { len: usize, divisor: usize },

    #[error("mask is not interpolatory")]
    MaskNotInterpolatory,

    #[error("matrix is singular or numerically rank deficient")]
    SingularMatrix,

    #[error("matrix has negative determinant; no rotation polar factor")]
    NegativeDeterminant,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("at index {index}: {source}")]
    AtIndex {
        index: i64,
        #[source]
        source: Box<Error>,
    },

    #[error("in subdivision round {round}: {source}")]
    AtRound {
        round: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("at pyramid level {level}: {source}")]
    AtLevel {
        level: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_index(self, index: i64) -> Error {
        Error::AtIndex {
            index,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_round(self, round: usize) -> Error {
        Error::AtRound {
            round,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_level(self, level: usize) -> Error {
        Error::AtLevel {
            level,
            source: Box::new(self),
        }
    }

    /// The innermost error, with index/round/level context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtIndex { source, .. } | Error::AtRound { source, .. } | Error::AtLevel { source, .. } => {
                source.root()
            }
            other => other,
        }
    }

    /// True for failures of the numerics (cut locus, divergent iteration)
    /// as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self.root(),
            Error::CutLocus { .. } | Error::NoConvergence { .. } | Error::SingularMatrix | Error::NegativeDeterminant
        )
    }
}
