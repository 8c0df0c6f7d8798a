//! Error type shared by every module of the crate.

use thiserror::Error;

/// Why a family fails (or passes) the f-basis test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FBasisReason {
    /// Dimensions add up and the stacked basis matrix is invertible.
    Ok,
    /// The member dimensions do not sum to the ambient dimension.
    DimMismatch,
    /// Dimensions add up but the stacked basis matrix is numerically singular.
    SingularStack,
}

impl std::fmt::Display for FBasisReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FBasisReason::Ok => "ok",
            FBasisReason::DimMismatch => "dim_mismatch",
            FBasisReason::SingularStack => "singular_stack",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum FusionError {
    #[error("all columns are numerically null")]
    ZeroSubspace,

    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("operator is numerically singular or not invertible-verified")]
    SingularOperator,

    #[error("system is not a fusion frame")]
    NotAFrame,

    #[error("system is not an f-basis: {reason}")]
    NotFBasis { reason: FBasisReason },

    #[error("system is not minimal; violating member indices {0:?}")]
    NotMinimal(Vec<usize>),

    #[error("system is not an orthonormal f-system")]
    NotOrthonormalSystem,

    #[error("certificate does not witness a Riesz f-basis")]
    NotRiesz,

    #[error("operator family is not f-biorthogonal for the given subspaces")]
    NotBiorthogonal,

    #[error("member count {members} exceeds the exhaustive-enumeration cap {cap}")]
    TooManyMembers { members: usize, cap: usize },

    #[error("member {index}: dimension {got} differs from required {expected}")]
    DimMismatchPerMember {
        index: usize,
        got: usize,
        expected: usize,
    },

    #[error("weight must be strictly positive, got {0}")]
    NonpositiveWeight(f64),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("malformed file: {0}")]
    MalformedFile(String),

    #[error("internal consistency failure: {0}")]
    InternalCheck(String),
}

pub type Result<T> = std::result::Result<T, FusionError>;
