use thiserror::Error;

use crate::exact::Integer;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Reasons a splitting tuple `(d, k, lp, l)` is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("torsion order d = {d} must be at least 2")]
    DegreeTooSmall { d: u64 },
    #[error("multiplier k = {k} must lie in 1..={max}", max = .d.saturating_sub(1))]
    KOutOfRange { k: u64, d: u64 },
    #[error("gcd(k, d) = gcd({k}, {d}) = {gcd}, expected 1")]
    NotCoprime { k: u64, d: u64, gcd: u64 },
    #[error("length {which} must be positive")]
    NonPositiveLength { which: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("unsupported matrix shape {rows}x{cols}")]
    UnsupportedShape { rows: usize, cols: usize },
    #[error("unsupported rank {0}, only ranks 1 and 2 are handled")]
    UnsupportedRank(usize),
    #[error("pairing is degenerate")]
    DegeneratePairing,
    #[error("not a polarization: {0}")]
    NotPolarization(&'static str),
    #[error("lattice maps do not respect the pairings")]
    IncompatibleMorphism,
    #[error("morphism is not an isogeny")]
    NotIsogeny,
    #[error("image of the source polarization is not contained in the image of f#")]
    ImageConditionViolated,
    #[error("polarization of type {0:?} is not principal")]
    NotPrincipal(alloc::vec::Vec<Integer>),
    #[error("adjoint has non-integral entries")]
    NonIntegralAdjoint,
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(&'static str),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form is not symmetric")]
    NotSymmetric,
    #[error("off-diagonal entry q12 is positive")]
    PositiveQ12,
    #[error("reduction did not finish within {cap} steps")]
    IterationCapExceeded { cap: usize },
    #[error("form does not lie in the Selling cone")]
    NotInSigma,
    #[error("edge lengths must be positive")]
    NonPositiveLength,
    #[error("k = {k} does not match the required value for d = {d}")]
    WrongK { d: u64, k: u64 },
    #[error("cover slope is not an integer")]
    NonIntegralSlope,
    #[error("fan walk exceeded {cap} cones")]
    ConeCapExceeded { cap: usize },
    #[error("sample point lies on a cone boundary")]
    DegenerateSample,
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularMatrix => "SingularMatrix",
            Error::UnsupportedShape { .. } => "UnsupportedShape",
            Error::UnsupportedRank(_) => "UnsupportedRank",
            Error::DegeneratePairing => "DegeneratePairing",
            Error::NotPolarization(_) => "NotPolarization",
            Error::IncompatibleMorphism => "IncompatibleMorphism",
            Error::NotIsogeny => "NotIsogeny",
            Error::ImageConditionViolated => "ImageConditionViolated",
            Error::NotPrincipal(_) => "NotPrincipal",
            Error::NonIntegralAdjoint => "NonIntegralAdjoint",
            Error::Validation(v) => match v {
                ValidationError::DegreeTooSmall { .. } => "DegreeTooSmall",
                ValidationError::KOutOfRange { .. } => "KOutOfRange",
                ValidationError::NotCoprime { .. } => "NotCoprime",
                ValidationError::NonPositiveLength { .. } => "NonPositiveLength",
            },
            Error::InternalInconsistency(_) => "InternalInconsistency",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::NotSymmetric => "NotSymmetric",
            Error::PositiveQ12 => "PositiveQ12",
            Error::IterationCapExceeded { .. } => "IterationCapExceeded",
            Error::NotInSigma => "NotInSigma",
            Error::NonPositiveLength => "NonPositiveLength",
            Error::WrongK { .. } => "WrongK",
            Error::NonIntegralSlope => "NonIntegralSlope",
            Error::ConeCapExceeded { .. } => "ConeCapExceeded",
            Error::DegenerateSample => "DegenerateSample",
        }
    }
}
