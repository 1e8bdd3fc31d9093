use num_bigint::BigUint;
use thiserror::Error;

/// Library-wide error type. Every failure is a domain error with enough
/// context to point at the offending value; nothing in this crate panics on
/// bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no factorization")]
    ZeroFactorization,

    #[error("{0} is not prime")]
    NotPrime(BigUint),

    #[error("scalar must be nonzero")]
    ZeroScalar,

    #[error("transformation matrix is singular")]
    SingularTransform,

    #[error("binary form needs at least two coefficients (degree >= 1)")]
    FormTooShort,

    #[error("the zero form has no {0}")]
    ZeroForm(&'static str),

    #[error("form has non-integer coefficients where integers are required")]
    NonIntegralForm,

    #[error("operation needs a form of degree >= {min}, got degree {got}")]
    DegreeTooSmall { min: usize, got: usize },

    #[error("this invariant tuple is only defined for sextics, got degree {0}")]
    NotASextic(usize),

    #[error("no invariant system is shipped for degree {0}")]
    UnsupportedDegree(usize),

    #[error("weight system must be a nonempty list of positive integers")]
    BadWeights,

    #[error("point has {coords} coordinates but the weight system has {weights}")]
    WeightMismatch { coords: usize, weights: usize },

    #[error("all coordinates are zero")]
    ZeroPoint,

    #[error("point has non-integer coordinates where integers are required")]
    NonIntegralPoint,

    #[error("scaling by p^e with p = {prime}: exponent e*q = {exponent} is not an integer at coordinate {index}")]
    FractionalStarExponent {
        prime: BigUint,
        exponent: String,
        index: usize,
    },

    #[error("reduction step {step} is incompatible with weight {weight}: step * weight is not an integer")]
    IncompatibleStep { step: String, weight: u32 },

    #[error("superelliptic exponent m must be >= 2, got {0}")]
    ExponentTooSmall(u32),

    #[error("form is inseparable (discriminant vanishes)")]
    InseparableForm,

    #[error("twisted model has a non-integral moduli point; clear the twist scalar before reducing")]
    NonIntegralModuliPoint,

    #[error("Weierstrass equation is singular (discriminant vanishes)")]
    SingularWeierstrass,

    #[error("c4 and c6 are both zero; no scaling candidates exist")]
    NoScalingCandidates,
}

pub type Result<T> = std::result::Result<T, Error>;
