use thiserror::Error;

use crate::surface::Move;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is too small (p must be at least 5)")]
    PrimeTooSmall(u64),
    #[error("prime {0} exceeds the supported range")]
    PrimeTooLarge(u64),
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("point is not on the surface")]
    OffSurface,
    #[error("move {0:?} is not an automorphism for these parameters")]
    UnavailableMove(Move),
    #[error("kappa is undefined at the parabolic values ±2")]
    ParabolicValue,
    #[error("point does not lie on the requested slice")]
    OffSlice,
    #[error("parameters are not degenerate")]
    NotDegenerate,
    #[error("parameters are not an equal triple")]
    NotEqualTriple,
    #[error("both obstruction invariants vanish (triple fixed point)")]
    BothZero,
    #[error("prime {0} exceeds the enumeration cap of {1}")]
    EnumerationCap(u64, u64),
    #[error("axis must be 1, 2 or 3, got {0}")]
    BadAxis(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
