use thiserror::Error;

/// Errors raised across the crate. Field construction and subfield
/// bookkeeping failures dominate; the remaining variants guard the
/// preconditions of individual operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree {0} outside the supported range 2..={max}", max = crate::field::MAX_M)]
    UnsupportedDegree(u32),
    #[error("modulus {modulus:#x} is not primitive of degree {m}")]
    NonPrimitiveModulus { modulus: u32, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{l} does not divide the field degree {m}")]
    BadSubfieldDegree { l: u32, m: u32 },
    #[error("element does not lie in GF(2^{l})")]
    ArgNotInSubfield { l: u32 },
    #[error("shift {tau} outside 0..{period}")]
    ShiftOutOfRange { tau: u64, period: u64 },
    #[error("argument lies in GF(2^k); the V-parametrization is undefined there")]
    DegenerateArg,
    #[error("argument is not a V-form point with the required trace class")]
    NotVFormPoint,
    #[error("r does not satisfy r^(2^nk+1)=1 with r^((2^nk+1)/(2^k+1)) != 1")]
    BadTwistorR,
    #[error("k=1 is the three-valued regime; use the k=1 spectrum instead")]
    DegenerateK1,
    #[error("(2^k+1) does not divide s0 + sum(s_i) for a = {a_hex}")]
    DivisibilityViolation { a_hex: String },
    #[error("decimation {d} shares a factor with 2^(m/2)-1")]
    NonCoprimeDecimation { d: u64 },
    #[error("invalid parameters: {0}")]
    BadParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
