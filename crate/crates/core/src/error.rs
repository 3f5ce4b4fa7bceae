use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclotomic modulus must be positive")]
    ZeroModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not a sign (+1 or -1): {0}")]
    NotASign(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {p}^{degree} exceeds the supported size")]
    FieldTooLarge { p: u64, degree: u32 },
    #[error("degree {sub} does not divide degree {sup}")]
    NotSubfield { sub: u32, sup: u32 },
    #[error("element is not in the subfield of degree {0}")]
    NotInSubfield(u32),
    #[error("no solution of x^{exponent} = u in the field of degree {degree}")]
    NoRoot { exponent: u64, degree: u32 },
    #[error("discrete logarithm of zero")]
    LogOfZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("element is not in the subgroup H: {0}")]
    NotInH(String),
    #[error("element is not in Iw+: {0}")]
    NotInIwahori(String),
    #[error("representation is not conjugate self-dual")]
    NotConjugateSelfDual,
    #[error("invariant pairing space has dimension {0}, expected at most 1")]
    PairingNotUnique(usize),
    #[error("invariant pairing is degenerate")]
    DegeneratePairing,
    #[error("no single parity scalar relates pi(t)^T B and B^T")]
    NoParityScalar,
    #[error("coset bookkeeping failed: {0}")]
    Coset(String),
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
