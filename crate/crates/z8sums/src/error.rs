use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus is zero")]
    ZeroModulus,
    #[error("both arguments are zero")]
    BothZero,
    #[error("arguments are not coprime: gcd has norm {0}")]
    NotCoprime(String),
    #[error("norm {norm} exceeds the bound {bound}")]
    TooLarge { norm: String, bound: String },
    #[error("element is a unit")]
    Unit,
    #[error("element is divisible by 1+ω")]
    EvenRamified,
    #[error("no associate congruent to 1 mod 4 exists")]
    NoNormalizedAssociate,
    #[error("Galois index must be odd, got {0}")]
    GaloisIndex(u32),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
