//! Exact arithmetic in Z[ω₈] and Q(ω₈).

mod cycint;
mod embedding;
pub mod euclid;
pub mod factor;
mod field;
mod modulus;
pub mod residue;
pub mod units;
pub mod zarith;

pub use cycint::CycInt;
pub use embedding::EmbeddingPair;
pub use euclid::{are_coprime, crt, euclid_gcd, inverse_mod, xgcd};
pub use factor::{
    canonical_prime, factor, factor_with_bound, primes_above, primes_up_to_norm, Factorization,
    DEFAULT_FACTOR_BOUND,
};
pub use field::{dist_to_integer, frac, FieldElem};
pub use modulus::Modulus;
pub use residue::{Res, ResidueRing};
pub use units::{canonical_associate, has_normalized_associate, normalize_assoc};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Tr(x) for a ring element, as an exact rational.
pub fn trace(x: &CycInt) -> BigRational {
    BigRational::from_integer(x.trace())
}

pub fn norm(x: &CycInt) -> BigInt {
    x.norm()
}

pub fn galois(x: &CycInt, k: u32) -> crate::Result<CycInt> {
    x.galois(k)
}
