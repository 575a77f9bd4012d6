use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::euclid::xgcd;
use super::units::{canonical_associate, normalize_assoc};
use super::zarith::{factor_u64, mul_mod, pow_mod, primes_up_to, sqrt_mod_prime};
use super::CycInt;
use crate::error::{Error, Result};

pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000_000_000;

/// c = unit · Π prime^exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub unit: CycInt,
    pub primes: Vec<(CycInt, u32)>,
}

impl Factorization {
    pub fn product(&self) -> CycInt {
        self.primes
            .iter()
            .fold(self.unit.clone(), |acc, (p, e)| &acc * &p.pow(*e))
    }

    /// The prime-power factors p^e as exact elements.
    pub fn prime_powers(&self) -> Vec<CycInt> {
        self.primes.iter().map(|(p, e)| p.pow(*e)).collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.primes.iter().all(|&(_, e)| e == 1)
    }
}

/// Preferred generator of a prime ideal: the associate ≡ 1 mod 4 when one
/// exists, otherwise the lexicographic canonical associate.
pub fn canonical_prime(p: &CycInt) -> CycInt {
    if p.norm().is_odd() {
        if let Ok((q, _)) = normalize_assoc(p) {
            return q;
        }
    }
    canonical_associate(p).0
}

/// The prime ideals above the rational prime p, as canonical generators.
pub fn primes_above(p: u64) -> Vec<CycInt> {
    let pc = CycInt::from(p as i64);
    let gens: Vec<CycInt> = if p == 2 {
        vec![CycInt::from_i64s([1, 1, 0, 0])]
    } else {
        match p % 8 {
            1 => {
                let r = (2..p)
                    .map(|a| pow_mod(a, (p - 1) / 8, p))
                    .find(|&r| pow_mod(r, 4, p) == p - 1)
                    .expect("eighth root of unity exists");
                let r2 = mul_mod(r, r, p);
                let mut x = r;
                let mut out = Vec::new();
                for _ in 0..4 {
                    out.push(CycInt::from_i64s([-(x as i64), 1, 0, 0]));
                    x = mul_mod(x, r2, p);
                }
                out
            }
            5 => {
                let i = sqrt_mod_prime(p - 1, p).expect("−1 is a square") as i64;
                vec![
                    CycInt::from_i64s([-i, 0, 1, 0]),
                    CycInt::from_i64s([i, 0, 1, 0]),
                ]
            }
            7 => {
                let s = sqrt_mod_prime(2, p).expect("2 is a square") as i64;
                vec![
                    CycInt::from_i64s([1, s, 1, 0]),
                    CycInt::from_i64s([1, -s, 1, 0]),
                ]
            }
            3 => {
                let s = sqrt_mod_prime(p - 2, p).expect("−2 is a square") as i64;
                vec![
                    CycInt::from_i64s([-1, s, 1, 0]),
                    CycInt::from_i64s([-1, -s, 1, 0]),
                ]
            }
            _ => unreachable!("odd prime"),
        }
    };
    let mut out: Vec<CycInt> = gens
        .iter()
        .map(|g| canonical_prime(&xgcd(&pc, g).0))
        .collect();
    out.sort_by(|a, b| a.norm().cmp(&b.norm()).then(a.cmp(b)));
    out
}

/// All prime ideals (canonical generators) with norm at most `bound`,
/// ordered by norm.
pub fn primes_up_to_norm(bound: u64) -> Vec<CycInt> {
    let mut out = Vec::new();
    for p in primes_up_to(bound) {
        let f = if p == 2 || p % 8 == 1 { 1 } else { 2 };
        if p.checked_pow(f).is_some_and(|n| n <= bound) {
            out.extend(primes_above(p));
        }
    }
    out.sort_by(|a, b| a.norm().cmp(&b.norm()).then(a.cmp(b)));
    out
}

pub fn factor(c: &CycInt) -> Result<Factorization> {
    factor_with_bound(c, DEFAULT_FACTOR_BOUND)
}

pub fn factor_with_bound(c: &CycInt, bound: u64) -> Result<Factorization> {
    if c.is_unit() {
        return Err(Error::Unit);
    }
    factor_allow_unit(c, bound)
}

/// Like [`factor`] but a unit factors as itself with no primes.
pub(crate) fn factor_allow_unit(c: &CycInt, bound: u64) -> Result<Factorization> {
    if c.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let n = c.norm();
    let n64 = n.to_u64().filter(|&v| v <= bound).ok_or(Error::TooLarge {
        norm: n.to_string(),
        bound: bound.to_string(),
    })?;
    let mut rest = c.clone();
    let mut primes = Vec::new();
    for (p, _) in factor_u64(n64) {
        for pi in primes_above(p) {
            let mut e = 0;
            while let Some(q) = rest.div_exact(&pi) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                primes.push((pi, e));
            }
        }
    }
    debug_assert!(rest.is_unit());
    primes.sort_by(|a, b| a.0.norm().cmp(&b.0.norm()).then(a.0.cmp(&b.0)));
    Ok(Factorization {
        unit: rest,
        primes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn two_is_totally_ramified() {
        let f = factor(&CycInt::from(2)).unwrap();
        assert_eq!(f.primes.len(), 1);
        assert_eq!(f.primes[0].1, 4);
        assert_eq!(f.primes[0].0.norm(), BigInt::from(2));
        assert_eq!(f.product(), CycInt::from(2));
    }

    #[test]
    fn seventeen_splits() {
        let f = factor(&CycInt::from(17)).unwrap();
        assert_eq!(f.primes.len(), 4);
        assert!(f.primes.iter().all(|(p, e)| *e == 1 && p.norm() == BigInt::from(17)));
        assert_eq!(f.product(), CycInt::from(17));
    }

    #[test]
    fn three_has_two_primes_of_norm_nine() {
        let f = factor(&CycInt::from(3)).unwrap();
        assert_eq!(f.primes.len(), 2);
        assert!(f.primes.iter().all(|(p, _)| p.norm() == BigInt::from(9)));
        assert_eq!(f.product(), CycInt::from(3));
    }

    #[test]
    fn bound_and_unit_errors() {
        assert!(matches!(factor(&CycInt::one()), Err(Error::Unit)));
        assert!(matches!(
            factor_with_bound(&CycInt::from(1000), 100),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn prime_counts_by_norm() {
        let ps = primes_up_to_norm(100);
        // norm 2, four of norm 17, 41, 73, 89, 97, two each of norm 9, 25, 49
        assert_eq!(ps.len(), 1 + 4 * 5 + 2 * 3);
    }
}
