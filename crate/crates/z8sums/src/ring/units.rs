use num_integer::Integer;
use num_traits::Signed;

use super::CycInt;
use crate::error::{Error, Result};

/// log((1+√2)²): the change of log|η₁| − log|η₂| per power of the fundamental unit.
fn step() -> f64 {
    2.0 * (1.0 + std::f64::consts::SQRT_2).ln()
}

fn imbalance(x: &CycInt) -> f64 {
    let (a, b) = x.embeddings().abs_sq();
    0.5 * (a.ln() - b.ln())
}

/// Power j of the fundamental unit that brings |η₁| and |η₂| closest.
pub fn balancing_power(x: &CycInt) -> i64 {
    (-imbalance(x) / step()).round() as i64
}

/// Smallest t > 0 with (1+√2)^t ≡ 1 mod 4.
pub fn fundamental_unit_order_mod4() -> i64 {
    let eps = CycInt::fundamental_unit();
    let mut acc = eps.clone();
    let mut t = 1;
    while !acc.is_one_mod_4() {
        acc = &acc * &eps;
        t += 1;
    }
    t
}

fn lex_key(x: &CycInt) -> ([num_bigint::BigInt; 4], [num_bigint::BigInt; 4]) {
    let c = x.coeffs();
    (
        std::array::from_fn(|i| c[i].abs()),
        std::array::from_fn(|i| -&c[i]),
    )
}

/// Deterministic representative of the associate class of x: balance the
/// embeddings with the fundamental unit, then take the torsion multiple with
/// lexicographically least absolute coordinates (positive sign on ties).
pub fn canonical_associate(x: &CycInt) -> (CycInt, CycInt) {
    if x.is_zero() {
        return (CycInt::zero(), CycInt::one());
    }
    let j = balancing_power(x);
    let u = CycInt::fundamental_unit_pow(j);
    let y = &u * x;
    let (k, best) = (0..8)
        .map(|k| (k, &CycInt::omega_pow(k) * &y))
        .min_by(|a, b| lex_key(&a.1).cmp(&lex_key(&b.1)))
        .expect("eight candidates");
    (best, &CycInt::omega_pow(k) * &u)
}

/// Associate ε·c ≡ 1 mod 4, with ε from μ₈ × ⟨1+√2⟩.
///
/// Among valid associates the one nearest the balanced power is returned.
pub fn normalize_assoc(c: &CycInt) -> Result<(CycInt, CycInt)> {
    if c.is_zero() || c.norm().is_even() {
        return Err(Error::EvenRamified);
    }
    let j0 = balancing_power(c);
    let t = fundamental_unit_order_mod4();
    let mut offsets: Vec<i64> = (-t..=t).collect();
    offsets.sort_by_key(|d| (d.abs(), *d));
    for d in offsets {
        let j = j0 + d;
        let u = CycInt::fundamental_unit_pow(j);
        let y = &u * c;
        for k in 0..8 {
            let z = &CycInt::omega_pow(k) * &y;
            if z.is_one_mod_4() {
                return Ok((z, &CycInt::omega_pow(k) * &u));
            }
        }
    }
    Err(Error::NoNormalizedAssociate)
}

/// Whether c has an associate congruent to 1 mod 4.
pub fn has_normalized_associate(c: &CycInt) -> bool {
    normalize_assoc(c).is_ok()
}
