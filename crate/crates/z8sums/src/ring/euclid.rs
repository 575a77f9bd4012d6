use num_integer::Integer;

use super::units::{canonical_associate, normalize_assoc};
use super::{CycInt, Modulus};
use crate::error::{Error, Result};

/// Extended Euclid: (g, s, t) with s·a + t·b = g, g a gcd (not canonicalized).
pub fn xgcd(a: &CycInt, b: &CycInt) -> (CycInt, CycInt, CycInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (CycInt::one(), CycInt::zero());
    let (mut t0, mut t1) = (CycInt::zero(), CycInt::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem_euclid(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &(&q * &s1);
        s0 = std::mem::replace(&mut s1, s);
        let t = &t0 - &(&q * &t1);
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

/// Canonical form of a gcd: 1 for units, the associate ≡ 1 mod 4 when it
/// exists, otherwise the lexicographic canonical associate.
pub fn canonical_gcd_form(g: &CycInt) -> CycInt {
    if g.is_unit() {
        return CycInt::one();
    }
    if g.norm().is_odd() {
        if let Ok((n, _)) = normalize_assoc(g) {
            return n;
        }
    }
    canonical_associate(g).0
}

pub fn euclid_gcd(a: &CycInt, b: &CycInt) -> Result<CycInt> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let (g, _, _) = xgcd(a, b);
    Ok(canonical_gcd_form(&g))
}

pub fn are_coprime(a: &CycInt, b: &CycInt) -> bool {
    if a.is_zero() && b.is_zero() {
        return false;
    }
    xgcd(a, b).0.is_unit()
}

/// b with a·b ≡ 1 mod c, in canonical residue form.
pub fn inverse_mod(a: &CycInt, c: &Modulus) -> Result<CycInt> {
    let ring = c.ring();
    let ar = ring.to_cycint(&ring.from_cycint(a));
    if c.is_unit() {
        return Ok(CycInt::zero());
    }
    let (g, s, _) = xgcd(&ar, c.elem());
    let ginv = g
        .unit_inverse()
        .ok_or_else(|| Error::NotCoprime(g.norm().to_string()))?;
    Ok(c.reduce(&(&s * &ginv)))
}

/// Residue mod c1·c2 congruent to x1 mod c1 and x2 mod c2.
pub fn crt(x1: &CycInt, c1: &Modulus, x2: &CycInt, c2: &Modulus) -> Result<CycInt> {
    let (g, s, t) = xgcd(c1.elem(), c2.elem());
    let ginv = g
        .unit_inverse()
        .ok_or_else(|| Error::NotCoprime(g.norm().to_string()))?;
    // e1 ≡ 1 mod c1, ≡ 0 mod c2 and vice versa
    let e1 = &(&t * c2.elem()) * &ginv;
    let e2 = &(&s * c1.elem()) * &ginv;
    let prod = Modulus::new(c1.elem() * c2.elem())?;
    Ok(prod.reduce(&(&(x1 * &e1) + &(x2 * &e2))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(x: i64) -> Modulus {
        Modulus::new(CycInt::from(x)).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let g = euclid_gcd(&CycInt::from(6), &CycInt::from(4)).unwrap();
        assert_eq!(g.norm(), CycInt::from(2).norm());
        assert!(CycInt::from(2).div_exact(&g).unwrap().is_unit());
        let rp = CycInt::from_i64s([1, 1, 0, 0]);
        let g = euclid_gcd(&CycInt::from(2), &rp).unwrap();
        assert!(g.div_exact(&rp).unwrap().is_unit());
        assert!(euclid_gcd(&CycInt::from(3), &CycInt::from(5)).unwrap().is_one());
        assert!(euclid_gcd(&CycInt::zero(), &CycInt::zero()).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse_mod(&CycInt::from(3), &m(5)).unwrap(), CycInt::from(2));
        let three = m(3);
        let w = inverse_mod(&CycInt::omega(), &three).unwrap();
        assert_eq!(w, three.reduce(&CycInt::from_i64s([0, 0, 0, -1])));
        let a = CycInt::from_i64s([1, 1, 0, 0]);
        let b = inverse_mod(&a, &three).unwrap();
        let brute: Vec<CycInt> = three
            .residues()
            .filter(|x| three.reduce(&(&a * x)).is_one())
            .collect();
        assert_eq!(brute, vec![b]);
        assert!(inverse_mod(&CycInt::from(3), &m(6)).is_err());
    }

    #[test]
    fn crt_examples() {
        let x = crt(&CycInt::from(1), &m(3), &CycInt::from(1), &m(5)).unwrap();
        assert_eq!(x, CycInt::from(1));
        let x = crt(&CycInt::from(2), &m(3), &CycInt::from(0), &m(5)).unwrap();
        assert_eq!(x, CycInt::from(5));
        assert!(crt(&CycInt::one(), &m(3), &CycInt::one(), &m(6)).is_err());
    }
}
