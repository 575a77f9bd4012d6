use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of Z[ω] with ω⁴ = −1, stored in the power basis 1, ω, ω², ω³.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct CycInt {
    c: [BigInt; 4],
}

impl CycInt {
    pub fn new(c: [BigInt; 4]) -> Self {
        CycInt { c }
    }

    pub fn from_i64s(c: [i64; 4]) -> Self {
        CycInt {
            c: c.map(BigInt::from),
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        CycInt {
            c: [n.into(), BigInt::zero(), BigInt::zero(), BigInt::zero()],
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn omega() -> Self {
        Self::from_i64s([0, 1, 0, 0])
    }

    /// ω^k for any integer k.
    pub fn omega_pow(k: i64) -> Self {
        let k = k.rem_euclid(8) as usize;
        let mut c = [0i64; 4];
        if k < 4 {
            c[k] = 1;
        } else {
            c[k - 4] = -1;
        }
        Self::from_i64s(c)
    }

    /// √2 = ω − ω³.
    pub fn sqrt2() -> Self {
        Self::from_i64s([0, 1, 0, -1])
    }

    /// The fundamental unit 1 + √2.
    pub fn fundamental_unit() -> Self {
        Self::from_i64s([1, 1, 0, -1])
    }

    /// (1 + √2)^j for any integer j; the inverse is √2 − 1.
    pub fn fundamental_unit_pow(j: i64) -> Self {
        let base = if j >= 0 {
            Self::fundamental_unit()
        } else {
            Self::from_i64s([-1, 1, 0, -1])
        };
        base.pow(j.unsigned_abs() as u32)
    }

    pub fn coeffs(&self) -> &[BigInt; 4] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.c[i]
    }

    /// Coordinates as i64 if they all fit.
    pub fn to_i64s(&self) -> Option<[i64; 4]> {
        Some([
            self.c[0].to_i64()?,
            self.c[1].to_i64()?,
            self.c[2].to_i64()?,
            self.c[3].to_i64()?,
        ])
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Rational integer value if the element lies in Z.
    pub fn as_rational_integer(&self) -> Option<&BigInt> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt {
            c: [&self.c[0] * k, &self.c[1] * k, &self.c[2] * k, &self.c[3] * k],
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Automorphism ω ↦ ω^k, k odd.
    pub fn galois(&self, k: u32) -> Result<Self> {
        if k % 2 == 0 {
            return Err(Error::GaloisIndex(k));
        }
        let mut out: [BigInt; 4] = Default::default();
        for (i, ci) in self.c.iter().enumerate() {
            let e = (i as u32 * k) % 8;
            if e < 4 {
                out[e as usize] += ci;
            } else {
                out[(e - 4) as usize] -= ci;
            }
        }
        Ok(CycInt { c: out })
    }

    fn gal(&self, k: u32) -> Self {
        self.galois(k).expect("odd index")
    }

    /// σ₃(x)σ₅(x)σ₇(x), so that x times this equals N(x).
    pub fn conj_product(&self) -> Self {
        &(&self.gal(3) * &self.gal(5)) * &self.gal(7)
    }

    /// Absolute norm, computed through the relative norm to Z[i].
    pub fn norm(&self) -> BigInt {
        let y = self * &self.gal(5);
        &y.c[0] * &y.c[0] + &y.c[2] * &y.c[2]
    }

    /// Trace to Q: four times the constant coefficient.
    pub fn trace(&self) -> BigInt {
        &self.c[0] * 4
    }

    /// Exact quotient self / d if d divides self.
    pub fn div_exact(&self, d: &CycInt) -> Option<CycInt> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let num = self * &d.conj_product();
        let mut out: [BigInt; 4] = Default::default();
        for i in 0..4 {
            let (q, r) = num.c[i].div_rem(&n);
            if !r.is_zero() {
                return None;
            }
            out[i] = q;
        }
        Some(CycInt { c: out })
    }

    pub fn divides(&self, x: &CycInt) -> bool {
        if self.is_zero() {
            return x.is_zero();
        }
        x.div_exact(self).is_some()
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Option<CycInt> {
        if self.is_unit() {
            Some(self.conj_product())
        } else {
            None
        }
    }

    /// Euclidean division: returns (q, r) with self = q·d + r and N(r) < N(d).
    pub fn div_rem_euclid(&self, d: &CycInt) -> (CycInt, CycInt) {
        let n = d.norm();
        let num = self * &d.conj_product();
        let near: [BigInt; 4] = std::array::from_fn(|i| round_div(&num.c[i], &n));
        let q = CycInt { c: near };
        let r = self - &(&q * d);
        if r.norm() < n {
            return (q, r);
        }
        // exact half-integer ties: try every floor/ceil combination
        let floors: [BigInt; 4] = std::array::from_fn(|i| num.c[i].div_floor(&n));
        let mut best: Option<(BigInt, CycInt, CycInt)> = None;
        for mask in 0..16u32 {
            let c: [BigInt; 4] =
                std::array::from_fn(|i| &floors[i] + BigInt::from((mask >> i) & 1));
            let q = CycInt { c };
            let r = self - &(&q * d);
            let rn = r.norm();
            if best.as_ref().is_none_or(|b| rn < b.0) {
                best = Some((rn, q, r));
            }
        }
        let (_, q, r) = best.expect("16 candidates");
        (q, r)
    }

    /// Pair of complex embeddings ω ↦ e^{iπ/4}, ω ↦ e^{3iπ/4}.
    pub fn embeddings(&self) -> super::EmbeddingPair {
        super::EmbeddingPair::of(self)
    }

    /// Coordinates as f64 (lossy for huge entries).
    pub fn to_f64s(&self) -> [f64; 4] {
        std::array::from_fn(|i| self.c[i].to_f64().unwrap_or(f64::NAN))
    }

    /// Congruence test self ≡ other mod the rational integer k.
    pub fn congruent_mod_int(&self, other: &CycInt, k: i64) -> bool {
        let k = BigInt::from(k);
        (0..4).all(|i| (&self.c[i] - &other.c[i]).mod_floor(&k).is_zero())
    }

    /// x ≡ 1 mod 4.
    pub fn is_one_mod_4(&self) -> bool {
        self.congruent_mod_int(&CycInt::one(), 4)
    }

    /// Some square root in R, if one exists.
    pub fn sqrt(&self) -> Option<CycInt> {
        if self.is_zero() {
            return Some(CycInt::zero());
        }
        // candidates from the complex embeddings, then an exact check
        let e = self.embeddings();
        let r1 = e.eta1.sqrt();
        let r2 = e.eta2.sqrt();
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                let z1 = r1 * s1;
                let z2 = r2 * s2;
                let cand = super::embedding::from_embeddings(z1, z2)?;
                if &(&cand * &cand) == self {
                    return Some(cand);
                }
            }
        }
        None
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }
}

fn round_div(a: &BigInt, n: &BigInt) -> BigInt {
    // nearest integer to a/n (n > 0), halves rounded up
    let two = BigInt::from(2);
    (a * &two + n).div_floor(&(n * &two))
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]", self.c[0], self.c[1], self.c[2], self.c[3])
    }
}

impl FromStr for CycInt {
    type Err = Error;

    /// Accepts "n", "[a,b,c,d]" or "a,b,c,d" (missing trailing coordinates are zero).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = t.split([',', ' ', ';']).filter(|p| !p.is_empty()).collect();
        if parts.is_empty() || parts.len() > 4 {
            return Err(Error::Invalid(format!("cannot parse ring element '{s}'")));
        }
        let mut c: [BigInt; 4] = Default::default();
        for (i, p) in parts.iter().enumerate() {
            c[i] = p
                .parse::<BigInt>()
                .map_err(|_| Error::Invalid(format!("bad coordinate '{p}' in '{s}'")))?;
        }
        Ok(CycInt { c })
    }
}

impl Serialize for CycInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for CycInt {
    fn from(n: i64) -> Self {
        CycInt::from_int(n)
    }
}

impl From<[i64; 4]> for CycInt {
    fn from(c: [i64; 4]) -> Self {
        CycInt::from_i64s(c)
    }
}

impl<'a> Add<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn add(self, o: &CycInt) -> CycInt {
        CycInt {
            c: std::array::from_fn(|i| &self.c[i] + &o.c[i]),
        }
    }
}

impl<'a> Sub<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn sub(self, o: &CycInt) -> CycInt {
        CycInt {
            c: std::array::from_fn(|i| &self.c[i] - &o.c[i]),
        }
    }
}

impl<'a> Mul<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn mul(self, o: &CycInt) -> CycInt {
        let mut out: [BigInt; 4] = Default::default();
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if o.c[j].is_zero() {
                    continue;
                }
                let p = &self.c[i] * &o.c[j];
                let k = i + j;
                if k < 4 {
                    out[k] += p;
                } else {
                    out[k - 4] -= p;
                }
            }
        }
        CycInt { c: out }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            c: std::array::from_fn(|i| -&self.c[i]),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<CycInt> for CycInt {
            type Output = CycInt;
            fn $m(self, o: CycInt) -> CycInt {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a CycInt> for CycInt {
            type Output = CycInt;
            fn $m(self, o: &CycInt) -> CycInt {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

impl AddAssign<&CycInt> for CycInt {
    fn add_assign(&mut self, o: &CycInt) {
        for i in 0..4 {
            self.c[i] += &o.c[i];
        }
    }
}

impl SubAssign<&CycInt> for CycInt {
    fn sub_assign(&mut self, o: &CycInt) {
        for i in 0..4 {
            self.c[i] -= &o.c[i];
        }
    }
}
