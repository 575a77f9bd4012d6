use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::zarith::factor_u64;
use crate::ring::{CycInt, Modulus, Res, ResidueRing};

/// A value in μ₄ ∪ {0}: `Root(k)` is i^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SymbolValue {
    Zero,
    Root(u8),
}

impl SymbolValue {
    pub fn root(k: i64) -> Self {
        SymbolValue::Root(k.rem_euclid(4) as u8)
    }

    pub fn one() -> Self {
        SymbolValue::Root(0)
    }

    pub fn is_zero(self) -> bool {
        self == SymbolValue::Zero
    }

    pub fn exponent(self) -> Option<u8> {
        match self {
            SymbolValue::Zero => None,
            SymbolValue::Root(k) => Some(k),
        }
    }

    pub fn pow(self, n: u32) -> Self {
        match self {
            SymbolValue::Zero if n == 0 => SymbolValue::one(),
            SymbolValue::Zero => SymbolValue::Zero,
            SymbolValue::Root(k) => SymbolValue::root(k as i64 * n as i64),
        }
    }

    pub fn conj(self) -> Self {
        match self {
            SymbolValue::Zero => SymbolValue::Zero,
            SymbolValue::Root(k) => SymbolValue::root(-(k as i64)),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            SymbolValue::Zero => Complex64::new(0.0, 0.0),
            SymbolValue::Root(0) => Complex64::new(1.0, 0.0),
            SymbolValue::Root(1) => Complex64::new(0.0, 1.0),
            SymbolValue::Root(2) => Complex64::new(-1.0, 0.0),
            SymbolValue::Root(_) => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for SymbolValue {
    type Output = SymbolValue;
    fn mul(self, o: SymbolValue) -> SymbolValue {
        match (self, o) {
            (SymbolValue::Root(a), SymbolValue::Root(b)) => SymbolValue::root((a + b) as i64),
            _ => SymbolValue::Zero,
        }
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolValue::Zero => write!(f, "0"),
            SymbolValue::Root(0) => write!(f, "1"),
            SymbolValue::Root(1) => write!(f, "i"),
            SymbolValue::Root(2) => write!(f, "-1"),
            SymbolValue::Root(_) => write!(f, "-i"),
        }
    }
}

/// Residue fields up to this size get discrete-log tables.
pub const FIELD_TABLE_LIMIT: u64 = 1 << 22;

/// The residue field R/p with a generator and optional log/exp tables.
#[derive(Debug)]
pub struct PrimeField {
    modulus: Modulus,
    q: u64,
    generator: Res,
    /// i^{gen_quartic} ≡ g^{(q−1)/4}.
    gen_quartic: u8,
    log: Option<Vec<u32>>,
    exp: Option<Vec<Res>>,
    qm1_primes: Vec<u64>,
}

impl PrimeField {
    fn build(p: &CycInt) -> Result<Self> {
        let modulus = Modulus::new(p.clone())?;
        let q = modulus.norm();
        if q % 2 == 0 {
            return Err(Error::EvenRamified);
        }
        let ring = modulus.ring().clone();
        let qm1_primes: Vec<u64> = factor_u64(q - 1).into_iter().map(|(l, _)| l).collect();
        let generator = (1..q)
            .map(|i| ring.from_index(i))
            .find(|g| {
                qm1_primes
                    .iter()
                    .all(|&l| ring.pow(g, (q - 1) / l) != ring.one())
            })
            .expect("residue field has a generator");
        let i_res = ring.from_cycint(&CycInt::omega_pow(2));
        let t = ring.pow(&generator, (q - 1) / 4);
        let gen_quartic = (0..4u8)
            .find(|&j| ring.pow(&i_res, j as u64) == t)
            .expect("quartic power of a generator is a fourth root of unity");
        let (log, exp) = if q <= FIELD_TABLE_LIMIT {
            let mut log = vec![u32::MAX; q as usize];
            let mut exp = Vec::with_capacity((q - 1) as usize);
            let mut x = ring.one();
            for k in 0..(q - 1) {
                log[ring.index(&x) as usize] = k as u32;
                exp.push(x);
                x = ring.mul(&x, &generator);
            }
            (Some(log), Some(exp))
        } else {
            (None, None)
        };
        Ok(PrimeField {
            modulus,
            q,
            generator,
            gen_quartic,
            log,
            exp,
            qm1_primes,
        })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn ring(&self) -> &ResidueRing {
        self.modulus.ring()
    }

    pub fn size(&self) -> u64 {
        self.q
    }

    pub fn generator(&self) -> Res {
        self.generator
    }

    /// Prime factors of q − 1.
    pub fn group_order_primes(&self) -> &[u64] {
        &self.qm1_primes
    }

    /// Discrete log of a nonzero residue (already reduced mod p).
    pub fn log(&self, x: &Res) -> Option<u64> {
        let ring = self.ring();
        if ring.is_zero(x) {
            return None;
        }
        if let Some(t) = &self.log {
            return Some(t[ring.index(x) as usize] as u64);
        }
        // baby-step giant-step for large fields
        let n = self.q - 1;
        let m = (n as f64).sqrt().ceil() as u64;
        let mut table = HashMap::with_capacity(m as usize);
        let mut e = ring.one();
        for j in 0..m {
            table.entry(e).or_insert(j);
            e = ring.mul(&e, &self.generator);
        }
        let factor = ring.pow(&self.generator, n - m % n);
        let mut y = *x;
        for i in 0..=m {
            if let Some(&j) = table.get(&y) {
                return Some((i * m + j) % n);
            }
            y = ring.mul(&y, &factor);
        }
        None
    }

    pub fn exp(&self, k: u64) -> Res {
        let k = k % (self.q - 1);
        match &self.exp {
            Some(t) => t[k as usize],
            None => self.ring().pow(&self.generator, k),
        }
    }

    pub fn inverse(&self, x: &Res) -> Option<Res> {
        let l = self.log(x)?;
        Some(self.exp((self.q - 1 - l) % (self.q - 1)))
    }

    /// Quartic symbol exponent j with x^{(q−1)/4} ≡ i^j.
    pub fn quartic_exp(&self, x: &Res) -> Option<u8> {
        if self.log.is_some() {
            let l = self.log(x)?;
            return Some(((l % 4) * self.gen_quartic as u64 % 4) as u8);
        }
        let ring = self.ring();
        if ring.is_zero(x) {
            return None;
        }
        let t = ring.pow(x, (self.q - 1) / 4);
        let i_res = ring.from_cycint(&CycInt::omega_pow(2));
        (0..4u8).find(|&j| ring.pow(&i_res, j as u64) == t)
    }

    /// Quadratic character: 0 for squares, 1 for non-squares.
    pub fn quadratic_exp(&self, x: &Res) -> Option<u8> {
        if self.log.is_some() {
            return self.log(x).map(|l| (l % 2) as u8);
        }
        let ring = self.ring();
        if ring.is_zero(x) {
            return None;
        }
        Some(if ring.pow(x, (self.q - 1) / 2) == ring.one() {
            0
        } else {
            1
        })
    }
}

fn field_cache() -> &'static RwLock<HashMap<[[i64; 4]; 4], Arc<PrimeField>>> {
    static CACHE: OnceLock<RwLock<HashMap<[[i64; 4]; 4], Arc<PrimeField>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared residue field for the prime p (cached by ideal).
pub fn prime_field(p: &CycInt) -> Result<Arc<PrimeField>> {
    let key = Modulus::new(p.clone())?.lattice();
    if let Some(f) = field_cache().read().expect("cache lock").get(&key) {
        return Ok(f.clone());
    }
    let f = Arc::new(PrimeField::build(p)?);
    let mut w = field_cache().write().expect("cache lock");
    Ok(w.entry(key).or_insert(f).clone())
}

/// One prime-power component of an odd modulus.
#[derive(Debug)]
pub struct LocalComponent {
    pub prime: CycInt,
    pub exponent: u32,
    pub field: Arc<PrimeField>,
    /// R/p^e.
    pub ring: ResidueRing,
    /// ≡ 1 mod p^e and ≡ 0 mod the other components, as a residue of c.
    idempotent: Res,
}

/// Multiplicative structure of R/c for c coprime to 2: unit test, inverses,
/// residue symbols, through the prime-power decomposition.
#[derive(Debug)]
pub struct UnitStructure {
    ring: ResidueRing,
    locals: Vec<LocalComponent>,
}

impl UnitStructure {
    pub fn new(c: &Modulus) -> Result<Self> {
        if c.is_even() {
            return Err(Error::EvenRamified);
        }
        let f = c.factors()?;
        let ring = c.ring().clone();
        let powers = f.prime_powers();
        let mut locals = Vec::with_capacity(f.primes.len());
        for (k, (p, e)) in f.primes.iter().enumerate() {
            let field = prime_field(p)?;
            let pe = Modulus::new(powers[k].clone())?;
            let others = powers
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .fold(CycInt::one(), |acc, (_, q)| &acc * q);
            let om = Modulus::new(others.clone())?;
            // idempotent = others · (others⁻¹ mod p^e)
            let inv = crate::ring::inverse_mod(&others, &pe)?;
            let idem = if om.is_unit() {
                ring.one()
            } else {
                ring.from_cycint(&(&others * &inv))
            };
            locals.push(LocalComponent {
                prime: p.clone(),
                exponent: *e,
                field,
                ring: pe.ring().clone(),
                idempotent: idem,
            });
        }
        Ok(UnitStructure { ring, locals })
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn locals(&self) -> &[LocalComponent] {
        &self.locals
    }

    fn to_field(&self, l: &LocalComponent, x: &Res) -> Res {
        l.field.ring().reduce(x)
    }

    pub fn is_unit(&self, x: &Res) -> bool {
        self.locals
            .iter()
            .all(|l| !l.field.ring().is_zero(&self.to_field(l, x)))
    }

    /// Inverse mod c of a unit residue.
    pub fn inverse(&self, x: &Res) -> Option<Res> {
        if self.locals.is_empty() {
            return Some(self.ring.zero());
        }
        let mut acc = [0i128; 4];
        let single = self.locals.len() == 1;
        for l in &self.locals {
            let xp = l.ring.reduce(x);
            let mut y = l.field.inverse(&self.to_field(l, x))?;
            // Newton: y ← y(2 − xy), doubling p-adic precision
            let mut prec = 1;
            let two = l.ring.from_int(2);
            while prec < l.exponent {
                let xy = l.ring.mul(&xp, &y);
                y = l.ring.mul(&y, &l.ring.sub(&two, &xy));
                prec *= 2;
            }
            if single {
                return Some(self.ring.reduce(&y));
            }
            let t = self.ring.mul(&self.ring.reduce(&y), &l.idempotent);
            for i in 0..4 {
                acc[i] += t[i] as i128;
            }
        }
        Some(self.ring.reduce_i128(acc))
    }

    /// Exponent j with (x/c)₄ = i^j, None if x is not a unit.
    pub fn quartic_exp(&self, x: &Res) -> Option<u8> {
        let mut s = 0u32;
        for l in &self.locals {
            let j = l.field.quartic_exp(&self.to_field(l, x))?;
            s += j as u32 * l.exponent;
        }
        Some((s % 4) as u8)
    }

    /// Exponent j with (x/c)₂ = (−1)^j.
    pub fn quadratic_exp(&self, x: &Res) -> Option<u8> {
        let mut s = 0u32;
        for l in &self.locals {
            let j = l.field.quadratic_exp(&self.to_field(l, x))?;
            s += j as u32 * l.exponent;
        }
        Some((s % 2) as u8)
    }

    /// (x/c)_k as a symbol value, k ∈ {2, 4}.
    pub fn symbol(&self, x: &Res, k: u32) -> SymbolValue {
        match k {
            4 => self
                .quartic_exp(x)
                .map_or(SymbolValue::Zero, |j| SymbolValue::root(j as i64)),
            _ => self
                .quadratic_exp(x)
                .map_or(SymbolValue::Zero, |j| SymbolValue::root(2 * j as i64)),
        }
    }
}

/// Power residue symbol (a/c)_k, k ∈ {2, 4}, by the exponentiation
/// definition at each prime and multiplicativity over factor(c).
pub fn power_symbol(a: &CycInt, c: &CycInt, k: u32) -> Result<SymbolValue> {
    if k != 2 && k != 4 {
        return Err(Error::Invalid(format!("symbol order must be 2 or 4, got {k}")));
    }
    let m = Modulus::new(c.clone())?;
    if m.is_even() {
        return Err(Error::EvenRamified);
    }
    let f = m.factors()?;
    let i = CycInt::omega_pow(2);
    let mut acc = SymbolValue::one();
    for (p, e) in &f.primes {
        let pm = Modulus::new(p.clone())?;
        let q = pm.norm();
        if (q - 1) % k as u64 != 0 {
            return Err(Error::Precondition(format!(
                "N(p) = {q} is not 1 mod {k}"
            )));
        }
        let ring = pm.ring();
        let x = ring.from_cycint(a);
        if ring.is_zero(&x) {
            return Ok(SymbolValue::Zero);
        }
        let t = ring.pow(&x, (q - 1) / k as u64);
        let ir = ring.from_cycint(&i);
        let j = (0..4u8)
            .find(|&j| ring.pow(&ir, j as u64) == t)
            .ok_or_else(|| Error::Invalid("power is not a root of unity".into()))?;
        acc = acc * SymbolValue::root(j as i64).pow(*e);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::primes_above;

    #[test]
    fn symbol_of_one_and_multiplicativity() {
        let p = &primes_above(17)[0];
        assert_eq!(power_symbol(&CycInt::one(), p, 4).unwrap(), SymbolValue::one());
        let a = CycInt::from_i64s([2, 1, 0, 3]);
        let b = CycInt::from_i64s([-1, 4, 1, 1]);
        let ab = &a * &b;
        assert_eq!(
            power_symbol(&ab, p, 4).unwrap(),
            power_symbol(&a, p, 4).unwrap() * power_symbol(&b, p, 4).unwrap()
        );
    }

    #[test]
    fn even_modulus_rejected() {
        let two = CycInt::from(2);
        assert!(matches!(
            power_symbol(&CycInt::one(), &two, 4),
            Err(Error::EvenRamified)
        ));
    }

    #[test]
    fn table_and_exponentiation_agree() {
        for p in primes_above(41).iter().chain(primes_above(3).iter()) {
            let f = prime_field(p).unwrap();
            let ring = f.ring().clone();
            for x in ring.iter().skip(1) {
                let direct = power_symbol(&ring.to_cycint(&x), p, 4).unwrap();
                assert_eq!(SymbolValue::root(f.quartic_exp(&x).unwrap() as i64), direct);
            }
        }
    }

    #[test]
    fn unit_structure_inverse() {
        let c = &primes_above(17)[0] * &primes_above(3)[1];
        let m = Modulus::new(c).unwrap();
        let us = UnitStructure::new(&m).unwrap();
        let ring = m.ring();
        let mut units = 0;
        for x in ring.iter() {
            if let Some(y) = us.inverse(&x) {
                if us.is_unit(&x) {
                    units += 1;
                    assert_eq!(ring.mul(&x, &y), ring.one());
                }
            }
        }
        assert_eq!(units, 16 * 8);
    }
}
