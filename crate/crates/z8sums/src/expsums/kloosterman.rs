use num_complex::Complex64;

use super::complete::{plain_sum, rotate, times_symbol};
use super::poly::{Method, PolySpec, SumValue};
use crate::characters::{prime_field, AdditiveMode, PhaseMap, UnitStructure};
use crate::error::{Error, Result};
use crate::numeric::CSum;
use crate::ring::{are_coprime, inverse_mod, CycInt, Modulus};

/// S₄(r, s; c) = Σ_{a d ≡ 1 (c)} (a/c)₄·ψ_c(r·a + s·d).
///
/// A unit modulus gives 1 (one residue, empty phase).
pub fn kloosterman_s4(r: &CycInt, s: &CycInt, c: &Modulus, mode: AdditiveMode) -> Result<SumValue> {
    if c.is_even() {
        return Err(Error::EvenRamified);
    }
    if c.is_unit() {
        return Ok(SumValue::new(Complex64::new(1.0, 0.0), 1, Method::Brute));
    }
    let us = UnitStructure::new(c)?;
    let v = s4_with(&us, &PhaseMap::new(c, mode), r, s);
    Ok(SumValue::new(v, c.norm(), Method::Brute))
}

pub(crate) fn s4_with(us: &UnitStructure, base: &PhaseMap, r: &CycInt, s: &CycInt) -> Complex64 {
    let ring = us.ring();
    let lr = base.scaled(ring, &ring.from_cycint(r));
    let ls = base.scaled(ring, &ring.from_cycint(s));
    let d = base.denom();
    let mut acc = CSum::new();
    for a in ring.iter() {
        let Some(j) = us.quartic_exp(&a) else {
            continue;
        };
        let inv = us.inverse(&a).expect("unit has an inverse");
        let k = (lr.phase(&a) + ls.phase(&inv)) % d;
        acc.add(rotate(base.root(k), j));
    }
    acc.value()
}

/// Checks that p is an odd prime and returns its residue-field modulus.
fn odd_prime(p: &CycInt) -> Result<Modulus> {
    let pm = Modulus::new(p.clone())?;
    if pm.is_even() {
        return Err(Error::EvenRamified);
    }
    let f = pm.factors()?;
    if f.primes.len() != 1 || f.primes[0].1 != 1 {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    Ok(pm)
}

/// All u mod p^m with u² ≡ b, sorted; empty when b is a non-residue.
///
/// Tonelli–Shanks in R/p, then Newton lifting u ← (u + b/u)/2.
pub fn sqrt_mod(b: &CycInt, p: &CycInt, m: u32) -> Result<Vec<CycInt>> {
    if m == 0 {
        return Err(Error::Invalid("exponent must be positive".into()));
    }
    let pm = odd_prime(p)?;
    if !are_coprime(b, p) {
        return Err(Error::NotCoprime(format!("{b} and {p}")));
    }
    let field = prime_field(p)?;
    let ring = pm.ring();
    let q = pm.norm();
    let bb = ring.from_cycint(b);
    let one = ring.one();
    if ring.pow(&bb, (q - 1) / 2) != one {
        return Ok(Vec::new());
    }
    // q − 1 = 2^e·t with t odd; the generator is a non-residue
    let e = (q - 1).trailing_zeros();
    let t = (q - 1) >> e;
    let mut z = ring.pow(&field.generator(), t);
    let mut x = ring.pow(&bb, t.div_ceil(2));
    let mut y = ring.pow(&bb, t);
    let mut r = e;
    while y != one {
        let mut k = 0;
        let mut yy = y;
        while yy != one {
            yy = ring.mul(&yy, &yy);
            k += 1;
        }
        let mut w = z;
        for _ in 0..r - k - 1 {
            w = ring.mul(&w, &w);
        }
        z = ring.mul(&w, &w);
        x = ring.mul(&x, &w);
        y = ring.mul(&y, &z);
        r = k;
    }
    debug_assert_eq!(ring.mul(&x, &x), bb);

    let big = Modulus::new(p.pow(m))?;
    let mut u = big.reduce(&ring.to_cycint(&x));
    let two = CycInt::from(2);
    let mut prec = 1;
    while prec < m {
        let num = &(&u * &u) + b;
        let den = inverse_mod(&(&two * &u), &big)?;
        u = big.reduce(&(&num * &den));
        prec *= 2;
    }
    let neg = big.reduce(&-&u);
    let mut out = vec![u, neg];
    out.sort();
    Ok(out)
}

/// Salié-type evaluation of S₄(a, b; p^m) for m ≥ 2 through the square
/// roots u of b·ā mod p^m.
///
/// Even m = 2k: N(p)^k Σ_u (u/p^m)₄ ψ(2au).
/// Odd m = 2k+1: N(p)^k τ_p (a/p)₂ Σ_u (u/p)₂ (u/p^m)₄ ψ(2au), where
/// τ_p = Σ_{x mod p} ψ_p(x²) carries the sign of the quadratic Gauss sum.
pub fn s4_prime_power(
    a: &CycInt,
    b: &CycInt,
    p: &CycInt,
    m: u32,
    mode: AdditiveMode,
) -> Result<SumValue> {
    if m < 2 {
        return Err(Error::Precondition("prime-power exponent must be at least 2".into()));
    }
    let pm = odd_prime(p)?;
    if !are_coprime(&(a * b), p) {
        return Err(Error::Precondition("gcd(ab, p) ≠ 1".into()));
    }
    let big = Modulus::new(p.pow(m))?;
    let q = pm.norm() as f64;
    let abar = inverse_mod(a, &big)?;
    let roots = sqrt_mod(&big.reduce(&(b * &abar)), p, m)?;
    let us = UnitStructure::new(&big)?;
    let ring = big.ring();
    let base = PhaseMap::new(&big, mode);
    let l2a = base.scaled(ring, &ring.from_cycint(&(a * &CycInt::from(2))));
    let odd = m % 2 == 1;
    let pf = prime_field(p)?;
    let mut inner = CSum::new();
    for u in &roots {
        let ur = ring.from_cycint(u);
        let mut j = us.quartic_exp(&ur).expect("root is a unit");
        if odd {
            j += 2 * pf.quadratic_exp(&pf.ring().from_cycint(u)).expect("unit");
        }
        inner.add(rotate(base.root(l2a.phase(&ur)), j));
    }
    let k = (m / 2) as i32;
    let mut v = inner.value() * q.powi(k);
    if odd {
        let tau = plain_sum(&PolySpec::monomial(1, 2), &pm, mode);
        let eta_a = crate::characters::SymbolValue::root(
            2 * pf.quadratic_exp(&pf.ring().from_cycint(a)).expect("unit") as i64,
        );
        v = times_symbol(v * tau, eta_a);
    }
    Ok(SumValue::new(v, big.norm(), Method::Closed))
}

/// S₄(r, s; c) assembled from its prime-power parts: with c = Π qᵢ and
/// eᵢ = (c/qᵢ)⁻¹ mod qᵢ, S₄(r, s; c) = Π S₄(r·eᵢ, s·eᵢ; qᵢ). Higher prime
/// powers coprime to rs use the stationary-phase evaluation, the rest are
/// summed directly.
pub fn s4_factored(r: &CycInt, s: &CycInt, c: &Modulus, mode: AdditiveMode) -> Result<SumValue> {
    if c.is_even() {
        return Err(Error::EvenRamified);
    }
    if c.is_unit() {
        return Ok(SumValue::new(Complex64::new(1.0, 0.0), 1, Method::Assembled));
    }
    let f = c.factors()?;
    let mut v = Complex64::new(1.0, 0.0);
    for (p, m) in &f.primes {
        let q = Modulus::new(p.pow(*m))?;
        let rest = c.elem().div_exact(q.elem()).expect("prime power divides c");
        let e = inverse_mod(&rest, &q)?;
        let (ri, si) = (q.reduce(&(r * &e)), q.reduce(&(s * &e)));
        let part = if *m >= 2 && are_coprime(&(&ri * &si), p) {
            s4_prime_power(&ri, &si, p, *m, mode)?.value
        } else {
            let us = UnitStructure::new(&q)?;
            s4_with(&us, &PhaseMap::new(&q, mode), &ri, &si)
        };
        v *= part;
    }
    Ok(SumValue::new(v, c.norm(), Method::Assembled))
}
