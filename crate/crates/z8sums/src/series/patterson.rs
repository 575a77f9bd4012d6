use std::time::Instant;

use dashmap::DashMap;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{with_workers, SeriesPoint};
use crate::characters::root_of_unity;
use crate::error::{Error, Result};
use crate::expsums::PolySpec;
use crate::numeric::CSum;
use crate::ring::zarith::{factor_u64, gcd, inv_mod, pow_mod};

/// Moduli below this are summed directly.
pub const DEFAULT_CROSSOVER: u64 = 64;

/// f with rational integer coefficients, lowest degree first.
#[derive(Clone, Debug)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn from_spec(f: &PolySpec) -> Result<Self> {
        let mut coeffs = vec![0i64; f.degree() as usize + 1];
        for (c, e) in f.terms() {
            if c.is_zero() {
                continue;
            }
            let v = c
                .as_rational_integer()
                .and_then(|v| v.to_i64())
                .ok_or_else(|| Error::Invalid(format!("coefficient {c} is not a machine integer")))?;
            coeffs[*e as usize] = v;
        }
        Ok(IntPoly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// f(x) mod q in [0, q).
    pub fn eval_mod(&self, x: u64, q: u64) -> u64 {
        let q = q as i128;
        let x = x as i128 % q;
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x + c as i128).rem_euclid(q);
        }
        acc as u64
    }

    /// The single nonzero term (A, d) when f = A·x^d with d ≥ 1.
    fn monomial(&self) -> Option<(i64, u32)> {
        let nz: Vec<(usize, i64)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect();
        match nz.as_slice() {
            [(d, a)] if *d >= 1 => Some((*a, *d as u32)),
            _ => None,
        }
    }
}

fn modp(v: i64, q: u64) -> u64 {
    v.rem_euclid(q as i64) as u64
}

/// Σ_{x mod c} e(f(x)/c) by direct summation.
pub fn direct_sum(f: &IntPoly, c: u64) -> Complex64 {
    let mut acc = CSum::new();
    for x in 0..c {
        acc.add(root_of_unity(f.eval_mod(x, c), c));
    }
    acc.value()
}

/// Σ_{x mod q} e(a·f(x)/q) by counting the values a·f(x) mod q, which are
/// walked with forward differences.
fn counted_sum(f: &IntPoly, a: u64, q: u64) -> Complex64 {
    let n = f.degree();
    let mut diffs: Vec<u64> = (0..=n as u64)
        .map(|x| (a as u128 * f.eval_mod(x, q) as u128 % q as u128) as u64)
        .collect();
    for k in 1..=n {
        for i in (k..=n).rev() {
            diffs[i] = (diffs[i] + q - diffs[i - 1]) % q;
        }
    }
    let mut counts = vec![0u32; q as usize];
    for _ in 0..q {
        counts[diffs[0] as usize] += 1;
        for i in 0..n {
            let v = diffs[i] + diffs[i + 1];
            diffs[i] = if v >= q { v - q } else { v };
        }
    }
    let mut acc = CSum::new();
    for (r, &k) in counts.iter().enumerate() {
        if k != 0 {
            acc.add(root_of_unity(r as u64, q) * k as f64);
        }
    }
    acc.value()
}

/// Σ_{x mod p^k} e(u x²/p^k) for odd p ∤ u.
fn quadratic_gauss(u: u64, p: u64, k: u32) -> Complex64 {
    let half = (p as f64).powi((k / 2) as i32);
    if k % 2 == 0 {
        return Complex64::new(half, 0.0);
    }
    let legendre = if pow_mod(u % p, (p - 1) / 2, p) == 1 { 1.0 } else { -1.0 };
    let g1 = if p % 4 == 1 {
        Complex64::new((p as f64).sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (p as f64).sqrt())
    };
    g1 * (legendre * half)
}

/// Local complete sums Σ_{x mod q} e(a·f(x)/q) for prime powers q, with a
/// shared cache.
pub struct LocalSums {
    f: IntPoly,
    crossover: u64,
    cache: DashMap<(u64, u64), Complex64>,
}

impl LocalSums {
    pub fn new(f: IntPoly) -> Self {
        LocalSums {
            f,
            crossover: DEFAULT_CROSSOVER,
            cache: DashMap::new(),
        }
    }

    pub fn with_crossover(mut self, crossover: u64) -> Self {
        self.crossover = crossover;
        self
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    fn cached(&self, key: (u64, u64), compute: impl FnOnce() -> Complex64) -> Complex64 {
        if let Some(v) = self.cache.get(&key) {
            return *v;
        }
        let v = compute();
        self.cache.insert(key, v);
        v
    }

    /// Σ_{x mod q} e(a·f(x)/q), q = p^k, gcd(a, q) = 1.
    pub fn local(&self, p: u64, k: u32, a: u64) -> Complex64 {
        let q = p.pow(k);
        let a = a % q;
        if let Some(v) = self.quadratic_closed(p, k, a) {
            return v;
        }
        if k == 1 {
            if let Some((coef, d)) = self.f.monomial() {
                return self.monomial_at_prime(p, coef, d, a);
            }
        }
        self.cached((q, a), || counted_sum(&self.f, a, q))
    }

    /// Completing the square at odd p^k with p ∤ α.
    fn quadratic_closed(&self, p: u64, k: u32, a: u64) -> Option<Complex64> {
        if self.f.degree() != 2 || p == 2 {
            return None;
        }
        let q = p.pow(k);
        let (g, b, al) = (self.f.coeffs[0], self.f.coeffs[1], self.f.coeffs[2]);
        let u = (a as u128 * modp(al, q) as u128 % q as u128) as u64;
        if u % p == 0 {
            return None;
        }
        let qi = q as i128;
        let inv4u = inv_mod((4 * u as i128) % qi, qi)?;
        let bb = (a as i128 * modp(b, q) as i128) % qi;
        // a·f(x) = u(x + s)² + a·γ − (aβ)²/(4u)
        let shift = (bb * bb % qi * inv4u).rem_euclid(qi);
        let r = ((a as i128 * modp(g, q) as i128 - shift).rem_euclid(qi)) as u64;
        Some(root_of_unity(r, q) * quadratic_gauss(u, p, k))
    }

    /// A·x^d at a prime p: zero when x ↦ x^d permutes F_p, otherwise the
    /// value depends only on the class of a·A modulo d-th powers, so it is
    /// computed once per class at its least representative.
    fn monomial_at_prime(&self, p: u64, coef: i64, d: u32, a: u64) -> Complex64 {
        let u = (a as u128 * modp(coef, p) as u128 % p as u128) as u64;
        if u == 0 {
            return Complex64::new(p as f64, 0.0);
        }
        let k = gcd(d as u64, p - 1);
        if k == 1 {
            return Complex64::new(0.0, 0.0);
        }
        let e = (p - 1) / k;
        let class = pow_mod(u, e, p);
        let rep = (1..p).find(|&v| pow_mod(v, e, p) == class).expect("class is nonempty");
        self.cached((p, rep), || {
            let mono = IntPoly {
                coeffs: {
                    let mut c = vec![0; d as usize + 1];
                    c[d as usize] = 1;
                    c
                },
            };
            counted_sum(&mono, rep, p)
        })
    }

    /// Σ_{x mod c} e(f(x)/c) = Π_i Σ_{x mod qᵢ} e(aᵢ f(x)/qᵢ) with
    /// aᵢ = (c/qᵢ)⁻¹ mod qᵢ.
    pub fn complete(&self, c: u64) -> Complex64 {
        if c < self.crossover {
            return direct_sum(&self.f, c);
        }
        let mut v = Complex64::new(1.0, 0.0);
        for (p, k) in factor_u64(c) {
            let q = p.pow(k);
            let rest = (c / q) % q;
            let a = inv_mod(rest as i128, q as i128).expect("coprime cofactor") as u64;
            v *= self.local(p, k, a);
        }
        v
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PattersonOptions {
    pub crossover: u64,
    pub workers: Option<usize>,
}

impl Default for PattersonOptions {
    fn default() -> Self {
        PattersonOptions {
            crossover: DEFAULT_CROSSOVER,
            workers: None,
        }
    }
}

/// S(f, X) = Σ_{c ≤ X} Σ_{x mod c} e(f(x)/c).
pub fn patterson_sum_int(f: &PolySpec, x: u64) -> Result<SeriesPoint> {
    Ok(patterson_series(f, &[x], PattersonOptions::default())?.remove(0))
}

/// S(f, X) at every X of an increasing grid. Inner sums are computed in
/// parallel per block of moduli and accumulated sequentially in c order,
/// so the values do not depend on the worker count.
pub fn patterson_series(f: &PolySpec, xs: &[u64], opts: PattersonOptions) -> Result<Vec<SeriesPoint>> {
    if xs.iter().any(|&x| x == 0) {
        return Err(Error::Invalid("X must be at least 1".into()));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid("X grid must be increasing".into()));
    }
    let sums = LocalSums::new(IntPoly::from_spec(f)?).with_crossover(opts.crossover);
    let start = Instant::now();
    let mut acc = CSum::new();
    let mut done = 0u64;
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        let block: Vec<Complex64> = with_workers(opts.workers, || {
            (done + 1..=x).into_par_iter().map(|c| sums.complete(c)).collect()
        });
        for v in block {
            acc.add(v);
        }
        done = x;
        out.push(SeriesPoint::new(x as f64, acc.value(), x, start.elapsed()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> PolySpec {
        s.parse().unwrap()
    }

    #[test]
    fn single_modulus() {
        let p = patterson_sum_int(&poly("1:3"), 1).unwrap();
        assert_eq!(p.value, Complex64::new(1.0, 0.0));
        assert_eq!(p.term_count, 1);
    }

    #[test]
    fn naive_oracle_below_crossover() {
        let f = poly("1:3");
        let got = patterson_sum_int(&f, 50).unwrap().value;
        let mut outer = CSum::new();
        for c in 1..=50u64 {
            let mut inner = CSum::new();
            for x in 0..c {
                inner.add(root_of_unity(x * x * x % c, c));
            }
            outer.add(inner.value());
        }
        assert_eq!(got, outer.value());
    }

    #[test]
    fn factored_matches_direct() {
        for s in ["1:3", "1:2,1:1", "3:2,-5:1,2:0", "2:4,1:1", "1:2"] {
            let f = IntPoly::from_spec(&poly(s)).unwrap();
            let sums = LocalSums::new(f.clone()).with_crossover(1);
            for c in [2u64, 7, 9, 12, 25, 27, 49, 63, 64, 91, 105, 125, 243, 360, 1001] {
                let a = sums.complete(c);
                let b = direct_sum(&f, c);
                assert!((a - b).norm() < 1e-9 * c as f64, "{s} at {c}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn monomial_classes_and_cubic_vanishing() {
        let f = IntPoly::from_spec(&poly("1:3")).unwrap();
        let sums = LocalSums::new(f.clone());
        for p in [5u64, 11, 17] {
            assert_eq!(sums.local(p, 1, 1), Complex64::new(0.0, 0.0));
        }
        for a in 1..13u64 {
            let direct = counted_sum(&f, a, 13);
            assert!((sums.local(13, 1, a) - direct).norm() < 1e-9);
        }
        assert!(sums.cache_len() <= 3);
    }

    #[test]
    fn worker_count_does_not_change_values() {
        let f = poly("1:3");
        let xs = [256, 512, 1024];
        let one = patterson_series(&f, &xs, PattersonOptions { workers: Some(1), ..Default::default() }).unwrap();
        let four = patterson_series(&f, &xs, PattersonOptions { workers: Some(4), ..Default::default() }).unwrap();
        for (a, b) in one.iter().zip(&four) {
            assert_eq!(a.value, b.value);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(patterson_series(&poly("1:3"), &[0], PattersonOptions::default()).is_err());
        assert!(patterson_series(&poly("1:3"), &[4, 2], PattersonOptions::default()).is_err());
        assert!(patterson_series(&poly("[1,1,0,0]:3"), &[4], PattersonOptions::default()).is_err());
    }
}
