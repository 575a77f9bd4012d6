use num_complex::Complex64;

use super::additive::root_of_unity;
use crate::error::{Error, Result};
use crate::numeric::CSum;
use crate::ring::zarith::{is_prime, pow_mod, primitive_root};

/// Characters of F_p^* through a primitive root g: χ_a(g^k) = e(a·k/(p−1)).
#[derive(Clone, Debug)]
pub struct FfCharTable {
    p: u64,
    n: u64,
    g: u64,
    log: Vec<u64>,
}

/// A multiplicative character of F_p^*, χ_a for a mod p − 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FfChar {
    pub a: u64,
}

pub fn ff_char_table(p: u64, n: u64) -> Result<FfCharTable> {
    if !is_prime(p) || p == 2 {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    if n == 0 || (p - 1) % n != 0 {
        return Err(Error::Precondition(format!("{p} is not 1 mod {n}")));
    }
    let g = primitive_root(p);
    let mut log = vec![0u64; p as usize];
    let mut x = 1u64;
    for k in 0..p - 1 {
        log[x as usize] = k;
        x = x * g % p;
    }
    Ok(FfCharTable { p, n, g, log })
}

impl FfCharTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn primitive_root(&self) -> u64 {
        self.g
    }

    /// The n characters of order dividing n, ordered by exponent.
    pub fn characters(&self) -> Vec<FfChar> {
        (0..self.n)
            .map(|r| FfChar {
                a: r * (self.p - 1) / self.n,
            })
            .collect()
    }

    /// Every character of F_p^*.
    pub fn all_characters(&self) -> Vec<FfChar> {
        (0..self.p - 1).map(|a| FfChar { a }).collect()
    }

    /// The generating character γ of order n.
    pub fn gamma(&self) -> FfChar {
        FfChar {
            a: (self.p - 1) / self.n,
        }
    }

    pub fn quadratic(&self) -> FfChar {
        FfChar {
            a: (self.p - 1) / 2,
        }
    }

    pub fn mul(&self, x: FfChar, y: FfChar) -> FfChar {
        FfChar {
            a: (x.a + y.a) % (self.p - 1),
        }
    }

    pub fn pow(&self, x: FfChar, k: i64) -> FfChar {
        let m = (self.p - 1) as i128;
        FfChar {
            a: (x.a as i128 * k as i128).rem_euclid(m) as u64,
        }
    }

    pub fn inv(&self, x: FfChar) -> FfChar {
        self.pow(x, -1)
    }

    pub fn order(&self, x: FfChar) -> u64 {
        (self.p - 1) / crate::ring::zarith::gcd(x.a, self.p - 1)
    }

    /// Exponent over p − 1, None at 0.
    pub fn exp(&self, x: FfChar, v: u64) -> Option<u64> {
        let v = v % self.p;
        (v != 0).then(|| (x.a as u128 * self.log[v as usize] as u128 % (self.p - 1) as u128) as u64)
    }

    pub fn value(&self, x: FfChar, v: i64) -> Complex64 {
        let v = v.rem_euclid(self.p as i64) as u64;
        match self.exp(x, v) {
            Some(e) => root_of_unity(e, self.p - 1),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// e(v/p).
    pub fn e(&self, v: i64) -> Complex64 {
        root_of_unity(v.rem_euclid(self.p as i64) as u64, self.p)
    }

    /// τ(χ) = Σ_{x ≠ 0} χ(x) e(x/p); τ(1) = −1.
    pub fn gauss(&self, x: FfChar) -> Complex64 {
        (1..self.p as i64)
            .map(|v| self.value(x, v) * self.e(v))
            .collect::<CSum>()
            .value()
    }

    pub fn inverse_mod_p(&self, v: u64) -> u64 {
        pow_mod(v, self.p - 2, self.p)
    }
}

/// |τ(χⁿ) − (−χ(nⁿ)·Π_l τ(χγ^l) / Π_l τ(γ^l))|.
pub fn hd_check(p: u64, n: u64, chi: FfChar) -> Result<f64> {
    let t = ff_char_table(p, n)?;
    let gamma = t.gamma();
    let lhs = t.gauss(t.pow(chi, n as i64));
    let mut num = Complex64::new(1.0, 0.0);
    let mut den = Complex64::new(1.0, 0.0);
    for l in 0..n {
        let gl = t.pow(gamma, l as i64);
        num *= t.gauss(t.mul(chi, gl));
        den *= t.gauss(gl);
    }
    let nn = pow_mod(n % p, n, p) as i64;
    let rhs = -t.value(chi, nn) * num / den;
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shapes() {
        let t = ff_char_table(13, 1).unwrap();
        assert_eq!(t.characters().len(), 1);
        let t = ff_char_table(13, 4).unwrap();
        let mut orders: Vec<u64> = t.characters().iter().map(|&c| t.order(c)).collect();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 4, 4]);
        assert!(ff_char_table(13, 5).is_err());
    }

    #[test]
    fn orthogonality() {
        let t = ff_char_table(13, 4).unwrap();
        for c in t.characters().into_iter().skip(1) {
            let s: Complex64 = (1..13).map(|v| t.value(c, v)).sum();
            assert!(s.norm() < 1e-12);
        }
    }

    #[test]
    fn hasse_davenport_small() {
        for (p, n) in [(7u64, 3u64), (13, 4), (13, 1)] {
            let t = ff_char_table(p, n).unwrap();
            for chi in t.all_characters() {
                let r = hd_check(p, n, chi).unwrap();
                assert!(r < 1e-9 * (p as f64).sqrt(), "p={p} n={n} a={} r={r}", chi.a);
            }
        }
    }
}
