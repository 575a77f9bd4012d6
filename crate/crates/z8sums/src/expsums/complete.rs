use num_complex::Complex64;

use super::poly::{Method, PolySpec, SumValue, TwistSpec};
use crate::characters::{AdditiveMode, PhaseMap, SymbolValue, UnitStructure};
use crate::error::{Error, Result};
use crate::numeric::CSum;
use crate::ring::{Modulus, Res, ResidueRing};

/// z·i^j without rounding.
#[inline]
pub(crate) fn rotate(z: Complex64, j: u8) -> Complex64 {
    match j % 4 {
        0 => z,
        1 => Complex64::new(-z.im, z.re),
        2 => -z,
        _ => Complex64::new(z.im, -z.re),
    }
}

#[inline]
pub(crate) fn times_symbol(z: Complex64, s: SymbolValue) -> Complex64 {
    match s {
        SymbolValue::Zero => Complex64::new(0.0, 0.0),
        SymbolValue::Root(j) => rotate(z, j),
    }
}

/// x ↦ ψ_c(f(x)) as an integer phase, one scaled functional per term so the
/// coefficients are never multiplied in.
pub(crate) struct PolyPhase {
    terms: Vec<(PhaseMap, u32)>,
    base: PhaseMap,
}

impl PolyPhase {
    pub(crate) fn new(f: &PolySpec, c: &Modulus, mode: AdditiveMode) -> Self {
        let base = PhaseMap::new(c, mode);
        Self::with_base(f, c.ring(), base)
    }

    pub(crate) fn with_base(f: &PolySpec, ring: &ResidueRing, base: PhaseMap) -> Self {
        let terms = f
            .terms()
            .iter()
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, e)| (base.scaled(ring, &ring.from_cycint(a)), *e))
            .collect();
        PolyPhase { terms, base }
    }

    #[inline]
    pub(crate) fn phase(&self, ring: &ResidueRing, x: &Res) -> u64 {
        let d = self.base.denom();
        let mut s = 0u64;
        let mut pw = ring.one();
        let mut cur = 0u32;
        for (pm, e) in &self.terms {
            if *e > cur {
                pw = ring.mul(&pw, &ring.pow(x, (*e - cur) as u64));
                cur = *e;
            }
            s = (s + pm.phase(&pw)) % d;
        }
        s
    }

    #[inline]
    pub(crate) fn root(&self, k: u64) -> Complex64 {
        self.base.root(k)
    }
}

/// Σ_{x mod c} twist(x)·ψ_c(f(x)) by direct enumeration.
pub fn complete_sum(
    f: &PolySpec,
    c: &Modulus,
    twist: &TwistSpec,
    mode: AdditiveMode,
) -> Result<SumValue> {
    let ring = c.ring();
    let pp = PolyPhase::new(f, c, mode);
    let mut acc = CSum::new();
    match twist {
        TwistSpec::None => {
            for x in ring.iter() {
                acc.add(pp.root(pp.phase(ring, &x)));
            }
        }
        TwistSpec::ResidueSymbol(k) => {
            if *k != 2 && *k != 4 {
                return Err(Error::Invalid(format!("symbol order must be 2 or 4, got {k}")));
            }
            let us = UnitStructure::new(c)?;
            for x in ring.iter() {
                let s = us.symbol(&x, *k);
                if !s.is_zero() {
                    acc.add(times_symbol(pp.root(pp.phase(ring, &x)), s));
                }
            }
        }
        TwistSpec::Dirichlet(chi) => {
            let d = chi.modulus();
            if !d.elem().divides(c.elem()) {
                return Err(Error::Precondition(
                    "character modulus must divide the summation modulus".into(),
                ));
            }
            let dring = d.ring();
            let same = d.lattice() == c.lattice();
            for x in ring.iter() {
                let xd = if same { x } else { dring.reduce(&x) };
                if chi.exp_res(&xd).is_some() {
                    acc.add(chi.value_res(&xd) * pp.root(pp.phase(ring, &x)));
                }
            }
        }
    }
    Ok(SumValue::new(acc.value(), c.norm(), Method::Brute))
}

/// Untwisted shorthand used throughout the identity suite.
pub(crate) fn plain_sum(f: &PolySpec, c: &Modulus, mode: AdditiveMode) -> Complex64 {
    let ring = c.ring();
    let pp = PolyPhase::new(f, c, mode);
    ring.iter()
        .map(|x| pp.root(pp.phase(ring, &x)))
        .collect::<CSum>()
        .value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{primes_above, CycInt};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn zero_polynomial_counts_residues() {
        let c = Modulus::new(CycInt::from_i64s([3, 1, 0, 2])).unwrap();
        let s = complete_sum(&PolySpec::zero(), &c, &TwistSpec::None, AdditiveMode::Plain).unwrap();
        assert!(close(s.value, Complex64::new(c.norm() as f64, 0.0), 1e-9));
    }

    #[test]
    fn linear_sum_vanishes() {
        let x = PolySpec::monomial(1, 1);
        for c in [CycInt::from(3), CycInt::from_i64s([2, 1, 0, 1])] {
            let c = Modulus::new(c).unwrap();
            for mode in AdditiveMode::ALL {
                let s = complete_sum(&x, &c, &TwistSpec::None, mode).unwrap();
                assert!(s.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn matches_exact_evaluation() {
        let c = Modulus::new(primes_above(17)[1].clone()).unwrap();
        let f: PolySpec = "[1,1,0,0]:4,3:2,[0,0,1,0]:0".parse().unwrap();
        for mode in AdditiveMode::ALL {
            let fast = complete_sum(&f, &c, &TwistSpec::None, mode).unwrap().value;
            let slow: Complex64 = c
                .residues()
                .map(|x| {
                    crate::characters::additive_char(
                        &crate::ring::FieldElem::quotient(&f.eval(&x), c.elem()),
                        mode,
                    )
                })
                .sum();
            assert!(close(fast, slow, 1e-9));
        }
    }

    #[test]
    fn rotation_is_exact() {
        let z = Complex64::new(0.3, -1.7);
        for j in 0..4u8 {
            let w = Complex64::new(0.0, 1.0).powi(j as i32) * z;
            assert!(close(rotate(z, j), w, 1e-15));
        }
    }
}
