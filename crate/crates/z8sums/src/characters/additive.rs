use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{frac, CycInt, FieldElem, Modulus, Res, ResidueRing};

/// Normalization of the additive character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdditiveMode {
    /// e(Tr(α)).
    Plain,
    /// e(Tr(α/δ)) with δ = 4ω³.
    Different,
}

impl AdditiveMode {
    pub const ALL: [AdditiveMode; 2] = [AdditiveMode::Plain, AdditiveMode::Different];

    /// The exact phase t with character value e(t).
    pub fn phase(self, alpha: &FieldElem) -> BigRational {
        match self {
            AdditiveMode::Plain => alpha.trace(),
            AdditiveMode::Different => alpha.trace_over_different(),
        }
    }
}

impl fmt::Display for AdditiveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdditiveMode::Plain => "plain",
            AdditiveMode::Different => "different",
        })
    }
}

impl FromStr for AdditiveMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plain" => Ok(AdditiveMode::Plain),
            "different" | "diff" => Ok(AdditiveMode::Different),
            _ => Err(Error::Invalid(format!("unknown additive mode '{s}'"))),
        }
    }
}

/// The generator δ = 4ω³ of the different.
pub fn different() -> CycInt {
    CycInt::from_i64s([0, 0, 0, 4])
}

/// e(k/d) for 0 ≤ k < d; the single place where phases become floats.
#[inline]
pub fn root_of_unity(k: u64, d: u64) -> Complex64 {
    let t = (k % d) as f64 / d as f64;
    let (s, c) = (std::f64::consts::TAU * t).sin_cos();
    Complex64::new(c, s)
}

/// e(t) for an exact rational t, reduced mod 1 first.
pub fn exp_rational(t: &BigRational) -> Complex64 {
    let f = frac(t);
    if f.is_zero() {
        return Complex64::new(1.0, 0.0);
    }
    match (f.numer().to_u64(), f.denom().to_u64()) {
        (Some(k), Some(d)) => root_of_unity(k, d),
        _ => {
            let x = f.to_f64().unwrap_or(0.0);
            let (s, c) = (std::f64::consts::TAU * x).sin_cos();
            Complex64::new(c, s)
        }
    }
}

/// e(Tr(α)) or e(Tr(α/δ)).
pub fn additive_char(alpha: &FieldElem, mode: AdditiveMode) -> Complex64 {
    exp_rational(&mode.phase(alpha))
}

/// ψ_c(y) := additive_char(y/c) as an integer linear functional mod D:
/// ψ_c(y) = e((Σ yᵢ·tᵢ)/D) on coordinates of y.
#[derive(Clone, Debug)]
pub struct PhaseMap {
    coeffs: [u64; 4],
    denom: u64,
    table: Option<std::sync::Arc<Vec<Complex64>>>,
}

const PHASE_TABLE_LIMIT: u64 = 1 << 20;

impl PhaseMap {
    pub fn new(c: &Modulus, mode: AdditiveMode) -> Self {
        let phases: Vec<BigRational> = (0..4)
            .map(|i| mode.phase(&FieldElem::quotient(&CycInt::omega_pow(i), c.elem())))
            .collect();
        Self::from_phases(&phases)
    }

    fn from_phases(phases: &[BigRational]) -> Self {
        let denom = phases
            .iter()
            .fold(BigInt::from(1), |acc, t| acc.lcm(t.denom()));
        let d = denom.to_u64().expect("phase denominator fits in u64");
        let coeffs: [u64; 4] = std::array::from_fn(|i| {
            let v = (phases[i].numer() * (&denom / phases[i].denom())).mod_floor(&denom);
            v.to_u64().expect("reduced")
        });
        let table = (d <= PHASE_TABLE_LIMIT)
            .then(|| std::sync::Arc::new((0..d).map(|k| root_of_unity(k, d)).collect()));
        PhaseMap {
            coeffs,
            denom: d,
            table,
        }
    }

    /// The functional y ↦ L(r·y), i.e. ψ_c(r·y); `ring` must be R/c.
    pub fn scaled(&self, ring: &ResidueRing, r: &Res) -> Self {
        let coeffs: [u64; 4] = std::array::from_fn(|i| {
            let w = ring.from_cycint(&CycInt::omega_pow(i as i64));
            self.phase(&ring.mul(r, &w))
        });
        PhaseMap {
            coeffs,
            denom: self.denom,
            table: self.table.clone(),
        }
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    /// Integer phase k with ψ_c(y) = e(k/D).
    #[inline]
    pub fn phase(&self, y: &Res) -> u64 {
        let d = self.denom as u128;
        let mut s: u128 = 0;
        for i in 0..4 {
            s += (y[i].rem_euclid(self.denom as i64) as u128) * self.coeffs[i] as u128;
        }
        (s % d) as u64
    }

    pub fn phase_big(&self, y: &CycInt) -> u64 {
        let d = BigInt::from(self.denom);
        let mut s = BigInt::zero();
        for i in 0..4 {
            s += y.coeff(i) * BigInt::from(self.coeffs[i]);
        }
        s.mod_floor(&d).to_u64().expect("reduced")
    }

    #[inline]
    pub fn root(&self, k: u64) -> Complex64 {
        match &self.table {
            Some(t) => t[(k % self.denom) as usize],
            None => root_of_unity(k, self.denom),
        }
    }

    #[inline]
    pub fn eval(&self, y: &Res) -> Complex64 {
        self.root(self.phase(y))
    }

    pub fn eval_big(&self, y: &CycInt) -> Complex64 {
        self.root(self.phase_big(y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn integral_arguments_are_trivial() {
        let y = FieldElem::from(&CycInt::from_i64s([3, -5, 7, 11]));
        for mode in AdditiveMode::ALL {
            assert!(close(additive_char(&y, mode), Complex64::one()));
        }
        assert!(close(
            additive_char(&FieldElem::zero(), AdditiveMode::Plain),
            Complex64::one()
        ));
    }

    #[test]
    fn trace_of_inverse_different_is_integral() {
        for i in 0..4 {
            let t = AdditiveMode::Different.phase(&FieldElem::from(&CycInt::omega_pow(i)));
            assert!(t.is_integer());
        }
    }

    #[test]
    fn phase_map_matches_exact_character() {
        let c = Modulus::new(CycInt::from_i64s([3, 1, 0, 2])).unwrap();
        for mode in AdditiveMode::ALL {
            let pm = PhaseMap::new(&c, mode);
            for y in [[1, 0, 0, 0], [5, -3, 2, 9], [0, 0, 0, 1]] {
                let y = CycInt::from_i64s(y);
                let exact = additive_char(&FieldElem::quotient(&y, c.elem()), mode);
                assert!(close(pm.eval_big(&y), exact));
                assert!(close(pm.eval(&c.ring().from_cycint(&y)), exact));
            }
        }
    }

    #[test]
    fn orthogonality_for_non_units() {
        let c = Modulus::new(CycInt::from(3)).unwrap();
        for mode in AdditiveMode::ALL {
            let pm = PhaseMap::new(&c, mode);
            let s: Complex64 = c.ring().iter().map(|y| pm.eval(&y)).sum();
            assert!(s.norm() < 1e-9);
        }
    }
}
