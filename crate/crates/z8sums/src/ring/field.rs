use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::CycInt;

/// Element of Q(ω) with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElem {
    q: [BigRational; 4],
}

impl FieldElem {
    pub fn new(q: [BigRational; 4]) -> Self {
        FieldElem { q }
    }

    pub fn coeffs(&self) -> &[BigRational; 4] {
        &self.q
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// α / c for c ≠ 0, computed as α·σ₃σ₅σ₇(c) / N(c).
    pub fn quotient(alpha: &CycInt, c: &CycInt) -> Self {
        assert!(!c.is_zero(), "division by zero");
        let n = c.norm();
        let num = alpha * &c.conj_product();
        FieldElem {
            q: std::array::from_fn(|i| BigRational::new(num.coeff(i).clone(), n.clone())),
        }
    }

    /// Trace to Q: 4·q₀.
    pub fn trace(&self) -> BigRational {
        &self.q[0] * BigRational::from_integer(BigInt::from(4))
    }

    /// Tr(self/δ) with δ = 4ω³; since 1/δ = −ω/4 this is the ω³ coordinate.
    pub fn trace_over_different(&self) -> BigRational {
        self.q[3].clone()
    }

    /// Integral part test: all coordinates are integers.
    pub fn is_integral(&self) -> bool {
        self.q.iter().all(|x| x.is_integer())
    }

    /// The element as a CycInt if integral.
    pub fn to_cycint(&self) -> Option<CycInt> {
        if !self.is_integral() {
            return None;
        }
        Some(CycInt::new(std::array::from_fn(|i| self.q[i].to_integer())))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        FieldElem {
            q: std::array::from_fn(|i| &self.q[i] * k),
        }
    }
}

impl From<&CycInt> for FieldElem {
    fn from(x: &CycInt) -> Self {
        FieldElem {
            q: std::array::from_fn(|i| BigRational::from_integer(x.coeff(i).clone())),
        }
    }
}

impl From<CycInt> for FieldElem {
    fn from(x: CycInt) -> Self {
        FieldElem::from(&x)
    }
}

/// Fractional part in [0, 1).
pub fn frac(t: &BigRational) -> BigRational {
    t - t.floor()
}

/// Distance from t to the nearest integer.
pub fn dist_to_integer(t: &BigRational) -> BigRational {
    let f = frac(t);
    let g = BigRational::one() - &f;
    if f < g {
        f
    } else {
        g
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]", self.q[0], self.q[1], self.q[2], self.q[3])
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        FieldElem {
            q: std::array::from_fn(|i| &self.q[i] + &o.q[i]),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        FieldElem {
            q: std::array::from_fn(|i| &self.q[i] - &o.q[i]),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            q: std::array::from_fn(|i| -&self.q[i]),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        let mut out: [BigRational; 4] = std::array::from_fn(|_| BigRational::zero());
        for i in 0..4 {
            if self.q[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                let p = &self.q[i] * &o.q[j];
                let k = i + j;
                if k < 4 {
                    out[k] += p;
                } else {
                    out[k - 4] -= p;
                }
            }
        }
        FieldElem { q: out }
    }
}
