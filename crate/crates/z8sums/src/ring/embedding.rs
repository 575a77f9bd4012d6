use std::f64::consts::FRAC_PI_4;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::CycInt;

/// Images of an element under ω ↦ e^{iπ/4} and ω ↦ e^{3iπ/4}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingPair {
    pub eta1: Complex64,
    pub eta2: Complex64,
}

impl EmbeddingPair {
    pub fn of(x: &CycInt) -> Self {
        let c = x.to_f64s();
        let z1 = Complex64::from_polar(1.0, FRAC_PI_4);
        let z2 = Complex64::from_polar(1.0, 3.0 * FRAC_PI_4);
        let eval = |z: Complex64| {
            // Horner in z
            let mut acc = Complex64::new(c[3], 0.0);
            for k in (0..3).rev() {
                acc = acc * z + c[k];
            }
            acc
        };
        EmbeddingPair {
            eta1: eval(z1),
            eta2: eval(z2),
        }
    }

    /// |η₁|², |η₂|².
    pub fn abs_sq(&self) -> (f64, f64) {
        (self.eta1.norm_sqr(), self.eta2.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        let (a, b) = self.abs_sq();
        a * b
    }
}

/// Inverse of the embedding map; returns the nearest lattice point if the
/// coordinates are representable.
pub(crate) fn from_embeddings(z1: Complex64, z2: Complex64) -> Option<CycInt> {
    let mut c = [0i64; 4];
    for (k, ck) in c.iter_mut().enumerate() {
        let a = Complex64::from_polar(1.0, -FRAC_PI_4 * k as f64);
        let b = Complex64::from_polar(1.0, -3.0 * FRAC_PI_4 * k as f64);
        let v = 0.5 * (z1 * a + z2 * b).re;
        if !v.is_finite() || v.abs() > 4.0e15 {
            return None;
        }
        *ck = v.round().to_i64()?;
    }
    Some(CycInt::new(c.map(BigInt::from)))
}
