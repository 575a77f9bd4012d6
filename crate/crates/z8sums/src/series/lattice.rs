use serde::{Deserialize, Serialize};

use super::weight::SmoothWeight;
use crate::error::{Error, Result};
use crate::ring::CycInt;

/// How X enters the weight: Ψ(√X/|c^η|²) or Ψ(X/|c^η|²).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScale {
    #[default]
    SqrtX,
    X,
}

impl WeightScale {
    pub fn of(self, x: f64) -> f64 {
        match self {
            WeightScale::SqrtX => x.sqrt(),
            WeightScale::X => x,
        }
    }
}

/// Boxes with more candidate tuples than this are refused.
pub const MAX_BOX_POINTS: u64 = 2_000_000_000;

/// A lattice point together with its two embedding magnitudes |c^{η₁}|², |c^{η₂}|².
#[derive(Clone, Debug)]
pub struct LatticePoint {
    pub c: CycInt,
    pub abs_sq: (f64, f64),
}

/// |η₁(c)|² and |η₂(c)|² for integer coordinates.
pub(crate) fn embedding_abs_sq(c: [i64; 4]) -> (f64, f64) {
    let [a, b, cc, d] = c.map(|v| v as f64);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // ω ↦ e^{iπ/4} and ω ↦ e^{3iπ/4}
    let z1 = (a + h * b - h * d, h * b + cc + h * d);
    let z2 = (a - h * b + h * d, h * b - cc + h * d);
    (z1.0 * z1.0 + z1.1 * z1.1, z2.0 * z2.0 + z2.1 * z2.1)
}

/// All c ≡ 1 mod 4 with s/|c^{η₁}|² and s/|c^{η₂}|² inside the support of Ψ,
/// s = √X, in lexicographic coordinate order.
pub fn enumerate_weighted(x: f64, w: &SmoothWeight) -> Result<Vec<CycInt>> {
    Ok(enumerate_points(x, w, WeightScale::SqrtX)?
        .into_iter()
        .map(|p| p.c)
        .collect())
}

pub fn enumerate_points(x: f64, w: &SmoothWeight, scale: WeightScale) -> Result<Vec<LatticePoint>> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Invalid(format!("X = {x} must be positive")));
    }
    let s = scale.of(x);
    let (a, _) = w.support();
    // Each coordinate is an average of the four embeddings, so
    // |c_k| ≤ (|η₁(c)| + |η₂(c)|)/2 ≤ √(s/a).
    let m = (s / a).sqrt().floor() as i64 + 1;
    let per_axis = (2 * m / 4 + 1) as u64;
    if per_axis.saturating_pow(4) > MAX_BOX_POINTS {
        return Err(Error::TooLarge {
            norm: format!("{} box points", per_axis.saturating_pow(4)),
            bound: MAX_BOX_POINTS.to_string(),
        });
    }
    let first = |r: i64| -m + (r - (-m)).rem_euclid(4);
    let mut out = Vec::new();
    for c0 in (first(1)..=m).step_by(4) {
        for c1 in (first(0)..=m).step_by(4) {
            for c2 in (first(0)..=m).step_by(4) {
                for c3 in (first(0)..=m).step_by(4) {
                    let v = [c0, c1, c2, c3];
                    let (n1, n2) = embedding_abs_sq(v);
                    if n1 > 0.0 && n2 > 0.0 && w.contains(s / n1) && w.contains(s / n2) {
                        out.push(LatticePoint {
                            c: CycInt::from_i64s(v),
                            abs_sq: (n1, n2),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_sq_matches_exact_embeddings() {
        for v in [[1, 4, -8, 12], [5, 0, 0, 4], [-3, 8, 4, 0]] {
            let (a, b) = embedding_abs_sq(v);
            let (ea, eb) = CycInt::from_i64s(v).embeddings().abs_sq();
            assert!((a - ea).abs() < 1e-9 * ea.max(1.0));
            assert!((b - eb).abs() < 1e-9 * eb.max(1.0));
        }
    }

    #[test]
    fn empty_below_first_norm_and_bounds_hold() {
        let w = SmoothWeight::default();
        assert!(enumerate_weighted(0.01, &w).unwrap().is_empty());
        // c = 1 needs 1/2 < √X < 2
        assert_eq!(enumerate_weighted(1.0, &w).unwrap(), vec![CycInt::one()]);
        for x in [400.0, 1600.0] {
            let s = f64::sqrt(x);
            let cs = enumerate_weighted(x, &w).unwrap();
            assert!(!cs.is_empty());
            for c in &cs {
                assert!(c.is_one_mod_4());
                let (a, b) = c.embeddings().abs_sq();
                assert!(s / a > 0.5 && s / a < 2.0 && s / b > 0.5 && s / b < 2.0);
            }
        }
    }

    #[test]
    fn box_is_large_enough() {
        // brute force over a much larger box finds nothing extra
        let w = SmoothWeight::default();
        let x = 900.0;
        let s = f64::sqrt(x);
        let found = enumerate_weighted(x, &w).unwrap();
        let mut brute = Vec::new();
        let r = 30i64;
        for c0 in -r..=r {
            if (c0 - 1).rem_euclid(4) != 0 {
                continue;
            }
            for c1 in (-r..=r).filter(|v| v % 4 == 0) {
                for c2 in (-r..=r).filter(|v| v % 4 == 0) {
                    for c3 in (-r..=r).filter(|v| v % 4 == 0) {
                        let (a, b) = embedding_abs_sq([c0, c1, c2, c3]);
                        if a > 0.0 && b > 0.0 && w.contains(s / a) && w.contains(s / b) {
                            brute.push(CycInt::from_i64s([c0, c1, c2, c3]));
                        }
                    }
                }
            }
        }
        assert_eq!(found, brute);
    }
}
