use serde::{Deserialize, Serialize};

use super::SeriesPoint;
use crate::error::{Error, Result};
use crate::expsums::PolySpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub points_used: usize,
}

/// Least-squares line through (log X, log |value|), optionally restricted to
/// the last `window` usable points.
pub fn fit_exponent(points: &[SeriesPoint], window: Option<usize>) -> Result<FitResult> {
    let mut usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.x > 0.0 && p.value.norm() > 0.0 && p.value.norm().is_finite())
        .map(|p| (p.x.ln(), p.value.norm().ln()))
        .collect();
    if let Some(w) = window {
        let skip = usable.len().saturating_sub(w);
        usable.drain(..skip);
    }
    let n = usable.len();
    if n < 3 {
        return Err(Error::Invalid(format!("need ≥ 3 usable points, got {n}")));
    }
    let nf = n as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Invalid("all X values coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = usable
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(FitResult {
        slope,
        intercept,
        stderr,
        points_used: n,
    })
}

/// Conjectured growth exponent of Σ_{c ≤ X} Σ_{x mod c} e(f(x)/c): 3/2 for
/// quadratics, otherwise 1 + 2/n when f(x) = f(a − x) for some a and
/// 1 + 1/n when not.
pub fn expected_exponent(f: &PolySpec) -> Option<f64> {
    let coeffs = rational_coeffs(f)?;
    let n = coeffs.len() - 1;
    match n {
        0 | 1 => None,
        2 => Some(1.5),
        _ => Some(if is_reflective(&coeffs) {
            1.0 + 2.0 / n as f64
        } else {
            1.0 + 1.0 / n as f64
        }),
    }
}

fn rational_coeffs(f: &PolySpec) -> Option<Vec<f64>> {
    let n = f.degree() as usize;
    let mut out = vec![0.0; n + 1];
    for (c, e) in f.terms().iter().filter(|t| !t.0.is_zero()) {
        let v = c.as_rational_integer()?;
        out[*e as usize] = num_traits::ToPrimitive::to_f64(v)?;
    }
    Some(out)
}

/// f(x) = f(a − x) for some a: with a = −2c_{n−1}/(n c_n) forced by the
/// x^{n−1} coefficient, compare g(t) = f(a/2 + t) against g(−t).
fn is_reflective(c: &[f64]) -> bool {
    let n = c.len() - 1;
    if n % 2 == 1 {
        return false;
    }
    let h = -c[n - 1] / (n as f64 * c[n]);
    // Taylor coefficients of f at h via repeated synthetic division.
    let mut work = c.to_vec();
    let mut shifted = vec![0.0; n + 1];
    for k in 0..=n {
        let mut acc = 0.0;
        for i in (k..=n).rev() {
            acc = acc * h + work[i];
            work[i] = acc;
        }
        shifted[k] = work[k];
    }
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    shifted
        .iter()
        .enumerate()
        .filter(|(k, _)| k % 2 == 1)
        .all(|(_, v)| v.abs() <= 1e-9 * scale)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitReport {
    pub kind: String,
    pub slope: f64,
    pub stderr: f64,
    pub window: Option<usize>,
    pub expected_exponent: Option<f64>,
    pub verdict: String,
}

/// Slopes within this distance of the expected exponent count as consistent.
pub const FIT_BAND: f64 = 0.09;

impl FitReport {
    pub fn new(kind: impl Into<String>, fit: &FitResult, window: Option<usize>, expected: Option<f64>) -> Self {
        Self::with_band(kind, fit, window, expected, FIT_BAND)
    }

    pub fn with_band(
        kind: impl Into<String>,
        fit: &FitResult,
        window: Option<usize>,
        expected: Option<f64>,
        band: f64,
    ) -> Self {
        let verdict = match expected {
            None => "no_prediction",
            Some(e) if (fit.slope - e).abs() <= band => "consistent",
            Some(_) => "inconsistent",
        };
        FitReport {
            kind: kind.into(),
            slope: fit.slope,
            stderr: fit.stderr,
            window,
            expected_exponent: expected,
            verdict: verdict.to_string(),
        }
    }
}
