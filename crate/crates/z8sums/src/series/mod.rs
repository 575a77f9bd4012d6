//! Sums of complete exponential sums: Patterson sums over Z, the smoothed
//! series over Z[ω₈] and its decomposition, predicted main terms, and the
//! partial sums behind the fourth-power pole.

mod fit;
mod lattice;
mod main_term;
mod mellin;
mod patterson;
mod theta;
mod weight;
mod weighted;

use std::io::Write;
use std::time::Duration;

use num_complex::Complex64;
use serde::Serialize;

pub use fit::{expected_exponent, fit_exponent, FitReport, FitResult, FIT_BAND};
pub use lattice::{enumerate_points, enumerate_weighted, LatticePoint, WeightScale, MAX_BOX_POINTS};
pub use main_term::{
    covolume, local_class, phi_ideal, quad_main_term, quad_main_term_with, t_density, t_factor, t_factor_direct,
    t_local, t_table, LocalClass, Normalization, TConvention,
};
pub use mellin::{integrate, mellin_hat, mellin_hat_tol};
pub use patterson::{direct_sum, patterson_series, patterson_sum_int, IntPoly, LocalSums, PattersonOptions, DEFAULT_CROSSOVER};
pub use theta::{odd_ideals, theta_partial, OddIdeal, ThetaPartial};
pub use weight::SmoothWeight;
pub use weighted::{
    modulus_terms, weighted_series, weighted_series_with, ModulusTerm, SeriesKind, SeriesOptions, SeriesParams,
};

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPoint {
    pub x: f64,
    pub value: Complex64,
    pub term_count: u64,
    pub elapsed: Duration,
}

impl SeriesPoint {
    pub fn new(x: f64, value: Complex64, term_count: u64, elapsed: Duration) -> Self {
        SeriesPoint {
            x,
            value,
            term_count,
            elapsed,
        }
    }
}

#[derive(Serialize)]
struct CsvRow {
    #[serde(rename = "X")]
    x: f64,
    re: f64,
    im: f64,
    abs: f64,
    term_count: u64,
    elapsed_ms: u128,
}

/// Writes X, re, im, abs, term_count, elapsed_ms. With `timing` off the
/// elapsed column is 0 so that output is reproducible byte for byte.
pub fn write_csv<W: Write>(points: &[SeriesPoint], out: W, timing: bool) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(CsvRow {
            x: p.x,
            re: p.value.re,
            im: p.value.im,
            abs: p.value.norm(),
            term_count: p.term_count,
            elapsed_ms: if timing { p.elapsed.as_millis() } else { 0 },
        })?;
    }
    w.flush()
}

/// Geometric grid x_min, x_min·r, … up to x_max (inclusive within rounding).
pub fn geometric_grid(x_min: f64, x_max: f64, ratio: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if !(x_min > 0.0 && ratio > 1.0 && x_max >= x_min) {
        return out;
    }
    let mut k = 0;
    loop {
        let x = x_min * ratio.powi(k);
        if x > x_max * (1.0 + 1e-12) {
            break;
        }
        out.push(x);
        k += 1;
    }
    out
}

/// Runs `f` on a pool of `workers` threads, or on the global pool.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}
