//! The `z8sums` command line: verification suites, series, exponent fits
//! and local-factor tables, driven by a flat [`RunConfig`].

mod config;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;

use crate::characters::{dirichlet_enumerate, AdditiveMode, DirichletChar};
use crate::ring::{primes_above, zarith, CycInt, Modulus};
use crate::series::{
    expected_exponent, fit_exponent, geometric_grid, patterson_series, theta_partial, weighted_series_with,
    write_csv, FitReport, PattersonOptions, SeriesOptions, SeriesParams, SeriesPoint, SmoothWeight,
};

pub use config::{CharSelector, Command, RunConfig, SumKind, TableKind, ENV_PREFIX, KEYS};
pub use verify::{run_suite, run_suites, t_rows, SuiteReport, Sweep, TRow, VerifyReport, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs the configured command and maps errors to exit code 2.
pub fn run(cfg: &RunConfig) -> i32 {
    let r = match cfg.command {
        Command::Verify => run_verify(cfg),
        Command::Sum => run_sum(cfg),
        Command::Fit => run_fit(cfg),
        Command::Table => run_table(cfg),
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

/// Summary lines go to stdout unless stdout already carries the data.
fn note(cfg: &RunConfig, line: &str) {
    if cfg.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

/// The sweep for one suite: quick defaults with the config's overrides.
pub fn sweep_for(cfg: &RunConfig, suite: &str) -> Sweep {
    let mut s = Sweep::quick(suite, cfg.seed);
    if let Some(v) = cfg.norm_bound {
        s.norm_bound = v;
    }
    if let Some(v) = cfg.prime_bound {
        s.prime_bound = v;
    }
    if let Some(v) = cfg.cases {
        s.cases = v;
    }
    if let Some(v) = cfg.threshold {
        s.threshold = v;
    }
    if let Some(m) = cfg.mode {
        s.mode = m;
    }
    s
}

pub fn run_verify(cfg: &RunConfig) -> Result<i32> {
    let names: Vec<String> = if cfg.suites.is_empty() {
        SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        cfg.suites.clone()
    };
    let report = crate::series::with_workers(cfg.workers, || run_suites(&names, |s| sweep_for(cfg, s)))?;
    let mut out = sink(cfg.out.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    for s in &report.suites {
        note(
            cfg,
            &format!(
                "{:<16} {} cases={} worst={:.3e} at {}",
                s.statement_id,
                if s.passed { "PASS" } else { "FAIL" },
                s.cases,
                s.worst_relative,
                s.worst_modulus
            ),
        );
    }
    if report.passed {
        Ok(EXIT_OK)
    } else {
        eprintln!("failing statements: {}", report.failing.join(", "));
        Ok(EXIT_FAILED)
    }
}

/// The character of `sel` on (R/D)^*.
pub fn select_char(d: &CycInt, sel: CharSelector) -> Result<DirichletChar> {
    let m = Arc::new(Modulus::new(d.clone())?);
    Ok(match sel {
        CharSelector::Trivial => DirichletChar::trivial(m)?,
        CharSelector::Quadratic => DirichletChar::residue_symbol(m, 2)?,
        CharSelector::Quartic => DirichletChar::residue_symbol(m, 4)?,
        CharSelector::Index(n) => {
            let all = dirichlet_enumerate(m)?;
            let count = all.len();
            all.into_iter()
                .nth(n)
                .ok_or_else(|| anyhow!("character index {n} out of range ({count} characters mod {d})"))?
        }
    })
}

/// A, B, F of Ax⁴ + Bx² + F from the configured polynomial.
fn quartic_coefficients(cfg: &RunConfig) -> Result<SeriesParams> {
    let f = cfg.poly_or_default();
    if let Some((_, e)) = f.terms().iter().find(|(_, e)| ![0, 2, 4].contains(e)) {
        bail!("the series needs Ax⁴ + Bx² + F; found a term of degree {e}");
    }
    Ok(SeriesParams::new(f.coeff(4), f.coeff(2), f.coeff(0), cfg.d.clone())?)
}

/// Computes every X of the configured grid.
pub fn compute_sum(cfg: &RunConfig) -> Result<Vec<SeriesPoint>> {
    let (lo, hi) = cfg.grid_bounds();
    let grid = geometric_grid(lo, hi, cfg.x_ratio);
    if grid.is_empty() {
        bail!("empty X grid ({lo}..{hi}, ratio {})", cfg.x_ratio);
    }
    match cfg.kind {
        SumKind::Patterson => {
            let xs: Vec<u64> = grid.iter().map(|x| x.round() as u64).collect();
            let opts = PattersonOptions {
                workers: cfg.workers,
                ..PattersonOptions::default()
            };
            Ok(patterson_series(&cfg.poly_or_default(), &xs, opts)?)
        }
        SumKind::Ring(kind) => {
            let params = quartic_coefficients(cfg)?;
            let theta = select_char(&cfg.d, cfg.character)?;
            let opts = SeriesOptions {
                weight: SmoothWeight::bump(cfg.weight.0, cfg.weight.1)?,
                scale: cfg.scale,
                mode: cfg.mode.unwrap_or(AdditiveMode::Plain),
                workers: cfg.workers,
            };
            grid.iter()
                .map(|&x| Ok(weighted_series_with(kind, &params, &theta, &opts, x)?))
                .collect()
        }
    }
}

pub fn run_sum(cfg: &RunConfig) -> Result<i32> {
    let points = compute_sum(cfg)?;
    let mut out = sink(cfg.out.as_deref())?;
    write_csv(&points, &mut out, cfg.timing)?;
    out.flush()?;
    for p in &points {
        note(
            cfg,
            &format!(
                "{} X={} |S|={:.6e} S={:.6e}{:+.6e}i terms={} {}ms",
                cfg.kind,
                p.x,
                p.value.norm(),
                p.value.re,
                p.value.im,
                p.term_count,
                p.elapsed.as_millis()
            ),
        );
    }
    Ok(EXIT_OK)
}

#[derive(Deserialize)]
struct CsvIn {
    #[serde(rename = "X")]
    x: f64,
    re: f64,
    im: f64,
}

/// Points of a CSV written by `sum`; only X, re and im are read.
pub fn read_points(path: &Path) -> Result<Vec<SeriesPoint>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    r.deserialize()
        .map(|row| {
            let row: CsvIn = row?;
            Ok(SeriesPoint::new(row.x, Complex64::new(row.re, row.im), 0, Duration::ZERO))
        })
        .collect()
}

/// Fits the exponent of `points` against the prediction for the configured
/// polynomial (Patterson sums only) or the explicit `expected` value.
pub fn fit_report(cfg: &RunConfig, points: &[SeriesPoint]) -> Result<FitReport> {
    let fit = fit_exponent(points, cfg.window)?;
    let expected = cfg.expected.or_else(|| match cfg.kind {
        SumKind::Patterson => expected_exponent(&cfg.poly_or_default()),
        SumKind::Ring(_) => None,
    });
    Ok(FitReport::with_band(cfg.kind.to_string(), &fit, cfg.window, expected, cfg.band))
}

pub fn run_fit(cfg: &RunConfig) -> Result<i32> {
    let points = match &cfg.input {
        Some(p) => read_points(p)?,
        None => compute_sum(cfg)?,
    };
    let report = fit_report(cfg, &points)?;
    let mut out = sink(cfg.out.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    note(cfg, &format!("slope {:.4} ± {:.4}: {}", report.slope, report.stderr, report.verdict));
    Ok(if report.verdict == "inconsistent" { EXIT_FAILED } else { EXIT_OK })
}

/// Residue count above which the local-factor table is refused.
const TABLE_LIMIT: u64 = 20_000_000;

/// The prime ideal picked by `prime` and `prime_index`.
pub fn select_prime(cfg: &RunConfig) -> Result<CycInt> {
    let q = cfg.prime;
    if q == 2 || !zarith::is_prime(q) {
        bail!("prime selector {q} is not an odd rational prime");
    }
    let above = primes_above(q);
    let count = above.len();
    above
        .into_iter()
        .nth(cfg.prime_index)
        .ok_or_else(|| anyhow!("prime index {} out of range ({count} primes above {q})", cfg.prime_index))
}

pub fn run_table(cfg: &RunConfig) -> Result<i32> {
    let mut out = sink(cfg.out.as_deref())?;
    let mut w = csv::Writer::from_writer(&mut out);
    match cfg.table {
        TableKind::T => {
            let p = select_prime(cfg)?;
            let np = u64::try_from(p.norm())?;
            if np.checked_pow(cfg.j_max.max(1)).is_none_or(|n| n > TABLE_LIMIT) {
                bail!("N(p)^{} is too large to sum directly", cfg.j_max);
            }
            w.write_record(["prime", "norm", "j", "order", "class", "table", "primitive", "literal_re", "literal_im", "matches"])?;
            let mut all = true;
            for r in t_rows(&p, cfg.j_max)? {
                let ok = (r.primitive - r.table as f64).norm() < 1e-6;
                all &= ok;
                w.serialize((
                    &r.prime,
                    r.norm,
                    r.j,
                    r.order,
                    r.class,
                    r.table,
                    r.primitive.re.round() as i128,
                    r.literal.re,
                    r.literal.im,
                    ok,
                ))?;
            }
            w.flush()?;
            drop(w);
            out.flush()?;
            Ok(if all { EXIT_OK } else { EXIT_FAILED })
        }
        TableKind::Theta => {
            let theta = select_char(&cfg.d, cfg.character)?;
            w.write_record(["s", "T", "re", "im", "abs", "ideal_re", "ideal_im", "ratio_re", "ratio_im", "rel_change"])?;
            for &s in &cfg.s {
                let mut prev: Option<Complex64> = None;
                for &t in &cfg.cutoffs {
                    let tp = theta_partial(&theta, s, t)?;
                    let v = tp.partial_sum;
                    let change = prev.map_or(f64::NAN, |p| (v - p).norm() / v.norm());
                    let r = tp.ratio();
                    w.serialize((s, t, v.re, v.im, v.norm(), tp.l_ratio_partial.re, tp.l_ratio_partial.im, r.re, r.im, change))?;
                    prev = Some(v);
                }
            }
            w.flush()?;
            drop(w);
            out.flush()?;
            Ok(EXIT_OK)
        }
    }
}
