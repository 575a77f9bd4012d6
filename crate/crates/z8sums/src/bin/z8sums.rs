use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use z8sums::cli::{self, Command, RunConfig, EXIT_USAGE};

/// Exponential sums over Z[ω₈]: identity suites, series, exponent fits and
/// local-factor tables.
///
/// Settings are read from --config (key = value lines), then from
/// Z8SUMS_<KEY> environment variables, then from flags; later sources win.
#[derive(Parser)]
#[command(name = "z8sums", version)]
struct Args {
    #[command(subcommand)]
    command: Cmd,

    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Suite names, comma separated, or "all".
    #[arg(long, global = true, value_delimiter = ',')]
    suite: Vec<String>,
    /// Sparse polynomial "coef:exp,...", e.g. "1:3" or "1:4,4:2".
    #[arg(long, global = true)]
    poly: Option<String>,
    /// patterson, quartic_lhs, quadratic_lhs, kloosterman_rhs or cross_rhs.
    #[arg(long, global = true)]
    kind: Option<String>,
    /// Character modulus D, as "n" or "[a,b,c,d]".
    #[arg(long, global = true, allow_hyphen_values = true)]
    d: Option<String>,
    /// trivial, quadratic, quartic or idx:N.
    #[arg(long = "char", global = true)]
    character: Option<String>,
    /// Support "a,b" of the bump weight.
    #[arg(long, global = true)]
    weight: Option<String>,
    /// sqrt_x or x.
    #[arg(long, global = true)]
    scale: Option<String>,
    #[arg(long = "X-min", global = true)]
    x_min: Option<String>,
    #[arg(long = "X-max", global = true)]
    x_max: Option<String>,
    #[arg(long = "X-ratio", global = true)]
    x_ratio: Option<String>,
    /// plain or different.
    #[arg(long, global = true)]
    mode: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    workers: Option<String>,
    /// Output file; "-" or absent for stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
    /// Write 0 in the elapsed_ms column so reruns compare byte for byte.
    #[arg(long, global = true)]
    no_timing: bool,
    #[arg(long, global = true)]
    norm_bound: Option<String>,
    #[arg(long, global = true)]
    prime_bound: Option<String>,
    #[arg(long, global = true)]
    cases: Option<String>,
    /// Relative residual bound applied to every floating-point suite.
    #[arg(long, global = true)]
    threshold: Option<String>,
    /// t or theta.
    #[arg(long, global = true)]
    table: Option<String>,
    /// Rational prime below the prime ideal of the T table.
    #[arg(long, global = true)]
    prime: Option<String>,
    #[arg(long, global = true)]
    prime_index: Option<String>,
    #[arg(long, global = true)]
    j_max: Option<String>,
    /// Values of s for the theta table, comma separated.
    #[arg(long, global = true)]
    s: Option<String>,
    #[arg(long, global = true)]
    cutoffs: Option<String>,
    /// CSV to fit.
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<String>,
    #[arg(long, global = true)]
    window: Option<String>,
    #[arg(long, global = true)]
    expected: Option<String>,
    #[arg(long, global = true)]
    band: Option<String>,
    /// Any config key, as KEY=VALUE; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Print the resolved configuration and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Run identity suites and write a JSON report.
    Verify,
    /// Compute a series over the X grid and write CSV.
    Sum,
    /// Fit the growth exponent of a series CSV.
    Fit,
    /// Emit the local-factor or theta partial-sum table.
    Table,
}

fn resolve(args: &Args) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    cfg.apply_env(std::env::vars())?;
    cfg.command = match args.command {
        Cmd::Verify => Command::Verify,
        Cmd::Sum => Command::Sum,
        Cmd::Fit => Command::Fit,
        Cmd::Table => Command::Table,
    };
    if !args.suite.is_empty() {
        cfg.set("suites", &args.suite.join(","))?;
    }
    let flags = [
        ("poly", &args.poly),
        ("kind", &args.kind),
        ("d", &args.d),
        ("char", &args.character),
        ("weight", &args.weight),
        ("scale", &args.scale),
        ("x_min", &args.x_min),
        ("x_max", &args.x_max),
        ("x_ratio", &args.x_ratio),
        ("mode", &args.mode),
        ("seed", &args.seed),
        ("workers", &args.workers),
        ("out", &args.out),
        ("norm_bound", &args.norm_bound),
        ("prime_bound", &args.prime_bound),
        ("cases", &args.cases),
        ("threshold", &args.threshold),
        ("table", &args.table),
        ("prime", &args.prime),
        ("prime_index", &args.prime_index),
        ("j_max", &args.j_max),
        ("s", &args.s),
        ("cutoffs", &args.cutoffs),
        ("input", &args.input),
        ("window", &args.window),
        ("expected", &args.expected),
        ("band", &args.band),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if args.no_timing {
        cfg.timing = false;
    }
    for kv in &args.set {
        let (k, v) = kv.split_once('=').with_context(|| format!("--set expects KEY=VALUE, got '{kv}'"))?;
        cfg.set(k, v)?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match resolve(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    if args.print_config {
        print!("{}", cfg.to_canonical());
        return ExitCode::SUCCESS;
    }
    ExitCode::from(cli::run(&cfg) as u8)
}
