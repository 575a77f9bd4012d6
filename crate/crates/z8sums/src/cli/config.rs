use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

use crate::characters::AdditiveMode;
use crate::expsums::PolySpec;
use crate::ring::CycInt;
use crate::series::{SeriesKind, WeightScale};

/// Prefix of environment variables that override config keys, e.g.
/// `Z8SUMS_SEED=7` or `Z8SUMS_X_MAX=4096`.
pub const ENV_PREFIX: &str = "Z8SUMS_";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    Sum,
    Fit,
    Table,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Sum => "sum",
            Command::Fit => "fit",
            Command::Table => "table",
        }
    }
}

impl FromStr for Command {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "verify" => Command::Verify,
            "sum" => Command::Sum,
            "fit" => Command::Fit,
            "table" => Command::Table,
            _ => bail!("unknown command '{s}'"),
        })
    }
}

/// Which series `sum` computes: Patterson sums over Z or one of the
/// weighted series over Z[ω₈].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumKind {
    Patterson,
    Ring(SeriesKind),
}

impl fmt::Display for SumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SumKind::Patterson => f.write_str("patterson"),
            SumKind::Ring(k) => f.write_str(k.name()),
        }
    }
}

impl FromStr for SumKind {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "patterson" || s == "z" {
            return Ok(SumKind::Patterson);
        }
        s.parse().map(SumKind::Ring).map_err(|_| anyhow!("unknown series kind '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharSelector {
    Trivial,
    Quadratic,
    Quartic,
    Index(usize),
}

impl fmt::Display for CharSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharSelector::Trivial => f.write_str("trivial"),
            CharSelector::Quadratic => f.write_str("quadratic"),
            CharSelector::Quartic => f.write_str("quartic"),
            CharSelector::Index(n) => write!(f, "idx:{n}"),
        }
    }
}

impl FromStr for CharSelector {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "trivial" => CharSelector::Trivial,
            "quadratic" => CharSelector::Quadratic,
            "quartic" => CharSelector::Quartic,
            _ => match s.strip_prefix("idx:") {
                Some(n) => CharSelector::Index(n.parse().with_context(|| format!("bad character index '{n}'"))?),
                None => bail!("unknown character selector '{s}'"),
            },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    /// Local factors T_{p^j,p}(θ) against the tabulated pattern.
    T,
    /// Cutoff tables of the fourth-power partial sums.
    Theta,
}

impl FromStr for TableKind {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t" => Ok(TableKind::T),
            "theta" => Ok(TableKind::Theta),
            _ => bail!("unknown table '{s}'"),
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableKind::T => "t",
            TableKind::Theta => "theta",
        })
    }
}

/// Everything a run needs. Optional fields print as `auto` and fall back
/// to per-command defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Empty means every suite.
    pub suites: Vec<String>,
    pub poly: Option<PolySpec>,
    pub kind: SumKind,
    pub d: CycInt,
    pub character: CharSelector,
    pub weight: (f64, f64),
    pub scale: WeightScale,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub x_ratio: f64,
    pub seed: u64,
    pub workers: Option<usize>,
    pub mode: Option<AdditiveMode>,
    pub out: Option<PathBuf>,
    pub timing: bool,
    pub norm_bound: Option<u64>,
    pub prime_bound: Option<u64>,
    pub cases: Option<usize>,
    pub threshold: Option<f64>,
    pub table: TableKind,
    pub prime: u64,
    pub prime_index: usize,
    pub j_max: u32,
    pub s: Vec<f64>,
    pub cutoffs: Vec<u64>,
    pub input: Option<PathBuf>,
    pub window: Option<usize>,
    pub expected: Option<f64>,
    pub band: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Verify,
            suites: Vec::new(),
            poly: None,
            kind: SumKind::Patterson,
            d: CycInt::one(),
            character: CharSelector::Trivial,
            weight: (0.5, 2.0),
            scale: WeightScale::SqrtX,
            x_min: None,
            x_max: None,
            x_ratio: 2.0,
            seed: 1,
            workers: None,
            mode: None,
            out: None,
            timing: true,
            norm_bound: None,
            prime_bound: None,
            cases: None,
            threshold: None,
            table: TableKind::T,
            prime: 17,
            prime_index: 0,
            j_max: 4,
            s: vec![1.5, 1.26],
            cutoffs: vec![2500, 5000, 10000, 20000],
            input: None,
            window: None,
            expected: None,
            band: crate::series::FIT_BAND,
        }
    }
}

pub const KEYS: [&str; 30] = [
    "command",
    "suites",
    "poly",
    "kind",
    "d",
    "char",
    "weight",
    "scale",
    "x_min",
    "x_max",
    "x_ratio",
    "seed",
    "workers",
    "mode",
    "out",
    "timing",
    "norm_bound",
    "prime_bound",
    "cases",
    "threshold",
    "table",
    "prime",
    "prime_index",
    "j_max",
    "s",
    "cutoffs",
    "input",
    "window",
    "expected",
    "band",
];

fn opt<T: FromStr>(v: &str) -> Result<Option<T>>
where
    T::Err: fmt::Display,
{
    if v == "auto" || v.is_empty() {
        Ok(None)
    } else {
        v.parse().map(Some).map_err(|e| anyhow!("{e}"))
    }
}

fn parse<T: FromStr>(v: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    v.parse().map_err(|e| anyhow!("{e}"))
}

fn list<T: FromStr>(v: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(parse).collect()
}

fn show<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "auto".to_string(), |x| x.to_string())
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn normalize_key(k: &str) -> String {
    k.trim().to_ascii_lowercase().replace('-', "_")
}

impl RunConfig {
    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let key = normalize_key(key);
        let ctx = || format!("config key '{key}' = '{v}'");
        (|| -> Result<()> {
            match key.as_str() {
                "command" => self.command = parse(v)?,
                "suites" | "suite" => {
                    self.suites = if v == "all" { Vec::new() } else { list(v)? };
                }
                "poly" => self.poly = opt(v)?,
                "kind" => self.kind = parse(v)?,
                "d" => self.d = parse(v)?,
                "char" => self.character = parse(v)?,
                "weight" => {
                    let w: Vec<f64> = list(v)?;
                    let [a, b] = w[..] else { bail!("weight needs two numbers a,b") };
                    self.weight = (a, b);
                }
                "scale" => {
                    self.scale = match v {
                        "sqrt_x" => WeightScale::SqrtX,
                        "x" => WeightScale::X,
                        _ => bail!("scale must be sqrt_x or x"),
                    }
                }
                "x_min" => self.x_min = opt(v)?,
                "x_max" => self.x_max = opt(v)?,
                "x_ratio" => self.x_ratio = parse(v)?,
                "seed" => self.seed = parse(v)?,
                "workers" => self.workers = opt(v)?,
                "mode" => self.mode = opt(v)?,
                "out" => self.out = (v != "-" && !v.is_empty()).then(|| PathBuf::from(v)),
                "timing" => self.timing = parse(v)?,
                "norm_bound" => self.norm_bound = opt(v)?,
                "prime_bound" => self.prime_bound = opt(v)?,
                "cases" => self.cases = opt(v)?,
                "threshold" => self.threshold = opt(v)?,
                "table" => self.table = parse(v)?,
                "prime" => self.prime = parse(v)?,
                "prime_index" => self.prime_index = parse(v)?,
                "j_max" => self.j_max = parse(v)?,
                "s" => self.s = list(v)?,
                "cutoffs" => self.cutoffs = list(v)?,
                "input" => self.input = (!v.is_empty()).then(|| PathBuf::from(v)),
                "window" => self.window = opt(v)?,
                "expected" => self.expected = opt(v)?,
                "band" => self.band = parse(v)?,
                _ => bail!("unknown key"),
            }
            Ok(())
        })()
        .with_context(ctx)
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn parse_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", n + 1))?;
            self.set(k, v).with_context(|| format!("line {}", n + 1))?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        c.parse_text(text)?;
        Ok(c)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_text(&text)
    }

    /// Applies `Z8SUMS_<KEY>` variables, ignoring unrelated ones.
    pub fn apply_env(&mut self, vars: impl IntoIterator<Item = (String, String)>) -> Result<()> {
        for (k, v) in vars {
            let Some(key) = k.strip_prefix(ENV_PREFIX) else { continue };
            let key = normalize_key(key);
            if KEYS.contains(&key.as_str()) {
                self.set(&key, &v).with_context(|| format!("environment variable {k}"))?;
            }
        }
        Ok(())
    }

    /// Canonical text form: every key, in a fixed order.
    pub fn to_canonical(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let v = match key {
                "command" => self.command.name().to_string(),
                "suites" if self.suites.is_empty() => "all".into(),
                "suites" => self.suites.join(","),
                "poly" => show(&self.poly),
                "kind" => self.kind.to_string(),
                "d" => self.d.to_string(),
                "char" => self.character.to_string(),
                "weight" => format!("{},{}", self.weight.0, self.weight.1),
                "scale" => match self.scale {
                    WeightScale::SqrtX => "sqrt_x".into(),
                    WeightScale::X => "x".into(),
                },
                "x_min" => show(&self.x_min),
                "x_max" => show(&self.x_max),
                "x_ratio" => self.x_ratio.to_string(),
                "seed" => self.seed.to_string(),
                "workers" => show(&self.workers),
                "mode" => show(&self.mode),
                "out" => self.out.as_ref().map_or("-".into(), |p| p.display().to_string()),
                "timing" => self.timing.to_string(),
                "norm_bound" => show(&self.norm_bound),
                "prime_bound" => show(&self.prime_bound),
                "cases" => show(&self.cases),
                "threshold" => show(&self.threshold),
                "table" => self.table.to_string(),
                "prime" => self.prime.to_string(),
                "prime_index" => self.prime_index.to_string(),
                "j_max" => self.j_max.to_string(),
                "s" => join(&self.s),
                "cutoffs" => join(&self.cutoffs),
                "input" => self.input.as_ref().map_or(String::new(), |p| p.display().to_string()),
                "window" => show(&self.window),
                "expected" => show(&self.expected),
                "band" => self.band.to_string(),
                _ => unreachable!(),
            };
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        }
        out
    }

    /// The polynomial, defaulting to x³ over Z and x⁴ + 4x² over Z[ω₈].
    pub fn poly_or_default(&self) -> PolySpec {
        self.poly.clone().unwrap_or_else(|| match self.kind {
            SumKind::Patterson => PolySpec::monomial(1, 3),
            SumKind::Ring(_) => PolySpec::quartic(&CycInt::one(), &CycInt::from(4)),
        })
    }

    /// The X grid bounds; 2¹⁰..2¹⁷ over Z and 2⁶..2¹⁴ over Z[ω₈] unless set.
    pub fn grid_bounds(&self) -> (f64, f64) {
        let (lo, hi) = match self.kind {
            SumKind::Patterson => (1024.0, 131072.0),
            SumKind::Ring(_) => (64.0, 16384.0),
        };
        (self.x_min.unwrap_or(lo), self.x_max.unwrap_or(hi))
    }
}
