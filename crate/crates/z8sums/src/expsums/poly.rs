use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::DirichletChar;
use crate::error::{Error, Result};
use crate::ring::{CycInt, Res, ResidueRing};

/// A sparse polynomial Σ aⱼ·x^{eⱼ} with coefficients in R.
///
/// Terms are kept sorted by exponent; exponents are distinct. The text form
/// is a comma-separated list of `coef:exp` terms, where `coef` is an integer
/// or a bracketed coordinate vector, e.g. `1:3` or `[1,0,2,0]:4,4:2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PolySpec {
    terms: Vec<(CycInt, u32)>,
}

impl PolySpec {
    pub fn new(terms: Vec<(CycInt, u32)>) -> Result<Self> {
        let mut terms = terms;
        terms.sort_by_key(|t| t.1);
        if terms.windows(2).any(|w| w[0].1 == w[1].1) {
            return Err(Error::Invalid("repeated exponent in polynomial".into()));
        }
        Ok(PolySpec { terms })
    }

    pub fn zero() -> Self {
        PolySpec { terms: Vec::new() }
    }

    pub fn monomial(coef: impl Into<CycInt>, exp: u32) -> Self {
        PolySpec {
            terms: vec![(coef.into(), exp)],
        }
    }

    /// A·x⁴ + B·x².
    pub fn quartic(a: &CycInt, b: &CycInt) -> Self {
        PolySpec {
            terms: vec![(b.clone(), 2), (a.clone(), 4)],
        }
    }

    /// A·x² + B·x.
    pub fn quadratic(a: &CycInt, b: &CycInt) -> Self {
        PolySpec {
            terms: vec![(b.clone(), 1), (a.clone(), 2)],
        }
    }

    pub fn terms(&self) -> &[(CycInt, u32)] {
        &self.terms
    }

    /// Coefficient of x^e (zero when absent).
    pub fn coeff(&self, e: u32) -> CycInt {
        self.terms
            .iter()
            .find(|t| t.1 == e)
            .map_or_else(CycInt::zero, |t| t.0.clone())
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|t| !t.0.is_zero())
            .map(|t| t.1)
            .max()
            .unwrap_or(0)
    }

    /// Every exponent is even, so f(−x) = f(x).
    pub fn is_even(&self) -> bool {
        self.terms.iter().all(|t| t.1 % 2 == 0 || t.0.is_zero())
    }

    /// The same polynomial with every coefficient multiplied by `k`.
    pub fn scaled(&self, k: &CycInt) -> Self {
        PolySpec {
            terms: self.terms.iter().map(|(a, e)| (a * k, *e)).collect(),
        }
    }

    pub fn eval(&self, x: &CycInt) -> CycInt {
        self.terms
            .iter()
            .fold(CycInt::zero(), |acc, (a, e)| &acc + &(a * &x.pow(*e)))
    }

    pub fn eval_res(&self, ring: &ResidueRing, x: &Res) -> Res {
        let mut acc = ring.zero();
        for (a, e) in &self.terms {
            let t = ring.mul(&ring.from_cycint(a), &ring.pow(x, *e as u64));
            acc = ring.add(&acc, &t);
        }
        acc
    }
}

impl fmt::Display for PolySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0:0");
        }
        // highest degree first
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(a, e)| match a.as_rational_integer() {
                Some(n) => format!("{n}:{e}"),
                None => format!("{a}:{e}"),
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Split on commas outside brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl FromStr for PolySpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Invalid("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        for part in split_top_level(s) {
            let part = part.trim();
            let (coef, exp) = part
                .rsplit_once(':')
                .ok_or_else(|| Error::Invalid(format!("term '{part}' is not coef:exp")))?;
            let exp: u32 = exp
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad exponent in '{part}'")))?;
            terms.push((coef.trim().parse::<CycInt>()?, exp));
        }
        PolySpec::new(terms)
    }
}

impl TryFrom<String> for PolySpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PolySpec> for String {
    fn from(p: PolySpec) -> String {
        p.to_string()
    }
}

/// Optional multiplicative weight on the summation variable.
#[derive(Clone, Debug, Default)]
pub enum TwistSpec {
    #[default]
    None,
    /// (x/c)_k with k ∈ {2, 4}; the sum runs over units.
    ResidueSymbol(u32),
    /// θ(x) for a character whose modulus divides c.
    Dirichlet(DirichletChar),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Closed,
    Assembled,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SumValue {
    pub value: Complex64,
    pub modulus_norm: u64,
    pub method: Method,
}

impl SumValue {
    pub fn new(value: Complex64, modulus_norm: u64, method: Method) -> Self {
        SumValue {
            value,
            modulus_norm,
            method,
        }
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }
}
