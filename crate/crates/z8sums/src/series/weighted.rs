use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lattice::{enumerate_points, LatticePoint, WeightScale};
use super::weight::SmoothWeight;
use super::{with_workers, SeriesPoint};
use crate::characters::{AdditiveMode, DirichletChar, PhaseMap};
use crate::error::{Error, Result};
use crate::expsums::{complete_sum, composite_terms, kloosterman_parts, s4_factored, times_symbol, PolySpec, TwistSpec};
use crate::numeric::CSum;
use crate::ring::{are_coprime, CycInt, Modulus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    QuarticLhs,
    QuadraticLhs,
    KloostermanRhs,
    CrossRhs,
}

impl SeriesKind {
    pub const ALL: [SeriesKind; 4] = [
        SeriesKind::QuarticLhs,
        SeriesKind::QuadraticLhs,
        SeriesKind::KloostermanRhs,
        SeriesKind::CrossRhs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::QuarticLhs => "quartic_lhs",
            SeriesKind::QuadraticLhs => "quadratic_lhs",
            SeriesKind::KloostermanRhs => "kloosterman_rhs",
            SeriesKind::CrossRhs => "cross_rhs",
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SeriesKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown series kind '{s}'")))
    }
}

/// Coefficients of Ax⁴ + Bx² + F and the character modulus D.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesParams {
    pub a: CycInt,
    pub b: CycInt,
    pub f: CycInt,
    pub d: CycInt,
}

fn primes_divide(x: &CycInt, d: &CycInt, what: &str) -> Result<()> {
    if x.is_unit() {
        return Ok(());
    }
    for (p, _) in &Modulus::new(x.clone())?.factors()?.primes {
        if !p.divides(d) {
            return Err(Error::Hypothesis(format!("prime {p} of {what} does not divide D = {d}")));
        }
    }
    Ok(())
}

impl SeriesParams {
    pub fn new(a: CycInt, b: CycInt, f: CycInt, d: CycInt) -> Result<Self> {
        let p = SeriesParams { a, b, f, d };
        p.validate()?;
        Ok(p)
    }

    /// D ≡ 1 mod 4; A, B nonzero squares; B = 4B′ with the primes of A and
    /// B′ dividing D; 16A | B².
    pub fn validate(&self) -> Result<()> {
        let (a, b, d) = (&self.a, &self.b, &self.d);
        if d.is_zero() || !d.is_one_mod_4() {
            return Err(Error::Hypothesis(format!("D = {d} is not 1 mod 4")));
        }
        if a.is_zero() || b.is_zero() {
            return Err(Error::Hypothesis("A and B must be nonzero".into()));
        }
        if !a.is_square() {
            return Err(Error::Hypothesis(format!("A = {a} is not a square")));
        }
        if !b.is_square() {
            return Err(Error::Hypothesis(format!("B = {b} is not a square")));
        }
        let b1 = b
            .div_exact(&CycInt::from(4))
            .ok_or_else(|| Error::Hypothesis(format!("B = {b} is not divisible by 4")))?;
        primes_divide(&b1, d, "B/4")?;
        primes_divide(a, d, "A")?;
        if !(a * &CycInt::from(16)).divides(&(b * b)) {
            return Err(Error::Hypothesis("B²/16A is not integral".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SeriesOptions {
    pub weight: SmoothWeight,
    pub scale: WeightScale,
    pub mode: AdditiveMode,
    pub workers: Option<usize>,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            weight: SmoothWeight::default(),
            scale: WeightScale::SqrtX,
            mode: AdditiveMode::Plain,
            workers: None,
        }
    }
}

/// Per-modulus constituents. `weight` is Ψ(s/|c^{η₁}|²)Ψ(s/|c^{η₂}|²)θ(c)/N(c);
/// the four sums are unweighted and include ψ_c(F).
#[derive(Clone, Debug, Serialize)]
pub struct ModulusTerm {
    pub c: CycInt,
    pub norm: u64,
    pub weight: Complex64,
    pub quartic: Complex64,
    pub quadratic: Complex64,
    pub kloosterman: Complex64,
    pub cross: Complex64,
}

impl ModulusTerm {
    pub fn inner(&self, kind: SeriesKind) -> Complex64 {
        match kind {
            SeriesKind::QuarticLhs => self.quartic,
            SeriesKind::QuadraticLhs => self.quadratic,
            SeriesKind::KloostermanRhs => self.kloosterman,
            SeriesKind::CrossRhs => self.cross,
        }
    }

    pub fn weighted(&self, kind: SeriesKind) -> Complex64 {
        self.weight * self.inner(kind)
    }

    /// |weighted quartic − weighted (Kloosterman + quadratic + cross)|.
    pub fn residual(&self) -> f64 {
        let rhs = self.kloosterman + self.quadratic + self.cross;
        ((self.quartic - rhs) * self.weight).norm()
    }

    /// Size of the weighted quartic term, the scale residuals are judged on.
    pub fn magnitude(&self) -> f64 {
        self.weighted(SeriesKind::QuarticLhs).norm()
    }
}

fn check_character(params: &SeriesParams, theta: &DirichletChar) -> Result<()> {
    let m = theta.modulus().elem();
    if !(m.divides(&params.d) && params.d.divides(m)) {
        return Err(Error::Precondition(format!("character modulus {m} is not D = {}", params.d)));
    }
    Ok(())
}

struct Setup<'a> {
    params: &'a SeriesParams,
    theta: &'a DirichletChar,
    opts: &'a SeriesOptions,
    s: f64,
}

impl Setup<'_> {
    fn weight(&self, p: &LatticePoint, norm: u64) -> Complex64 {
        let w = &self.opts.weight;
        let psi = w.eval(self.s / p.abs_sq.0) * w.eval(self.s / p.abs_sq.1);
        self.theta.value(&p.c) * (psi / norm as f64)
    }

    fn quartic(&self, c: &Modulus) -> Result<Complex64> {
        let f = PolySpec::new(vec![(self.params.a.clone(), 4), (self.params.b.clone(), 2), (self.params.f.clone(), 0)])?;
        Ok(complete_sum(&f, c, &TwistSpec::None, self.opts.mode)?.value)
    }

    fn quadratic(&self, c: &Modulus) -> Result<Complex64> {
        let f = PolySpec::new(vec![(self.params.a.clone(), 2), (self.params.b.clone(), 1), (self.params.f.clone(), 0)])?;
        Ok(complete_sum(&f, c, &TwistSpec::None, self.opts.mode)?.value)
    }

    fn phase_f(&self, c: &Modulus) -> Complex64 {
        PhaseMap::new(c, self.opts.mode).eval_big(&c.reduce(&self.params.f))
    }

    /// (AB/c)₂·ψ_c(F − B²(8A)⁻¹)·S₄(B²(16A)⁻¹, B²(16A)⁻¹; c); zero at c = 1,
    /// where the quadratic sum already accounts for the single residue.
    fn kloosterman(&self, c: &Modulus) -> Result<Complex64> {
        if c.is_unit() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mode = self.opts.mode;
        let parts = kloosterman_parts(&self.params.a, &self.params.b, &CycInt::one(), c, mode)?;
        let s4 = s4_factored(&parts.x16, &parts.x16, c, mode)?.value;
        Ok(self.phase_f(c) * times_symbol(parts.phase_minus * s4, parts.symbol))
    }

    fn cross(&self, c: &Modulus) -> Result<Complex64> {
        if c.is_unit() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let t = composite_terms(&self.params.a, &self.params.b, c, self.opts.mode)?;
        let sum: CSum = t.cross.iter().map(|x| x.value).collect();
        Ok(self.phase_f(c) * sum.value())
    }

    fn term(&self, p: &LatticePoint, kinds: &[SeriesKind]) -> Result<Option<ModulusTerm>> {
        if !are_coprime(&p.c, &self.params.d) {
            return Ok(None);
        }
        let c = Modulus::new(p.c.clone())?;
        let zero = Complex64::new(0.0, 0.0);
        let mut t = ModulusTerm {
            c: p.c.clone(),
            norm: c.norm(),
            weight: self.weight(p, c.norm()),
            quartic: zero,
            quadratic: zero,
            kloosterman: zero,
            cross: zero,
        };
        for k in kinds {
            match k {
                SeriesKind::QuarticLhs => t.quartic = self.quartic(&c)?,
                SeriesKind::QuadraticLhs => t.quadratic = self.quadratic(&c)?,
                SeriesKind::KloostermanRhs => t.kloosterman = self.kloosterman(&c)?,
                SeriesKind::CrossRhs => t.cross = self.cross(&c)?,
            }
        }
        Ok(Some(t))
    }
}

fn compute_terms(
    params: &SeriesParams,
    theta: &DirichletChar,
    opts: &SeriesOptions,
    x: f64,
    kinds: &[SeriesKind],
) -> Result<(usize, Vec<ModulusTerm>)> {
    params.validate()?;
    check_character(params, theta)?;
    let points = enumerate_points(x, &opts.weight, opts.scale)?;
    let setup = Setup {
        params,
        theta,
        opts,
        s: opts.scale.of(x),
    };
    let terms: Vec<Option<ModulusTerm>> = with_workers(opts.workers, || {
        points
            .par_iter()
            .map(|p| setup.term(p, kinds))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok((points.len(), terms.into_iter().flatten().collect()))
}

/// All four constituents for every enumerated modulus coprime to D, in
/// enumeration order.
pub fn modulus_terms(params: &SeriesParams, theta: &DirichletChar, opts: &SeriesOptions, x: f64) -> Result<Vec<ModulusTerm>> {
    Ok(compute_terms(params, theta, opts, x, &SeriesKind::ALL)?.1)
}

/// Σ_c Ψ(√X/|c^{η₁}|²)Ψ(√X/|c^{η₂}|²)θ(c)/N(c) · (constituent at c) over
/// c ≡ 1 mod 4 coprime to D.
pub fn weighted_series(
    kind: SeriesKind,
    params: &SeriesParams,
    theta: &DirichletChar,
    weight: &SmoothWeight,
    x: f64,
) -> Result<SeriesPoint> {
    let opts = SeriesOptions {
        weight: weight.clone(),
        ..SeriesOptions::default()
    };
    weighted_series_with(kind, params, theta, &opts, x)
}

pub fn weighted_series_with(
    kind: SeriesKind,
    params: &SeriesParams,
    theta: &DirichletChar,
    opts: &SeriesOptions,
    x: f64,
) -> Result<SeriesPoint> {
    let start = Instant::now();
    let (count, terms) = compute_terms(params, theta, opts, x, &[kind])?;
    let value: CSum = terms.iter().map(|t| t.weighted(kind)).collect();
    Ok(SeriesPoint::new(x, value.value(), count as u64, start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn basic() -> SeriesParams {
        SeriesParams::new(CycInt::one(), CycInt::from(4), CycInt::zero(), CycInt::one()).unwrap()
    }

    fn trivial(d: &CycInt) -> DirichletChar {
        DirichletChar::trivial(Arc::new(Modulus::new(d.clone()).unwrap())).unwrap()
    }

    #[test]
    fn hypotheses_are_enforced() {
        let one = CycInt::one();
        let d = CycInt::from(-3);
        assert!(SeriesParams::new(one.clone(), CycInt::from(4), one.clone(), CycInt::from(3)).is_err());
        assert!(SeriesParams::new(CycInt::from(3), CycInt::from(4), one.clone(), d.clone()).is_err());
        assert!(SeriesParams::new(one.clone(), CycInt::from(2), one.clone(), d.clone()).is_err());
        // B′ = 9 has its primes in D = −3
        assert!(SeriesParams::new(one.clone(), CycInt::from(36), one.clone(), d.clone()).is_ok());
        assert!(SeriesParams::new(one.clone(), CycInt::from(100), one.clone(), d).is_err());
        // 16·4 ∤ 16
        assert!(SeriesParams::new(CycInt::from(4), CycInt::from(4), one.clone(), one).is_err());
    }

    #[test]
    fn decomposition_per_modulus() {
        let p = SeriesParams::new(CycInt::one(), CycInt::from(4), CycInt::from(3), CycInt::one()).unwrap();
        let th = trivial(&p.d);
        let terms = modulus_terms(&p, &th, &SeriesOptions::default(), 400.0).unwrap();
        assert!(terms.len() > 10);
        for t in &terms {
            assert!(t.residual() <= 1e-8 * t.magnitude().max(t.weight.norm()), "{}", t.c);
        }
    }

    #[test]
    fn tiny_x_matches_naive_double_sum() {
        let p = basic();
        let th = trivial(&p.d);
        let w = SmoothWeight::default();
        for x in [20.0, 60.0] {
            let got = weighted_series(SeriesKind::QuarticLhs, &p, &th, &w, x).unwrap();
            let s = f64::sqrt(x);
            let mut naive = Complex64::new(0.0, 0.0);
            let mut count = 0;
            for c in super::super::lattice::enumerate_weighted(x, &w).unwrap() {
                count += 1;
                let (n1, n2) = c.embeddings().abs_sq();
                let m = Modulus::new(c.clone()).unwrap();
                let mut inner = Complex64::new(0.0, 0.0);
                for r in m.residues() {
                    let v = &(&r.pow(4) + &(&r.pow(2) * &CycInt::from(4))) + &p.f;
                    let frac = crate::ring::FieldElem::quotient(&v, &c);
                    inner += crate::characters::additive_char(&frac, AdditiveMode::Plain);
                }
                naive += inner * w.eval(s / n1) * w.eval(s / n2) / m.norm() as f64;
            }
            assert_eq!(got.term_count, count);
            assert!((got.value - naive).norm() < 1e-9, "{} vs {naive}", got.value);
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in SeriesKind::ALL {
            assert_eq!(k.name().parse::<SeriesKind>().unwrap(), k);
        }
    }
}
