use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::{embedding_abs_sq, WeightScale};
use super::mellin::mellin_hat;
use super::weight::SmoothWeight;
use super::weighted::SeriesParams;
use crate::characters::{power_symbol, prime_field, DirichletChar};
use crate::error::{Error, Result};
use crate::numeric::CSum;
use crate::ring::{are_coprime, crt, CycInt, Modulus};

/// |(R/c)^*|.
pub fn phi_ideal(c: &CycInt) -> Result<u64> {
    let m = Modulus::new(c.clone())?;
    if m.is_unit() {
        return Ok(1);
    }
    let mut phi = 1u64;
    for (p, e) in &m.factors()?.primes {
        let np = Modulus::new(p.clone())?.norm();
        phi *= np.pow(e - 1) * (np - 1);
    }
    Ok(phi)
}

/// Covolume of R in C² ≅ R⁴ under (η₁, η₂): |det| of the basis images.
pub fn covolume() -> f64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // rows: 1, ω, ω², ω³ as (Re η₁, Im η₁, Re η₂, Im η₂)
    let mut m = [
        [1.0, 0.0, 1.0, 0.0],
        [h, h, -h, h],
        [0.0, 1.0, 0.0, -1.0],
        [-h, h, h, h],
    ];
    debug_assert!((embedding_abs_sq([0, 1, 0, 0]).0 - 1.0).abs() < 1e-12);
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..4 {
            let f = m[r][col] / m[col][col];
            for k in col..4 {
                m[r][k] -= f * m[col][k];
            }
        }
    }
    det.abs()
}

/// How a local factor T_{p^j,p}(θ) treats characters that are not primitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TConvention {
    /// Σ_{d mod p^k} χ*(d) with χ* the primitive character inducing
    /// θ·(·/p^j)₂: N(p)^k when that character is principal, else 0.
    Primitive,
    /// Σ_{d mod p^k} θ(d)(d/p^j)₂ with non-units contributing 0.
    Literal,
}

/// Local behaviour of θ at p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalClass {
    Trivial,
    Quadratic,
    Other,
}

/// The tabulated T_{p^j,p}(θ) for θ trivial, quadratic or otherwise at p.
pub fn t_table(np: u64, j: u32, class: LocalClass) -> u64 {
    match (j, class) {
        (0, LocalClass::Trivial) | (1, LocalClass::Quadratic) => np,
        (j, LocalClass::Trivial) if j >= 2 && j % 2 == 0 => np.pow(j),
        (j, LocalClass::Quadratic) if j >= 3 && j % 2 == 1 => np.pow(j),
        _ => 0,
    }
}

fn valuation(x: &CycInt, p: &CycInt) -> u32 {
    let mut v = 0;
    let mut y = x.clone();
    while !y.is_zero() {
        match y.div_exact(p) {
            Some(q) => {
                y = q;
                v += 1;
            }
            None => break,
        }
    }
    v
}

/// θ restricted to the p-part: d ↦ θ(d̃) with d̃ ≡ d mod p^e, d̃ ≡ 1 mod D/p^e.
struct LocalChar<'a> {
    theta: &'a DirichletChar,
    e: u32,
    pe: Option<Modulus>,
    rest: Option<Modulus>,
}

impl<'a> LocalChar<'a> {
    fn new(theta: &'a DirichletChar, p: &CycInt) -> Result<Self> {
        let d = theta.modulus().elem();
        let e = valuation(d, p);
        if e == 0 {
            return Ok(LocalChar {
                theta,
                e,
                pe: None,
                rest: None,
            });
        }
        let pe = Modulus::new(p.pow(e))?;
        let rest = Modulus::new(d.div_exact(pe.elem()).expect("p^e divides D"))?;
        Ok(LocalChar {
            theta,
            e,
            pe: Some(pe),
            rest: (!rest.is_unit()).then_some(rest),
        })
    }

    /// θ_p(d) for d coprime to p; 1 when p ∤ D.
    fn value(&self, d: &CycInt) -> Result<Complex64> {
        Ok(match (&self.pe, &self.rest) {
            (None, _) => Complex64::new(1.0, 0.0),
            (Some(_), None) => self.theta.value(d),
            (Some(pe), Some(rest)) => self.theta.value(&crt(d, pe, &CycInt::one(), rest)?),
        })
    }
}

/// Classifies θ_p as trivial, equal to (·/p)₂, or neither, by comparing
/// values on the units mod p^e.
pub fn local_class(theta: &DirichletChar, p: &CycInt) -> Result<LocalClass> {
    let lc = LocalChar::new(theta, p)?;
    let Some(pe) = &lc.pe else {
        return Ok(LocalClass::Trivial);
    };
    let pf = prime_field(p)?;
    let (mut trivial, mut quadratic) = (true, true);
    for d in pe.residues() {
        let Some(q) = pf.quadratic_exp(&pf.ring().from_cycint(&d)) else {
            continue;
        };
        let v = lc.value(&d)?;
        let one = Complex64::new(1.0, 0.0);
        trivial &= (v - one).norm() < 1e-9;
        let eta = if q == 0 { one } else { -one };
        quadratic &= (v - eta).norm() < 1e-9;
    }
    Ok(if trivial {
        LocalClass::Trivial
    } else if quadratic {
        LocalClass::Quadratic
    } else {
        LocalClass::Other
    })
}

/// Σ_{d mod p^k} of θ_p(d)(d/p^j)₂ under the chosen convention, with
/// k = max(j, e, 1) and p^e ∥ D. The summand only depends on d mod p^m,
/// m = max(e, 1), so the sum runs over R/p^m and is scaled by N(p)^{k−m}.
pub fn t_local(p: &CycInt, j: u32, theta: &DirichletChar, conv: TConvention) -> Result<Complex64> {
    t_local_over(p, j, theta, conv, false)
}

fn t_local_over(p: &CycInt, j: u32, theta: &DirichletChar, conv: TConvention, full: bool) -> Result<Complex64> {
    let lc = LocalChar::new(theta, p)?;
    let pf = prime_field(p)?;
    let k = j.max(lc.e).max(1);
    let m = if full { k } else { lc.e.max(1) };
    let q = Modulus::new(p.pow(m))?;
    let lifts = (pf.size() as f64).powi((k - m) as i32);
    let one = Complex64::new(1.0, 0.0);
    let mut principal = true;
    let mut units = CSum::new();
    let mut nonunits = 0u64;
    for d in q.residues() {
        match pf.quadratic_exp(&pf.ring().from_cycint(&d)) {
            Some(e) => {
                let eta = if e as u32 * j % 2 == 0 { one } else { -one };
                let v = lc.value(&d)? * eta;
                principal &= (v - one).norm() < 1e-9;
                units.add(v);
            }
            None => nonunits += 1,
        }
    }
    let s = match conv {
        TConvention::Literal => units.value(),
        TConvention::Primitive if principal => units.value() + nonunits as f64,
        TConvention::Primitive => units.value(),
    };
    Ok(s * lifts)
}

fn check_a_divides_d(a: &CycInt, d: &CycInt) -> Result<Vec<(CycInt, u32, u32)>> {
    if a.is_zero() {
        return Err(Error::Precondition("A must be nonzero".into()));
    }
    let dm = Modulus::new(d.clone())?;
    let mut out = Vec::new();
    if !dm.is_unit() {
        for (p, e) in &dm.factors()?.primes {
            out.push((p.clone(), valuation(a, p), *e));
        }
    }
    if !a.is_unit() {
        for (p, _) in &Modulus::new(a.clone())?.factors()?.primes {
            if !p.divides(d) {
                return Err(Error::Precondition(format!("prime {p} of A does not divide D")));
            }
        }
    }
    Ok(out)
}

/// T_{A,D}(θ) = Π_{p | D} T_{p^j,p}(θ) with p^j ∥ A, from the table.
pub fn t_factor(a: &CycInt, d: &CycInt, theta: &DirichletChar) -> Result<Complex64> {
    let mut t = 1u64;
    for (p, j, _) in check_a_divides_d(a, d)? {
        let np = Modulus::new(p.clone())?.norm();
        t *= t_table(np, j, local_class(theta, &p)?);
    }
    Ok(Complex64::new(t as f64, 0.0))
}

/// The same product with every local factor summed directly.
pub fn t_factor_direct(a: &CycInt, d: &CycInt, theta: &DirichletChar, conv: TConvention) -> Result<Complex64> {
    let mut t = Complex64::new(1.0, 0.0);
    for (p, j, _) in check_a_divides_d(a, d)? {
        t *= t_local(&p, j, theta, conv)?;
    }
    Ok(t)
}

/// lcm(A, D) as Π p^{max(v_p A, v_p D)}.
fn lcm_a_d(a: &CycInt, d: &CycInt) -> Result<CycInt> {
    Ok(check_a_divides_d(a, d)?
        .into_iter()
        .fold(CycInt::one(), |acc, (p, j, e)| &acc * &p.pow(j.max(e))))
}

/// Σ_{d mod lcm(A,D)} θ(d)(d/A)₂ / N(lcm(A,D)): the mean of the character
/// the quadratic sums carry over c.
pub fn t_density(a: &CycInt, d: &CycInt, theta: &DirichletChar) -> Result<Complex64> {
    let l = Modulus::new(lcm_a_d(a, d)?)?;
    let mut acc = CSum::new();
    for x in l.residues() {
        if !are_coprime(&x, l.elem()) {
            continue;
        }
        let sym = if a.is_unit() {
            Complex64::new(1.0, 0.0)
        } else {
            power_symbol(&x, a, 2)?.to_complex()
        };
        acc.add(theta.value(&l.reduce(&x)) * sym);
    }
    Ok(acc.value() / l.norm() as f64)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// √X·π³/(2φ(4))·Ψ̂(−1/2)²·T_{A,D}(θ).
    #[default]
    Printed,
    /// s·π²·Ψ̂(−1/2)²/(N(4)·covol(R))·(mean of θ(d)(d/A)₂), s the weight scale:
    /// the lattice-point count of c ≡ 1 mod 4 against ∫∫Ψ(s/|z₁|²)Ψ(s/|z₂|²)/|z₁z₂|.
    Lattice,
}

/// Predicted leading term of the θ-twisted quadratic series.
pub fn quad_main_term(params: &SeriesParams, theta: &DirichletChar, weight: &SmoothWeight, x: f64) -> Result<Complex64> {
    quad_main_term_with(params, theta, weight, x, Normalization::Printed, WeightScale::SqrtX)
}

pub fn quad_main_term_with(
    params: &SeriesParams,
    theta: &DirichletChar,
    weight: &SmoothWeight,
    x: f64,
    norm: Normalization,
    scale: WeightScale,
) -> Result<Complex64> {
    params.validate()?;
    let m = mellin_hat(weight, -0.5);
    let four = CycInt::from(4);
    Ok(match norm {
        Normalization::Printed => {
            let phi4 = phi_ideal(&four)? as f64;
            let t = t_factor(&params.a, &params.d, theta)?;
            t * (x.sqrt() * PI.powi(3) / (2.0 * phi4) * m * m)
        }
        Normalization::Lattice => {
            let n4 = Modulus::new(four)?.norm() as f64;
            let t = t_density(&params.a, &params.d, theta)?;
            t * (scale.of(x) * PI * PI * m * m / (n4 * covolume()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::dirichlet_enumerate;
    use crate::ring::{normalize_assoc, primes_above};
    use std::sync::Arc;

    #[test]
    fn phi_values() {
        assert_eq!(phi_ideal(&CycInt::one()).unwrap(), 1);
        let p = primes_above(17)[0].clone();
        assert_eq!(phi_ideal(&p).unwrap(), 16);
        assert_eq!(phi_ideal(&CycInt::from(4)).unwrap(), 128);
        let three = Modulus::new(CycInt::from(3)).unwrap();
        let units = three.residues().filter(|r| are_coprime(r, three.elem())).count();
        assert_eq!(phi_ideal(&CycInt::from(3)).unwrap(), 64);
        assert_eq!(units, 64);
    }

    #[test]
    fn reduced_sum_matches_full_enumeration() {
        let p = primes_above(17)[1].clone();
        let d = Arc::new(Modulus::new(p.clone()).unwrap());
        for theta in dirichlet_enumerate(d).unwrap().iter().take(6) {
            for j in 0..=3 {
                for conv in [TConvention::Primitive, TConvention::Literal] {
                    let a = t_local(&p, j, theta, conv).unwrap();
                    let b = t_local_over(&p, j, theta, conv, true).unwrap();
                    assert!((a - b).norm() < 1e-6, "j={j} {conv:?}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn covolume_is_four() {
        assert!((covolume() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn table_matches_primitive_sums() {
        let p = primes_above(17)[0].clone();
        let chars = dirichlet_enumerate(Arc::new(Modulus::new(p.clone()).unwrap())).unwrap();
        for th in &chars {
            let class = local_class(th, &p).unwrap();
            for j in 0..=3 {
                let direct = t_local(&p, j, th, TConvention::Primitive).unwrap();
                let table = t_table(17, j, class) as f64;
                assert!((direct - table).norm() < 1e-6, "j={j} order={}", th.exact_order());
            }
        }
    }

    #[test]
    fn literal_sums_count_units() {
        let p = primes_above(17)[0].clone();
        let pm = Arc::new(Modulus::new(p.clone()).unwrap());
        let triv = DirichletChar::trivial(pm.clone()).unwrap();
        let eta = DirichletChar::residue_symbol(pm, 2).unwrap();
        let lit = |j, th: &DirichletChar| t_local(&p, j, th, TConvention::Literal).unwrap().re.round();
        assert_eq!(lit(0, &triv), 16.0);
        assert_eq!(lit(1, &eta), 16.0);
        assert_eq!(lit(2, &triv), 17.0 * 16.0);
        assert_eq!(lit(1, &triv), 0.0);
    }

    #[test]
    fn printed_main_term_shape() {
        let one = CycInt::one();
        let d = normalize_assoc(&CycInt::from(3)).unwrap().0;
        let params = SeriesParams::new(one.clone(), CycInt::from(4), CycInt::from(4), d.clone()).unwrap();
        let dm = Arc::new(Modulus::new(d).unwrap());
        let triv = DirichletChar::trivial(dm.clone()).unwrap();
        let w = SmoothWeight::default();
        let a = quad_main_term(&params, &triv, &w, 1000.0).unwrap();
        let b = quad_main_term(&params, &triv, &w, 2000.0).unwrap();
        assert!((b / a - std::f64::consts::SQRT_2).norm() < 1e-12);
        let q = dirichlet_enumerate(dm)
            .unwrap()
            .into_iter()
            .find(|c| c.exact_order() == 4)
            .unwrap();
        assert_eq!(quad_main_term(&params, &q, &w, 1000.0).unwrap(), Complex64::new(0.0, 0.0));
        assert!(t_density(&params.a, &params.d, &q).unwrap().norm() < 1e-12);
    }
}
