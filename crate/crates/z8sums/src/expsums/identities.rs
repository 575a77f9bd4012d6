use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::complete::{complete_sum, plain_sum, times_symbol};
use super::kloosterman::{s4_prime_power, s4_with};
use super::poly::{PolySpec, TwistSpec};
use super::report::Report;
use crate::characters::{power_symbol, AdditiveMode, PhaseMap, UnitStructure};
use crate::error::{Error, Result};
use crate::numeric::CSum;
use crate::ring::{are_coprime, dist_to_integer, inverse_mod, CycInt, FieldElem, Modulus};

fn prime_modulus(p: &CycInt) -> Result<Modulus> {
    let pm = Modulus::new(p.clone())?;
    if pm.is_even() {
        return Err(Error::EvenRamified);
    }
    let f = pm.factors()?;
    if f.primes.len() != 1 || f.primes[0].1 != 1 {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if pm.norm() % 4 != 1 {
        return Err(Error::Precondition(format!("N(p) = {} is not 1 mod 4", pm.norm())));
    }
    Ok(pm)
}

fn check_square_hypotheses(a: &CycInt, b: &CycInt) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Hypothesis(format!("A = {a} is not a square")));
    }
    if !b.is_square() {
        return Err(Error::Hypothesis(format!("B = {b} is not a square")));
    }
    if !b.congruent_mod_int(&CycInt::zero(), 4) {
        return Err(Error::Hypothesis(format!("B = {b} is not divisible by 4")));
    }
    Ok(())
}

fn coprime_to(x: &CycInt, c: &CycInt, what: &str) -> Result<()> {
    if are_coprime(x, c) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("gcd({what}, {c}) ≠ 1")))
    }
}

/// Ingredients of (AB/n)₂·ψ_n(∓u·B²·(8A)⁻¹)·S₄(X, X; n) with X = u·B²·(16A)⁻¹.
pub(crate) struct KloostermanParts {
    pub(crate) symbol: crate::characters::SymbolValue,
    pub(crate) phase_minus: Complex64,
    pub(crate) phase_plus: Complex64,
    pub(crate) x16: CycInt,
    pub(crate) x8: CycInt,
}

pub(crate) fn kloosterman_parts(a: &CycInt, b: &CycInt, u: &CycInt, n: &Modulus, mode: AdditiveMode) -> Result<KloostermanParts> {
    let b2u = &(b * b) * u;
    let inv8 = inverse_mod(&(a * &CycInt::from(8)), n)?;
    let inv16 = inverse_mod(&(a * &CycInt::from(16)), n)?;
    let pm = PhaseMap::new(n, mode);
    let y = n.reduce(&(&b2u * &inv8));
    Ok(KloostermanParts {
        symbol: power_symbol(&(a * b), n.elem(), 2)?,
        phase_minus: pm.eval_big(&n.reduce(&-&y)),
        phase_plus: pm.eval_big(&y),
        x16: n.reduce(&(&b2u * &inv16)),
        x8: n.reduce(&(&b2u * &inv8)),
    })
}

/// Quartic sums at a prime: Σψ(Ax⁴+Bx²) − Σψ(Ax²+Bx) = Σ(x/p)₂ψ(Ax²+Bx)
/// = (AB/p)₂·ψ(−B²(8A)⁻¹)·S₄(B²(16A)⁻¹, B²(16A)⁻¹; p).
///
/// The residual is the larger of the two gaps; `eight_a_reading` records the
/// gap when (8A)⁻¹ replaces (16A)⁻¹ inside S₄.
pub fn identity_prime(a: &CycInt, b: &CycInt, p: &CycInt, mode: AdditiveMode) -> Result<Report> {
    let pm = prime_modulus(p)?;
    coprime_to(&(a * b), p, "AB")?;
    let quart = plain_sum(&PolySpec::quartic(a, b), &pm, mode);
    let quad_poly = PolySpec::quadratic(a, b);
    let quad = plain_sum(&quad_poly, &pm, mode);
    let twisted = complete_sum(&quad_poly, &pm, &TwistSpec::ResidueSymbol(2), mode)?.value;
    let parts = kloosterman_parts(a, b, &CycInt::one(), &pm, mode)?;
    let us = UnitStructure::new(&pm)?;
    let base = PhaseMap::new(&pm, mode);
    let s16 = s4_with(&us, &base, &parts.x16, &parts.x16);
    let s8 = s4_with(&us, &base, &parts.x8, &parts.x8);
    let pre = times_symbol(parts.phase_minus, parts.symbol);
    let rhs = pre * s16;
    let diff = quart - quad;

    let mut r = Report::new("c4", pm.elem().to_string(), pm.norm(), mode);
    r.term("kloosterman", rhs);
    r.value("quartic", quart);
    r.value("quadratic", quad);
    r.value("twisted", twisted);
    r.value("kloosterman_8a", pre * s8);
    let r12 = (diff - twisted).norm();
    let r23 = (twisted - rhs).norm();
    r.check("difference_vs_twisted", r12);
    r.check("twisted_vs_kloosterman", r23);
    r.check("eight_a_reading", (twisted - pre * s8).norm());
    let mut r = r.close(diff);
    r.residual = r12.max(r23);
    Ok(r)
}

/// The prime identity at p^m, with S₄ through the Salié-type evaluation.
///
/// Requires A and B squares, 4 | B and (2AB, p) = 1. For m = 1 this is
/// [`identity_prime`].
pub fn identity_prime_power(a: &CycInt, b: &CycInt, p: &CycInt, m: u32, mode: AdditiveMode) -> Result<Report> {
    if m == 0 {
        return Err(Error::Invalid("exponent must be positive".into()));
    }
    check_square_hypotheses(a, b)?;
    let pm = prime_modulus(p)?;
    coprime_to(&(&(a * b) * &CycInt::from(2)), p, "2AB")?;
    if m == 1 {
        let mut r = identity_prime(a, b, p, mode)?;
        r.statement_id = "pow".into();
        return Ok(r);
    }
    let big = Modulus::new(p.pow(m))?;
    let quart = plain_sum(&PolySpec::quartic(a, b), &big, mode);
    let quad = plain_sum(&PolySpec::quadratic(a, b), &big, mode);
    let parts = kloosterman_parts(a, b, &CycInt::one(), &big, mode)?;
    let pre = times_symbol(parts.phase_minus, parts.symbol);
    let closed = s4_prime_power(&parts.x16, &parts.x16, pm.elem(), m, mode)?.value;
    let us = UnitStructure::new(&big)?;
    let brute = s4_with(&us, &PhaseMap::new(&big, mode), &parts.x16, &parts.x16);

    let mut r = Report::new("pow", big.elem().to_string(), big.norm(), mode);
    r.term("kloosterman", pre * closed);
    r.value("quartic", quart);
    r.value("quadratic", quad);
    r.value("kloosterman_brute", pre * brute);
    r.check("salie_vs_brute", (closed - brute).norm());
    r.check("brute_rhs", (quart - quad - pre * brute).norm());
    Ok(r.close(quart - quad))
}

/// The constituents of Σ_{x mod c} ψ_c(Ax⁴ + Bx²) for c ≡ 1 mod 4.
#[derive(Clone, Debug, Serialize)]
pub struct CompositeTerms {
    pub kloosterman: Complex64,
    pub quadratic: Complex64,
    /// One entry per coprime split c = n·m with n, m ≠ c (non-units).
    pub cross: Vec<CrossTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossTerm {
    pub n: CycInt,
    pub m: CycInt,
    pub value: Complex64,
    /// The same product with ψ_n(+u·B²(8A)⁻¹) in the Kloosterman factor.
    pub phase_flipped: Complex64,
    /// The same product with −X as the S₄ argument.
    pub s4_negated: Complex64,
}

impl CompositeTerms {
    /// Kloosterman + quadratic + cross terms, accumulated in that order.
    pub fn total(&self) -> Complex64 {
        self.collect(|t| t.value)
    }

    pub fn total_phase_flipped(&self) -> Complex64 {
        self.collect(|t| t.phase_flipped)
    }

    pub fn total_s4_negated(&self) -> Complex64 {
        self.collect(|t| t.s4_negated)
    }

    fn collect(&self, f: impl Fn(&CrossTerm) -> Complex64) -> Complex64 {
        let mut s = CSum::new();
        s.add(self.kloosterman);
        s.add(self.quadratic);
        for t in &self.cross {
            s.add(f(t));
        }
        s.value()
    }
}

/// Σ_{x mod m} ψ_m(v(Ax² + Bx)).
fn quadratic_part(a: &CycInt, b: &CycInt, v: &CycInt, m: &Modulus, mode: AdditiveMode) -> Complex64 {
    plain_sum(&PolySpec::quadratic(&(a * v), &(b * v)), m, mode)
}

/// (AB/n)₂·ψ_n(−u·B²(8A)⁻¹)·S₄(u·B²(16A)⁻¹, same; n) and the two sign variants.
fn kloosterman_part(a: &CycInt, b: &CycInt, u: &CycInt, n: &Modulus, mode: AdditiveMode) -> Result<[Complex64; 3]> {
    let parts = kloosterman_parts(a, b, u, n, mode)?;
    let us = UnitStructure::new(n)?;
    let base = PhaseMap::new(n, mode);
    let s = s4_with(&us, &base, &parts.x16, &parts.x16);
    let neg = n.reduce(&-&parts.x16);
    let s_neg = s4_with(&us, &base, &neg, &neg);
    Ok([
        times_symbol(parts.phase_minus * s, parts.symbol),
        times_symbol(parts.phase_plus * s, parts.symbol),
        times_symbol(parts.phase_minus * s_neg, parts.symbol),
    ])
}

/// Splits Σψ_c(Ax⁴+Bx²) into a Kloosterman term at c, the quadratic sum at
/// c, and for every coprime split c = n·m into prime-power groups the cross
/// term [Σ_{x mod m} ψ_m(n̄(Ax²+Bx))]·(AB/n)₂ψ_n(−m̄B²(8A)⁻¹)S₄(m̄B²(16A)⁻¹; n),
/// bars denoting inverses mod the other factor.
pub fn composite_terms(a: &CycInt, b: &CycInt, c: &Modulus, mode: AdditiveMode) -> Result<CompositeTerms> {
    if c.is_unit() {
        return Err(Error::Precondition("modulus is a unit".into()));
    }
    coprime_to(&(&(a * b) * &CycInt::from(2)), c.elem(), "2AB")?;
    let one = CycInt::one();
    let quadratic = quadratic_part(a, b, &one, c, mode);
    let kloosterman = kloosterman_part(a, b, &one, c, mode)?[0];
    let powers = c.factors()?.prime_powers();
    let k = powers.len();
    let mut cross = Vec::with_capacity((1usize << k).saturating_sub(2));
    for mask in 1..(1u32 << k) - 1 {
        let n = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .fold(CycInt::one(), |acc, i| &acc * &powers[i]);
        let m = c.elem().div_exact(&n).expect("n divides c");
        let nm = Modulus::new(n.clone())?;
        let mm = Modulus::new(m.clone())?;
        let nbar = inverse_mod(&n, &mm)?;
        let mbar = inverse_mod(&m, &nm)?;
        let q = quadratic_part(a, b, &nbar, &mm, mode);
        let kl = kloosterman_part(a, b, &mbar, &nm, mode)?;
        cross.push(CrossTerm {
            n,
            m,
            value: q * kl[0],
            phase_flipped: q * kl[1],
            s4_negated: q * kl[2],
        });
    }
    Ok(CompositeTerms {
        kloosterman,
        quadratic,
        cross,
    })
}

/// Σ_{x mod c} ψ_c(Ax⁴+Bx²) against its Kloosterman + quadratic + cross-term
/// decomposition, for c ≡ 1 mod 4, (2AB, c) = 1, A and B squares, 4 | B.
pub fn identity_composite(a: &CycInt, b: &CycInt, c: &Modulus, mode: AdditiveMode) -> Result<Report> {
    if !c.elem().is_one_mod_4() {
        return Err(Error::Precondition(format!("{} is not 1 mod 4", c.elem())));
    }
    check_square_hypotheses(a, b)?;
    let terms = composite_terms(a, b, c, mode)?;
    let lhs = plain_sum(&PolySpec::quartic(a, b), c, mode);
    let mut r = Report::new("c400", c.elem().to_string(), c.norm(), mode);
    r.term("kloosterman", terms.kloosterman);
    r.term("quadratic", terms.quadratic);
    for t in &terms.cross {
        r.term(format!("cross n={} m={}", t.n, t.m), t.value);
    }
    r.check("phase_flipped_variant", (lhs - terms.total_phase_flipped()).norm());
    r.check("s4_negated_variant", (lhs - terms.total_s4_negated()).norm());
    Ok(r.close(lhs))
}

/// Σ_{x mod m} ψ_m(n̄(Ax²+Bx)) = (nA/m)₂·ψ_n((4mA)⁻¹B²)·ψ_{nm}(−(4A)⁻¹B²)·√N(m),
/// with n̄ the inverse of n mod m and the other inverses taken mod n and nm.
pub fn cross_reduction_check(a: &CycInt, b: &CycInt, n: &CycInt, m: &CycInt, mode: AdditiveMode) -> Result<Report> {
    let nm = n * m;
    coprime_to(&(&(a * b) * &CycInt::from(2)), &nm, "2AB")?;
    coprime_to(n, m, "n")?;
    if !n.is_one_mod_4() || !m.is_one_mod_4() {
        return Err(Error::Precondition("n and m must be 1 mod 4".into()));
    }
    let nmod = Modulus::new(n.clone())?;
    let mmod = Modulus::new(m.clone())?;
    let cmod = Modulus::new(nm)?;
    let nbar = inverse_mod(n, &mmod)?;
    let lhs = quadratic_part(a, b, &nbar, &mmod, mode);
    let b2 = b * b;
    let four_a = a * &CycInt::from(4);
    let symbol = power_symbol(&(n * a), m, 2)?;
    let inv_n = inverse_mod(&(&four_a * m), &nmod)?;
    let inv_nm = inverse_mod(&four_a, &cmod)?;
    let f1 = PhaseMap::new(&nmod, mode).eval_big(&nmod.reduce(&(&inv_n * &b2)));
    let f2 = PhaseMap::new(&cmod, mode).eval_big(&cmod.reduce(&-&(&inv_nm * &b2)));
    let root = (mmod.norm() as f64).sqrt();

    let mut r = Report::new("cross-reduction", m.to_string(), mmod.norm(), mode);
    r.value("symbol", symbol.to_complex());
    r.value("phase_n", f1);
    r.value("phase_nm", f2);
    r.term("product", times_symbol(f1 * f2, symbol) * root);
    Ok(r.close(lhs))
}

/// Exact phases of e(Ā/B) and e(−B̄/A)·e(1/(AB)), Ā = A⁻¹ mod B and
/// B̄ = B⁻¹ mod A; the residual is their distance mod 1.
#[derive(Clone, Debug, Serialize)]
pub struct ExactResidual {
    pub lhs_phase: String,
    pub rhs_phase: String,
    pub residual: String,
    #[serde(skip)]
    pub exact: BigRational,
}

impl ExactResidual {
    pub fn is_zero(&self) -> bool {
        self.exact.is_zero()
    }
}

pub fn reciprocity_check(a: &CycInt, b: &CycInt, mode: AdditiveMode) -> Result<ExactResidual> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Precondition("arguments must be nonzero".into()));
    }
    if !are_coprime(a, b) {
        return Err(Error::NotCoprime(format!("{a} and {b}")));
    }
    let abar = inverse_mod(a, &Modulus::new(b.clone())?)?;
    let bbar = inverse_mod(b, &Modulus::new(a.clone())?)?;
    let lhs = mode.phase(&FieldElem::quotient(&abar, b));
    let rhs = mode.phase(&FieldElem::quotient(&-&bbar, a)) + mode.phase(&FieldElem::quotient(&CycInt::one(), &(a * b)));
    let exact = dist_to_integer(&(&lhs - &rhs));
    Ok(ExactResidual {
        lhs_phase: lhs.to_string(),
        rhs_phase: rhs.to_string(),
        residual: exact.to_string(),
        exact,
    })
}

/// S₄(r, s; nm) against S₄(r m̄, s m̄; n)·S₄(r n̄, s n̄; m) for coprime odd n, m.
pub fn s4_multiplicativity(r: &CycInt, s: &CycInt, n: &CycInt, m: &CycInt, mode: AdditiveMode) -> Result<Report> {
    coprime_to(n, m, "n")?;
    let nmod = Modulus::new(n.clone())?;
    let mmod = Modulus::new(m.clone())?;
    let cmod = Modulus::new(n * m)?;
    let s4 = |x: &CycInt, y: &CycInt, c: &Modulus| super::kloosterman::kloosterman_s4(x, y, c, mode).map(|v| v.value);
    let mbar = inverse_mod(m, &nmod)?;
    let nbar = inverse_mod(n, &mmod)?;
    let lhs = s4(r, s, &cmod)?;
    let at_n = s4(&(r * &mbar), &(s * &mbar), &nmod)?;
    let at_m = s4(&(r * &nbar), &(s * &nbar), &mmod)?;
    let mut rep = Report::new("s4-multiplicativity", cmod.elem().to_string(), cmod.norm(), mode);
    rep.value("at_n", at_n);
    rep.value("at_m", at_m);
    rep.term("product", at_n * at_m);
    Ok(rep.close(lhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{normalize_assoc, primes_above};

    fn same_class_pair(p: u64) -> Modulus {
        let ps = primes_above(p);
        for j in 1..ps.len() {
            if let Ok((c, _)) = normalize_assoc(&(&ps[0] * &ps[j])) {
                return Modulus::new(c).unwrap();
            }
        }
        panic!("no normalizable pair above {p}");
    }

    #[test]
    fn prime_identity_at_seventeen() {
        let one = CycInt::one();
        for p in primes_above(17) {
            for mode in AdditiveMode::ALL {
                let r = identity_prime(&one, &one, &p, mode).unwrap();
                assert!(r.passes(1e-8), "{}", r.to_json());
            }
        }
    }

    #[test]
    fn prime_identity_rejects_common_factor() {
        let p = primes_above(17)[0].clone();
        assert!(identity_prime(&p, &CycInt::one(), &p, AdditiveMode::Plain).is_err());
    }

    #[test]
    fn prime_power_identity() {
        let p = primes_above(17)[0].clone();
        let four = CycInt::from(4);
        for m in [1, 2, 3] {
            for mode in AdditiveMode::ALL {
                let r = identity_prime_power(&four, &four, &p, m, mode).unwrap();
                assert!(r.passes(1e-8), "{}", r.to_json());
            }
        }
        assert!(matches!(
            identity_prime_power(&CycInt::from(3), &four, &p, 2, AdditiveMode::Plain),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            identity_prime_power(&four, &CycInt::one(), &p, 2, AdditiveMode::Plain),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn composite_identity_two_primes() {
        let c = same_class_pair(17);
        let four = CycInt::from(4);
        for mode in AdditiveMode::ALL {
            let r = identity_composite(&four, &four, &c, mode).unwrap();
            assert_eq!(r.rhs_terms.len(), 2 + 2);
            assert!(r.passes(1e-8), "{}", r.to_json());
            assert_eq!(r.rhs, r.rhs_total());
        }
    }

    #[test]
    fn composite_identity_at_a_prime_has_no_cross_terms() {
        let c = Modulus::new(normalize_assoc(&CycInt::from(3)).unwrap().0).unwrap();
        let f = c.factors().unwrap().primes.len();
        let four = CycInt::from(4);
        let r = identity_composite(&four, &four, &c, AdditiveMode::Plain).unwrap();
        assert_eq!(r.rhs_terms.len(), 2 + (1 << f) - 2);
        assert!(r.passes(1e-8), "{}", r.to_json());
    }

    #[test]
    fn cross_reduction_small() {
        let four = CycInt::from(4);
        let n = normalize_assoc(&CycInt::from(3)).unwrap().0;
        let m = CycInt::from(5);
        for mode in AdditiveMode::ALL {
            let r = cross_reduction_check(&four, &four, &n, &m, mode).unwrap();
            assert!(r.passes(1e-8), "{}", r.to_json());
            let r = cross_reduction_check(&four, &four, &n, &CycInt::one(), mode).unwrap();
            assert!((r.lhs - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            assert!(r.residual < 1e-12);
        }
    }

    #[test]
    fn reciprocity_is_exact() {
        let pairs = [([1, 0, 0, 0], [3, 1, 0, 2]), ([5, 2, 0, 1], [7, 0, -1, 3]), ([2, 1, 1, 0], [3, 0, 0, 0])];
        let mut tested = 0;
        for (a, b) in pairs {
            let (a, b) = (CycInt::from_i64s(a), CycInt::from_i64s(b));
            if !are_coprime(&a, &b) {
                continue;
            }
            tested += 1;
            for mode in AdditiveMode::ALL {
                assert!(reciprocity_check(&a, &b, mode).unwrap().is_zero());
            }
        }
        assert!(tested >= 2);
        assert!(reciprocity_check(&CycInt::from(3), &CycInt::from(6), AdditiveMode::Plain).is_err());
    }

    #[test]
    fn twisted_multiplicativity() {
        let n = primes_above(17)[0].clone();
        let m = primes_above(41)[2].clone();
        for mode in AdditiveMode::ALL {
            let r = s4_multiplicativity(&CycInt::from(3), &CycInt::from_i64s([1, 0, 1, 0]), &n, &m, mode).unwrap();
            assert!(r.passes(1e-8), "{}", r.to_json());
        }
    }
}
