use num_complex::Complex64;
use serde::Serialize;

use crate::characters::{root_of_unity, DirichletChar};
use crate::error::{Error, Result};
use crate::numeric::CSum;
use crate::ring::{canonical_prime, normalize_assoc, primes_up_to_norm, CycInt};

#[derive(Clone, Debug, Serialize)]
pub struct ThetaPartial {
    /// Σ φ(c₀⁴)θ⁴(c₀)/N(c₀)^{4s} over normalized c₀ with N(c₀) ≤ T.
    pub partial_sum: Complex64,
    /// Σ φ(a⁴)θ⁴(a)/N(a)^{4s} over all odd ideals a with N(a) ≤ T, θ⁴ taken
    /// at the product of canonical prime generators.
    pub l_ratio_partial: Complex64,
    pub restricted_terms: usize,
    pub ideal_terms: usize,
}

impl ThetaPartial {
    /// partial_sum / l_ratio_partial; about 1/4 when θ⁴ is trivial, the
    /// share of odd ideals with a generator ≡ 1 mod 4.
    pub fn ratio(&self) -> Complex64 {
        self.partial_sum / self.l_ratio_partial
    }
}

/// An odd ideal with its generator, norm and φ.
#[derive(Clone, Debug)]
pub struct OddIdeal {
    pub generator: CycInt,
    pub norm: u64,
    pub phi: u64,
    /// Exponents of the prime factorization, in increasing prime order.
    pub exponents: Vec<u32>,
}

/// All odd ideals of norm ≤ t, generated as products of canonical primes,
/// in depth-first order over increasing primes.
pub fn odd_ideals(t: u64) -> Vec<OddIdeal> {
    let primes: Vec<(CycInt, u64)> = primes_up_to_norm(t)
        .into_iter()
        .map(|p| {
            let n = p.norm().try_into().expect("norm fits u64");
            (canonical_prime(&p), n)
        })
        .filter(|(_, n): &(CycInt, u64)| n % 2 == 1)
        .collect();
    let mut out = Vec::new();
    let root = OddIdeal {
        generator: CycInt::one(),
        norm: 1,
        phi: 1,
        exponents: Vec::new(),
    };
    extend(&primes, 0, &root, t, &mut out);
    out
}

fn extend(primes: &[(CycInt, u64)], start: usize, cur: &OddIdeal, t: u64, out: &mut Vec<OddIdeal>) {
    out.push(cur.clone());
    for i in start..primes.len() {
        let (p, np) = &primes[i];
        if cur.norm.saturating_mul(*np) > t {
            break;
        }
        let mut next = cur.clone();
        next.exponents.resize(i, 0);
        next.exponents.push(0);
        let mut pk = 1u64;
        while next.norm.saturating_mul(*np) <= t {
            next.generator = &next.generator * p;
            next.norm *= np;
            next.phi *= if pk == 1 { np - 1 } else { *np };
            pk *= np;
            next.exponents[i] += 1;
            extend(primes, i + 1, &next, t, out);
        }
    }
}

fn fourth_power(theta: &DirichletChar, c: &CycInt) -> Complex64 {
    match theta.exp(c) {
        Some(e) => {
            let o = theta.order() as u64;
            root_of_unity(4 * e as u64 % o, o)
        }
        None => Complex64::new(0.0, 0.0),
    }
}

/// Truncations of Σ φ(c₀⁴)θ⁴(c₀)/N(c₀)^{4s}, which equals
/// L(4s−4, θ⁴)/L(4s−3, θ⁴) up to the restriction to c₀ ≡ 1 mod 4.
pub fn theta_partial(theta: &DirichletChar, s: f64, t: u64) -> Result<ThetaPartial> {
    if !(s > 1.25) {
        return Err(Error::Precondition(format!("s = {s} must exceed 5/4")));
    }
    if t == 0 {
        return Err(Error::Precondition("cutoff must be positive".into()));
    }
    let mut restricted = CSum::new();
    let mut ideal = CSum::new();
    let (mut nr, mut ni) = (0, 0);
    for a in odd_ideals(t) {
        let n = a.norm as f64;
        let w = (a.phi as f64) * n.powi(3) / n.powf(4.0 * s);
        let v = fourth_power(theta, &a.generator);
        if v.norm() == 0.0 {
            continue;
        }
        ideal.add(v * w);
        ni += 1;
        if let Ok((c0, _)) = normalize_assoc(&a.generator) {
            restricted.add(fourth_power(theta, &c0) * w);
            nr += 1;
        }
    }
    Ok(ThetaPartial {
        partial_sum: restricted.value(),
        l_ratio_partial: ideal.value(),
        restricted_terms: nr,
        ideal_terms: ni,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Modulus, normalize_assoc};
    use std::sync::Arc;

    fn d3() -> Arc<Modulus> {
        Arc::new(Modulus::new(normalize_assoc(&CycInt::from(3)).unwrap().0).unwrap())
    }

    #[test]
    fn ideal_list_is_complete_and_distinct() {
        let ids = odd_ideals(300);
        let mut norms: Vec<u64> = ids.iter().map(|a| a.norm).collect();
        norms.sort();
        // one ideal of norm 1, four above 17 and their ten products in pairs
        assert_eq!(norms.iter().filter(|&&n| n == 1).count(), 1);
        assert_eq!(norms.iter().filter(|&&n| n == 17).count(), 4);
        assert_eq!(norms.iter().filter(|&&n| n == 289).count(), 10);
        for a in &ids {
            assert_eq!(a.generator.norm(), a.norm.into());
        }
    }

    #[test]
    fn converges_for_trivial_fourth_power() {
        let th = DirichletChar::trivial(d3()).unwrap();
        let a = theta_partial(&th, 1.35, 2000).unwrap();
        let b = theta_partial(&th, 1.35, 4000).unwrap();
        assert!(b.partial_sum.re >= a.partial_sum.re);
        assert!((b.partial_sum - a.partial_sum).norm() < 0.1 * b.partial_sum.norm());
        assert!(theta_partial(&th, 1.2, 100).is_err());
    }

    #[test]
    fn fourth_powers_match_unrestricted_filter() {
        // Σ φ(c)/N(c)^s over normalized c with N(c) ≤ T⁴, keeping c only when
        // it is c₀⁴ times a unit; checked by ideal equality against every
        // small c₀ rather than by reading exponents.
        let th = DirichletChar::trivial(d3()).unwrap();
        let (s, t) = (1.4, 20u64);
        let small = odd_ideals(t);
        let mut normalized_roots = CSum::new();
        let mut any_roots = CSum::new();
        for a in odd_ideals(t.pow(4)) {
            let r = (a.norm as f64).powf(0.25).round() as u64;
            if r.pow(4) != a.norm {
                continue;
            }
            let Ok((c, _)) = normalize_assoc(&a.generator) else { continue };
            let Some(b) = small.iter().find(|b| {
                let g = b.generator.pow(4);
                g.divides(&c) && c.divides(&g)
            }) else {
                continue;
            };
            let term = th.value(&c) * (a.phi as f64 / (a.norm as f64).powf(s));
            any_roots.add(term);
            if normalize_assoc(&b.generator).is_ok() {
                normalized_roots.add(term);
            }
        }
        let tp = theta_partial(&th, s, t).unwrap();
        assert!((tp.partial_sum - normalized_roots.value()).norm() < 1e-12);
        // every fourth power has a normalized generator, so dropping the
        // restriction on c₀ recovers the sum over all odd ideals
        assert!((tp.l_ratio_partial - any_roots.value()).norm() < 1e-12);
        assert!(tp.restricted_terms < tp.ideal_terms);
    }
}
