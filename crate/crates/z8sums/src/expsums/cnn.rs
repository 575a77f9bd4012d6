use num_complex::Complex64;
use serde::Serialize;

use super::report::Report;
use crate::characters::{ff_char_table, root_of_unity, AdditiveMode, FfChar, FfCharTable};
use crate::error::{Error, Result};
use crate::numeric::CSum;

/// Σ_{x ∈ F_p} e((A x^{2n} + B x^n)/p) against the character-sum expansion
/// over the n characters ρ of order dividing n, each with a square root ξ.
///
/// Two right-hand sides are produced:
///
/// * `literal`: Σ_ρ ρ(B²)·τ(η)η(−1)/p·D(ξ)
/// * `corrected`: 1 + Σ_ρ ξ(4)ρ̄(B)·τ(η)η(−1)/p·D(ξ)
///
/// where D(ξ) = Σ_{a,b ≠ 0} ξ(a)η(a)ξ(b)e((a + b + 4ab·A·B⁻²)/p) is summed
/// directly. The report's residual is the corrected one; the literal gap is
/// kept under the check `literal_reading`.
#[derive(Clone, Debug, Serialize)]
pub struct CnnOutcome {
    pub lhs: Complex64,
    pub literal: Complex64,
    pub corrected: Complex64,
    pub residual_literal: f64,
    pub residual_corrected: f64,
}

struct DoubleSum<'a> {
    t: &'a FfCharTable,
    roots: Vec<Complex64>,
}

impl<'a> DoubleSum<'a> {
    fn new(t: &'a FfCharTable) -> Self {
        let p = t.p();
        let d = p * (p - 1);
        DoubleSum {
            t,
            roots: (0..d).map(|k| root_of_unity(k, d)).collect(),
        }
    }

    /// D(ξ) with exact integer phases over p(p − 1).
    fn eval(&self, xi: FfChar, eta: FfChar, k: u64) -> Complex64 {
        let p = self.t.p();
        let q = p - 1;
        let d = p * q;
        let mut acc = CSum::new();
        for a in 1..p {
            let ea = (self.t.exp(xi, a).unwrap() + self.t.exp(eta, a).unwrap()) % q;
            // a + b(1 + 4aK)
            let lin_b = (1 + 4 * a % p * k) % p;
            for b in 1..p {
                let e = (ea + self.t.exp(xi, b).unwrap()) % q;
                let l = (a + b * lin_b) % p;
                acc.add(self.roots[((e * p + l * q) % d) as usize]);
            }
        }
        acc.value()
    }
}

pub fn cnn_check(n: u64, p: u64, a: i64, b: i64) -> Result<(CnnOutcome, Report)> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    let t = ff_char_table(p, 2 * n)?;
    let (ar, br) = (a.rem_euclid(p as i64) as u64, b.rem_euclid(p as i64) as u64);
    if ar == 0 || br == 0 {
        return Err(Error::Precondition(format!("gcd(AB, {p}) ≠ 1")));
    }
    let lhs: Complex64 = (0..p)
        .map(|x| {
            let xn = crate::ring::zarith::pow_mod(x, n, p);
            let v = (ar * (xn * xn % p) + br * xn) % p;
            t.e(v as i64)
        })
        .collect::<CSum>()
        .value();

    let eta = t.quadratic();
    let tau = t.gauss(eta);
    let base = tau * t.value(eta, -1) / p as f64;
    let k = ar * t.inverse_mod_p(br * br % p) % p;
    let ds = DoubleSum::new(&t);
    let mut literal = CSum::new();
    let mut corrected = CSum::new();
    corrected.add(Complex64::new(1.0, 0.0));
    let mut report = Report::new("cnn", p.to_string(), p, AdditiveMode::Plain);
    report.term("constant", Complex64::new(1.0, 0.0));
    for r in 0..n {
        let xi = FfChar {
            a: r * (p - 1) / (2 * n),
        };
        let rho = t.pow(xi, 2);
        let d = ds.eval(xi, eta, k);
        let lit = t.value(rho, (br * br % p) as i64) * base * d;
        let cor = t.value(xi, 4) * t.value(t.inv(rho), br as i64) * base * d;
        literal.add(lit);
        corrected.add(cor);
        report.term(format!("rho^{r}"), cor);
    }
    let (literal, corrected) = (literal.value(), corrected.value());
    let outcome = CnnOutcome {
        lhs,
        literal,
        corrected,
        residual_literal: (lhs - literal).norm(),
        residual_corrected: (lhs - corrected).norm(),
    };
    report.value("literal", literal);
    report.check("literal_reading", outcome.residual_literal);
    Ok((outcome, report.close(lhs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrected_expansion_holds() {
        for (n, p) in [(2, 17), (3, 13), (4, 17), (2, 29)] {
            for (a, b) in [(1, 1), (2, 3), (5, 7)] {
                let (o, r) = cnn_check(n, p, a, b).unwrap();
                let tol = 1e-8 * (p as f64).sqrt();
                assert!(o.residual_corrected < tol, "n={n} p={p}: {o:?}");
                assert!((r.residual - o.residual_corrected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn preconditions() {
        assert!(cnn_check(3, 17, 1, 1).is_err());
        assert!(cnn_check(2, 17, 17, 1).is_err());
    }
}
