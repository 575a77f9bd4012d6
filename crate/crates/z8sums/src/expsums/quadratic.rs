use num_complex::Complex64;
use serde::Serialize;

use super::complete::times_symbol;
use super::poly::{Method, SumValue};
use crate::characters::{power_symbol, AdditiveMode, PhaseMap, SymbolValue};
use crate::error::{Error, Result};
use crate::ring::{are_coprime, inverse_mod, CycInt, Modulus};

/// m x² + n x + r = m (x − s)² + k mod c, with s = −n·(2m)⁻¹ and
/// k = r − n²·(4m)⁻¹.
#[derive(Clone, Debug, Serialize)]
pub struct CompletedSquare {
    pub shift: CycInt,
    pub constant: CycInt,
    /// (m/c)₂.
    pub symbol: SymbolValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadClosed {
    pub value: SumValue,
    pub square: CompletedSquare,
}

/// Closed form of Σ_{x mod c} ψ_c(m x² + n x + r) for c ≡ 1 mod 4 and
/// (2m, c) = 1: (m/c)₂·ψ_c(r)·ψ_c(−n²·(4m)⁻¹)·√N(c).
pub fn quad_sum_closed(
    m: &CycInt,
    n: &CycInt,
    r: &CycInt,
    c: &Modulus,
    mode: AdditiveMode,
) -> Result<QuadClosed> {
    if !c.elem().is_one_mod_4() {
        return Err(Error::Precondition(format!("{} is not 1 mod 4", c.elem())));
    }
    if !are_coprime(&(m * &CycInt::from(2)), c.elem()) {
        return Err(Error::Precondition("gcd(2m, c) ≠ 1".into()));
    }
    let inv2m = inverse_mod(&(m * &CycInt::from(2)), c)?;
    let inv4m = inverse_mod(&(m * &CycInt::from(4)), c)?;
    let shift = c.reduce(&-&(n * &inv2m));
    let constant = c.reduce(&(r - &(&(n * n) * &inv4m)));
    let symbol = power_symbol(m, c.elem(), 2)?;
    let pm = PhaseMap::new(c, mode);
    let rot = pm.eval_big(&constant);
    let v = times_symbol(rot, symbol) * (c.norm() as f64).sqrt();
    Ok(QuadClosed {
        value: SumValue::new(v, c.norm(), Method::Closed),
        square: CompletedSquare {
            shift,
            constant,
            symbol,
        },
    })
}

/// The Gauss-sum sign: Σ_{x mod c} ψ_c(x²) / √N(c), by enumeration.
pub fn gauss_sign(c: &Modulus, mode: AdditiveMode) -> Complex64 {
    let g = super::complete::plain_sum(&super::PolySpec::monomial(1, 2), c, mode);
    g / (c.norm() as f64).sqrt()
}
