use num_complex::Complex64;

use super::additive::{AdditiveMode, PhaseMap};
use super::dirichlet::DirichletChar;
use crate::error::{Error, Result};
use crate::numeric::CSum;
use crate::ring::Modulus;

/// τ(χ) = Σ_{x unit mod c} χ(x)·ψ(x/c).
pub fn gauss_sum(chi: &DirichletChar, c: &Modulus, mode: AdditiveMode) -> Result<Complex64> {
    if chi.modulus().lattice() != c.lattice() {
        return Err(Error::Precondition(
            "character modulus differs from the summation modulus".into(),
        ));
    }
    let pm = PhaseMap::new(c, mode);
    let ring = c.ring();
    let mut s = CSum::new();
    for x in ring.iter() {
        if chi.exp_res(&x).is_some() {
            s.add(chi.value_res(&x) * pm.eval(&x));
        }
    }
    Ok(s.value())
}
