use std::sync::OnceLock;

use num_traits::ToPrimitive;

use super::factor::{factor_allow_unit, Factorization, DEFAULT_FACTOR_BOUND};
use super::residue::{ResidueRing, MAX_RESIDUE_NORM};
use super::CycInt;
use crate::error::{Error, Result};

/// A nonzero element with its residue-ring normal form and a lazily computed
/// factorization.
#[derive(Debug)]
pub struct Modulus {
    elem: CycInt,
    ring: ResidueRing,
    factors: OnceLock<Result<Factorization>>,
}

impl Clone for Modulus {
    fn clone(&self) -> Self {
        Modulus {
            elem: self.elem.clone(),
            ring: self.ring.clone(),
            factors: self.factors.clone(),
        }
    }
}

impl Modulus {
    pub fn new(c: impl Into<CycInt>) -> Result<Self> {
        let c = c.into();
        if c.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let n = c.norm();
        if n.to_u64().is_none_or(|v| v > MAX_RESIDUE_NORM) {
            return Err(Error::TooLarge {
                norm: n.to_string(),
                bound: MAX_RESIDUE_NORM.to_string(),
            });
        }
        let ring = ResidueRing::new(&c);
        Ok(Modulus {
            elem: c,
            ring,
            factors: OnceLock::new(),
        })
    }

    pub fn elem(&self) -> &CycInt {
        &self.elem
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    /// |N(c)|, the number of residues.
    pub fn norm(&self) -> u64 {
        self.ring.count()
    }

    pub fn residue_count(&self) -> u64 {
        self.ring.count()
    }

    pub fn is_unit(&self) -> bool {
        self.ring.count() == 1
    }

    /// The normal-form basis of c·R; row r is the r-th basis vector.
    pub fn lattice(&self) -> [[i64; 4]; 4] {
        *self.ring.hnf()
    }

    /// Canonical representative of x mod c.
    pub fn reduce(&self, x: &CycInt) -> CycInt {
        self.ring.to_cycint(&self.ring.from_cycint(x))
    }

    pub fn congruent(&self, a: &CycInt, b: &CycInt) -> bool {
        self.ring.from_cycint(a) == self.ring.from_cycint(b)
    }

    /// All canonical residues, lexicographic in normal-form coordinates.
    pub fn residues(&self) -> impl Iterator<Item = CycInt> + '_ {
        self.ring.iter().map(|r| self.ring.to_cycint(&r))
    }

    /// Factorization (cached; a unit modulus has no prime factors).
    pub fn factors(&self) -> Result<&Factorization> {
        self.factors
            .get_or_init(|| factor_allow_unit(&self.elem, DEFAULT_FACTOR_BOUND))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Whether 1+ω divides c.
    pub fn is_even(&self) -> bool {
        self.norm() % 2 == 0
    }
}
