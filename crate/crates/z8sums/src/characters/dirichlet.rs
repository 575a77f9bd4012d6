use std::sync::Arc;

use num_complex::Complex64;

use super::additive::root_of_unity;
use super::symbol::UnitStructure;
use crate::error::{Error, Result};
use crate::ring::{CycInt, Modulus, Res};

/// Default bound on N(D) for character enumeration.
pub const DIRICHLET_NORM_BOUND: u64 = 1_000_000;

/// (R/D)^* as ⊕ Z/dᵢ, found by brute force: generators are added until the
/// subgroup they span is everything, then the relation lattice is put in
/// Smith normal form.
#[derive(Debug)]
pub struct UnitGroup {
    modulus: Arc<Modulus>,
    /// Invariant factors dᵢ > 1.
    invariants: Vec<u64>,
    /// For each residue index: coordinates w.r.t. the invariant basis, or
    /// None for non-units.
    coords: Vec<Option<Vec<u64>>>,
    order: u64,
    exponent: u64,
}

impl UnitGroup {
    pub fn new(d: Arc<Modulus>) -> Result<Self> {
        let n = d.norm();
        if n > DIRICHLET_NORM_BOUND {
            return Err(Error::TooLarge {
                norm: n.to_string(),
                bound: DIRICHLET_NORM_BOUND.to_string(),
            });
        }
        let ring = d.ring().clone();
        let is_unit: Vec<bool> = if d.is_unit() {
            vec![true]
        } else if d.is_even() {
            // gcd test through the generic inverse
            ring.iter()
                .map(|x| crate::ring::inverse_mod(&ring.to_cycint(&x), &d).is_ok())
                .collect()
        } else {
            let us = UnitStructure::new(&d)?;
            ring.iter().map(|x| us.is_unit(&x)).collect()
        };
        let phi = is_unit.iter().filter(|&&b| b).count() as u64;

        // incremental spanning set with raw exponent coordinates
        let mut raw: Vec<Option<Vec<u64>>> = vec![None; n as usize];
        let one = ring.one();
        raw[ring.index(&one) as usize] = Some(Vec::new());
        let mut members: Vec<Res> = vec![one];
        let mut relations: Vec<Vec<i64>> = Vec::new();
        let mut gens = 0usize;
        for idx in 0..n {
            if members.len() as u64 == phi {
                break;
            }
            if !is_unit[idx as usize] || raw[idx as usize].is_some() {
                continue;
            }
            let x = ring.from_index(idx);
            let mut y = x;
            let mut k = 1u64;
            while raw[ring.index(&y) as usize].is_none() {
                y = ring.mul(&y, &x);
                k += 1;
            }
            let prev = raw[ring.index(&y) as usize].clone().unwrap_or_default();
            let mut rel = vec![0i64; gens + 1];
            for (i, &c) in prev.iter().enumerate() {
                rel[i] = -(c as i64);
            }
            rel[gens] = k as i64;
            relations.push(rel);
            let base: Vec<Res> = members.clone();
            let mut xa = x;
            for a in 1..k {
                for h in &base {
                    let z = ring.mul(h, &xa);
                    let mut c = raw[ring.index(h) as usize].clone().unwrap_or_default();
                    c.resize(gens, 0);
                    c.push(a);
                    raw[ring.index(&z) as usize] = Some(c);
                    members.push(z);
                }
                xa = ring.mul(&xa, &x);
            }
            gens += 1;
        }

        let mut rel = vec![vec![0i64; gens]; gens];
        for (i, r) in relations.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                rel[i][j] = v;
            }
        }
        let (diag, v) = smith_columns(rel);
        let keep: Vec<usize> = (0..gens).filter(|&i| diag[i] > 1).collect();
        let invariants: Vec<u64> = keep.iter().map(|&i| diag[i] as u64).collect();
        let coords = raw
            .into_iter()
            .map(|c| {
                c.map(|mut c| {
                    c.resize(gens, 0);
                    keep.iter()
                        .map(|&j| {
                            let s: i128 = (0..gens).map(|i| c[i] as i128 * v[i][j] as i128).sum();
                            s.rem_euclid(diag[j] as i128) as u64
                        })
                        .collect()
                })
            })
            .collect();
        let exponent = invariants.iter().fold(1u64, |a, &b| lcm(a, b));
        Ok(UnitGroup {
            modulus: d,
            invariants,
            coords,
            order: phi,
            exponent,
        })
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.modulus
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn coords(&self, x: &Res) -> Option<&[u64]> {
        self.coords[self.modulus.ring().index(x) as usize].as_deref()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    crate::ring::zarith::gcd(a, b)
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Diagonalizes a square integer matrix by unimodular row and column
/// operations; returns the diagonal and the column transform V.
fn smith_columns(mut a: Vec<Vec<i64>>) -> (Vec<i64>, Vec<Vec<i64>>) {
    let n = a.len();
    let mut v: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for t in 0..n {
        loop {
            // pivot: smallest nonzero entry in the trailing block
            let mut piv: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && piv.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                        piv = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = piv else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..n {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for i in t..n {
                        a[i][j] -= q * a[i][t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility condition for the rest of the block
            let bad = (t + 1..n).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
            match bad {
                Some((i, _)) => {
                    for j in t..n {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for j in t..n {
                a[t][j] = -a[t][j];
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

#[derive(Clone, Debug)]
enum CharKind {
    Trivial,
    /// Exponents over `order` per residue index (u32::MAX marks non-units).
    Table(Arc<Vec<u32>>),
    /// χ_a(x) = e(Σ aᵢ·xᵢ / dᵢ) in the invariant basis.
    Group { group: Arc<UnitGroup>, a: Vec<u64> },
}

/// A Dirichlet character on (R/D)^*, values as exponents over a common order.
#[derive(Clone, Debug)]
pub struct DirichletChar {
    modulus: Arc<Modulus>,
    order: u32,
    kind: CharKind,
    units: Option<Arc<UnitStructure>>,
}

impl DirichletChar {
    pub fn trivial(d: Arc<Modulus>) -> Result<Self> {
        let units = if d.is_even() {
            None
        } else {
            Some(Arc::new(UnitStructure::new(&d)?))
        };
        Ok(DirichletChar {
            modulus: d,
            order: 1,
            kind: CharKind::Trivial,
            units,
        })
    }

    /// x ↦ (x/D)_k for odd D, k ∈ {2, 4}.
    pub fn residue_symbol(d: Arc<Modulus>, k: u32) -> Result<Self> {
        if k != 2 && k != 4 {
            return Err(Error::Invalid(format!("symbol order must be 2 or 4, got {k}")));
        }
        let us = Arc::new(UnitStructure::new(&d)?);
        let ring = d.ring();
        let table: Vec<u32> = ring
            .iter()
            .map(|x| match k {
                4 => us.quartic_exp(&x).map_or(u32::MAX, u32::from),
                _ => us.quadratic_exp(&x).map_or(u32::MAX, |j| 2 * j as u32),
            })
            .collect();
        Ok(DirichletChar {
            modulus: d,
            order: 4,
            kind: CharKind::Table(Arc::new(table)),
            units: Some(us),
        })
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.modulus
    }

    /// Common order over which exponents are expressed.
    pub fn order(&self) -> u32 {
        self.order
    }

    fn is_unit(&self, x: &Res) -> bool {
        match &self.units {
            Some(us) => us.is_unit(x),
            None => crate::ring::inverse_mod(&self.modulus.ring().to_cycint(x), &self.modulus).is_ok(),
        }
    }

    /// Exponent e with χ(x) = e(e/order); None on non-units.
    pub fn exp_res(&self, x: &Res) -> Option<u32> {
        match &self.kind {
            CharKind::Trivial => self.is_unit(x).then_some(0),
            CharKind::Table(t) => {
                let v = t[self.modulus.ring().index(x) as usize];
                (v != u32::MAX).then_some(v)
            }
            CharKind::Group { group, a } => {
                let c = group.coords(x)?;
                let e = group.exponent();
                let mut s: u128 = 0;
                for (i, &d) in group.invariants().iter().enumerate() {
                    s += a[i] as u128 * c[i] as u128 * (e / d) as u128;
                }
                Some((s % e as u128) as u32)
            }
        }
    }

    pub fn exp(&self, x: &CycInt) -> Option<u32> {
        self.exp_res(&self.modulus.ring().from_cycint(x))
    }

    pub fn value_res(&self, x: &Res) -> Complex64 {
        match self.exp_res(x) {
            Some(e) => root_of_unity(e as u64, self.order as u64),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn value(&self, x: &CycInt) -> Complex64 {
        self.value_res(&self.modulus.ring().from_cycint(x))
    }

    fn materialize(&self) -> Vec<u32> {
        self.modulus
            .ring()
            .iter()
            .map(|x| self.exp_res(&x).unwrap_or(u32::MAX))
            .collect()
    }

    /// χⁿ (n may be negative for inverses).
    pub fn pow(&self, n: i64) -> DirichletChar {
        let o = self.order as i64;
        let table: Vec<u32> = self
            .materialize()
            .into_iter()
            .map(|v| {
                if v == u32::MAX {
                    v
                } else {
                    (v as i64 * n).rem_euclid(o) as u32
                }
            })
            .collect();
        DirichletChar {
            modulus: self.modulus.clone(),
            order: self.order,
            kind: CharKind::Table(Arc::new(table)),
            units: self.units.clone(),
        }
    }

    pub fn conj(&self) -> DirichletChar {
        self.pow(-1)
    }

    /// Least n ≥ 1 with χⁿ trivial.
    pub fn exact_order(&self) -> u32 {
        if let CharKind::Trivial = self.kind {
            return 1;
        }
        let g = self
            .materialize()
            .into_iter()
            .filter(|&v| v != u32::MAX)
            .fold(self.order as u64, |acc, v| gcd(acc, v as u64));
        (self.order as u64 / g) as u32
    }

    pub fn is_trivial(&self) -> bool {
        self.exact_order() == 1
    }

    /// Position in the enumeration order, if the character came from one.
    pub fn group_exponents(&self) -> Option<&[u64]> {
        match &self.kind {
            CharKind::Group { a, .. } => Some(a),
            _ => None,
        }
    }
}

/// All characters of (R/D)^*, trivial first, then lexicographic in the
/// invariant-basis exponents.
pub fn dirichlet_enumerate(d: Arc<Modulus>) -> Result<Vec<DirichletChar>> {
    let group = Arc::new(UnitGroup::new(d.clone())?);
    let units = if d.is_even() {
        None
    } else {
        Some(Arc::new(UnitStructure::new(&d)?))
    };
    let order = group.exponent() as u32;
    let inv = group.invariants().to_vec();
    let total: u64 = inv.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    for mut idx in 0..total {
        let mut a = vec![0u64; inv.len()];
        for i in (0..inv.len()).rev() {
            a[i] = idx % inv[i];
            idx /= inv[i];
        }
        out.push(DirichletChar {
            modulus: d.clone(),
            order,
            kind: CharKind::Group {
                group: group.clone(),
                a,
            },
            units: units.clone(),
        });
    }
    Ok(out)
}
