use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::CycInt;

/// Canonical residue: coordinates 0 ≤ v[i] < diag[i] in the normal form basis.
pub type Res = [i64; 4];

/// Largest modulus norm handled by the machine-word residue arithmetic.
pub const MAX_RESIDUE_NORM: u64 = 1 << 60;

/// Arithmetic in R/cR on machine words.
///
/// `hnf[r]` is the r-th basis vector of cR; it vanishes in coordinates > r and
/// has positive diagonal `diag[r]`. Reduction clears coordinates 3, 2, 1, 0 in
/// that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueRing {
    hnf: [[i64; 4]; 4],
    diag: [i64; 4],
    count: u64,
    /// Image of ω when R/cR ≅ Z/diag[0] (all other diagonal entries 1).
    cyclic_omega: Option<i64>,
}

impl ResidueRing {
    /// Normal form of the lattice c·R. Panics on c = 0; callers validate.
    pub(crate) fn new(c: &CycInt) -> Self {
        let h = hermite_basis(c);
        let mut hnf = [[0i64; 4]; 4];
        for r in 0..4 {
            for i in 0..4 {
                hnf[r][i] = h[r][i].to_i64().expect("normal form entry fits in i64");
            }
        }
        let diag = [hnf[0][0], hnf[1][1], hnf[2][2], hnf[3][3]];
        let count = diag.iter().map(|&d| d as u64).product();
        let cyclic_omega = if diag[1] == 1 && diag[2] == 1 && diag[3] == 1 {
            Some((-hnf[1][0]).rem_euclid(diag[0]))
        } else {
            None
        };
        ResidueRing {
            hnf,
            diag,
            count,
            cyclic_omega,
        }
    }

    pub fn hnf(&self) -> &[[i64; 4]; 4] {
        &self.hnf
    }

    pub fn diag(&self) -> &[i64; 4] {
        &self.diag
    }

    /// |R/cR| = |N(c)|.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Least positive rational integer in cR.
    pub fn exponent(&self) -> i64 {
        self.diag[0]
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_omega.is_some()
    }

    pub fn zero(&self) -> Res {
        [0; 4]
    }

    pub fn one(&self) -> Res {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Res {
        self.reduce_i128([n as i128, 0, 0, 0])
    }

    pub fn reduce_i128(&self, mut v: [i128; 4]) -> Res {
        let m = self.diag[0] as i128;
        if let Some(w) = self.cyclic_omega {
            let w = w as i128;
            // Horner in ω ≡ w
            let mut acc = v[3].rem_euclid(m);
            for k in (0..3).rev() {
                acc = (acc * w + v[k]).rem_euclid(m);
            }
            return [acc as i64, 0, 0, 0];
        }
        for x in v.iter_mut() {
            *x = x.rem_euclid(m);
        }
        for r in (1..4).rev() {
            let q = v[r].div_euclid(self.diag[r] as i128);
            if q != 0 {
                for i in 0..=r {
                    v[i] -= q * self.hnf[r][i] as i128;
                }
            }
        }
        v[0] = v[0].rem_euclid(m);
        [v[0] as i64, v[1] as i64, v[2] as i64, v[3] as i64]
    }

    pub fn reduce(&self, v: &Res) -> Res {
        self.reduce_i128(v.map(|x| x as i128))
    }

    pub fn from_cycint(&self, x: &CycInt) -> Res {
        let m = BigInt::from(self.diag[0]);
        let v: [i128; 4] = std::array::from_fn(|i| {
            x.coeff(i)
                .mod_floor(&m)
                .to_i128()
                .expect("reduced coordinate fits")
        });
        self.reduce_i128(v)
    }

    pub fn to_cycint(&self, v: &Res) -> CycInt {
        CycInt::from_i64s(*v)
    }

    pub fn add(&self, a: &Res, b: &Res) -> Res {
        if self.cyclic_omega.is_some() {
            let m = self.diag[0];
            let s = a[0] + b[0];
            return [if s >= m { s - m } else { s }, 0, 0, 0];
        }
        self.reduce_i128(std::array::from_fn(|i| a[i] as i128 + b[i] as i128))
    }

    pub fn sub(&self, a: &Res, b: &Res) -> Res {
        if self.cyclic_omega.is_some() {
            let m = self.diag[0];
            let s = a[0] - b[0];
            return [if s < 0 { s + m } else { s }, 0, 0, 0];
        }
        self.reduce_i128(std::array::from_fn(|i| a[i] as i128 - b[i] as i128))
    }

    pub fn neg(&self, a: &Res) -> Res {
        self.sub(&[0; 4], a)
    }

    pub fn mul(&self, a: &Res, b: &Res) -> Res {
        if self.cyclic_omega.is_some() {
            let m = self.diag[0] as i128;
            return [((a[0] as i128 * b[0] as i128) % m) as i64, 0, 0, 0];
        }
        let mut v = [0i128; 4];
        for i in 0..4 {
            if a[i] == 0 {
                continue;
            }
            for j in 0..4 {
                let p = a[i] as i128 * b[j] as i128;
                let k = i + j;
                if k < 4 {
                    v[k] += p;
                } else {
                    v[k - 4] -= p;
                }
            }
        }
        self.reduce_i128(v)
    }

    pub fn pow(&self, a: &Res, mut e: u64) -> Res {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn is_zero(&self, a: &Res) -> bool {
        *a == [0; 4]
    }

    /// Mixed-radix index, coordinate 0 most significant.
    pub fn index(&self, a: &Res) -> u64 {
        let d = &self.diag;
        (((a[0] as u64 * d[1] as u64 + a[1] as u64) * d[2] as u64 + a[2] as u64) * d[3] as u64)
            + a[3] as u64
    }

    pub fn from_index(&self, mut idx: u64) -> Res {
        let d = &self.diag;
        let a3 = idx % d[3] as u64;
        idx /= d[3] as u64;
        let a2 = idx % d[2] as u64;
        idx /= d[2] as u64;
        let a1 = idx % d[1] as u64;
        idx /= d[1] as u64;
        [idx as i64, a1 as i64, a2 as i64, a3 as i64]
    }

    /// All residues in lexicographic order of normal-form coordinates.
    pub fn iter(&self) -> impl Iterator<Item = Res> + '_ {
        (0..self.count).map(move |i| self.from_index(i))
    }
}

/// Basis of c·R in the triangular normal form described on [`ResidueRing`].
pub(crate) fn hermite_basis(c: &CycInt) -> [[BigInt; 4]; 4] {
    assert!(!c.is_zero(), "normal form of the zero ideal");
    let mut vecs: Vec<[BigInt; 4]> = (0..4)
        .map(|j| {
            let v = c * &CycInt::omega_pow(j);
            v.coeffs().clone()
        })
        .collect();
    let mut basis: [[BigInt; 4]; 4] = Default::default();
    for r in (0..4).rev() {
        // Euclid on coordinate r across the remaining vectors
        loop {
            let nz: Vec<usize> = (0..vecs.len()).filter(|&k| !vecs[k][r].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz
                .iter()
                .min_by(|&&a, &&b| vecs[a][r].abs().cmp(&vecs[b][r].abs()))
                .expect("non-empty");
            let pv = vecs[piv].clone();
            for &k in &nz {
                if k == piv {
                    continue;
                }
                let q = vecs[k][r].div_floor(&pv[r]);
                for i in 0..4 {
                    let t = &q * &pv[i];
                    vecs[k][i] -= t;
                }
            }
        }
        let k = (0..vecs.len())
            .find(|&k| !vecs[k][r].is_zero())
            .expect("full-rank lattice");
        let mut v = vecs.remove(k);
        if v[r].is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
        basis[r] = v;
    }
    for s in 1..4 {
        for r in (0..s).rev() {
            let q = basis[s][r].div_floor(&basis[r][r]);
            if !q.is_zero() {
                let row = basis[r].clone();
                for i in 0..4 {
                    let t = &q * &row[i];
                    basis[s][i] -= t;
                }
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_counts() {
        let r = ResidueRing::new(&CycInt::from(3));
        assert_eq!(r.count(), 81);
        let r = ResidueRing::new(&CycInt::from_i64s([1, 1, 0, 0]));
        assert_eq!(r.count(), 2);
        assert!(r.is_cyclic());
    }

    #[test]
    fn cyclic_and_general_agree_with_bigint() {
        for c in [[3, 1, 0, 0], [5, 0, 0, 0], [1, 2, -1, 1], [2, 1, 1, 0]] {
            let c = CycInt::from_i64s(c);
            let ring = ResidueRing::new(&c);
            let a = CycInt::from_i64s([7, -3, 12, 5]);
            let b = CycInt::from_i64s([-4, 9, 1, -8]);
            let ra = ring.from_cycint(&a);
            let rb = ring.from_cycint(&b);
            assert_eq!(ring.mul(&ra, &rb), ring.from_cycint(&(&a * &b)));
            assert_eq!(ring.add(&ra, &rb), ring.from_cycint(&(&a + &b)));
            // the difference of an element and its residue lies in cR
            let d = &a - &ring.to_cycint(&ra);
            assert!(c.divides(&d));
        }
    }

    #[test]
    fn index_round_trip() {
        let ring = ResidueRing::new(&CycInt::from(3));
        for (i, r) in ring.iter().enumerate() {
            assert_eq!(ring.index(&r), i as u64);
        }
    }
}
