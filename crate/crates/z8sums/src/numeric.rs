//! Deterministic compensated accumulation.

use num_complex::Complex64;

/// Neumaier-compensated complex sum; order-dependent but reproducible.
#[derive(Clone, Copy, Debug, Default)]
pub struct CSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.re_c, z.re);
        neumaier(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

impl FromIterator<Complex64> for CSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = CSum::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}

/// Compensated sum of a slice, in slice order.
pub fn csum(values: &[Complex64]) -> Complex64 {
    values.iter().copied().collect::<CSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_is_exact() {
        let v = [
            Complex64::new(1e16, 1.0),
            Complex64::new(1.0, -1e16),
            Complex64::new(-1e16, 1e16),
        ];
        assert_eq!(csum(&v), Complex64::new(1.0, 1.0));
    }
}
