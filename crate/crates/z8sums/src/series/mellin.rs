use super::weight::SmoothWeight;

// 15-point Kronrod nodes on [0, 1] (symmetric), with the embedded 7-point
// Gauss weights on the odd-indexed nodes.
const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 50;

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XK[i];
        let s = f(c - dx) + f(c + dx);
        k += WK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: (f64, f64), tol: f64, depth: u32) -> f64 {
    let (v, err) = whole;
    if err <= tol || depth >= MAX_DEPTH {
        return v;
    }
    let m = 0.5 * (a + b);
    let left = gk15(f, a, m);
    let right = gk15(f, m, b);
    adapt(f, a, m, left, 0.5 * tol, depth + 1) + adapt(f, m, b, right, 0.5 * tol, depth + 1)
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of f over [a, b] to absolute
/// tolerance `tol`, bisecting until each panel's Gauss/Kronrod gap is
/// within its share of the budget.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let whole = gk15(&f, a, b);
    adapt(&f, a, b, whole, tol, 0)
}

/// Ψ̂(s) = ∫ Ψ(y) y^{s−1} dy over the support of Ψ.
pub fn mellin_hat(w: &SmoothWeight, s: f64) -> f64 {
    mellin_hat_tol(w, s, 1e-10)
}

pub fn mellin_hat_tol(w: &SmoothWeight, s: f64, tol: f64) -> f64 {
    let (a, b) = w.support();
    integrate(|y| w.eval(y) * y.powf(s - 1.0), a, b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-14);
        assert!((v - 0.0).abs() < 1e-13);
        let v = integrate(|x| x.powi(20), 0.0, 1.0, 1e-14);
        assert!((v - 1.0 / 21.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate(|x| (10.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!(v.abs() < 1e-11);
    }

    #[test]
    fn mellin_at_one_is_the_area() {
        let w = SmoothWeight::default();
        let area = integrate(|y| w.eval(y), 0.5, 2.0, 1e-13);
        assert!((mellin_hat(&w, 1.0) - area).abs() < 1e-10);
    }

    #[test]
    fn halving_the_tolerance_changes_little() {
        let w = SmoothWeight::default();
        for s in [-0.5, -0.25] {
            let coarse = mellin_hat_tol(&w, s, 1e-10);
            let fine = mellin_hat_tol(&w, s, 5e-11);
            assert!((coarse - fine).abs() < 1e-10, "s={s}");
        }
    }
}
