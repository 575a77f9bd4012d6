use serde::Serialize;

use crate::error::{Error, Result};

/// A compactly supported non-negative weight Ψ on (a, b) ⊂ (0, ∞).
#[derive(Clone, Debug, Serialize)]
pub struct SmoothWeight {
    a: f64,
    b: f64,
    factor: f64,
    shape: Shape,
}

#[derive(Clone, Debug, Serialize)]
enum Shape {
    Bump,
    Samples(Spline),
}

impl Default for SmoothWeight {
    fn default() -> Self {
        SmoothWeight::bump(0.5, 2.0).expect("default support is valid")
    }
}

impl SmoothWeight {
    /// exp(−1/(1−u²)) with u the affine image of (a, b) onto (−1, 1).
    pub fn bump(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > a && b.is_finite()) {
            return Err(Error::Invalid(format!("support ({a}, {b}) must satisfy 0 < a < b")));
        }
        Ok(SmoothWeight {
            a,
            b,
            factor: 1.0,
            shape: Shape::Bump,
        })
    }

    /// Natural cubic spline through (y, Ψ(y)) samples; the support is the
    /// span of the abscissae and negative overshoot is clipped to 0.
    pub fn from_samples(points: &[(f64, f64)]) -> Result<Self> {
        let spline = Spline::new(points)?;
        let (a, b) = (spline.xs[0], *spline.xs.last().unwrap());
        if a <= 0.0 {
            return Err(Error::Invalid("sample abscissae must be positive".into()));
        }
        Ok(SmoothWeight {
            a,
            b,
            factor: 1.0,
            shape: Shape::Samples(spline),
        })
    }

    /// k·Ψ for k ≥ 0.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::Invalid(format!("weight factor {k} must be finite and ≥ 0")));
        }
        Ok(SmoothWeight {
            factor: self.factor * k,
            ..self.clone()
        })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Whether y lies in the open support.
    pub fn contains(&self, y: f64) -> bool {
        y > self.a && y < self.b
    }

    pub fn eval(&self, y: f64) -> f64 {
        if !self.contains(y) {
            return 0.0;
        }
        let v = match &self.shape {
            Shape::Bump => {
                let u = 2.0 * (y - self.a) / (self.b - self.a) - 1.0;
                let d = 1.0 - u * u;
                if d <= 0.0 {
                    0.0
                } else {
                    (-1.0 / d).exp()
                }
            }
            Shape::Samples(s) => s.eval(y).max(0.0),
        };
        self.factor * v
    }
}

#[derive(Clone, Debug, Serialize)]
struct Spline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl Spline {
    fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::Invalid("need at least 3 samples".into()));
        }
        let mut pts = points.to_vec();
        pts.sort_by(|p, q| p.0.total_cmp(&q.0));
        if pts.windows(2).any(|w| w[1].0 <= w[0].0) || pts.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::Invalid("sample abscissae must be finite and distinct".into()));
        }
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let n = xs.len();
        // Thomas algorithm on the interior knots; m[0] = m[n-1] = 0.
        let mut m = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = xs[i] - xs[i - 1];
            let h1 = xs[i + 1] - xs[i];
            let rhs = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            let diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
            c[i] = h1 / diag;
            d[i] = (rhs - h0 * d[i - 1]) / diag;
        }
        for i in (1..n - 1).rev() {
            m[i] = d[i] - c[i] * m[i + 1];
        }
        Ok(Spline { xs, ys, m })
    }

    fn eval(&self, x: f64) -> f64 {
        let i = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            j => (j - 1).min(self.xs.len() - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let s = 1.0 - t;
        s * self.ys[i]
            + t * self.ys[i + 1]
            + h * h / 6.0 * ((s * s * s - s) * self.m[i] + (t * t * t - t) * self.m[i + 1])
    }
}
