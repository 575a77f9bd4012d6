use num_complex::Complex64;
use serde::Serialize;

use crate::characters::AdditiveMode;
use crate::numeric::CSum;

#[derive(Clone, Debug, Serialize)]
pub struct Term {
    pub label: String,
    pub value: Complex64,
}

/// A secondary comparison carried alongside the main residual.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
}

/// Outcome of one identity evaluation.
///
/// `rhs` is the compensated sum of `rhs_terms` in order; `residual` is the
/// absolute gap the statement is judged on and `scale` the natural size of
/// the sums (√N of the modulus), so `relative()` is what thresholds apply to.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub statement_id: String,
    pub modulus: String,
    pub modulus_norm: u64,
    pub lhs: Complex64,
    pub rhs_terms: Vec<Term>,
    pub rhs: Complex64,
    pub residual: f64,
    pub scale: f64,
    pub seed: Option<u64>,
    pub mode: AdditiveMode,
    pub values: Vec<Term>,
    pub checks: Vec<Check>,
}

impl Report {
    pub(crate) fn new(statement_id: &str, modulus: String, modulus_norm: u64, mode: AdditiveMode) -> Self {
        Report {
            statement_id: statement_id.to_string(),
            modulus,
            modulus_norm,
            lhs: Complex64::new(0.0, 0.0),
            rhs_terms: Vec::new(),
            rhs: Complex64::new(0.0, 0.0),
            residual: 0.0,
            scale: (modulus_norm as f64).sqrt(),
            seed: None,
            mode,
            values: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub(crate) fn term(&mut self, label: impl Into<String>, value: Complex64) {
        self.rhs_terms.push(Term {
            label: label.into(),
            value,
        });
    }

    pub(crate) fn value(&mut self, label: impl Into<String>, value: Complex64) {
        self.values.push(Term {
            label: label.into(),
            value,
        });
    }

    pub(crate) fn check(&mut self, name: impl Into<String>, residual: f64) {
        self.checks.push(Check {
            name: name.into(),
            residual,
        });
    }

    /// Sums the RHS terms and sets the residual against `lhs`.
    pub(crate) fn close(mut self, lhs: Complex64) -> Self {
        self.lhs = lhs;
        self.rhs = self.rhs_total();
        self.residual = (self.lhs - self.rhs).norm();
        self
    }

    pub fn rhs_total(&self) -> Complex64 {
        self.rhs_terms
            .iter()
            .map(|t| t.value)
            .collect::<CSum>()
            .value()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn relative(&self) -> f64 {
        self.residual / self.scale.max(1.0)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.relative() < tol
    }

    pub fn check_value(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.residual)
    }

    pub fn lookup(&self, label: &str) -> Option<Complex64> {
        self.values
            .iter()
            .chain(&self.rhs_terms)
            .find(|t| t.label == label)
            .map(|t| t.value)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
