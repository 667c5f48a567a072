use serde::{Deserialize, Serialize};

/// Error of one monomial degree, split by row class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderError {
    pub k: usize,
    pub interior: f64,
    pub boundary: f64,
}

/// Outcome of an operator check. `pass` holds exactly when every residual is within tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub max_residual: f64,
    /// True when residuals were evaluated in exact rational arithmetic.
    pub exact: bool,
    pub per_k_errors: Vec<OrderError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psd_min_eigenvalue: Option<f64>,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>, exact: bool) -> Self {
        Self {
            subject: subject.into(),
            max_residual: 0.0,
            exact,
            per_k_errors: Vec::new(),
            psd_min_eigenvalue: None,
            failures: Vec::new(),
            pass: true,
        }
    }

    pub(crate) fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
        self.pass = false;
    }

    /// Merges another report into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.max_residual = self.max_residual.max(other.max_residual);
        self.exact &= other.exact;
        self.per_k_errors.extend(other.per_k_errors);
        self.psd_min_eigenvalue = match (self.psd_min_eigenvalue, other.psd_min_eigenvalue) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.failures.extend(other.failures);
        self.pass &= other.pass;
    }
}
