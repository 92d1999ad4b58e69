//! Check reports: the uniform result shape every verification suite produces.

use serde::Serialize;

/// Outcome of one identity check, with the offending residuals when it fails.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    /// What was checked, e.g. `skew-symmetry`.
    pub check: String,
    /// The instance, e.g. `(i,j)=(1,2)`.
    pub subject: String,
    /// The truncation window the claim is scoped to, when applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    pub passed: bool,
    /// One entry per nonzero residual; empty when passed.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    /// Which sub-instance failed, e.g. `n=2`.
    pub at: String,
    /// Pretty-printed residual that should have been zero.
    pub residual: String,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, subject: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            subject: subject.into(),
            window: None,
            passed: true,
            failures: Vec::new(),
        }
    }

    pub fn with_window(mut self, window: impl Into<String>) -> Self {
        self.window = Some(window.into());
        self
    }

    /// Record a residual; a nonzero one flips the report to failed.
    pub fn residual(&mut self, at: impl Into<String>, is_zero: bool, pretty: impl FnOnce() -> String) {
        if !is_zero {
            self.passed = false;
            self.failures.push(Failure { at: at.into(), residual: pretty() });
        }
    }
}
