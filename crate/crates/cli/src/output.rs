//! Machine-readable reports: one JSON document per run, stable under
//! `--stable` (timing omitted, entries sorted).

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use lieconf_core::report::CheckReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Clone)]
pub struct CheckEntry {
    pub check: String,
    pub subject: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    /// `pass`, `fail`, or `skipped`.
    pub status: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failures: Vec<FailureEntry>,
    /// Reason for a skipped check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Expected value, when one is pinned for this configuration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Value>,
    /// Where the expectation comes from, as a mathematical statement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Per-check timing; omitted in stable mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

#[derive(Serialize, Clone)]
pub struct FailureEntry {
    pub at: String,
    pub residual: String,
}

impl From<CheckReport> for CheckEntry {
    fn from(r: CheckReport) -> Self {
        CheckEntry {
            check: r.check,
            subject: r.subject,
            window: r.window,
            status: if r.passed { "pass".into() } else { "fail".into() },
            failures: r
                .failures
                .into_iter()
                .map(|f| FailureEntry { at: f.at, residual: f.residual })
                .collect(),
            reason: None,
            expected: None,
            note: None,
            elapsed_ms: None,
        }
    }
}

impl CheckEntry {
    pub fn skipped(check: impl Into<String>, subject: impl Into<String>, reason: impl Into<String>) -> Self {
        CheckEntry {
            check: check.into(),
            subject: subject.into(),
            window: None,
            status: "skipped".into(),
            failures: Vec::new(),
            reason: Some(reason.into()),
            expected: None,
            note: None,
            elapsed_ms: None,
        }
    }

    pub fn with_expectation(mut self, expected: Value, note: impl Into<String>) -> Self {
        self.expected = Some(expected);
        self.note = Some(note.into());
        self
    }
}

#[derive(Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub algebra: String,
    pub window: BTreeMap<String, Value>,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<Value>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, algebra: String) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            algebra,
            window: BTreeMap::new(),
            checks: Vec::new(),
            results: None,
            summary: Summary { passed: 0, failed: 0, skipped: 0 },
            elapsed_ms: None,
        }
    }

    pub fn window_param(&mut self, key: &str, value: impl Into<Value>) {
        self.window.insert(key.to_string(), value.into());
    }


    pub fn extend(&mut self, entries: impl IntoIterator<Item = CheckEntry>) {
        self.checks.extend(entries);
    }

    /// Sort entries, tally the summary, and report overall success. A `None`
    /// elapsed time (stable mode) strips per-check timings too.
    pub fn finalize(&mut self, elapsed_ms: Option<u128>) -> bool {
        self.checks.sort_by(|a, b| (&a.check, &a.subject).cmp(&(&b.check, &b.subject)));
        if elapsed_ms.is_none() {
            for c in &mut self.checks {
                c.elapsed_ms = None;
            }
        }
        self.summary = Summary {
            passed: self.checks.iter().filter(|c| c.status == "pass").count(),
            failed: self.checks.iter().filter(|c| c.status == "fail").count(),
            skipped: self.checks.iter().filter(|c| c.status == "skipped").count(),
        };
        self.elapsed_ms = elapsed_ms;
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let line = match c.status.as_str() {
                "pass" => format!("PASS  {} {}", c.check, c.subject),
                "skipped" => format!(
                    "SKIP  {} {} ({})",
                    c.check,
                    c.subject,
                    c.reason.as_deref().unwrap_or("no reason")
                ),
                _ => {
                    let detail = c
                        .failures
                        .iter()
                        .map(|f| format!("{}: {}", f.at, f.residual))
                        .collect::<Vec<_>>()
                        .join("; ");
                    format!("FAIL  {} {} [{}]", c.check, c.subject, detail)
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        if let Some(results) = &self.results {
            out.push_str(&format!("results: {results}\n"));
        }
        out.push_str(&format!(
            "summary: {} passed, {} failed, {} skipped\n",
            self.summary.passed, self.summary.failed, self.summary.skipped
        ));
        out
    }
}
