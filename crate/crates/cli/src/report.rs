use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One assertion the run made about its own results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckOutcome {
    pub fn new(name: &str, passed: bool) -> Self {
        Self { name: name.into(), passed, detail: None }
    }

    pub fn with_detail(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: Some(detail.into()) }
    }
}

/// Machine-readable output of a single run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: Value,
    pub results: Value,
    pub checks: Vec<CheckOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// A report plus its human rendering.
pub struct Run {
    pub report: Report,
    pub text: Vec<String>,
}

impl Run {
    pub fn render_text(&self) -> String {
        let mut out = self.text.join("\n");
        out.push('\n');
        if !self.report.checks.is_empty() {
            out.push_str("checks:\n");
            for c in &self.report.checks {
                let status = if c.passed { "ok" } else { "FAILED" };
                match &c.detail {
                    Some(d) => out.push_str(&format!("  {:<28} {status} ({d})\n", c.name)),
                    None => out.push_str(&format!("  {:<28} {status}\n", c.name)),
                }
            }
        }
        out
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize to JSON")
}
