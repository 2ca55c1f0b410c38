//! Check records shared by validators, suites and the command line.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: u32 = 1;

/// One verified identity: the worst violation seen and whether it is within tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The identity being verified, written out.
    pub anchor: String,
    pub max_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Set when the checked space is trivial in this dimension.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub vacuous: bool,
}

impl CheckRecord {
    pub fn new(
        id: impl Into<String>,
        anchor: impl Into<String>,
        max_violation: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            max_violation,
            tolerance,
            // NaN never passes
            pass: max_violation <= tolerance,
            vacuous: false,
        }
    }

    pub fn vacuous(id: impl Into<String>, anchor: impl Into<String>, tolerance: f64) -> Self {
        Self {
            vacuous: true,
            ..Self::new(id, anchor, 0.0, tolerance)
        }
    }

    /// A boolean condition recorded as violation 0 (holds) or 1 (fails).
    pub fn flag(id: impl Into<String>, anchor: impl Into<String>, holds: bool) -> Self {
        Self::new(id, anchor, if holds { 0.0 } else { 1.0 }, 0.0)
    }
}

/// Result of running a suite of checks against one model or batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSuiteResult {
    pub schema: u32,
    pub model: String,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    /// Computed facts that are not pass/fail, such as predicate outcomes.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub properties: BTreeMap<String, serde_json::Value>,
    /// Kept out of the JSON so identical invocations give identical bytes.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl CheckSuiteResult {
    pub fn new(
        model: impl Into<String>,
        mut checks: Vec<CheckRecord>,
        wall_time: Duration,
    ) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let pass = checks.iter().all(|c| c.pass);
        Self {
            schema: REPORT_SCHEMA,
            model: model.into(),
            checks,
            pass,
            properties: BTreeMap::new(),
            wall_time,
        }
    }

    pub fn with_property(
        mut self,
        key: impl Into<String>,
        value: impl Into<serde_json::Value>,
    ) -> Self {
        self.properties.insert(key.into(), value.into());
        self
    }

    /// Keeps only checks whose id starts with one of `prefixes`; the overall
    /// verdict is recomputed over what remains.
    pub fn select(mut self, prefixes: &[&str]) -> Self {
        self.checks
            .retain(|c| prefixes.iter().any(|p| c.id.starts_with(p)));
        self.pass = self.checks.iter().all(|c| c.pass);
        self
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Short human-readable summary, one line per check.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{}: {} ({} checks, {:.1} ms)\n",
            self.model,
            if self.pass { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.wall_time.as_secs_f64() * 1e3
        );
        for (k, v) in &self.properties {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for c in &self.checks {
            let status = if c.vacuous {
                "vacuous"
            } else if c.pass {
                "ok"
            } else {
                "FAIL"
            };
            out.push_str(&format!(
                "  [{status:>7}] {:<32} {:.3e} (tol {:.1e})\n",
                c.id, c.max_violation, c.tolerance
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_pass_iff_all_records_pass() {
        let ok = CheckRecord::new("a", "x", 1e-12, 1e-9);
        let bad = CheckRecord::new("b", "y", 1e-3, 1e-9);
        let r = CheckSuiteResult::new("m", vec![ok.clone()], Duration::ZERO);
        assert!(r.pass);
        let r = CheckSuiteResult::new("m", vec![bad, ok], Duration::ZERO);
        assert!(!r.pass);
        assert_eq!(r.checks[0].id, "a");
    }

    #[test]
    fn nan_violation_fails() {
        assert!(!CheckRecord::new("a", "x", f64::NAN, 1.0).pass);
    }

    #[test]
    fn json_omits_wall_time() {
        let r = CheckSuiteResult::new("m", vec![], Duration::from_millis(5));
        assert!(!r.to_json().contains("wall"));
    }
}
