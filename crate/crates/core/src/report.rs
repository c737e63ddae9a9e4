//! Pass/fail reports shared by every law check, demo and suite.
//!
//! JSON shape: `{suite, status, seed, parameters, checks: [{name, status, witness?, window?, precision?}]}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => f.write_str("pass"),
            Status::Fail => f.write_str("fail"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub precision: Option<usize>,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            status: Status::from_bool(ok),
            witness: None,
            window: None,
            precision: None,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = Some(window);
        self
    }

    pub fn with_precision(mut self, precision: usize) -> Self {
        self.precision = Some(precision);
        self
    }

    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }
}

/// Ordered list of checks plus the parameters that produced them.
///
/// The overall status is derived, never stored independently: a report passes iff every
/// check passes (an empty report passes).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub status: Status,
    pub seed: u64,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        Report {
            suite: suite.into(),
            status: Status::Pass,
            seed,
            parameters: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.set_param(key, value);
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    pub fn push(&mut self, check: Check) {
        if !check.passed() {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    /// Appends `other`'s checks, prefixing their names with `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut check in other.checks {
            check.name = format!("{prefix}/{}", check.name);
            self.push(check);
        }
    }

    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}] seed={}", self.suite, self.status, self.seed)?;
        for check in &self.checks {
            write!(f, "  {:<4} {}", check.status, check.name)?;
            if let Some(w) = check.window {
                write!(f, " (window {w})")?;
            }
            if let Some(p) = check.precision {
                write!(f, " (mod x^{p})")?;
            }
            if let Some(wit) = &check.witness {
                write!(f, " witness: {wit}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_status_tracks_checks() {
        let mut r = Report::new("t", 0);
        assert!(r.passed());
        r.push(Check::new("a", true));
        assert!(r.passed());
        r.push(Check::new("b", false).with_witness("x"));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn json_schema_fields() {
        let mut r = Report::new("demo", 3).param("window", 16);
        r.push(Check::new("c", true));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["suite"], "demo");
        assert_eq!(v["seed"], 3);
        assert_eq!(v["parameters"]["window"], 16);
        assert_eq!(v["checks"][0]["status"], "pass");
        assert!(v["checks"][0].get("witness").is_none());
    }
}
