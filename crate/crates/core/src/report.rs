//! Machine-readable verification reports.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

/// At most this many counterexamples are kept per identity.
pub const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

/// One verified identity: how many instances were checked, within which
/// bounds, and the first few counterexamples if any.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    #[serde(rename = "instance-count")]
    pub instance_count: usize,
    pub bounds: Value,
    pub status: Status,
    pub counterexamples: Vec<String>,
    /// Set when the identity is known not to hold within these bounds; the
    /// status still records the outcome.
    #[serde(rename = "known-failure", skip_serializing_if = "Option::is_none")]
    pub known_failure: Option<String>,
}

impl IdentityReport {
    pub fn new(identity: &str, bounds: Value) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            instance_count: 0,
            bounds,
            status: Status::Pass,
            counterexamples: Vec::new(),
            known_failure: None,
        }
    }

    /// Wrap the result of a check that stops at its first failure.
    pub fn from_check(identity: &str, bounds: Value, result: Result<usize, String>) -> Self {
        let mut r = Self::new(identity, bounds);
        match result {
            Ok(n) => r.instance_count = n,
            Err(e) => {
                r.instance_count = 1;
                r.fail(e);
            }
        }
        r
    }

    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instance_count += 1;
        if !ok {
            self.fail(describe());
        }
    }

    pub fn fail(&mut self, what: String) {
        self.status = Status::Fail;
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(what);
        }
    }

    /// Fold a batch of per-instance outcomes (`None` = pass) into the report.
    pub fn absorb(&mut self, outcomes: Vec<Option<String>>) {
        for o in outcomes {
            match o {
                None => self.instance_count += 1,
                Some(e) => {
                    self.instance_count += 1;
                    self.fail(e);
                }
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Mark as a documented non-identity.
    pub fn known(mut self, why: &str) -> Self {
        self.known_failure = Some(why.to_string());
        self
    }

    /// Passed, or failed as documented.
    pub fn acceptable(&self) -> bool {
        self.passed() || self.known_failure.is_some()
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ({} instances, bounds {})", self.status, self.identity, self.instance_count, self.bounds)?;
        if let (Status::Fail, Some(why)) = (self.status, &self.known_failure) {
            write!(f, "\n    known: {why}")?;
        }
        for c in &self.counterexamples {
            write!(f, "\n    counterexample: {c}")?;
        }
        Ok(())
    }
}

/// All reports passed.
pub fn all_passed(reports: &[IdentityReport]) -> bool {
    reports.iter().all(IdentityReport::passed)
}

/// Every failure is a documented one.
pub fn all_acceptable(reports: &[IdentityReport]) -> bool {
    reports.iter().all(IdentityReport::acceptable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_shape() {
        let mut r = IdentityReport::new("x = x", json!({"n": 2}));
        r.record(true, String::new);
        r.record(false, || "x=1".into());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["instance-count"], 2);
        assert_eq!(v["status"], "FAIL");
        assert_eq!(v["counterexamples"][0], "x=1");
    }
}
