//! Versioned JSON reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "paperlab-report/1";

/// Where a reported value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Quoted from the source being reproduced.
    Paper,
    /// Immediate from the definitions.
    Trivial,
    /// Computed here with no external reference value.
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A collection or chamber budget ran out before a verdict.
    Budget,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tagged {
    pub provenance: Provenance,
    pub value: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub schema: &'static str,
    pub check: String,
    pub status: Status,
    pub pass: bool,
    /// One-line statement of the claim the check reproduces.
    pub anchor: String,
    pub params: BTreeMap<String, Value>,
    pub values: BTreeMap<String, Tagged>,
    /// Failed assertions, in the order they were evaluated.
    pub failures: Vec<String>,
    pub runtime_ms: u128,
    /// SHA-256 of the report with `runtime_ms` and `sha256` omitted.
    pub sha256: String,
}

impl CheckReport {
    pub fn new(check: &str, anchor: &str) -> Self {
        CheckReport {
            schema: SCHEMA,
            check: check.to_string(),
            status: Status::Pass,
            pass: true,
            anchor: anchor.to_string(),
            params: BTreeMap::new(),
            values: BTreeMap::new(),
            failures: Vec::new(),
            runtime_ms: 0,
            sha256: String::new(),
        }
    }

    pub fn param(&mut self, key: &str, v: impl Serialize) {
        self.params.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn value(&mut self, key: &str, provenance: Provenance, v: impl Serialize) {
        let value = serde_json::to_value(v).expect("serializable");
        self.values.insert(key.to_string(), Tagged { provenance, value });
    }

    /// Records an assertion; a false `ok` fails the report.
    pub fn require(&mut self, ok: bool, what: impl Into<String>) -> bool {
        if !ok {
            self.failures.push(what.into());
            self.pass = false;
            if self.status == Status::Pass {
                self.status = Status::Fail;
            }
        }
        ok
    }

    pub fn budget(&mut self, what: impl Into<String>) {
        self.failures.push(what.into());
        self.pass = false;
        self.status = Status::Budget;
    }

    /// Fills in `sha256` from everything except the runtime.
    pub fn seal(&mut self) {
        self.sha256 = hash_without_runtime(self);
    }
}

fn hash_without_runtime(r: &CheckReport) -> String {
    let mut v = serde_json::to_value(r).expect("serializable");
    if let Value::Object(m) = &mut v {
        m.remove("runtime_ms");
        m.remove("sha256");
    }
    hex(&Sha256::digest(serde_json::to_vec(&v).expect("serializable")))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// The result of running several checks.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub extended: bool,
    pub pass: bool,
    /// Checks whose status does not count towards `pass`.
    pub excluded: Vec<String>,
    pub reports: Vec<CheckReport>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_runtime() {
        let mut a = CheckReport::new("x", "claim");
        a.value("n", Provenance::Derived, 3);
        let mut b = a.clone();
        a.runtime_ms = 5;
        b.runtime_ms = 900;
        a.seal();
        b.seal();
        assert_eq!(a.sha256, b.sha256);
        assert_eq!(a.sha256.len(), 64);
        b.value("n", Provenance::Derived, 4);
        b.seal();
        assert_ne!(a.sha256, b.sha256);
    }

    #[test]
    fn require_and_budget_statuses() {
        let mut r = CheckReport::new("x", "claim");
        assert!(r.require(true, "fine"));
        assert_eq!(r.status, Status::Pass);
        r.require(false, "broken");
        assert_eq!(r.status, Status::Fail);
        let mut r = CheckReport::new("x", "claim");
        r.budget("too many chambers");
        assert_eq!(r.status, Status::Budget);
        assert!(!r.pass);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["status"], "budget");
    }
}
