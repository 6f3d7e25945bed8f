//! Machine-readable verdicts for claim checks.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const REPORT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// Whether a verdict covers a whole family or only a searched part of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvidenceKind {
    Exact,
    Bounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub description: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Instance {
    pub fn new(description: impl Into<String>, ok: bool) -> Self {
        Self {
            description: description.into(),
            verdict: Verdict::from_bool(ok),
            details: Value::Null,
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub spec_version: String,
    pub claim: String,
    pub instances: Vec<Instance>,
    pub verdict: Verdict,
    pub evidence_kind: EvidenceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_size: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(claim: impl Into<String>, evidence_kind: EvidenceKind) -> Self {
        Self {
            spec_version: REPORT_VERSION.to_string(),
            claim: claim.into(),
            instances: Vec::new(),
            verdict: Verdict::Pass,
            evidence_kind,
            family_size: None,
            witnesses: Vec::new(),
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }

    /// Record an instance; the overall verdict fails as soon as one does.
    pub fn push(&mut self, instance: Instance) {
        if !instance.verdict.is_pass() {
            self.verdict = Verdict::Fail;
        }
        self.instances.push(instance);
    }

    pub fn check(&mut self, description: impl Into<String>, ok: bool) -> bool {
        self.push(Instance::new(description, ok));
        ok
    }

    pub fn witness(&mut self, w: impl Into<String>) {
        self.witnesses.push(w.into());
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn merge(&mut self, other: Report) {
        for i in other.instances {
            self.push(i);
        }
        self.witnesses.extend(other.witnesses);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("claim: {}\nverdict: {} ({})\n", self.claim, self.verdict, kind_str(self.evidence_kind));
        if let Some(n) = self.family_size {
            out.push_str(&format!("family size: {n}\n"));
        }
        for i in &self.instances {
            out.push_str(&format!("  [{}] {}\n", i.verdict, i.description));
        }
        for w in &self.witnesses {
            out.push_str(&format!("  witness: {w}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

fn kind_str(k: EvidenceKind) -> &'static str {
    match k {
        EvidenceKind::Exact => "exact",
        EvidenceKind::Bounded => "bounded",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_failure_fails_the_report() {
        let mut r = Report::new("example", EvidenceKind::Exact);
        r.check("first", true);
        assert!(r.passed());
        r.check("second", false);
        assert!(!r.passed());
        assert!(r.to_text().contains("[fail] second"));
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("example", EvidenceKind::Bounded);
        r.family_size = Some(64);
        r.push(Instance::new("x", true).with_details(serde_json::json!({"dim": 3})));
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["evidence_kind"], "bounded");
        assert_eq!(v["instances"][0]["verdict"], "pass");
        assert!(v.get("elapsed_ms").is_none());
    }
}
