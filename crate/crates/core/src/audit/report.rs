use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{real, AuditConfig};
use crate::error::Result;

pub const SCHEMA: &str = "infocat-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `lhs ≤ rhs` failed.
    Inequality,
    /// `lhs = rhs` failed.
    Equality,
    /// The equality case of an inequality disagreed with its structural
    /// characterization.
    Iff,
    /// A categorical identity or isomorphism failed; `lhs`/`rhs` are `0`/`1`.
    Structure,
}

/// One failing tuple. `morphisms` are the generated participants followed by
/// any derived witnesses, as JSON envelopes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Violation {
    pub check: String,
    pub kind: ViolationKind,
    pub morphisms: Vec<Value>,
    /// `None` when the measure is undefined on that side.
    #[serde(with = "real::option")]
    pub lhs: Option<f64>,
    #[serde(with = "real::option")]
    pub rhs: Option<f64>,
    #[serde(with = "real::option")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub seed: u64,
    pub trial_index: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Finding {
    pub topic: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditReport {
    pub schema: String,
    pub config: AuditConfig,
    /// Tuples on which each check was evaluated.
    pub checks_run: BTreeMap<String, u64>,
    /// Tuples skipped because a product or both measure values were undefined.
    pub skipped_undefined: BTreeMap<String, u64>,
    pub violation_counts: BTreeMap<String, u64>,
    /// At most `max_recorded_violations` per check, in tuple order.
    pub violations: Vec<Violation>,
    pub findings: Vec<Finding>,
}

impl AuditReport {
    pub(crate) fn empty(config: AuditConfig) -> Self {
        AuditReport {
            schema: SCHEMA.to_string(),
            config,
            checks_run: BTreeMap::new(),
            skipped_undefined: BTreeMap::new(),
            violation_counts: BTreeMap::new(),
            violations: Vec::new(),
            findings: Vec::new(),
        }
    }

    pub fn total_violations(&self) -> u64 {
        self.violation_counts.values().sum()
    }

    pub fn violations_of(&self, check: &str) -> u64 {
        self.violation_counts.get(check).copied().unwrap_or(0)
    }

    pub fn runs_of(&self, check: &str) -> u64 {
        self.checks_run.get(check).copied().unwrap_or(0)
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }

    /// Merges another report over the same config (e.g. axioms then
    /// propositions) into this one.
    pub fn absorb(&mut self, other: AuditReport) {
        for (k, v) in other.checks_run {
            *self.checks_run.entry(k).or_default() += v;
        }
        for (k, v) in other.skipped_undefined {
            *self.skipped_undefined.entry(k).or_default() += v;
        }
        for (k, v) in other.violation_counts {
            *self.violation_counts.entry(k).or_default() += v;
        }
        self.violations.extend(other.violations);
        for f in other.findings {
            if !self.findings.contains(&f) {
                self.findings.push(f);
            }
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::CategoryId;

    #[test]
    fn reals_survive_round_trip() {
        let mut r = AuditReport::empty(AuditConfig::new(CategoryId::Finset, "shannon"));
        r.violations.push(Violation {
            check: "x".into(),
            kind: ViolationKind::Inequality,
            morphisms: vec![],
            lhs: Some(0.1 + 0.2),
            rhs: None,
            delta: Some(f64::MIN_POSITIVE),
            note: None,
            seed: u64::MAX,
            trial_index: 3,
        });
        let text = r.to_json_pretty();
        assert!(text.contains("\"0.30000000000000004\""));
        assert_eq!(AuditReport::from_json(&text).unwrap(), r);
    }
}
