use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::linalg::FGAbelianGroup;

/// One entry of a report's `left`/`right` lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportValue {
    Flag(bool),
    Number(u64),
    Group(FGAbelianGroup),
}

impl From<FGAbelianGroup> for ReportValue {
    fn from(g: FGAbelianGroup) -> Self {
        ReportValue::Group(g)
    }
}

impl From<usize> for ReportValue {
    fn from(n: usize) -> Self {
        ReportValue::Number(n as u64)
    }
}

impl From<u64> for ReportValue {
    fn from(n: u64) -> Self {
        ReportValue::Number(n)
    }
}

impl From<bool> for ReportValue {
    fn from(b: bool) -> Self {
        ReportValue::Flag(b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    NotEqual,
}

/// Where a failed report first goes wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// First differing degree (or position, for non-graded lists).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub left: Option<ReportValue>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub right: Option<ReportValue>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failed_checks: Vec<String>,
}

/// Uniform result of every check. `verdict` is `equal` iff `left == right`;
/// auxiliary boolean `checks` must also hold for the report to pass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub name: String,
    pub inputs: Value,
    pub left: Vec<ReportValue>,
    pub right: Vec<ReportValue>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub checks: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub details: Option<Value>,
    #[serde(skip)]
    first_degree: usize,
}

impl ComparisonReport {
    /// `first_degree` labels `left[0]` in the witness.
    pub fn new(
        name: &str,
        inputs: Value,
        left: Vec<ReportValue>,
        right: Vec<ReportValue>,
        first_degree: usize,
    ) -> Self {
        let mut r = ComparisonReport {
            name: name.to_string(),
            inputs,
            left,
            right,
            verdict: Verdict::Equal,
            witness: None,
            checks: BTreeMap::new(),
            details: None,
            first_degree,
        };
        r.refresh();
        r
    }

    pub fn with_check(mut self, name: &str, ok: bool) -> Self {
        self.checks.insert(name.to_string(), ok);
        self.refresh();
        self
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    /// Merges `extra` into `inputs` (both objects), `extra` winning.
    pub fn with_inputs(mut self, extra: Value) -> Self {
        match (&mut self.inputs, extra) {
            (Value::Object(base), Value::Object(more)) => {
                for (k, v) in more {
                    base.insert(k, v);
                }
            }
            (slot, v) => *slot = v,
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Equal && self.checks.values().all(|&b| b)
    }

    fn refresh(&mut self) {
        self.verdict = if self.left == self.right {
            Verdict::Equal
        } else {
            Verdict::NotEqual
        };
        let failed_checks: Vec<String> = self
            .checks
            .iter()
            .filter(|(_, &ok)| !ok)
            .map(|(k, _)| k.clone())
            .collect();
        if self.passed() {
            self.witness = None;
            return;
        }
        let mut w = Witness {
            degree: None,
            left: None,
            right: None,
            failed_checks,
        };
        if self.verdict == Verdict::NotEqual {
            let n = self.left.len().max(self.right.len());
            let i = (0..n)
                .find(|&i| self.left.get(i) != self.right.get(i))
                .expect("lists differ");
            w.degree = Some(self.first_degree + i);
            w.left = self.left.get(i).cloned();
            w.right = self.right.get(i).cloned();
        }
        self.witness = Some(w);
    }
}

pub fn groups(v: Vec<FGAbelianGroup>) -> Vec<ReportValue> {
    v.into_iter().map(ReportValue::from).collect()
}

pub fn numbers(v: Vec<usize>) -> Vec<ReportValue> {
    v.into_iter().map(ReportValue::from).collect()
}

pub fn flags(v: Vec<bool>) -> Vec<ReportValue> {
    v.into_iter().map(ReportValue::from).collect()
}
