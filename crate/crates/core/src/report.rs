//! Verification reports: ordered checks with measured values and tolerances.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    #[serde(with = "float")]
    pub measured: f64,
    #[serde(with = "float")]
    pub tolerance: f64,
    pub passed: bool,
    /// Short label of the identity being checked.
    pub reference: String,
}

impl Check {
    /// passed iff measured <= tolerance (NaN never passes).
    pub fn new(id: impl Into<String>, description: impl Into<String>, measured: f64, tolerance: f64, reference: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            reference: reference.into(),
        }
    }

    /// A check whose computation failed; recorded as failed with the error.
    pub fn errored(id: impl Into<String>, description: impl Into<String>, tolerance: f64, reference: impl Into<String>, err: &crate::Error) -> Self {
        let mut c = Self::new(id, format!("{} [error: {err}]", description.into()), f64::NAN, tolerance, reference);
        c.passed = false;
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Metadata {
    /// Effective configuration, key = value.
    pub config: BTreeMap<String, String>,
    /// Diagnostic values that are reported but not asserted.
    pub notes: BTreeMap<String, String>,
    pub wall_time_s: f64,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self { suite: suite.into(), checks: Vec::new(), metadata: Metadata::default() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Ids that occur more than once.
    pub fn duplicate_ids(&self) -> Vec<String> {
        let mut seen = BTreeMap::new();
        for c in &self.checks {
            *seen.entry(c.id.clone()).or_insert(0) += 1;
        }
        seen.into_iter().filter(|(_, n)| *n > 1).map(|(k, _)| k).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// f64 as a JSON number, or the strings "nan", "inf", "-inf".
mod float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => match s.as_str() {
                "nan" => Ok(f64::NAN),
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                _ => Err(serde::de::Error::custom(format!("bad float {s:?}"))),
            },
        }
    }
}
