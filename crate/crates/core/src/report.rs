//! Machine-readable verification reports.
//!
//! Non-finite numbers never reach the JSON as `null`: they are written as the
//! strings `"NaN"`, `"inf"` or `"-inf"` and listed in [`VerificationReport::nonfinite`].

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

pub const SCHEMA: u32 = 1;

/// `|a − b| / max(1, |a|, |b|)`: absolute near zero, relative for large values.
pub fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

fn num<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("NaN")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

fn opt_num<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => num(x, s),
        None => s.serialize_none(),
    }
}

fn num_map<S: Serializer>(m: &BTreeMap<String, Vec<f64>>, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Wrap<'a>(#[serde(serialize_with = "num_seq")] &'a Vec<f64>);
    fn num_seq<S: Serializer>(v: &&Vec<f64>, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        #[derive(Serialize)]
        struct One(#[serde(serialize_with = "num")] f64);
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v.iter() {
            seq.serialize_element(&One(*x))?;
        }
        seq.end()
    }
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &Wrap(v))?;
    }
    map.end()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

/// One named comparison. Gated checks carry a tolerance; the status is derived
/// from `residual ≤ tolerance`, and a non-finite residual always fails.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(serialize_with = "num")]
    pub residual: f64,
    #[serde(serialize_with = "opt_num")]
    pub tolerance: Option<f64>,
    #[serde(serialize_with = "num_map", skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn gated(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let status = if residual.is_finite() && residual <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            name: name.into(),
            status,
            residual,
            tolerance: Some(tolerance),
            values: BTreeMap::new(),
            note: None,
        }
    }

    pub fn info(name: impl Into<String>, residual: f64) -> Self {
        Check {
            name: name.into(),
            status: Status::Info,
            residual,
            tolerance: None,
            values: BTreeMap::new(),
            note: None,
        }
    }

    /// Record a failure that produced no number (e.g. an SPD breakdown).
    pub fn error(name: impl Into<String>, message: impl Into<String>, gated: bool) -> Self {
        Check {
            name: name.into(),
            status: if gated { Status::Fail } else { Status::Info },
            residual: f64::NAN,
            tolerance: None,
            values: BTreeMap::new(),
            note: Some(message.into()),
        }
    }

    pub fn with(mut self, key: impl Into<String>, values: Vec<f64>) -> Self {
        self.values.insert(key.into(), values);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    /// Names of this check's non-finite fields, as `name.field`.
    fn nonfinite(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.residual.is_finite() && self.note.is_none() {
            out.push(format!("{}.residual", self.name));
        }
        for (k, v) in &self.values {
            if v.iter().any(|x| !x.is_finite()) {
                out.push(format!("{}.{}", self.name, k));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SceneRef {
    pub id: String,
    pub digest: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub info: usize,
    /// Name of the failing check with the largest residual/tolerance ratio.
    pub worst: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub tool_version: String,
    pub command: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub scene: Option<SceneRef>,
    pub checks: Vec<Check>,
    /// Free-form structured output (series, discrepancy records, ...).
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
    pub nonfinite: Vec<String>,
    pub summary: Summary,
    /// Wall-clock seconds; the only field that varies between identical runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<f64>,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>) -> Self {
        VerificationReport {
            schema: SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            params: BTreeMap::new(),
            scene: None,
            checks: Vec::new(),
            data: serde_json::Value::Null,
            nonfinite: Vec::new(),
            summary: Summary {
                passed: 0,
                failed: 0,
                info: 0,
                worst: None,
            },
            timing: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.params.insert(key.to_string(), v);
    }

    pub fn scene(&mut self, id: String, digest: String) {
        self.scene = Some(SceneRef { id, digest });
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    /// Recomputes the summary and the non-finite list from the checks.
    pub fn finish(&mut self) {
        let count = |s| self.checks.iter().filter(|c| c.status == s).count();
        let worst = self
            .checks
            .iter()
            .filter(|c| c.failed())
            .max_by(|a, b| {
                let r = |c: &Check| match c.tolerance {
                    Some(t) if c.residual.is_finite() && t > 0.0 => c.residual / t,
                    _ => f64::INFINITY,
                };
                r(a).total_cmp(&r(b))
            })
            .map(|c| c.name.clone());
        self.summary = Summary {
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            info: count(Status::Info),
            worst,
        };
        self.nonfinite = self.checks.iter().flat_map(Check::nonfinite).collect();
    }

    pub fn passed(&self) -> bool {
        !self.checks.iter().any(Check::failed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_is_absolute_near_zero() {
        assert_eq!(rel_gap(1e-3, 0.0), 1e-3);
        assert_eq!(rel_gap(200.0, 100.0), 0.5);
    }

    #[test]
    fn status_follows_residual() {
        assert_eq!(Check::gated("a", 1e-9, 1e-8).status, Status::Pass);
        assert_eq!(Check::gated("a", 1e-7, 1e-8).status, Status::Fail);
        assert_eq!(Check::gated("a", f64::NAN, 1.0).status, Status::Fail);
    }

    #[test]
    fn nonfinite_values_are_flagged_not_nulled() {
        let mut r = VerificationReport::new("verify");
        r.extend([Check::gated("x", f64::INFINITY, 1.0).with("series", vec![1.0, f64::NAN])]);
        r.finish();
        assert_eq!(r.nonfinite, vec!["x.residual", "x.series"]);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["checks"][0]["residual"], "inf");
        assert_eq!(json["checks"][0]["values"]["series"][1], "NaN");
        assert_eq!(json["summary"]["worst"], "x");
        assert!(!r.passed());
    }
}
