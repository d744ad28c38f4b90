//! Check reports and their canonical JSON encoding.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn from_margin(margin: Option<f64>, tol: f64) -> Verdict {
        match margin {
            Some(m) if m > tol => Verdict::Fail,
            _ => Verdict::Pass,
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
        })
    }
}

impl std::str::FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "PASS" => Ok(Verdict::Pass),
            "FAIL" => Ok(Verdict::Fail),
            "ERROR" => Ok(Verdict::Error),
            _ => Err(format!("unknown verdict {s:?}")),
        }
    }
}

/// Coordinates of the worst (or first failing) sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Witness {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        Witness {
            x,
            y,
            t,
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// A named sub-result inside a composite report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub name: String,
    pub verdict: Verdict,
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Status the caller expected, for suites that compare against one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
    /// Informational links never affect the enclosing verdict.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Link {
    pub fn from_report(name: impl Into<String>, report: &CheckReport) -> Self {
        Link {
            name: name.into(),
            verdict: report.verdict,
            margin: report.worst_margin,
            witness: report.witness.clone(),
            expected: None,
            informational: false,
            detail: report.note.clone(),
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    /// Grid shape, e.g. `[nx, ny, nt]`.
    pub grid: Vec<usize>,
    pub evaluated: usize,
    pub skipped: usize,
    pub violations: usize,
}

/// Worst margin over `t` at one `(x, y)` grid cell, for heatmaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub x: f64,
    pub y: f64,
    pub margin: Option<f64>,
}

/// One entry of a depth-indexed measurement, such as the ε(n) sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub n: u32,
    pub q: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    /// Largest signed margin seen; `None` when nothing was evaluated.
    pub worst_margin: Option<f64>,
    pub witness: Option<Witness>,
    #[serde(default)]
    pub links: Vec<Link>,
    #[serde(default)]
    pub stats: Stats,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<Cell>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<SeriesPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            verdict: Verdict::Pass,
            worst_margin: None,
            witness: None,
            links: Vec::new(),
            stats: Stats::default(),
            cells: Vec::new(),
            series: Vec::new(),
            note: None,
        }
    }

    pub fn error(
        check: impl Into<String>,
        witness: Option<Witness>,
        message: impl Into<String>,
    ) -> Self {
        let mut r = CheckReport::new(check);
        r.verdict = Verdict::Error;
        r.witness = witness;
        r.note = Some(message.into());
        r
    }

    pub fn is_pass(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn link(&self, name: &str) -> Option<&Link> {
        self.links.iter().find(|l| l.name == name)
    }

    /// Canonical JSON: sorted keys, floats with 17 significant digits.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports always serialize");
        canonical_json(&value)
    }
}

/// Keeps the largest margin and the first sample that attained it.
#[derive(Debug, Clone, Default)]
pub struct WorstTracker {
    pub worst: Option<f64>,
    pub witness: Option<Witness>,
    pub evaluated: usize,
    pub skipped: usize,
    pub violations: usize,
}

impl WorstTracker {
    pub fn record(&mut self, margin: f64, tol: f64, witness: impl FnOnce() -> Witness) {
        self.evaluated += 1;
        if margin > tol {
            self.violations += 1;
        }
        if self.worst.is_none_or(|w| margin > w) {
            self.worst = Some(margin);
            self.witness = Some(witness());
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    /// Ordered merge: `self` precedes `other` in grid order, so ties keep `self`.
    pub fn merge(&mut self, other: WorstTracker) {
        self.evaluated += other.evaluated;
        self.skipped += other.skipped;
        self.violations += other.violations;
        if let Some(o) = other.worst {
            if self.worst.is_none_or(|w| o > w) {
                self.worst = Some(o);
                self.witness = other.witness;
            }
        }
    }

    pub fn into_report(self, check: impl Into<String>, tol: f64, grid: Vec<usize>) -> CheckReport {
        let verdict = Verdict::from_margin(self.worst, tol);
        let mut r = CheckReport::new(check);
        r.verdict = verdict;
        r.worst_margin = self.worst;
        r.witness = self.witness;
        r.stats = Stats {
            grid,
            evaluated: self.evaluated,
            skipped: self.skipped,
            violations: self.violations,
        };
        r
    }
}

/// Writes a JSON value with sorted object keys, two-space indentation, and
/// every float in `{:.16e}` form (17 significant digits).
pub fn canonical_json(value: &serde_json::Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &serde_json::Value, depth: usize) {
    use serde_json::Value;
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let f = n.as_f64().unwrap();
                let _ = write!(out, "{f:.16e}");
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, depth + 1);
                write_value(out, item, depth + 1);
            }
            newline(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, depth + 1);
                out.push_str(&serde_json::to_string(k).unwrap());
                out.push_str(": ");
                write_value(out, &map[k.as_str()], depth + 1);
            }
            newline(out, depth);
            out.push('}');
        }
    }
}

fn newline(out: &mut String, depth: usize) {
    out.push('\n');
    for _ in 0..depth {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_floats_have_17_digits() {
        let v = serde_json::json!({"b": 0.5, "a": [1, 2.0], "c": null});
        let s = canonical_json(&v);
        assert!(s.contains("\"a\": [\n    1,\n    2.0000000000000000e0\n  ]"));
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.contains("5.0000000000000000e-1"));
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"].as_f64(), Some(0.5));
    }

    #[test]
    fn tracker_keeps_first_of_ties() {
        let mut a = WorstTracker::default();
        a.record(1.0, 0.0, || Witness::new(1.0, 1.0, 0.0));
        a.record(1.0, 0.0, || Witness::new(2.0, 2.0, 0.0));
        let mut b = WorstTracker::default();
        b.record(1.0, 0.0, || Witness::new(3.0, 3.0, 0.0));
        a.merge(b);
        assert_eq!(a.witness.unwrap().x, 1.0);
        assert_eq!(a.violations, 3);
    }

    #[test]
    fn verdict_invariants() {
        let mut t = WorstTracker::default();
        t.record(-0.5, 1e-9, || Witness::new(1.0, 1.0, 0.5));
        let r = t.into_report("c", 1e-9, vec![1, 1, 1]);
        assert!(r.is_pass());
        assert!(r.worst_margin.unwrap() <= 1e-9);
        let r = WorstTracker::default().into_report("c", 1e-9, vec![]);
        assert!(r.is_pass() && r.worst_margin.is_none());
    }

    #[test]
    fn report_round_trips_through_canonical_json() {
        let mut t = WorstTracker::default();
        t.record(0.1 + 0.2, 1e-9, || {
            Witness::new(1.0 / 3.0, 2.0, 0.7).with_detail("d")
        });
        let r = t.into_report("m-concave", 1e-9, vec![2, 2, 2]);
        let back: CheckReport = serde_json::from_str(&r.to_canonical_json()).unwrap();
        assert_eq!(back, r);
    }
}
