//! Report records. Every record carries a reference tag, a hypothesis
//! status, the mesh size and the window it was computed on.

use serde::Serialize;
use serde_json::{Map, Value};

use pxharm_core::point::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Report-only: no hard assertion attached.
    Report,
}

#[derive(Debug, Clone, Serialize)]
pub struct Window {
    pub center: Point,
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub check: String,
    pub problem: Option<String>,
    pub ref_tag: &'static str,
    pub hypothesis_status: String,
    pub h: Option<f64>,
    pub window: Option<Window>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub values: Map<String, Value>,
}

impl Record {
    pub fn new(check: &str, ref_tag: &'static str) -> Self {
        Record {
            check: check.to_string(),
            problem: None,
            ref_tag,
            hypothesis_status: "n/a".into(),
            h: None,
            window: None,
            status: Status::Report,
            message: None,
            values: Map::new(),
        }
    }

    pub fn problem(mut self, id: &str) -> Self {
        self.problem = Some(id.to_string());
        self
    }

    pub fn h(mut self, h: f64) -> Self {
        self.h = Some(h);
        self
    }

    pub fn window(mut self, center: Point, radius: f64) -> Self {
        self.window = Some(Window { center, radius });
        self
    }

    pub fn hypothesis(mut self, status: impl Into<String>) -> Self {
        self.hypothesis_status = status.into();
        self
    }

    pub fn set(&mut self, key: &str, v: impl Serialize) {
        self.values
            .insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn with(mut self, key: &str, v: impl Serialize) -> Self {
        self.set(key, v);
        self
    }

    /// Marks pass or fail; a failure keeps the first message given.
    pub fn assert(&mut self, ok: bool, what: &str) {
        if ok {
            if self.status == Status::Report {
                self.status = Status::Pass;
            }
        } else {
            if self.status != Status::Fail {
                self.message = Some(what.to_string());
            }
            self.status = Status::Fail;
        }
    }

    pub fn failed(check: &str, ref_tag: &'static str, err: impl std::fmt::Display) -> Self {
        let mut r = Record::new(check, ref_tag);
        r.status = Status::Fail;
        r.message = Some(err.to_string());
        r
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub report: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub name: String,
    pub seed: u64,
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(name: &str, seed: u64, records: Vec<Record>) -> Self {
        let count = |s| records.iter().filter(|r| r.status == s).count();
        Report {
            name: name.to_string(),
            seed,
            summary: Summary {
                pass: count(Status::Pass),
                fail: count(Status::Fail),
                report: count(Status::Report),
            },
            records,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failure_is_sticky() {
        let mut r = Record::new("x", "tag");
        r.assert(true, "a");
        assert_eq!(r.status, Status::Pass);
        r.assert(false, "b");
        r.assert(false, "c");
        r.assert(true, "d");
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.message.as_deref(), Some("b"));
    }

    #[test]
    fn json_has_metadata() {
        let r = Record::new("x", "tag").h(0.1).window([0.0, 0.0], 1.0).with("v", f64::NAN);
        let j = Report::new("n", 0, vec![r]).to_json();
        for key in ["ref_tag", "hypothesis_status", "\"h\"", "window"] {
            assert!(j.contains(key));
        }
        assert!(j.contains("\"v\": null"));
    }
}
