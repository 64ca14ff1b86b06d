//! Machine-readable check reports: one record per verified statement, a
//! deterministic ordering, and a process exit decided by the failure count.

use serde::{Deserialize, Serialize};

use crate::IMat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub expected: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub actual: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            records: Vec::new(),
        }
    }

    pub fn check(
        &mut self,
        name: impl Into<String>,
        ok: bool,
        expected: impl Into<String>,
        actual: impl Into<String>,
        note: impl Into<String>,
    ) {
        self.records.push(Record {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            expected: expected.into(),
            actual: actual.into(),
            note: note.into(),
        });
    }

    pub fn check_eq<T: PartialEq + std::fmt::Debug>(
        &mut self,
        name: impl Into<String>,
        expected: &T,
        actual: &T,
        note: impl Into<String>,
    ) {
        let ok = expected == actual;
        self.check(
            name,
            ok,
            format!("{expected:?}"),
            format!("{actual:?}"),
            note,
        );
    }

    pub fn info(&mut self, name: impl Into<String>, actual: impl Into<String>) {
        self.records.push(Record {
            name: name.into(),
            status: Status::Info,
            expected: String::new(),
            actual: actual.into(),
            note: String::new(),
        });
    }

    pub fn failures(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.status == Status::Fail)
            .count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.title));
        for r in &self.records {
            let tag = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "info",
            };
            out.push_str(&format!("[{tag}] {}", r.name));
            if !r.actual.is_empty() {
                out.push_str(&format!(": {}", r.actual));
            }
            if r.status == Status::Fail && !r.expected.is_empty() {
                out.push_str(&format!(" (expected {})", r.expected));
            }
            if !r.note.is_empty() {
                out.push_str(&format!("  -- {}", r.note));
            }
            out.push('\n');
        }
        let f = self.failures();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.records.len(),
            f
        ));
        out
    }
}

/// Row-major rendering used everywhere a matrix enters a report.
pub fn fmt_matrix(m: &IMat) -> String {
    let mut rows = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
        rows.push(format!("[{}]", row.join(",")));
    }
    format!("[{}]", rows.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_roundtrip_and_exit_semantics() {
        let mut r = Report::new("demo");
        r.check("a", true, "1", "1", "");
        r.check("b", false, "2", "3", "note");
        r.info("c", "context");
        assert_eq!(r.failures(), 1);
        assert!(!r.passed());
        let json = r.to_json();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back.records.len(), 3);
        assert_eq!(back.failures(), 1);
    }

    #[test]
    fn matrix_rendering() {
        let m = IMat::from_rows_i64(&[&[1, 0], &[4, 1]]);
        assert_eq!(fmt_matrix(&m), "[[1,0],[4,1]]");
    }
}
