//! Verification reports and their JSON / text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Bumped whenever the JSON layout changes; see `schema/report.schema.json`.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub check_id: String,
    pub instance: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<String>,
}

impl Entry {
    /// A pass when `residual` is `None`; otherwise a fail carrying the rendering.
    pub fn from_residual(
        check_id: impl Into<String>,
        instance: impl Into<String>,
        residual: Option<String>,
    ) -> Self {
        Entry {
            check_id: check_id.into(),
            instance: instance.into(),
            status: if residual.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            residual,
        }
    }

    pub fn pass(check_id: impl Into<String>, instance: impl Into<String>) -> Self {
        Self::from_residual(check_id, instance, None)
    }

    pub fn fail(
        check_id: impl Into<String>,
        instance: impl Into<String>,
        residual: impl Into<String>,
    ) -> Self {
        Self::from_residual(check_id, instance, Some(residual.into()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: String,
    pub config: serde_json::Value,
    pub entries: Vec<Entry>,
    pub summary: Summary,
    /// Informational findings that are not pass/fail checks.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    /// Only populated on request; it would otherwise break run-to-run identity.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, config: serde_json::Value) -> Self {
        VerificationReport {
            schema_version: REPORT_SCHEMA_VERSION,
            suite: suite.into(),
            config,
            entries: Vec::new(),
            summary: Summary::default(),
            notes: Vec::new(),
            wall_time_ms: None,
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    pub fn extend(&mut self, es: impl IntoIterator<Item = Entry>) {
        self.entries.extend(es);
    }

    /// Stable sort by `(check_id, instance)` and recount the summary.
    pub fn finalize(&mut self) {
        self.entries
            .sort_by(|a, b| (&a.check_id, &a.instance).cmp(&(&b.check_id, &b.instance)));
        let fail = self
            .entries
            .iter()
            .filter(|e| e.status == Status::Fail)
            .count();
        self.summary = Summary {
            total: self.entries.len(),
            pass: self.entries.len() - fail,
            fail,
        };
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn count(&self, check_id_prefix: &str) -> usize {
        self.entries
            .iter()
            .filter(|e| e.check_id.starts_with(check_id_prefix))
            .count()
    }

    /// Merges another report's entries into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.entries.extend(other.entries);
        self.notes.extend(other.notes);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite: {}", self.suite);
        let _ = writeln!(out, "config: {}", self.config);
        let mut ids: Vec<&str> = self.entries.iter().map(|e| e.check_id.as_str()).collect();
        ids.dedup();
        for id in ids {
            let of_id: Vec<_> = self.entries.iter().filter(|e| e.check_id == id).collect();
            let fails = of_id.iter().filter(|e| e.status == Status::Fail).count();
            let tag = if fails == 0 { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  [{tag}] {id}: {}/{} pass",
                of_id.len() - fails,
                of_id.len()
            );
            for e in of_id.iter().filter(|e| e.status == Status::Fail) {
                let _ = writeln!(
                    out,
                    "      fail {}: residual = {}",
                    e.instance,
                    e.residual.as_deref().unwrap_or("")
                );
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        let s = self.summary;
        let _ = writeln!(
            out,
            "summary: total={} pass={} fail={}",
            s.total, s.pass, s.fail
        );
        if let Some(ms) = self.wall_time_ms {
            let _ = writeln!(out, "wall time: {ms} ms");
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

pub fn report_emit(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(fail: bool) -> VerificationReport {
        let mut r = VerificationReport::new("demo", serde_json::json!({"n": 1}));
        r.push(Entry::pass("b.check", "x"));
        r.push(Entry::pass("a.check", "y"));
        if fail {
            r.push(Entry::fail("a.check", "(ξ1, ξ2)", "2·ξ1ξ2"));
        }
        r.finalize();
        r
    }

    #[test]
    fn all_pass_json_has_zero_fail() {
        let js = report_emit(&sample(false), Format::Json);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        assert_eq!(v["summary"]["fail"], 0);
        assert_eq!(v["entries"][0]["check_id"], "a.check");
    }

    #[test]
    fn failing_text_contains_instance_and_residual() {
        let txt = report_emit(&sample(true), Format::Text);
        assert!(txt.contains("(ξ1, ξ2)"));
        assert!(txt.contains("2·ξ1ξ2"));
        assert!(txt.contains("[FAIL] a.check"));
    }

    #[test]
    fn both_formats_agree_on_counts() {
        let r = sample(true);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let txt = r.to_text();
        let line = format!(
            "summary: total={} pass={} fail={}",
            v["summary"]["total"], v["summary"]["pass"], v["summary"]["fail"]
        );
        assert!(txt.contains(&line), "{txt}");
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
