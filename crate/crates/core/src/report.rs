//! Rendering of corpus and property results.

use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordResult {
    pub id: String,
    pub passed: bool,
    pub expected: String,
    pub got: String,
    pub rules: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Machine,
}

pub const MACHINE_HEADER: &str = "report=qform version=1";

/// Whitespace inside machine values becomes `_` so that every line splits on spaces.
fn machine_value(s: &str) -> String {
    let v: String = s.split_whitespace().collect::<Vec<_>>().join("_");
    if v.is_empty() {
        "-".into()
    } else {
        v
    }
}

pub fn counts(results: &[RecordResult]) -> (usize, usize) {
    let pass = results.iter().filter(|r| r.passed).count();
    (pass, results.len() - pass)
}

/// Renders results in input order. The counts line is omitted for an empty set.
pub fn emit_report(results: &[RecordResult], format: ReportFormat) -> String {
    let mut out = String::new();
    let (pass, fail) = counts(results);
    match format {
        ReportFormat::Machine => {
            out.push_str(MACHINE_HEADER);
            out.push('\n');
            for r in results {
                let _ = writeln!(
                    out,
                    "record={} status={} expected={} got={} rules={}",
                    machine_value(&r.id),
                    if r.passed { "pass" } else { "fail" },
                    machine_value(&r.expected),
                    machine_value(&r.got),
                    if r.rules.is_empty() { "-".to_string() } else { r.rules.join(",") }
                );
            }
            if !results.is_empty() {
                let _ = writeln!(out, "pass={pass} fail={fail}");
            }
        }
        ReportFormat::Text => {
            out.push_str("qform report\n");
            for r in results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                let _ = write!(out, "{status} {}: ", r.id);
                if r.passed {
                    let _ = write!(out, "{}", r.got);
                } else {
                    let _ = write!(out, "expected {}, got {}", r.expected, r.got);
                }
                if !r.rules.is_empty() {
                    let _ = write!(out, " [{}]", r.rules.join(", "));
                }
                out.push('\n');
            }
            if !results.is_empty() {
                let _ = writeln!(out, "{pass} passed, {fail} failed");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, passed: bool) -> RecordResult {
        RecordResult {
            id: id.into(),
            passed,
            expected: "exact 4".into(),
            got: "exact 8".into(),
            rules: vec!["R1".into()],
        }
    }

    #[test]
    fn empty_is_header_only() {
        assert_eq!(emit_report(&[], ReportFormat::Machine), format!("{MACHINE_HEADER}\n"));
    }

    #[test]
    fn machine_lines() {
        let out = emit_report(&[rec("a", true)], ReportFormat::Machine);
        assert!(out.contains("record=a status=pass expected=exact_4 got=exact_8 rules=R1\n"));
        let out = emit_report(&[rec("a", true), rec("b", false)], ReportFormat::Machine);
        assert_eq!(out.matches("pass=1 fail=1").count(), 1);
    }
}
