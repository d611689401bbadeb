//! Structured pass/fail records for theorem verification runs, with
//! deterministic JSON-lines output and a human summary table.

use num_complex::Complex64;
use std::fmt::Write as _;

/// Outcome of checking one identity at one parameter set.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    /// Which identity was checked (stable key, e.g. `theorem1`).
    pub theorem: String,
    /// Case parameters in stable order, e.g. `[("flavor","real"),("p","2")]`.
    pub case: Vec<(String, String)>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub tolerance: f64,
    /// Relative tolerance when true, absolute otherwise.
    pub relative: bool,
    pub pass: bool,
    /// Wall-clock milliseconds; shown in the summary table only, never in
    /// the JSON lines, so reruns stay byte-identical.
    pub elapsed_ms: f64,
    /// Optional free-form remark (measured constants, convention notes).
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn new(
        theorem: &str,
        case: Vec<(String, String)>,
        lhs: Complex64,
        rhs: Complex64,
        tolerance: f64,
        relative: bool,
    ) -> Self {
        let dev = (lhs - rhs).norm();
        let scale = if relative { rhs.norm().max(1.0) } else { 1.0 };
        Self {
            theorem: theorem.to_string(),
            case,
            lhs,
            rhs,
            tolerance,
            relative,
            pass: dev <= tolerance * scale,
            elapsed_ms: 0.0,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn abs_deviation(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    pub fn rel_deviation(&self) -> f64 {
        self.abs_deviation() / self.rhs.norm().max(1.0)
    }

    /// One JSON object per report with stable key order and 15-significant-
    /// digit numbers.
    pub fn json_line(&self) -> String {
        let mut s = String::from("{");
        let _ = write!(s, "\"theorem\":{}", json_str(&self.theorem));
        s.push_str(",\"case\":{");
        for (i, (k, v)) in self.case.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}:{}", json_str(k), json_str(v));
        }
        s.push('}');
        let _ = write!(
            s,
            ",\"lhs\":[{},{}],\"rhs\":[{},{}]",
            fmt_sig(self.lhs.re),
            fmt_sig(self.lhs.im),
            fmt_sig(self.rhs.re),
            fmt_sig(self.rhs.im)
        );
        let _ = write!(
            s,
            ",\"abs_dev\":{},\"rel_dev\":{}",
            fmt_sig(self.abs_deviation()),
            fmt_sig(self.rel_deviation())
        );
        let _ = write!(
            s,
            ",\"tolerance\":{},\"relative\":{},\"pass\":{}",
            fmt_sig(self.tolerance),
            self.relative,
            self.pass
        );
        if let Some(n) = &self.note {
            let _ = write!(s, ",\"note\":{}", json_str(n));
        }
        s.push('}');
        s
    }

    pub fn case_label(&self) -> String {
        self.case
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// 15 significant digits, plain JSON number.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return "null".to_string();
    }
    format!("{v:.14e}")
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serialises")
}

/// Render a fixed-width summary table; one line per report.
pub fn summary_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<14} {:<46} {:>12} {:>10} {:>8} {:>6}",
        "theorem", "case", "deviation", "tol", "ms", "pass"
    );
    for r in reports {
        let dev = if r.relative {
            r.rel_deviation()
        } else {
            r.abs_deviation()
        };
        let _ = writeln!(
            out,
            "{:<14} {:<46} {:>12.3e} {:>10.1e} {:>8.1} {:>6}",
            r.theorem,
            truncate(&r.case_label(), 46),
            dev,
            r.tolerance,
            r.elapsed_ms,
            if r.pass { "ok" } else { "FAIL" }
        );
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let _ = writeln!(out, "{} case(s), {} failed", reports.len(), failed);
    out
}

fn truncate(s: &str, n: usize) -> String {
    if s.chars().count() <= n {
        s.to_string()
    } else {
        let t: String = s.chars().take(n - 1).collect();
        format!("{t}…")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_line_is_stable_and_sig15() {
        let r = VerificationReport::new(
            "demo",
            vec![("p".into(), "2".into())],
            Complex64::new(1.0 / 3.0, 0.0),
            Complex64::new(1.0 / 3.0, 0.0),
            1e-9,
            true,
        );
        let line = r.json_line();
        assert!(line.contains("\"theorem\":\"demo\""));
        assert!(line.contains("3.33333333333333e-1"));
        assert_eq!(line, r.json_line());
    }
}
