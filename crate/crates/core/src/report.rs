//! Structured pass/fail records emitted by the verification checks.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Informational => "informational",
        })
    }
}

/// Header line of the report file.
pub const REPORT_HEADER: &str = "check,metric,tolerance,verdict,notes";

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check_name: String,
    pub metric: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub notes: String,
}

impl VerificationReport {
    /// Pass iff `metric <= tolerance`; a NaN metric fails.
    pub fn check(
        name: impl Into<String>,
        metric: f64,
        tolerance: f64,
        notes: impl Into<String>,
    ) -> Self {
        let verdict = if metric <= tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            check_name: name.into(),
            metric,
            tolerance,
            verdict,
            notes: notes.into(),
        }
    }

    pub fn informational(
        name: impl Into<String>,
        metric: f64,
        tolerance: f64,
        notes: impl Into<String>,
    ) -> Self {
        Self {
            check_name: name.into(),
            metric,
            tolerance,
            verdict: Verdict::Informational,
            notes: notes.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// One CSV line matching [`REPORT_HEADER`].
    pub fn to_csv_line(&self) -> String {
        let notes = self.notes.replace('"', "'");
        format!(
            "{},{:.6e},{:.1e},{},\"{}\"",
            self.check_name, self.metric, self.tolerance, self.verdict, notes
        )
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:>13}] {}: metric {:.3e} (tol {:.1e}) {}",
            self.verdict, self.check_name, self.metric, self.tolerance, self.notes
        )
    }
}
