//! Structured pass/fail reporting for the verification suites.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub params: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, params: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            params: params.into(),
            status: CheckStatus::Pass,
            counterexample: None,
        }
    }

    pub fn fail(
        name: impl Into<String>,
        params: impl Into<String>,
        counterexample: impl Into<String>,
    ) -> Self {
        CheckResult {
            name: name.into(),
            params: params.into(),
            status: CheckStatus::Fail,
            counterexample: Some(counterexample.into()),
        }
    }

    /// Pass unless a counterexample is given.
    pub fn from_counterexample(
        name: impl Into<String>,
        params: impl Into<String>,
        counterexample: Option<String>,
    ) -> Self {
        match counterexample {
            None => Self::pass(name, params),
            Some(ce) => Self::fail(name, params, ce),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// One suite's outcome: named checks plus free-form notes (the suites use
/// notes to record textual discrepancies that are observations rather than
/// failures).
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub passed: usize,
    pub failed: usize,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            checks: Vec::new(),
            notes: Vec::new(),
            passed: 0,
            failed: 0,
        }
    }

    pub fn push(&mut self, check: CheckResult) {
        if check.passed() {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for check in other.checks {
            self.push(check);
        }
        self.notes.extend(other.notes);
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            write!(f, "  [{tag}] {}", c.name)?;
            if !c.params.is_empty() {
                write!(f, " ({})", c.params)?;
            }
            writeln!(f)?;
            if let Some(ce) = &c.counterexample {
                writeln!(f, "         counterexample: {ce}")?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        write!(f, "  {} passed, {} failed", self.passed, self.failed)
    }
}
