//! Verification-run reports with a stable JSON shape.

use serde::{Deserialize, Serialize};

/// A failing case: the input that failed and the two values that were
/// expected to agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub input: String,
    pub expected: String,
    pub got: String,
}

/// Aggregated result of one verification suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n: u32,
    pub degree_r: Option<i64>,
    pub cases_total: u64,
    pub cases_failed: u64,
    pub first_counterexample: Option<Counterexample>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases_failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {suite}: {status} ({failed}/{total} failed, n={n}{r}, {ms} ms)",
            suite = self.suite,
            status = if self.passed() { "PASS" } else { "FAIL" },
            failed = self.cases_failed,
            total = self.cases_total,
            n = self.n,
            r = match self.degree_r {
                Some(r) => format!(", r={r}"),
                None => String::new(),
            },
            ms = self.elapsed_ms,
        );
        if let Some(ce) = &self.first_counterexample {
            out.push_str(&format!(
                "\n  first counterexample:\n    input:    {}\n    expected: {}\n    got:      {}",
                ce.input, ce.expected, ce.got
            ));
        }
        out
    }
}

/// Result of one structured check: a case count plus every failure in
/// deterministic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub cases_total: u64,
    pub failures: Vec<Counterexample>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn record(&mut self, ok: bool, make: impl FnOnce() -> Counterexample) {
        self.cases_total += 1;
        if !ok {
            self.failures.push(make());
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.cases_total += other.cases_total;
        self.failures.extend(other.failures);
    }

    /// Folds this check into a suite report accumulator.
    pub fn into_suite(
        self,
        suite: &str,
        n: u32,
        degree_r: Option<i64>,
        elapsed_ms: u64,
    ) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            n,
            degree_r,
            cases_total: self.cases_total,
            cases_failed: self.failures.len() as u64,
            first_counterexample: self.failures.into_iter().next(),
            elapsed_ms,
        }
    }
}
