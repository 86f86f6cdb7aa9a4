use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::series::{GradedSeries, TermDiff};
use crate::Result;

/// Most differences kept in a report.
pub const MAX_DIFFS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffEntry {
    pub monomial: String,
    pub exponents: Vec<i64>,
    pub lhs: String,
    pub rhs: String,
}

/// A named side condition checked alongside the main comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl SubCheck {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        SubCheck { name: name.to_string(), passed, detail: detail.into() }
    }
}

/// Outcome of one exact verification. `matched` holds exactly when
/// `first_diffs` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QReport {
    pub identity: String,
    pub cutoff: u32,
    pub matched: bool,
    pub first_diffs: Vec<DiffEntry>,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subchecks: Vec<SubCheck>,
}

impl QReport {
    /// Compares two series up to `cutoff`.
    pub fn compare(identity: &str, cutoff: u32, lhs: &GradedSeries, rhs: &GradedSeries) -> Result<Self> {
        let diffs = lhs.diff_up_to(rhs, cutoff)?;
        Ok(Self::from_diffs(identity, cutoff, lhs, &diffs, lhs.num_terms(), rhs.num_terms()))
    }

    pub fn from_diffs(
        identity: &str,
        cutoff: u32,
        series: &GradedSeries,
        diffs: &[TermDiff],
        lhs_terms: usize,
        rhs_terms: usize,
    ) -> Self {
        let lattice = series.lattice();
        let first_diffs: Vec<DiffEntry> = diffs
            .iter()
            .take(MAX_DIFFS)
            .map(|d| DiffEntry {
                monomial: lattice.format_monomial(&d.exponents),
                exponents: d.exponents.0.clone(),
                lhs: d.left.to_string(),
                rhs: d.right.to_string(),
            })
            .collect();
        QReport {
            identity: identity.to_string(),
            cutoff,
            matched: first_diffs.is_empty(),
            first_diffs,
            lhs_terms,
            rhs_terms,
            millis: None,
            subchecks: Vec::new(),
        }
    }

    pub fn with_subcheck(mut self, c: SubCheck) -> Self {
        self.subchecks.push(c);
        self
    }

    /// Main comparison and every subcheck passed.
    pub fn passed(&self) -> bool {
        self.matched && self.subchecks.iter().all(|c| c.passed)
    }

    pub fn strip_timing(mut self) -> Self {
        self.millis = None;
        self
    }
}

/// Runs `f` and stamps the elapsed wall time on its report.
pub fn timed(f: impl FnOnce() -> Result<QReport>) -> Result<QReport> {
    let start = Instant::now();
    let mut r = f()?;
    r.millis = Some(start.elapsed().as_millis() as u64);
    Ok(r)
}
