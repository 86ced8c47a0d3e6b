//! Check records shared by the suites and the command line.

use std::fmt;

use crate::algebra::AlgVec;
use crate::multilinear::MultilinearMap;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    /// A printed formula disagrees with the normative path.
    Erratum,
    /// A computed value or verdict; never a failure.
    Info,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Erratum => "erratum",
            Status::Info => "info",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One line of a report. Witness indices are 1-based basis labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub check: String,
    pub status: Status,
    pub witness: Option<Vec<usize>>,
    pub expected: Option<String>,
    pub actual: Option<String>,
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn new(suite: &'static str, check: impl Into<String>, status: Status) -> Self {
        Self { suite, check: check.into(), status, witness: None, expected: None, actual: None, detail: None }
    }

    /// Witness from 0-based indices.
    pub fn at(mut self, idx: &[usize]) -> Self {
        self.witness = Some(idx.iter().map(|i| i + 1).collect());
        self
    }

    pub fn values(mut self, expected: impl Into<String>, actual: impl Into<String>) -> Self {
        self.expected = Some(expected.into());
        self.actual = Some(actual.into());
        self
    }

    pub fn actual(mut self, actual: impl Into<String>) -> Self {
        self.actual = Some(actual.into());
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Ordered list of records for one model and command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    /// No failures, and under `strict` no errata either.
    pub fn passed(&self, strict: bool) -> bool {
        self.records.iter().all(|r| match r.status {
            Status::Fail => false,
            Status::Erratum => !strict,
            Status::Pass | Status::Info => true,
        })
    }

    pub fn find(&self, check: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.check == check)
    }
}

/// `(0, 4, -1/2)` style rendering.
pub fn format_vector<T: Scalar>(v: &AlgVec<T>) -> String {
    v.to_string()
}

/// Compares a formula against a reference tensor. On a mismatch the first
/// differing basis tuple becomes the witness, with the reference value as
/// `expected`; the mismatch is reported with status `on_mismatch`.
pub fn compare<T: Scalar>(
    suite: &'static str,
    check: impl Into<String>,
    reference: &MultilinearMap<T>,
    formula: &MultilinearMap<T>,
    on_mismatch: Status,
) -> CheckRecord {
    match reference.first_difference(formula) {
        None => CheckRecord::new(suite, check, Status::Pass),
        Some(idx) => CheckRecord::new(suite, check, on_mismatch)
            .at(&idx)
            .values(format_vector(&reference.value(&idx)), format_vector(&formula.value(&idx))),
    }
}

/// Checks that a tensor vanishes identically.
pub fn vanishes<T: Scalar>(suite: &'static str, check: impl Into<String>, t: &MultilinearMap<T>, on_failure: Status) -> CheckRecord {
    let zero = MultilinearMap::zeros(t.slot_dims().to_vec(), t.out_dim());
    compare(suite, check, &zero, t, on_failure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    #[test]
    fn strict_mode_escalates_errata() {
        let mut r = Report::default();
        r.push(CheckRecord::new("s", "a", Status::Pass));
        r.push(CheckRecord::new("s", "b", Status::Erratum));
        assert!(r.passed(false));
        assert!(!r.passed(true));
        r.push(CheckRecord::new("s", "c", Status::Fail));
        assert!(!r.passed(false));
    }

    #[test]
    fn compare_reports_first_difference_one_based() {
        let a = MultilinearMap::<Rat>::uniform_zeros(2, 2, 2);
        let mut b = a.clone();
        b.set(&[1, 0], &AlgVec::basis(2, 1));
        let rec = compare("s", "x", &a, &b, Status::Fail);
        assert_eq!(rec.status, Status::Fail);
        assert_eq!(rec.witness, Some(vec![2, 1]));
        assert_eq!(rec.expected.as_deref(), Some("(0, 0)"));
        assert_eq!(rec.actual.as_deref(), Some("(0, 1)"));
        assert_eq!(compare("s", "x", &a, &a, Status::Fail).status, Status::Pass);
    }
}
