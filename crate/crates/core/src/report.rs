//! Structured pass/fail records produced by identity and claim sweeps.

use std::collections::BTreeSet;
use std::fmt;

use crate::exact::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Holds,
    /// The tuple lies in the claim's declared exception set and the
    /// reversed (or degenerate) relation was confirmed there.
    ExceptionExpected,
    Violation,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::ExceptionExpected => "exception-expected",
            Status::Violation => "VIOLATION",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub claim: &'static str,
    pub params: Vec<(&'static str, i64)>,
    pub status: Status,
    /// Exact values that decided the status.
    pub witness: Vec<(&'static str, Rational)>,
}

impl Record {
    pub fn new(claim: &'static str, params: Vec<(&'static str, i64)>, status: Status) -> Self {
        Record {
            claim,
            params,
            status,
            witness: Vec::new(),
        }
    }

    pub fn with(mut self, name: &'static str, value: Rational) -> Self {
        self.witness.push((name, value));
        self
    }

    pub fn param(&self, name: &str) -> Option<i64> {
        self.params.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "claim={} status={}", self.claim, self.status)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        for (k, v) in &self.witness {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    records: Vec<Record>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    /// Records a plain claim: `Holds` when `ok`, `Violation` otherwise.
    pub fn check(
        &mut self,
        claim: &'static str,
        params: Vec<(&'static str, i64)>,
        ok: bool,
        witness: Vec<(&'static str, Rational)>,
    ) {
        let status = if ok { Status::Holds } else { Status::Violation };
        self.records.push(Record {
            claim,
            params,
            status,
            witness,
        });
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    /// Stable sort by claim id, then parameter tuple.
    pub fn sort(&mut self) {
        self.records
            .sort_by(|a, b| a.claim.cmp(b.claim).then_with(|| a.params.cmp(&b.params)));
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn claim<'a>(&'a self, claim: &'a str) -> impl Iterator<Item = &'a Record> + 'a {
        self.records.iter().filter(move |r| r.claim == claim)
    }

    pub fn violations(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Violation)
    }

    pub fn exceptions(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::ExceptionExpected)
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }

    pub fn exception_count(&self) -> usize {
        self.exceptions().count()
    }

    pub fn is_clean(&self) -> bool {
        self.violation_count() == 0
    }

    /// Claim ids in first-seen order.
    pub fn claim_ids(&self) -> Vec<&'static str> {
        let mut seen = BTreeSet::new();
        self.records
            .iter()
            .filter(|r| seen.insert(r.claim))
            .map(|r| r.claim)
            .collect()
    }

    /// `(claim, params)` pairs that occur more than once.
    pub fn duplicate_tuples(&self) -> Vec<(&'static str, Vec<(&'static str, i64)>)> {
        let mut seen = BTreeSet::new();
        let mut dups = Vec::new();
        for r in &self.records {
            if !seen.insert((r.claim, r.params.clone())) {
                dups.push((r.claim, r.params.clone()));
            }
        }
        dups
    }

    /// One record per line, `key=value` tokens.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}

impl FromIterator<Record> for VerificationReport {
    fn from_iter<I: IntoIterator<Item = Record>>(iter: I) -> Self {
        VerificationReport {
            records: iter.into_iter().collect(),
        }
    }
}
