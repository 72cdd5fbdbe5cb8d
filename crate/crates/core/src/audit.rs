//! Audit reports shared by the set and operator certificate checks.

use std::fmt;

use crate::scalar::Scalar;
use crate::space::Vector;

/// Outcome of one sampled inequality check.
///
/// `max_violation` is normalized by the scale factor stated by the check
/// that produced it (usually `1 + scale^2`); negative values are margins.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport<S> {
    pub property_name: String,
    pub samples: usize,
    pub max_violation: S,
    pub worst_witness: Option<(Vector<S>, Vector<S>)>,
    /// Iteration index of the worst sample, for trace-based checks.
    pub worst_index: Option<usize>,
    pub slack: S,
    pub passed: bool,
}

impl<S: Scalar> fmt::Display for AuditReport<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {} samples={} max_violation={:e} slack={:e}",
            self.property_name,
            if self.passed { "PASS" } else { "FAIL" },
            self.samples,
            self.max_violation,
            self.slack,
        )?;
        if !self.passed {
            if let Some(n) = self.worst_index {
                write!(f, " at n={n}")?;
            }
            if let Some((x, y)) = &self.worst_witness {
                write!(f, " witness=({x}, {y})")?;
            }
        }
        Ok(())
    }
}

/// A group of reports drawn from one sample stream.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditSuite<S> {
    pub subject: String,
    pub reports: Vec<AuditReport<S>>,
}

impl<S: Scalar> AuditSuite<S> {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn report(&self, property: &str) -> Option<&AuditReport<S>> {
        self.reports.iter().find(|r| r.property_name == property)
    }
}

impl<S: Scalar> fmt::Display for AuditSuite<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.subject, if self.passed() { "PASS" } else { "FAIL" })?;
        for r in &self.reports {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

/// Running maximum of a normalized violation.
pub(crate) struct Tracker<S> {
    name: &'static str,
    samples: usize,
    worst: S,
    witness: Option<(Vector<S>, Vector<S>)>,
}

impl<S: Scalar> Tracker<S> {
    pub(crate) fn new(name: &'static str) -> Self {
        Self {
            name,
            samples: 0,
            worst: S::neg_infinity(),
            witness: None,
        }
    }

    pub(crate) fn observe(&mut self, normalized: S, x: &Vector<S>, y: &Vector<S>) {
        self.samples += 1;
        if normalized > self.worst || self.witness.is_none() {
            self.worst = normalized;
            self.witness = Some((x.clone(), y.clone()));
        }
    }

    pub(crate) fn finish(self, slack: S) -> AuditReport<S> {
        let max_violation = if self.samples == 0 { S::zero() } else { self.worst };
        AuditReport {
            property_name: self.name.to_string(),
            samples: self.samples,
            passed: max_violation <= slack,
            max_violation,
            worst_witness: self.witness,
            worst_index: None,
            slack,
        }
    }
}

/// `1 + max ||v||^2` over the vectors involved in a sample.
pub(crate) fn quadratic_scale<S: Scalar>(vs: &[&Vector<S>]) -> S {
    S::one() + vs.iter().map(|v| v.norm_squared()).fold(S::zero(), S::max)
}
