use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleKind<S> {
    Constant(S),
    /// Values for `n = 0, 1, ...`; the last one is held afterwards.
    Table(Vec<S>),
}

/// Parameter sequence with declared bounds `[low, high]` that every
/// emitted value respects.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule<S> {
    kind: ScheduleKind<S>,
    low: S,
    high: S,
}

impl<S: Scalar> Schedule<S> {
    pub fn new(kind: ScheduleKind<S>, low: S, high: S) -> Result<Self> {
        if !low.is_finite() || !high.is_finite() {
            return Err(Error::NonFinite {
                context: "schedule bounds",
            });
        }
        if low > high {
            return Err(Error::spec(format!(
                "schedule bounds out of order: low {low} > high {high}"
            )));
        }
        let values: &[S] = match &kind {
            ScheduleKind::Constant(v) => std::slice::from_ref(v),
            ScheduleKind::Table(vs) if vs.is_empty() => return Err(Error::spec("schedule table is empty")),
            ScheduleKind::Table(vs) => vs,
        };
        if let Some(v) = values.iter().find(|v| !(**v >= low && **v <= high)) {
            return Err(Error::spec(format!(
                "schedule value {v} outside declared bounds [{low}, {high}]"
            )));
        }
        Ok(Self { kind, low, high })
    }

    /// Constant schedule with bounds `(value, value)`.
    pub fn constant(value: S) -> Result<Self> {
        Self::new(ScheduleKind::Constant(value), value, value)
    }

    /// Table schedule with bounds taken from its extreme values.
    pub fn table(values: Vec<S>) -> Result<Self> {
        let low = values.iter().copied().fold(S::infinity(), S::min);
        let high = values.iter().copied().fold(S::neg_infinity(), S::max);
        Self::new(ScheduleKind::Table(values), low, high)
    }

    pub fn kind(&self) -> &ScheduleKind<S> {
        &self.kind
    }

    pub fn low(&self) -> S {
        self.low
    }

    pub fn high(&self) -> S {
        self.high
    }

    pub fn midpoint(&self) -> S {
        (self.low + self.high) * S::half()
    }

    pub fn value(&self, n: usize) -> S {
        match &self.kind {
            ScheduleKind::Constant(v) => *v,
            ScheduleKind::Table(vs) => vs[n.min(vs.len() - 1)],
        }
    }
}

/// A failed hypothesis on a schedule's declared bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleViolation {
    /// `"lambda"` or `"alpha_n"`.
    pub schedule: &'static str,
    /// The bound that failed, e.g. `"high >= 2*alpha"`.
    pub bound: &'static str,
    pub detail: String,
}

impl fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{} ({})", self.schedule, self.bound, self.detail)
    }
}

/// Checks `0 < alpha_n.low <= alpha_n.high < 1`.
pub fn validate_averaging<S: Scalar>(alpha_sched: &Schedule<S>) -> Vec<ScheduleViolation> {
    let mut out = Vec::new();
    if !(alpha_sched.low > S::zero()) {
        out.push(ScheduleViolation {
            schedule: "alpha_n",
            bound: "low <= 0",
            detail: format!("low = {}", alpha_sched.low),
        });
    }
    if !(alpha_sched.high < S::one()) {
        out.push(ScheduleViolation {
            schedule: "alpha_n",
            bound: "high >= 1",
            detail: format!("high = {}", alpha_sched.high),
        });
    }
    out
}

/// Checks the step-size hypotheses `0 < lambda.low <= lambda.high < 2 alpha`
/// and `0 < alpha_n.low <= alpha_n.high < 1`. Both intervals are open, so
/// `lambda = 2 alpha` and `alpha_n = 1` are rejected.
pub fn validate_schedule<S: Scalar>(
    lambda: &Schedule<S>,
    alpha_sched: &Schedule<S>,
    alpha_ism: S,
) -> std::result::Result<(), Vec<ScheduleViolation>> {
    let mut out = Vec::new();
    if !(alpha_ism > S::zero()) {
        out.push(ScheduleViolation {
            schedule: "lambda",
            bound: "alpha <= 0",
            detail: format!("alpha = {alpha_ism}"),
        });
    }
    if !(lambda.low > S::zero()) {
        out.push(ScheduleViolation {
            schedule: "lambda",
            bound: "low <= 0",
            detail: format!("low = {}", lambda.low),
        });
    }
    let cap = S::two() * alpha_ism;
    if !(lambda.high < cap) {
        out.push(ScheduleViolation {
            schedule: "lambda",
            bound: "high >= 2*alpha",
            detail: format!("high = {}, 2*alpha = {}", lambda.high, cap),
        });
    }
    out.extend(validate_averaging(alpha_sched));
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
