//! Residuals, iteration traces, Fejér checks and the trace CSV format.

use std::fmt;
use std::io;

use crate::audit::AuditReport;
use crate::error::{Error, Result};
use crate::operators::{IsmOperator, Mapping};
use crate::scalar::Scalar;
use crate::sets::ConvexSet;
use crate::space::Vector;

/// `||x - T x||`.
pub fn residual_fixed_point<S: Scalar>(x: &Vector<S>, t_map: &impl Mapping<S>) -> Result<S> {
    x.distance(&t_map.apply(x)?)
}

/// Natural residual `||x - P_C(x - lambda_bar A x)||`; zero exactly at
/// solutions of the variational inequality, for any `lambda_bar > 0`.
pub fn residual_vi<S: Scalar>(x: &Vector<S>, set: &ConvexSet<S>, a: &IsmOperator<S>, lambda_bar: S) -> Result<S> {
    if !(lambda_bar > S::zero()) {
        return Err(Error::contract(format!(
            "residual step must be positive, got {lambda_bar}"
        )));
    }
    let p = set.project(&x.axpy(-lambda_bar, &a.apply_ism(x)?)?)?;
    x.distance(&p)
}

/// Distances from the starting point of a step to its intermediate points.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepGaps<S> {
    pub x_minus_y: Option<S>,
    pub x_minus_t: Option<S>,
    pub x_minus_tt: Option<S>,
}

impl<S: Scalar> StepGaps<S> {
    pub fn max(&self) -> Option<S> {
        [self.x_minus_y, self.x_minus_t, self.x_minus_tt]
            .into_iter()
            .flatten()
            .fold(None, |m, v| Some(m.map_or(v, |m: S| m.max(v))))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<S> {
    pub n: usize,
    pub x: Vector<S>,
    /// `||x - T x||` for the scheme's fixed-point map.
    pub resid_fix: S,
    /// Natural residual of the scheme's variational inequality.
    pub resid_vi: S,
    /// `||x_n - x_{n-1}||`, zero at `n = 0`.
    pub step_norm: S,
    /// `||x_n - z||` when a solution `z` is known.
    pub dist_known: Option<S>,
    /// `||x_{n-1} - z|| - ||x_n - z||`.
    pub fejer_margin: Option<S>,
    /// Slack of the forward-backward bound
    /// `||x - z||^2 + lambda (lambda - 2 alpha) ||Ax - Az||^2 - ||t - z||^2`
    /// for the step that produced this record.
    pub step1_slack: Option<S>,
    /// Gaps of the step that produced this record, measured at its start.
    pub gaps: Option<StepGaps<S>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TerminalReason {
    Residual,
    Stall,
    MaxIterations,
    /// Only on the partial trace of an aborted run.
    Aborted,
}

impl TerminalReason {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminalReason::Residual => "residual",
            TerminalReason::Stall => "stall",
            TerminalReason::MaxIterations => "max_iterations",
            TerminalReason::Aborted => "aborted",
        }
    }
}

impl fmt::Display for TerminalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace<S> {
    pub records: Vec<TraceRecord<S>>,
    pub terminal_reason: TerminalReason,
    pub config_fingerprint: String,
}

impl<S: Scalar> Trace<S> {
    pub fn last(&self) -> &TraceRecord<S> {
        self.records.last().expect("traces are nonempty")
    }

    /// Number of steps taken.
    pub fn iterations(&self) -> usize {
        self.last().n
    }

    pub fn final_x(&self) -> &Vector<S> {
        &self.last().x
    }
}

pub const AUDIT_FEJER: &str = "fejer monotone";
pub const AUDIT_STEP1: &str = "forward-backward bound";

/// Checks `||x_n - z|| <= ||x_{n-1} - z|| + eps (1 + ||x_{n-1} - z||)` at every
/// `n >= 1`. The reported violation is `-margin / (1 + ||x_{n-1} - z||)`,
/// and `worst_index` is the `n` where it peaks.
pub fn check_fejer<S: Scalar>(trace: &Trace<S>, z: &Vector<S>, eps: S) -> Result<AuditReport<S>> {
    let first = trace.records.first().ok_or_else(|| Error::contract("empty trace"))?;
    let mut prev_dist = first.x.distance(z)?;
    let mut worst = S::neg_infinity();
    let mut witness = None;
    let mut worst_index = None;
    for pair in trace.records.windows(2) {
        let dist = pair[1].x.distance(z)?;
        let violation = (dist - prev_dist) / (S::one() + prev_dist);
        if violation > worst {
            worst = violation;
            witness = Some((pair[0].x.clone(), pair[1].x.clone()));
            worst_index = Some(pair[1].n);
        }
        prev_dist = dist;
    }
    let samples = trace.records.len() - 1;
    let max_violation = if samples == 0 { S::zero() } else { worst };
    Ok(AuditReport {
        property_name: AUDIT_FEJER.to_string(),
        samples,
        max_violation,
        worst_witness: witness,
        worst_index,
        slack: eps,
        passed: max_violation <= eps,
    })
}

/// Checks every recorded forward-backward slack against
/// `-eps (1 + ||x_{n-1} - z||^2)`.
pub fn check_step1<S: Scalar>(trace: &Trace<S>, z: &Vector<S>, eps: S) -> Result<AuditReport<S>> {
    let mut worst = S::neg_infinity();
    let mut witness = None;
    let mut worst_index = None;
    let mut samples = 0;
    for pair in trace.records.windows(2) {
        let Some(slack) = pair[1].step1_slack else { continue };
        samples += 1;
        let scale = S::one() + pair[0].x.sub(z)?.norm_squared();
        let violation = -slack / scale;
        if violation > worst {
            worst = violation;
            witness = Some((pair[0].x.clone(), pair[1].x.clone()));
            worst_index = Some(pair[1].n);
        }
    }
    let max_violation = if samples == 0 { S::zero() } else { worst };
    Ok(AuditReport {
        property_name: AUDIT_STEP1.to_string(),
        samples,
        max_violation,
        worst_witness: witness,
        worst_index,
        slack: eps,
        passed: max_violation <= eps,
    })
}

/// `||x_final - z||`: when the target set is the singleton `{z}` its
/// projection of every iterate is `z` itself.
pub fn project_onto_solution_estimate<S: Scalar>(trace: &Trace<S>, z: &Vector<S>) -> Result<S> {
    trace.final_x().distance(z)
}

pub const CSV_HEADER: [&str; 6] = ["n", "resid_fix", "resid_vi", "step_norm", "dist_known", "fejer_margin"];

/// Decimal rendering with 17 significant digits, in the style of C's
/// `%.17g`: fixed notation for exponents in `[-5, 17)`, scientific
/// otherwise, trailing zeros removed. Round-trips every `f64`.
pub fn format_sig17(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, v);
        trim_fraction(&fixed).to_string()
    } else {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_field<S: Scalar>(v: Option<S>) -> String {
    v.map(|v| format_sig17(v.as_f64())).unwrap_or_default()
}

/// Writes one row per record under [`CSV_HEADER`]; absent optionals are
/// empty fields.
pub fn write_trace_csv<S: Scalar, W: io::Write>(trace: &Trace<S>, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &trace.records {
        w.write_record([
            r.n.to_string(),
            format_sig17(r.resid_fix.as_f64()),
            format_sig17(r.resid_vi.as_f64()),
            format_sig17(r.step_norm.as_f64()),
            opt_field(r.dist_known),
            opt_field(r.fejer_margin),
        ])?;
    }
    w.flush()
}

/// One parsed row of a trace CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTraceRow {
    pub n: usize,
    pub resid_fix: f64,
    pub resid_vi: f64,
    pub step_norm: f64,
    pub dist_known: Option<f64>,
    pub fejer_margin: Option<f64>,
}

/// Parses a trace CSV, checking the header.
pub fn read_trace_csv<R: io::Read>(input: R) -> Result<Vec<CsvTraceRow>> {
    let bad = |e: &dyn fmt::Display| Error::contract(format!("malformed trace csv: {e}"));
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers().map_err(|e| bad(&e))?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::contract(format!("unexpected trace csv header: {header:?}")));
    }
    let real = |s: &str| s.parse::<f64>().map_err(|e| bad(&e));
    let opt = |s: &str| if s.is_empty() { Ok(None) } else { real(s).map(Some) };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(&e))?;
        rows.push(CsvTraceRow {
            n: rec[0].parse().map_err(|e| bad(&e))?,
            resid_fix: real(&rec[1])?,
            resid_vi: real(&rec[2])?,
            step_norm: real(&rec[3])?,
            dist_known: opt(&rec[4])?,
            fejer_margin: opt(&rec[5])?,
        });
    }
    Ok(rows)
}
