//! The four subcommands. Each returns an [`ExitStatus`] and writes its
//! human-readable output to the given streams.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use extragradient::diagnostics::{format_sig17, write_trace_csv};
use extragradient::operators::{
    audit_ism, audit_nonexpansive, audit_strict_pseudocontraction, AUDIT_ISM, AUDIT_MONOTONE,
};
use extragradient::sets::audit_projection;
use extragradient::{
    run, solve_vi_reference, verify_vi_certificate, AuditSuite, OracleError, RunError, SchemeKind, TerminalReason,
    Tolerance, Trace,
};
use rayon::prelude::*;

use crate::config::{parse_config, parse_unvalidated, scheme_errors, ConfigError, ProblemConfig};

pub const AUDIT_SAMPLES: usize = 10_000;
pub const CERTIFICATE_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Failure = 1,
    NotConverged = 2,
    Io = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

pub struct Console<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

impl Console<'_> {
    fn say(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", line.as_ref());
    }

    fn warn(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.err, "{}", line.as_ref());
    }

    fn config_errors(&mut self, path: &Path, errors: &[ConfigError]) -> ExitStatus {
        for e in errors {
            self.warn(format!("{}: {e}", path.display()));
        }
        ExitStatus::Failure
    }

    fn io_error(&mut self, path: &Path, e: &io::Error) -> ExitStatus {
        self.warn(format!("{}: {e}", path.display()));
        ExitStatus::Io
    }
}

fn load(
    path: &Path,
    seed_override: Option<u64>,
    validate: bool,
    console: &mut Console<'_>,
) -> Result<ProblemConfig, ExitStatus> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Err(console.io_error(path, &e)),
    };
    let parsed = if validate {
        parse_config(&text)
    } else {
        parse_unvalidated(&text)
    };
    match parsed {
        Ok(mut c) => {
            if let Some(seed) = seed_override {
                c.seed = seed;
            }
            Ok(c)
        }
        Err(errors) => Err(console.config_errors(path, &errors)),
    }
}

fn write_file(path: &Path, bytes: &[u8], console: &mut Console<'_>) -> Result<(), ExitStatus> {
    fs::write(path, bytes).map_err(|e| console.io_error(path, &e))
}

fn trace_csv(trace: &Trace<f64>) -> Vec<u8> {
    let mut out = Vec::new();
    write_trace_csv(trace, &mut out).expect("writing to memory");
    out
}

/// Runs the configured scheme and writes its trace. Exit 0 only when the
/// run stops on the residual rule.
pub fn cmd_run(
    config_path: &Path,
    out_path: &Path,
    seed_override: Option<u64>,
    console: &mut Console<'_>,
) -> ExitStatus {
    let config = match load(config_path, seed_override, true, console) {
        Ok(c) => c,
        Err(status) => return status,
    };
    let (trace, failure) = match run(&config.problem, config.scheme, &config.x0, &config.stop) {
        Ok(trace) => (trace, None),
        Err(RunError::Aborted { trace, cause }) => (trace, Some(cause.to_string())),
        Err(e) => {
            console.warn(format!("{}: {e}", config_path.display()));
            return ExitStatus::Failure;
        }
    };
    if let Err(status) = write_file(out_path, &trace_csv(&trace), console) {
        return status;
    }
    let last = trace.last();
    console.say(format!(
        "scheme={} terminal_reason={} iterations={} resid_fix={} resid_vi={}",
        config.scheme,
        trace.terminal_reason,
        trace.iterations(),
        format_sig17(last.resid_fix),
        format_sig17(last.resid_vi),
    ));
    if let Some(cause) = failure {
        console.warn(format!("aborted: {cause}"));
    }
    if trace.terminal_reason == TerminalReason::Residual {
        ExitStatus::Success
    } else {
        ExitStatus::NotConverged
    }
}

pub const COMPARE_HEADER: &str = "scheme,iterations,final_resid_fix,final_resid_vi,terminal_reason";

/// Runs the config's problem under each named scheme, concurrently, and
/// tabulates the outcomes in the order given.
pub fn cmd_compare(
    config_path: &Path,
    schemes: &[String],
    out_path: &Path,
    seed_override: Option<u64>,
    console: &mut Console<'_>,
) -> ExitStatus {
    if schemes.is_empty() {
        console.warn("no schemes");
        return ExitStatus::Failure;
    }
    let config = match load(config_path, seed_override, false, console) {
        Ok(c) => c,
        Err(status) => return status,
    };
    let outcomes: Vec<Result<Trace<f64>, String>> = schemes
        .par_iter()
        .map(|name| {
            let scheme: SchemeKind = name.parse().map_err(|e| format!("{name}: {e}"))?;
            let errors = scheme_errors(&config, scheme);
            if !errors.is_empty() {
                let listed: Vec<String> = errors.iter().map(ToString::to_string).collect();
                return Err(format!("{name}: {}", listed.join("; ")));
            }
            run(&config.problem, scheme, &config.x0, &config.stop).map_err(|e| format!("{name}: {e}"))
        })
        .collect();

    let mut table = String::from(COMPARE_HEADER);
    table.push('\n');
    let mut status = ExitStatus::Success;
    for (name, outcome) in schemes.iter().zip(&outcomes) {
        match outcome {
            Ok(trace) => {
                let last = trace.last();
                table.push_str(&format!(
                    "{name},{},{},{},{}\n",
                    trace.iterations(),
                    format_sig17(last.resid_fix),
                    format_sig17(last.resid_vi),
                    trace.terminal_reason,
                ));
                if trace.terminal_reason != TerminalReason::Residual && status == ExitStatus::Success {
                    status = ExitStatus::NotConverged;
                }
            }
            Err(message) => {
                console.warn(message);
                status = ExitStatus::Failure;
            }
        }
    }
    if let Err(io_status) = write_file(out_path, table.as_bytes(), console) {
        return io_status;
    }
    let _ = console.out.write_all(table.as_bytes());
    status
}

fn print_suite(suite: &AuditSuite<f64>, console: &mut Console<'_>) {
    console.say(format!(
        "[{}] {}",
        suite.subject,
        if suite.passed() { "PASS" } else { "FAIL" }
    ));
    for report in &suite.reports {
        console.say(format!("  {report}"));
    }
    let held = |name| suite.report(name).map(|r| r.passed);
    if held(AUDIT_ISM) == Some(false) && held(AUDIT_MONOTONE) == Some(true) {
        console.say("  ism violated, monotone holds");
    }
}

/// Audits every configured set and operator against its claimed class.
pub fn cmd_audit(config_path: &Path, seed_override: Option<u64>, console: &mut Console<'_>) -> ExitStatus {
    let config = match load(config_path, seed_override, false, console) {
        Ok(c) => c,
        Err(status) => return status,
    };
    let (p, dim, seed) = (&config.problem, config.dimension, config.seed);
    let tol = Tolerance::default();
    let mut suites = vec![audit_projection(&p.set, dim, AUDIT_SAMPLES, seed, &tol)];
    if let Some(a) = &p.operator_a {
        suites.push(audit_ism(a, dim, AUDIT_SAMPLES, seed, &tol));
    }
    if let Some(t) = &p.map_t {
        suites.push(audit_nonexpansive(t, dim, AUDIT_SAMPLES, seed, &tol));
    }
    if let Some(s) = &p.map_s {
        suites.push(audit_strict_pseudocontraction(s, dim, AUDIT_SAMPLES, seed, &tol));
    }
    let mut status = ExitStatus::Success;
    for suite in suites {
        match suite {
            Ok(suite) => {
                print_suite(&suite, console);
                if !suite.passed() {
                    status = ExitStatus::Failure;
                }
            }
            Err(e) => {
                console.warn(format!("audit error: {e}"));
                status = ExitStatus::Failure;
            }
        }
    }
    status
}

/// Solves the configured variational inequality with the reference solver
/// and prints its certificate.
pub fn cmd_oracle(config_path: &Path, seed_override: Option<u64>, console: &mut Console<'_>) -> ExitStatus {
    let config = match load(config_path, seed_override, false, console) {
        Ok(c) => c,
        Err(status) => return status,
    };
    let Some(a) = &config.problem.operator_a else {
        console.warn("oracle needs operator_a");
        return ExitStatus::Failure;
    };
    let set = &config.problem.set;
    let solution = match solve_vi_reference(set, a, config.dimension, config.stop.residual_threshold) {
        Ok(x) => x,
        Err(OracleError::BudgetExhausted { best, residual }) => {
            console.warn(format!(
                "budget exhausted: best={best} residual={}",
                format_sig17(residual)
            ));
            return ExitStatus::NotConverged;
        }
        Err(OracleError::Spec(e)) => {
            console.warn(e.to_string());
            return ExitStatus::Failure;
        }
    };
    let tol = Tolerance::default();
    match verify_vi_certificate(set, a, &solution, CERTIFICATE_SAMPLES, config.seed, &tol) {
        Ok(cert) => {
            let coords: Vec<String> = solution.iter().map(|&c| format_sig17(c)).collect();
            console.say(format!("solution=[{}]", coords.join(",")));
            console.say(format!(
                "certificate {} worst_violation={} samples={} feasible={}",
                if cert.passed { "PASS" } else { "FAIL" },
                format_sig17(cert.worst_violation),
                cert.samples,
                cert.feasible,
            ));
            if cert.passed {
                ExitStatus::Success
            } else {
                ExitStatus::Failure
            }
        }
        Err(e) => {
            console.warn(e.to_string());
            ExitStatus::Failure
        }
    }
}
