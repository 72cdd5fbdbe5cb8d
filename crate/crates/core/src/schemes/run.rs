use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error as ThisError;

use crate::diagnostics::{residual_fixed_point, residual_vi, StepGaps, TerminalReason, Trace, TraceRecord};
use crate::error::{check_dim, Error, Result};
use crate::operators::{IdentityMap, IsmOperator, Mapping, NonexpansiveMap, Resolvent, StrictPseudocontraction};
use crate::scalar::Scalar;
use crate::sets::ConvexSet;
use crate::space::Vector;

use super::schedule::{validate_averaging, validate_schedule, Schedule, ScheduleViolation};
use super::steps::{self, IterationState, StepAux};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// The new extragradient process.
    Ko,
    /// The same process with `T = I`.
    KoNoT,
    /// Takahashi–Toyoda.
    Tt,
    /// Nadezhkina–Takahashi.
    Nt,
    PicardMann,
    ResolventKo,
    PseudoKo,
    /// The process over the whole space with no projection.
    ResolventFree,
    Mann,
    Ishikawa,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 10] = [
        SchemeKind::Ko,
        SchemeKind::KoNoT,
        SchemeKind::Tt,
        SchemeKind::Nt,
        SchemeKind::PicardMann,
        SchemeKind::ResolventKo,
        SchemeKind::PseudoKo,
        SchemeKind::ResolventFree,
        SchemeKind::Mann,
        SchemeKind::Ishikawa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Ko => "ko",
            SchemeKind::KoNoT => "ko_no_t",
            SchemeKind::Tt => "tt",
            SchemeKind::Nt => "nt",
            SchemeKind::PicardMann => "picard_mann",
            SchemeKind::ResolventKo => "resolvent_ko",
            SchemeKind::PseudoKo => "pseudo_ko",
            SchemeKind::ResolventFree => "resolvent_free",
            SchemeKind::Mann => "mann",
            SchemeKind::Ishikawa => "ishikawa",
        }
    }

    /// Problem slots this scheme reads.
    pub fn required_slots(self) -> &'static [&'static str] {
        match self {
            SchemeKind::Ko | SchemeKind::Tt | SchemeKind::Nt | SchemeKind::ResolventFree => {
                &["operator_a", "map_t", "lambda"]
            }
            SchemeKind::KoNoT => &["operator_a", "lambda"],
            SchemeKind::ResolventKo => &["operator_a", "operator_b", "lambda"],
            SchemeKind::PseudoKo => &["map_t", "map_s", "lambda"],
            SchemeKind::PicardMann | SchemeKind::Mann | SchemeKind::Ishikawa => &["map_t"],
        }
    }

    pub fn uses_lambda(self) -> bool {
        self.required_slots().contains(&"lambda")
    }

    /// Schemes that project onto the configured set.
    pub fn uses_set(self) -> bool {
        matches!(
            self,
            SchemeKind::Ko | SchemeKind::KoNoT | SchemeKind::Tt | SchemeKind::Nt
        )
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::spec(format!("unknown scheme '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingRule<S> {
    pub max_iterations: usize,
    /// Stop once `resid_fix + resid_vi` is at most this.
    pub residual_threshold: S,
    /// Stop once `||x_{n+1} - x_n||` is at most this; `0` disables.
    pub stall_threshold: S,
}

impl<S: Scalar> StoppingRule<S> {
    pub fn new(max_iterations: usize, residual_threshold: S, stall_threshold: S) -> Result<Self> {
        if max_iterations == 0 {
            return Err(Error::spec("max_iterations must be at least 1"));
        }
        if !(residual_threshold > S::zero()) || !residual_threshold.is_finite() {
            return Err(Error::spec("residual_threshold must be positive"));
        }
        if !(stall_threshold >= S::zero()) || !stall_threshold.is_finite() {
            return Err(Error::spec("stall_threshold must be nonnegative"));
        }
        Ok(Self {
            max_iterations,
            residual_threshold,
            stall_threshold,
        })
    }
}

/// Everything a scheme may read: the set, the operators with their
/// constants, and the parameter schedules.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem<S> {
    pub set: ConvexSet<S>,
    pub operator_a: Option<IsmOperator<S>>,
    pub map_t: Option<NonexpansiveMap<S>>,
    pub map_s: Option<StrictPseudocontraction<S>>,
    pub operator_b: Option<Resolvent<S>>,
    pub lambda: Option<Schedule<S>>,
    pub alpha_n: Schedule<S>,
    pub known_solution: Option<Vector<S>>,
    /// Run the Nadezhkina–Takahashi corrector without `A` on the predictor.
    pub nt_literal: bool,
}

impl<S: Scalar> Problem<S> {
    pub fn new(alpha_n: Schedule<S>) -> Self {
        Self {
            set: ConvexSet::WholeSpace,
            operator_a: None,
            map_t: None,
            map_s: None,
            operator_b: None,
            lambda: None,
            alpha_n,
            known_solution: None,
            nt_literal: false,
        }
    }

    pub fn with_set(mut self, set: ConvexSet<S>) -> Self {
        self.set = set;
        self
    }

    pub fn with_a(mut self, a: IsmOperator<S>) -> Self {
        self.operator_a = Some(a);
        self
    }

    pub fn with_t(mut self, t: NonexpansiveMap<S>) -> Self {
        self.map_t = Some(t);
        self
    }

    pub fn with_s(mut self, s: StrictPseudocontraction<S>) -> Self {
        self.map_s = Some(s);
        self
    }

    pub fn with_b(mut self, b: Resolvent<S>) -> Self {
        self.operator_b = Some(b);
        self
    }

    pub fn with_lambda(mut self, lambda: Schedule<S>) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_known_solution(mut self, z: Vector<S>) -> Self {
        self.known_solution = Some(z);
        self
    }

    pub fn missing_slots(&self, scheme: SchemeKind) -> Vec<&'static str> {
        scheme
            .required_slots()
            .iter()
            .copied()
            .filter(|slot| match *slot {
                "operator_a" => self.operator_a.is_none(),
                "map_t" => self.map_t.is_none(),
                "map_s" => self.map_s.is_none(),
                "operator_b" => self.operator_b.is_none(),
                "lambda" => self.lambda.is_none(),
                _ => false,
            })
            .collect()
    }

    /// The operator whose variational inequality the scheme targets, with
    /// the set it is posed over. `None` for pure fixed-point schemes.
    pub fn vi_target(&self, scheme: SchemeKind) -> Option<(ConvexSet<S>, IsmOperator<S>)> {
        match scheme {
            SchemeKind::Ko | SchemeKind::KoNoT | SchemeKind::Tt | SchemeKind::Nt => {
                Some((self.set.clone(), self.operator_a.clone()?))
            }
            SchemeKind::ResolventKo | SchemeKind::ResolventFree => {
                Some((ConvexSet::WholeSpace, self.operator_a.clone()?))
            }
            SchemeKind::PseudoKo => Some((
                ConvexSet::WholeSpace,
                IsmOperator::from_pseudocontraction(self.map_s.clone()?),
            )),
            SchemeKind::PicardMann | SchemeKind::Mann | SchemeKind::Ishikawa => None,
        }
    }

    /// Step-size hypotheses of the scheme: `lambda in (0, 2 alpha)` and
    /// `alpha_n in (0, 1)`; for the pseudocontraction scheme `2 alpha = 1 - k`.
    pub fn validate_schedules(&self, scheme: SchemeKind) -> std::result::Result<(), Vec<ScheduleViolation>> {
        if !scheme.uses_lambda() {
            let v = validate_averaging(&self.alpha_n);
            return if v.is_empty() { Ok(()) } else { Err(v) };
        }
        let (Some(lambda), Some((_, a))) = (&self.lambda, self.vi_target(scheme)) else {
            return Ok(());
        };
        validate_schedule(lambda, &self.alpha_n, a.alpha)
    }
}

#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum RunError<S: Scalar> {
    #[error("missing {}", .0.join(", "))]
    MissingSlots(Vec<&'static str>),
    #[error("schedule hypotheses violated: {}", join(.0))]
    Schedule(Vec<ScheduleViolation>),
    #[error(transparent)]
    Spec(#[from] Error),
    #[error("run aborted after {} steps: {cause}", .trace.iterations())]
    Aborted { trace: Trace<S>, cause: Error },
}

fn join(v: &[ScheduleViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

enum FixTarget<'a, S> {
    Identity,
    Map(&'a NonexpansiveMap<S>),
    Resolvent(&'a Resolvent<S>),
}

impl<S: Scalar> Mapping<S> for FixTarget<'_, S> {
    fn apply(&self, x: &Vector<S>) -> Result<Vector<S>> {
        match self {
            FixTarget::Identity => IdentityMap.apply(x),
            FixTarget::Map(t) => t.apply_t(x),
            FixTarget::Resolvent(j) => j.apply(x),
        }
    }
}

struct Engine<'a, S: Scalar> {
    problem: &'a Problem<S>,
    scheme: SchemeKind,
    fix: FixTarget<'a, S>,
    vi: Option<(ConvexSet<S>, IsmOperator<S>)>,
    lambda_bar: S,
    /// `(z, A z)` when a solution is known.
    known: Option<(Vector<S>, Option<Vector<S>>)>,
}

impl<'a, S: Scalar> Engine<'a, S> {
    fn new(problem: &'a Problem<S>, scheme: SchemeKind) -> Result<Self> {
        let fix = match scheme {
            SchemeKind::KoNoT => FixTarget::Identity,
            SchemeKind::ResolventKo => FixTarget::Resolvent(problem.operator_b.as_ref().expect("slot checked")),
            _ => FixTarget::Map(problem.map_t.as_ref().expect("slot checked")),
        };
        let vi = problem.vi_target(scheme);
        let lambda_bar = match (&problem.lambda, &vi) {
            (Some(l), _) if scheme.uses_lambda() => l.midpoint(),
            (_, Some((_, a))) => a.alpha,
            _ => S::one(),
        };
        let known = match &problem.known_solution {
            Some(z) => {
                let az = match &vi {
                    Some((_, a)) => Some(a.apply_ism(z)?),
                    None => None,
                };
                Some((z.clone(), az))
            }
            None => None,
        };
        Ok(Self {
            problem,
            scheme,
            fix,
            vi,
            lambda_bar,
            known,
        })
    }

    fn step(&self, state: &IterationState<S>) -> Result<IterationState<S>> {
        let p = self.problem;
        let n = state.n;
        let alpha = p.alpha_n.value(n);
        let lambda = p.lambda.as_ref().map(|l| l.value(n)).unwrap_or_else(S::zero);
        let a = || p.operator_a.as_ref().expect("slot checked");
        let t = || p.map_t.as_ref().expect("slot checked");
        match self.scheme {
            SchemeKind::Ko => steps::step_ko(state, &p.set, a(), t(), lambda, alpha),
            SchemeKind::KoNoT => steps::step_ko_no_t(state, &p.set, a(), lambda, alpha),
            SchemeKind::Tt => steps::step_tt(state, &p.set, a(), t(), lambda, alpha),
            SchemeKind::Nt if p.nt_literal => steps::step_nt_literal(state, &p.set, a(), t(), lambda, alpha),
            SchemeKind::Nt => steps::step_nt(state, &p.set, a(), t(), lambda, alpha),
            SchemeKind::PicardMann => steps::step_picard_mann(state, t(), alpha),
            SchemeKind::ResolventKo => {
                let b = p.operator_b.as_ref().expect("slot checked");
                steps::step_resolvent_ko(state, &b.operator, a(), b.r, lambda, alpha)
            }
            SchemeKind::PseudoKo => {
                steps::step_pseudo_ko(state, t(), p.map_s.as_ref().expect("slot checked"), lambda, alpha)
            }
            SchemeKind::ResolventFree => steps::step_resolvent_free(state, a(), t(), lambda, alpha),
            SchemeKind::Mann => steps::step_mann(state, t(), alpha),
            SchemeKind::Ishikawa => steps::step_ishikawa(state, t(), alpha),
        }
    }

    fn record(&self, state: &IterationState<S>, prev: Option<&IterationState<S>>) -> Result<TraceRecord<S>> {
        let x = &state.x;
        let resid_fix = residual_fixed_point(x, &self.fix)?;
        let resid_vi = match &self.vi {
            Some((set, a)) => residual_vi(x, set, a, self.lambda_bar)?,
            None => S::zero(),
        };
        let step_norm = match prev {
            Some(p) => x.distance(&p.x)?,
            None => S::zero(),
        };
        let mut rec = TraceRecord {
            n: state.n,
            x: x.clone(),
            resid_fix,
            resid_vi,
            step_norm,
            dist_known: None,
            fejer_margin: None,
            step1_slack: None,
            gaps: None,
        };
        if let Some(prev) = prev {
            rec.gaps = Some(gaps(&prev.x, &state.aux)?);
        }
        if let Some((z, az)) = &self.known {
            let dist = x.distance(z)?;
            rec.dist_known = Some(dist);
            if let Some(prev) = prev {
                let prev_dist = prev.x.distance(z)?;
                rec.fejer_margin = Some(prev_dist - dist);
                if let (Some(t), Some((_, a)), Some(az)) = (&state.aux.t, &self.vi, az) {
                    let lambda = self.problem.lambda.as_ref().map(|l| l.value(prev.n));
                    if let Some(lambda) = lambda {
                        let ax_gap = a.apply_ism(&prev.x)?.sub(az)?.norm_squared();
                        let slack = prev_dist * prev_dist + lambda * (lambda - S::two() * a.alpha) * ax_gap
                            - t.sub(z)?.norm_squared();
                        rec.step1_slack = Some(slack);
                    }
                }
            }
        }
        Ok(rec)
    }
}

fn gaps<S: Scalar>(x: &Vector<S>, aux: &StepAux<S>) -> Result<StepGaps<S>> {
    let d = |p: &Option<Vector<S>>| p.as_ref().map(|p| x.distance(p)).transpose();
    Ok(StepGaps {
        x_minus_y: d(&aux.y)?,
        x_minus_t: d(&aux.t)?,
        x_minus_tt: d(&aux.tt)?,
    })
}

fn fingerprint<S: Scalar>(problem: &Problem<S>, scheme: SchemeKind, x0: &Vector<S>, stop: &StoppingRule<S>) -> String {
    let digest = Sha256::digest(format!("{scheme:?}|{problem:?}|{x0:?}|{stop:?}").as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Drives `scheme` from `x0` until the stopping rule fires.
///
/// The schedule hypotheses are checked before the first step. When the
/// scheme projects onto a set, `x0` is projected once before the first
/// record. Every iterate, including `n = 0`, gets a [`TraceRecord`].
pub fn run<S: Scalar>(
    problem: &Problem<S>,
    scheme: SchemeKind,
    x0: &Vector<S>,
    stop: &StoppingRule<S>,
) -> std::result::Result<Trace<S>, RunError<S>> {
    let missing = problem.missing_slots(scheme);
    if !missing.is_empty() {
        return Err(RunError::MissingSlots(missing));
    }
    problem.validate_schedules(scheme).map_err(RunError::Schedule)?;
    if let Some(d) = problem.set.dim() {
        check_dim(d, x0.dim())?;
    }
    if let Some(z) = &problem.known_solution {
        check_dim(x0.dim(), z.dim())?;
    }

    let engine = Engine::new(problem, scheme)?;
    let start = if scheme.uses_set() {
        problem.set.project(x0)?
    } else {
        x0.clone()
    };
    let mut trace = Trace {
        records: Vec::new(),
        terminal_reason: TerminalReason::Aborted,
        config_fingerprint: fingerprint(problem, scheme, x0, stop),
    };
    let mut state = IterationState::start(start);
    let mut prev: Option<IterationState<S>> = None;
    loop {
        let rec = match engine.record(&state, prev.as_ref()) {
            Ok(r) => r,
            Err(cause) => return Err(RunError::Aborted { trace, cause }),
        };
        let reason = if rec.resid_fix + rec.resid_vi <= stop.residual_threshold {
            Some(TerminalReason::Residual)
        } else if rec.n > 0 && stop.stall_threshold > S::zero() && rec.step_norm <= stop.stall_threshold {
            Some(TerminalReason::Stall)
        } else if rec.n >= stop.max_iterations {
            Some(TerminalReason::MaxIterations)
        } else {
            None
        };
        trace.records.push(rec);
        if let Some(reason) = reason {
            trace.terminal_reason = reason;
            return Ok(trace);
        }
        match engine.step(&state) {
            Ok(next) => {
                prev = Some(state);
                state = next;
            }
            Err(cause) => return Err(RunError::Aborted { trace, cause }),
        }
    }
}
