//! Iterative schemes, their parameter schedules and the run driver.

mod run;
mod schedule;
mod steps;

pub use run::{run, Problem, RunError, SchemeKind, StoppingRule};
pub use schedule::{validate_averaging, validate_schedule, Schedule, ScheduleKind, ScheduleViolation};
pub use steps::{
    forward_backward, step_ishikawa, step_ko, step_ko_no_t, step_mann, step_nt, step_nt_literal, step_picard_mann,
    step_pseudo_ko, step_resolvent_free, step_resolvent_ko, step_tt, IterationState, StepAux,
};
