//! Extragradient and fixed-point schemes for finding common elements of
//! the fixed-point set of a nonexpansive map and the solution set of a
//! variational inequality in `R^d`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod diagnostics;
pub mod error;
pub mod matrix;
pub mod operators;
pub mod oracle;
pub mod sampling;
pub mod scalar;
pub mod schemes;
pub mod sets;
pub mod space;
pub mod suite;

pub use audit::{AuditReport, AuditSuite};
pub use diagnostics::{TerminalReason, Trace, TraceRecord};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use operators::{
    IdentityMap, IsmKind, IsmOperator, Mapping, MaximalMonotone, NonexpansiveMap, PseudoKind, Resolvent,
    StrictPseudocontraction,
};
pub use oracle::{solve_fixed_point_reference, solve_vi_reference, verify_vi_certificate, OracleError, VICertificate};
pub use scalar::Scalar;
pub use schemes::{run, Problem, RunError, Schedule, SchemeKind, StoppingRule};
pub use sets::ConvexSet;
pub use space::{combine, inner, norm, Tolerance, Vector};

pub type Vector64 = Vector<f64>;
pub type Vector32 = Vector<f32>;
pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type ConvexSet64 = ConvexSet<f64>;
pub type ConvexSet32 = ConvexSet<f32>;
pub type IsmOperator64 = IsmOperator<f64>;
pub type NonexpansiveMap64 = NonexpansiveMap<f64>;
pub type Problem64 = Problem<f64>;
pub type Problem32 = Problem<f32>;
pub type Trace64 = Trace<f64>;
pub type Trace32 = Trace<f32>;
pub type Tolerance64 = Tolerance<f64>;
