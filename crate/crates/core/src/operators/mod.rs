//! Operator catalog: inverse-strongly-monotone maps, nonexpansive maps,
//! strict pseudocontractions and maximal monotone operators with
//! resolvents. Every family carries its claimed constant and a sampled
//! audit that confirms or refutes the claim.
//!
//! The maximality of the set-valued operators is taken as given; only
//! their resolvents have a runtime representation.

mod ism;
mod maximal;
mod nonexpansive;
mod pseudo;

pub use ism::{audit_ism, IsmKind, IsmOperator, AUDIT_ISM, AUDIT_LIPSCHITZ, AUDIT_MONOTONE};
pub use maximal::{MaximalMonotone, Resolvent};
pub use nonexpansive::{audit_nonexpansive, NonexpansiveMap, AUDIT_NONEXPANSIVE_MAP};
pub use pseudo::{audit_strict_pseudocontraction, PseudoKind, StrictPseudocontraction, AUDIT_STRICT_PSEUDO};

use crate::error::Result;
use crate::scalar::Scalar;
use crate::space::Vector;

/// Single-valued map `R^d -> R^d`.
pub trait Mapping<S: Scalar> {
    fn apply(&self, x: &Vector<S>) -> Result<Vector<S>>;
}

/// The identity map.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IdentityMap;

impl<S: Scalar> Mapping<S> for IdentityMap {
    fn apply(&self, x: &Vector<S>) -> Result<Vector<S>> {
        Ok(x.clone())
    }
}

impl<S: Scalar, M: Mapping<S> + ?Sized> Mapping<S> for &M {
    fn apply(&self, x: &Vector<S>) -> Result<Vector<S>> {
        (**self).apply(x)
    }
}

/// Half-width of the cube audits sample pairs from.
pub(crate) const AUDIT_SPREAD: f64 = 5.0;
