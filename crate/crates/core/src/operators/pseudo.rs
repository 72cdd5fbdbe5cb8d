use crate::audit::{quadratic_scale, AuditSuite, Tracker};
use crate::error::{Error, Result};
use crate::sampling::{self, uniform_in_cube};
use crate::scalar::Scalar;
use crate::space::{Tolerance, Vector};

use super::{Mapping, NonexpansiveMap, AUDIT_SPREAD};

#[derive(Debug, Clone, PartialEq)]
pub enum PseudoKind<S> {
    /// `S(x) = -s x`, `s >= 1`.
    ScaledNegation { s: S },
    /// A nonexpansive map viewed as a 0-strict pseudocontraction.
    Nonexpansive(NonexpansiveMap<S>),
}

/// `k`-strict pseudocontraction:
/// `||Sx - Sy||^2 <= ||x - y||^2 + k ||(I - S)x - (I - S)y||^2`.
///
/// Construction only enforces `0 <= k < 1`; an under-claimed `k` is left
/// for [`audit_strict_pseudocontraction`] to refute.
#[derive(Debug, Clone, PartialEq)]
pub struct StrictPseudocontraction<S> {
    pub kind: PseudoKind<S>,
    pub k: S,
}

impl<S: Scalar> StrictPseudocontraction<S> {
    pub fn new(kind: PseudoKind<S>, k: S) -> Result<Self> {
        if !(k >= S::zero() && k < S::one()) {
            return Err(Error::spec(format!(
                "strict pseudocontraction constant must lie in [0, 1), got {k}"
            )));
        }
        if let PseudoKind::ScaledNegation { s } = &kind {
            if !(*s >= S::one()) || !s.is_finite() {
                return Err(Error::spec(format!(
                    "scaled negation factor must be finite and >= 1, got {s}"
                )));
            }
        }
        Ok(Self { kind, k })
    }

    /// Builds the map with its smallest valid constant.
    pub fn with_minimal_k(kind: PseudoKind<S>) -> Result<Self> {
        let k = match &kind {
            PseudoKind::ScaledNegation { s } => (*s - S::one()) / (*s + S::one()),
            PseudoKind::Nonexpansive(_) => S::zero(),
        };
        Self::new(kind, k)
    }

    /// Smallest `k` for which the defining inequality holds.
    ///
    /// For `S = -s I` the inequality reads `s^2 <= 1 + k (1 + s)^2`, so
    /// `k = (s^2 - 1)/(s + 1)^2 = (s - 1)/(s + 1)`.
    pub fn minimal_k(&self) -> S {
        match &self.kind {
            PseudoKind::ScaledNegation { s } => (*s - S::one()) / (*s + S::one()),
            PseudoKind::Nonexpansive(_) => S::zero(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            PseudoKind::ScaledNegation { .. } => "scaled_negation",
            PseudoKind::Nonexpansive(_) => "nonexpansive",
        }
    }

    pub fn apply_s(&self, x: &Vector<S>) -> Result<Vector<S>> {
        match &self.kind {
            PseudoKind::ScaledNegation { s } => x.scale(-*s),
            PseudoKind::Nonexpansive(t) => t.apply_t(x),
        }
    }
}

impl<S: Scalar> Mapping<S> for StrictPseudocontraction<S> {
    fn apply(&self, x: &Vector<S>) -> Result<Vector<S>> {
        self.apply_s(x)
    }
}

pub const AUDIT_STRICT_PSEUDO: &str = "strict pseudocontraction";

/// Checks the defining inequality with `k = spec.k` on random pairs; the
/// violation is normalized by `1 + scale^2` over `x - y`, `Sx - Sy` and
/// `(I - S)x - (I - S)y`.
pub fn audit_strict_pseudocontraction<S: Scalar>(
    spec: &StrictPseudocontraction<S>,
    dim: usize,
    sample_count: usize,
    rng_seed: u64,
    tol: &Tolerance<S>,
) -> Result<AuditSuite<S>> {
    if sample_count == 0 {
        return Err(Error::contract("audit needs at least one sample"));
    }
    let mut rng = sampling::rng(rng_seed);
    let origin = Vector::zeros(dim);
    let mut tracker = Tracker::new(AUDIT_STRICT_PSEUDO);
    for _ in 0..sample_count {
        let x = uniform_in_cube(&mut rng, &origin, S::lit(AUDIT_SPREAD));
        let y = uniform_in_cube(&mut rng, &origin, S::lit(AUDIT_SPREAD));
        let delta = x.sub(&y)?;
        let s_delta = spec.apply_s(&x)?.sub(&spec.apply_s(&y)?)?;
        let a_delta = delta.sub(&s_delta)?;
        let violation = s_delta.norm_squared() - delta.norm_squared() - spec.k * a_delta.norm_squared();
        tracker.observe(violation / quadratic_scale(&[&delta, &s_delta, &a_delta]), &x, &y);
    }
    Ok(AuditSuite {
        subject: format!("strict pseudocontraction {} (k = {})", spec.kind_name(), spec.k),
        reports: vec![tracker.finish(tol.eps_certificate)],
    })
}
