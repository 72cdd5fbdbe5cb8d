use crate::audit::{AuditSuite, Tracker};
use crate::error::{check_dim, Error, Result};
use crate::sampling::{self, uniform_in_cube};
use crate::scalar::Scalar;
use crate::sets::ConvexSet;
use crate::space::{combine, Tolerance, Vector};

use super::{Mapping, AUDIT_SPREAD};

/// Nonexpansive map `T`, `||Tx - Ty|| <= ||x - y||`.
#[derive(Debug, Clone, PartialEq)]
pub enum NonexpansiveMap<S> {
    Identity,
    ProjectionOnto(ConvexSet<S>),
    /// `T(x) = p + c (x - p)`, `0 <= c < 1`.
    Contraction {
        c: S,
        fixed_point: Vector<S>,
    },
    /// Planar rotation about the origin; `d = 2` only.
    Rotation {
        angle: S,
    },
    /// `T = (1 - w) I + w * inner`, `0 < w < 1`.
    Average {
        inner: Box<NonexpansiveMap<S>>,
        weight: S,
    },
}

impl<S: Scalar> NonexpansiveMap<S> {
    pub fn contraction(c: S, fixed_point: Vector<S>) -> Result<Self> {
        if !(c >= S::zero() && c < S::one()) {
            return Err(Error::spec(format!("contraction factor must lie in [0, 1), got {c}")));
        }
        Ok(NonexpansiveMap::Contraction { c, fixed_point })
    }

    pub fn rotation(angle: S) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::NonFinite {
                context: "rotation angle",
            });
        }
        Ok(NonexpansiveMap::Rotation { angle })
    }

    pub fn average(inner: NonexpansiveMap<S>, weight: S) -> Result<Self> {
        if !(weight > S::zero() && weight < S::one()) {
            return Err(Error::spec(format!(
                "averaging weight must lie in (0, 1), got {weight}"
            )));
        }
        Ok(NonexpansiveMap::Average {
            inner: Box::new(inner),
            weight,
        })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            NonexpansiveMap::Identity => "identity",
            NonexpansiveMap::ProjectionOnto(_) => "projection",
            NonexpansiveMap::Contraction { .. } => "contraction",
            NonexpansiveMap::Rotation { .. } => "rotation",
            NonexpansiveMap::Average { .. } => "average",
        }
    }

    /// Evaluates `T(x)`.
    pub fn apply_t(&self, x: &Vector<S>) -> Result<Vector<S>> {
        match self {
            NonexpansiveMap::Identity => Ok(x.clone()),
            NonexpansiveMap::ProjectionOnto(set) => set.project(x),
            NonexpansiveMap::Contraction { c, fixed_point } => {
                check_dim(fixed_point.dim(), x.dim())?;
                combine(S::one() - *c, fixed_point, *c, x)
            }
            NonexpansiveMap::Rotation { angle } => {
                check_dim(2, x.dim())?;
                let (s, c) = angle.sin_cos();
                Vector::new(vec![c * x[0] - s * x[1], s * x[0] + c * x[1]])
            }
            NonexpansiveMap::Average { inner, weight } => {
                let tx = inner.apply_t(x)?;
                combine(S::one() - *weight, x, *weight, &tx)
            }
        }
    }
}

impl<S: Scalar> Mapping<S> for NonexpansiveMap<S> {
    fn apply(&self, x: &Vector<S>) -> Result<Vector<S>> {
        self.apply_t(x)
    }
}

pub const AUDIT_NONEXPANSIVE_MAP: &str = "nonexpansive";

/// Checks `||Tx - Ty|| <= ||x - y|| + eps_certificate (1 + ||x - y||)` on
/// random pairs; the reported violation is normalized by `1 + ||x - y||`.
pub fn audit_nonexpansive<S: Scalar>(
    map: &NonexpansiveMap<S>,
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
    let mut tracker = Tracker::new(AUDIT_NONEXPANSIVE_MAP);
    for _ in 0..sample_count {
        let x = uniform_in_cube(&mut rng, &origin, S::lit(AUDIT_SPREAD));
        let y = uniform_in_cube(&mut rng, &origin, S::lit(AUDIT_SPREAD));
        let d = x.distance(&y)?;
        let td = map.apply_t(&x)?.distance(&map.apply_t(&y)?)?;
        tracker.observe((td - d) / (S::one() + d), &x, &y);
    }
    Ok(AuditSuite {
        subject: format!("nonexpansive map {}", map.kind_name()),
        reports: vec![tracker.finish(tol.eps_certificate)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector<f64> {
        Vector::from_f64(xs).unwrap()
    }

    #[test]
    fn apply_examples() {
        let x = v(&[0.3, -2.0]);
        assert_eq!(NonexpansiveMap::Identity.apply_t(&x).unwrap(), x);
        let c = NonexpansiveMap::contraction(0.5, v(&[0.0, 0.0])).unwrap();
        assert_eq!(c.apply_t(&v(&[1.0, 0.0])).unwrap(), v(&[0.5, 0.0]));
        let p = NonexpansiveMap::ProjectionOnto(ConvexSet::new_ball(v(&[0.0, 0.0]), 1.0).unwrap());
        assert!(p.apply_t(&v(&[3.0, 4.0])).unwrap().distance(&v(&[0.6, 0.8])).unwrap() < 1e-15);
    }

    #[test]
    fn rotation_requires_plane() {
        let r = NonexpansiveMap::rotation(1.0).unwrap();
        assert!(r.apply_t(&v(&[1.0, 2.0, 3.0])).is_err());
        let q = NonexpansiveMap::rotation(std::f64::consts::FRAC_PI_2).unwrap();
        assert!(q.apply_t(&v(&[1.0, 0.0])).unwrap().distance(&v(&[0.0, 1.0])).unwrap() < 1e-15);
    }

    #[test]
    fn expansion_is_rejected_at_construction() {
        assert!(NonexpansiveMap::contraction(2.0, v(&[0.0])).is_err());
        assert!(NonexpansiveMap::contraction(1.0, v(&[0.0])).is_err());
        assert!(NonexpansiveMap::average(NonexpansiveMap::<f64>::Identity, 1.0).is_err());
        assert!(NonexpansiveMap::average(NonexpansiveMap::<f64>::Identity, 0.0).is_err());
    }

    #[test]
    fn average_mixes_with_identity() {
        let inner = NonexpansiveMap::contraction(0.0, v(&[2.0, 2.0])).unwrap();
        let avg = NonexpansiveMap::average(inner, 0.25).unwrap();
        assert_eq!(avg.apply_t(&v(&[0.0, 0.0])).unwrap(), v(&[0.5, 0.5]));
    }

    #[test]
    fn audits() {
        let tol = Tolerance::<f64>::default();
        let rot = NonexpansiveMap::rotation(1.0).unwrap();
        let suite = audit_nonexpansive(&rot, 2, 5000, 4, &tol).unwrap();
        assert!(suite.passed());
        // isometry: the worst normalized gap is at the rounding level
        assert!(suite.reports[0].max_violation.abs() < 1e-14);

        let c = NonexpansiveMap::contraction(0.5, v(&[1.0, -1.0, 0.0])).unwrap();
        assert!(audit_nonexpansive(&c, 3, 5000, 4, &tol).unwrap().passed());
        let mut rng = sampling::rng(9);
        for _ in 0..100 {
            let x = uniform_in_cube(&mut rng, &v(&[0.0, 0.0, 0.0]), 3.0);
            let y = uniform_in_cube(&mut rng, &v(&[0.0, 0.0, 0.0]), 3.0);
            let ratio = c.apply_t(&x).unwrap().distance(&c.apply_t(&y).unwrap()).unwrap() / x.distance(&y).unwrap();
            assert!((ratio - 0.5).abs() < 1e-12);
        }

        let nested =
            NonexpansiveMap::average(NonexpansiveMap::ProjectionOnto(ConvexSet::new_simplex(3).unwrap()), 0.7).unwrap();
        assert!(audit_nonexpansive(&nested, 3, 5000, 4, &tol).unwrap().passed());
    }
}
