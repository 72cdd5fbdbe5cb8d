//! Closed convex sets with exact metric projections.

use rand::Rng;

use crate::audit::{quadratic_scale, AuditSuite, Tracker};
use crate::error::{check_dim, Error, Result};
use crate::sampling::{self, gaussian_vector, uniform_in_cube, uniform_unit};
use crate::scalar::Scalar;
use crate::space::{inner, Tolerance, Vector};

/// Nonempty closed convex subset `C` of `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet<S> {
    WholeSpace,
    Box {
        lo: Vector<S>,
        hi: Vector<S>,
    },
    Ball {
        center: Vector<S>,
        radius: S,
    },
    /// `{x : <a, x> <= b}`.
    Halfspace {
        a: Vector<S>,
        b: S,
    },
    /// Probability simplex `{x : x_i >= 0, sum x_i = 1}` in `R^dim`.
    Simplex {
        dim: usize,
    },
}

impl<S: Scalar> ConvexSet<S> {
    pub fn whole_space() -> Self {
        ConvexSet::WholeSpace
    }

    pub fn new_box(lo: Vector<S>, hi: Vector<S>) -> Result<Self> {
        check_dim(lo.dim(), hi.dim())?;
        if let Some(i) = (0..lo.dim()).find(|&i| lo[i] > hi[i]) {
            return Err(Error::spec(format!(
                "box bound lo[{i}] = {} exceeds hi[{i}] = {}",
                lo[i], hi[i]
            )));
        }
        Ok(ConvexSet::Box { lo, hi })
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: S, hi: S) -> Result<Self> {
        Self::new_box(Vector::filled(dim, lo)?, Vector::filled(dim, hi)?)
    }

    pub fn new_ball(center: Vector<S>, radius: S) -> Result<Self> {
        if !(radius > S::zero()) || !radius.is_finite() {
            return Err(Error::spec("ball radius must be finite and positive"));
        }
        Ok(ConvexSet::Ball { center, radius })
    }

    pub fn new_halfspace(a: Vector<S>, b: S) -> Result<Self> {
        if a.norm() == S::zero() {
            return Err(Error::spec("halfspace normal must be nonzero"));
        }
        if !b.is_finite() {
            return Err(Error::NonFinite {
                context: "halfspace offset",
            });
        }
        Ok(ConvexSet::Halfspace { a, b })
    }

    pub fn new_simplex(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::spec("simplex dimension must be at least 1"));
        }
        Ok(ConvexSet::Simplex { dim })
    }

    /// Ambient dimension, or `None` for the whole space.
    pub fn dim(&self) -> Option<usize> {
        match self {
            ConvexSet::WholeSpace => None,
            ConvexSet::Box { lo, .. } => Some(lo.dim()),
            ConvexSet::Ball { center, .. } => Some(center.dim()),
            ConvexSet::Halfspace { a, .. } => Some(a.dim()),
            ConvexSet::Simplex { dim } => Some(*dim),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ConvexSet::WholeSpace => "whole_space",
            ConvexSet::Box { .. } => "box",
            ConvexSet::Ball { .. } => "ball",
            ConvexSet::Halfspace { .. } => "halfspace",
            ConvexSet::Simplex { .. } => "simplex",
        }
    }

    fn check(&self, x: &Vector<S>) -> Result<()> {
        match self.dim() {
            Some(d) => check_dim(d, x.dim()),
            None => Ok(()),
        }
    }

    /// Metric projection `P_C x`, the unique nearest point of the set.
    pub fn project(&self, x: &Vector<S>) -> Result<Vector<S>> {
        self.check(x)?;
        match self {
            ConvexSet::WholeSpace => Ok(x.clone()),
            ConvexSet::Box { lo, hi } => {
                let clamped: Vec<S> = (0..x.dim()).map(|i| x[i].max(lo[i]).min(hi[i])).collect();
                Vector::new(clamped)
            }
            ConvexSet::Ball { center, radius } => {
                let offset = x.sub(center)?;
                let dist = offset.norm();
                if dist <= *radius {
                    Ok(x.clone())
                } else {
                    center.axpy(*radius / dist, &offset)
                }
            }
            ConvexSet::Halfspace { a, b } => {
                let excess = inner(a, x)? - *b;
                if excess <= S::zero() {
                    Ok(x.clone())
                } else {
                    x.axpy(-excess / a.norm_squared(), a)
                }
            }
            ConvexSet::Simplex { .. } => Ok(project_simplex(x)),
        }
    }

    /// True iff `x` violates no defining constraint by more than `eps`.
    pub fn contains(&self, x: &Vector<S>, eps: S) -> Result<bool> {
        if eps < S::zero() {
            return Err(Error::contract("membership slack must be nonnegative"));
        }
        self.check(x)?;
        Ok(match self {
            ConvexSet::WholeSpace => true,
            ConvexSet::Box { lo, hi } => (0..x.dim()).all(|i| x[i] >= lo[i] - eps && x[i] <= hi[i] + eps),
            ConvexSet::Ball { center, radius } => x.distance(center)? <= *radius + eps,
            ConvexSet::Halfspace { a, b } => inner(a, x)? - *b <= eps,
            ConvexSet::Simplex { .. } => {
                let sum: S = x.iter().copied().sum();
                x.iter().all(|&c| c >= -eps) && (sum - S::one()).abs() <= eps
            }
        })
    }

    /// A representative point of the set, used to centre sampling boxes.
    pub fn anchor(&self, dim: usize) -> Result<Vector<S>> {
        if let Some(d) = self.dim() {
            check_dim(d, dim)?;
        }
        match self {
            ConvexSet::WholeSpace => Ok(Vector::zeros(dim)),
            ConvexSet::Box { lo, hi } => lo.zip_map(hi, |l, h| (l + h) * S::half()),
            ConvexSet::Ball { center, .. } => Ok(center.clone()),
            ConvexSet::Halfspace { a, b } => a.scale(*b / a.norm_squared()),
            ConvexSet::Simplex { dim } => Vector::filled(*dim, S::one() / S::count(*dim)),
        }
    }

    /// Rough radius of the region where the set's geometry is interesting.
    pub fn extent(&self) -> S {
        match self {
            ConvexSet::Box { lo, hi } => {
                let half_width = (0..lo.dim()).fold(S::zero(), |m, i| m.max((hi[i] - lo[i]) * S::half()));
                half_width.max(S::one())
            }
            ConvexSet::Ball { radius, .. } => radius.max(S::one()),
            _ => S::one(),
        }
    }

    /// Draws a point of the set.
    ///
    /// Box and simplex are sampled directly, the ball via a uniform radius
    /// law, halfspace and whole space by a Gaussian around `around` pushed
    /// through the projection.
    pub fn sample_point(&self, rng: &mut impl Rng, dim: usize, around: &Vector<S>, spread: S) -> Result<Vector<S>> {
        if let Some(d) = self.dim() {
            check_dim(d, dim)?;
        }
        check_dim(dim, around.dim())?;
        match self {
            ConvexSet::Box { lo, hi } => {
                let comps = (0..dim)
                    .map(|i| lo[i] + (hi[i] - lo[i]) * uniform_unit::<S>(rng))
                    .collect();
                Vector::new(comps)
            }
            ConvexSet::Ball { center, radius } => {
                let dir = gaussian_vector::<S>(rng, dim);
                let n = dir.norm();
                if n == S::zero() {
                    return Ok(center.clone());
                }
                let u: S = uniform_unit(rng);
                let r = *radius * u.powf(S::one() / S::count(dim));
                // guard the boundary against rounding outward
                self.project(&center.axpy(r / n, &dir)?)
            }
            ConvexSet::Simplex { .. } => {
                let draws: Vec<S> = (0..dim)
                    .map(|_| {
                        let u: S = uniform_unit(rng);
                        -(S::one() - u).ln()
                    })
                    .collect();
                let total: S = draws.iter().copied().sum();
                if total == S::zero() {
                    return self.anchor(dim);
                }
                Vector::new(draws.into_iter().map(|d| d / total).collect())
            }
            ConvexSet::WholeSpace | ConvexSet::Halfspace { .. } => {
                let g = gaussian_vector::<S>(rng, dim);
                self.project(&around.axpy(spread, &g)?)
            }
        }
    }
}

/// Euclidean projection onto the probability simplex by sorting and
/// thresholding: find `tau` with `sum max(x_i - tau, 0) = 1`.
fn project_simplex<S: Scalar>(x: &Vector<S>) -> Vector<S> {
    let d = x.dim();
    let sum: S = x.iter().copied().sum();
    if x.iter().all(|&c| c >= S::zero()) && (sum - S::one()).abs() <= S::epsilon() * S::count(d) {
        return x.clone();
    }
    let mut sorted: Vec<S> = x.as_slice().to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite components"));
    let mut running = S::zero();
    let mut tau = S::zero();
    for (j, &u) in sorted.iter().enumerate() {
        running = running + u;
        let candidate = (running - S::one()) / S::count(j + 1);
        if u - candidate > S::zero() {
            tau = candidate;
        }
    }
    Vector::new(x.iter().map(|&c| (c - tau).max(S::zero())).collect()).expect("finite projection")
}

pub const AUDIT_NONEXPANSIVE: &str = "(i) nonexpansive";
pub const AUDIT_PYTHAGOREAN: &str = "(ii) obtuse-angle distance";
pub const AUDIT_VARIATIONAL: &str = "(iii) variational inequality";

/// Samples the three projection properties:
/// (i) `||Px - Py|| <= ||x - y||` for `x, y` anywhere,
/// (ii) `||x - y||^2 >= ||x - Px||^2 + ||y - Px||^2` for `y` in the set,
/// (iii) `<x - Px, y - Px> <= 0` for `y` in the set.
///
/// Violations are compared in squared form and normalized by
/// `1 + max ||v||^2` over the sampled points; the audit passes when every
/// normalized violation is at most `tol.eps_invariant`.
pub fn audit_projection<S: Scalar>(
    set: &ConvexSet<S>,
    dim: usize,
    sample_count: usize,
    rng_seed: u64,
    tol: &Tolerance<S>,
) -> Result<AuditSuite<S>> {
    if sample_count == 0 {
        return Err(Error::contract("audit needs at least one sample"));
    }
    let mut rng = sampling::rng(rng_seed);
    let anchor = set.anchor(dim)?;
    let spread = S::lit(3.0) * (S::one() + set.extent());
    let mut nonexp = Tracker::new(AUDIT_NONEXPANSIVE);
    let mut pyth = Tracker::new(AUDIT_PYTHAGOREAN);
    let mut vari = Tracker::new(AUDIT_VARIATIONAL);
    for _ in 0..sample_count {
        let x = uniform_in_cube(&mut rng, &anchor, spread);
        let x2 = uniform_in_cube(&mut rng, &anchor, spread);
        let y = set.sample_point(&mut rng, dim, &anchor, spread)?;
        let px = set.project(&x)?;
        let px2 = set.project(&x2)?;

        let scale = quadratic_scale(&[&x, &x2, &px, &px2]);
        let v1 = px.sub(&px2)?.norm_squared() - x.sub(&x2)?.norm_squared();
        nonexp.observe(v1 / scale, &x, &x2);

        let scale = quadratic_scale(&[&x, &y, &px]);
        let v2 = x.sub(&px)?.norm_squared() + y.sub(&px)?.norm_squared() - x.sub(&y)?.norm_squared();
        pyth.observe(v2 / scale, &x, &y);
        let v3 = inner(&x.sub(&px)?, &y.sub(&px)?)?;
        vari.observe(v3 / scale, &x, &y);
    }
    Ok(AuditSuite {
        subject: format!("projection onto {}", set.kind_name()),
        reports: vec![
            nonexp.finish(tol.eps_invariant),
            pyth.finish(tol.eps_invariant),
            vari.finish(tol.eps_invariant),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector<f64> {
        Vector::from_f64(xs).unwrap()
    }

    fn all_sets() -> Vec<(ConvexSet<f64>, usize)> {
        vec![
            (ConvexSet::WholeSpace, 3),
            (
                ConvexSet::new_box(v(&[0.0, -1.0, 2.0]), v(&[1.0, 1.0, 2.5])).unwrap(),
                3,
            ),
            (ConvexSet::new_ball(v(&[1.0, -2.0, 0.5]), 1.5).unwrap(), 3),
            (ConvexSet::new_halfspace(v(&[1.0, 2.0, -1.0]), 0.7).unwrap(), 3),
            (ConvexSet::new_simplex(4).unwrap(), 4),
        ]
    }

    #[test]
    fn projection_examples() {
        let unit_box = ConvexSet::cube(2, 0.0, 1.0).unwrap();
        assert_eq!(unit_box.project(&v(&[2.0, -1.0])).unwrap(), v(&[1.0, 0.0]));
        let ball = ConvexSet::new_ball(v(&[0.0, 0.0]), 1.0).unwrap();
        let p = ball.project(&v(&[3.0, 4.0])).unwrap();
        assert!(p.distance(&v(&[0.6, 0.8])).unwrap() < 1e-15);
        let simplex = ConvexSet::new_simplex(2).unwrap();
        assert_eq!(simplex.project(&v(&[1.0, 1.0])).unwrap(), v(&[0.5, 0.5]));
        let half = ConvexSet::new_halfspace(v(&[1.0, 0.0]), 0.0).unwrap();
        assert_eq!(half.project(&v(&[2.0, 3.0])).unwrap(), v(&[0.0, 3.0]));
    }

    #[test]
    fn simplex_projection_with_clipping() {
        let simplex = ConvexSet::new_simplex(3).unwrap();
        let p = simplex.project(&v(&[1.0, 0.2, -0.5])).unwrap();
        assert!(p.distance(&v(&[0.9, 0.1, 0.0])).unwrap() < 1e-15);
    }

    #[test]
    fn contains_examples() {
        let unit_box = ConvexSet::cube(2, 0.0, 1.0).unwrap();
        assert!(unit_box.contains(&v(&[0.5, 0.5]), 0.0).unwrap());
        let ball = ConvexSet::new_ball(v(&[0.0, 0.0]), 1.0).unwrap();
        assert!(!ball.contains(&v(&[1.0 + 1e-6, 0.0]), 1e-9).unwrap());
        let simplex = ConvexSet::new_simplex(2).unwrap();
        assert!(simplex.contains(&v(&[0.5, 0.5]), 0.0).unwrap());
        assert!(unit_box.contains(&v(&[0.5]), 0.0).is_err());
        assert!(unit_box.contains(&v(&[0.5, 0.5]), -1.0).is_err());
    }

    #[test]
    fn invalid_sets_are_rejected() {
        assert!(ConvexSet::new_box(v(&[1.0, 0.0]), v(&[0.0, 1.0])).is_err());
        assert!(ConvexSet::new_ball(v(&[0.0]), 0.0).is_err());
        assert!(ConvexSet::new_halfspace(v(&[0.0, 0.0]), 1.0).is_err());
        assert!(ConvexSet::<f64>::new_simplex(0).is_err());
    }

    #[test]
    fn projection_dimension_mismatch() {
        let ball = ConvexSet::new_ball(v(&[0.0, 0.0]), 1.0).unwrap();
        assert!(ball.project(&v(&[1.0, 2.0, 3.0])).is_err());
    }

    #[test]
    fn projection_is_idempotent_and_fixes_members() {
        let tol = Tolerance::<f64>::default();
        for (set, dim) in all_sets() {
            let mut rng = sampling::rng(7);
            let anchor = set.anchor(dim).unwrap();
            for _ in 0..10_000 {
                let x = uniform_in_cube(&mut rng, &anchor, 6.0);
                let p = set.project(&x).unwrap();
                assert!(set.contains(&p, tol.eps_feasibility).unwrap(), "{set:?} {x:?}");
                let pp = set.project(&p).unwrap();
                assert!(
                    pp.distance(&p).unwrap() <= tol.eps_invariant * (1.0 + p.norm()),
                    "{set:?}"
                );
                let y = set.sample_point(&mut rng, dim, &anchor, 2.0).unwrap();
                if set.contains(&y, 0.0).unwrap() {
                    assert!(set.project(&y).unwrap().distance(&y).unwrap() <= 1e-15 * (1.0 + y.norm()));
                }
            }
        }
    }

    #[test]
    fn sampled_points_are_members() {
        for (set, dim) in all_sets() {
            let mut rng = sampling::rng(3);
            let anchor = set.anchor(dim).unwrap();
            for _ in 0..1000 {
                let y = set.sample_point(&mut rng, dim, &anchor, 2.0).unwrap();
                assert!(set.contains(&y, 1e-12).unwrap(), "{set:?} {y:?}");
            }
        }
    }

    #[test]
    fn audit_passes_every_variant() {
        let tol = Tolerance::<f64>::default();
        for (set, dim) in all_sets() {
            let suite = audit_projection(&set, dim, 10_000, 11, &tol).unwrap();
            assert!(suite.passed(), "{suite}");
        }
    }

    #[test]
    fn audit_on_whole_space_has_exact_zero_variational_term() {
        let suite = audit_projection(&ConvexSet::<f64>::WholeSpace, 2, 500, 1, &Tolerance::default()).unwrap();
        assert_eq!(suite.report(AUDIT_VARIATIONAL).unwrap().max_violation, 0.0);
    }

    #[test]
    fn variational_property_by_hand() {
        let unit_box = ConvexSet::cube(2, 0.0, 1.0).unwrap();
        let x = v(&[2.0, -1.0]);
        let y = v(&[0.0, 0.0]);
        let px = unit_box.project(&x).unwrap();
        let value = inner(&x.sub(&px).unwrap(), &y.sub(&px).unwrap()).unwrap();
        assert_eq!(value, -1.0);
    }

    #[test]
    fn audit_requires_samples() {
        assert!(audit_projection(&ConvexSet::<f64>::WholeSpace, 2, 0, 1, &Tolerance::default()).is_err());
    }
}
