//! Slow, simple reference solvers used to cross-check the schemes.

use thiserror::Error as ThisError;

use crate::diagnostics::residual_fixed_point;
use crate::error::{check_dim, Error, Result};
use crate::operators::{IsmOperator, NonexpansiveMap};
use crate::sampling::rng;
use crate::scalar::Scalar;
use crate::sets::ConvexSet;
use crate::space::{Tolerance, Vector};

pub const ORACLE_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum OracleError<S: Scalar> {
    #[error("iteration budget exhausted; best residual {residual:e} at {best}")]
    BudgetExhausted { best: Vector<S>, residual: S },
    #[error(transparent)]
    Spec(#[from] Error),
}

/// Projected fixed-point iteration `x <- P_C(x - alpha A x)` with the
/// step equal to the ism constant, started from the set's anchor and run
/// until the natural residual is at most `tol`.
pub fn solve_vi_reference<S: Scalar>(
    set: &ConvexSet<S>,
    a: &IsmOperator<S>,
    dim: usize,
    tol: S,
) -> Result<Vector<S>, OracleError<S>> {
    if !(tol > S::zero()) {
        return Err(Error::spec("oracle tolerance must be positive").into());
    }
    let step = a.alpha;
    let mut x = set.project(&set.anchor(dim)?)?;
    let mut best = (x.clone(), S::infinity());
    for _ in 0..ORACLE_BUDGET {
        let next = set.project(&x.axpy(-step, &a.apply_ism(&x)?)?)?;
        let residual = x.distance(&next)?;
        if residual <= tol {
            return Ok(x);
        }
        if residual < best.1 {
            best = (x, residual);
        }
        x = next;
    }
    Err(OracleError::BudgetExhausted {
        best: best.0,
        residual: best.1,
    })
}

/// Statistical check of `<A x*, y - x*> >= 0` for `y` in the set.
#[derive(Debug, Clone, PartialEq)]
pub struct VICertificate<S> {
    pub candidate: Vector<S>,
    /// Minimum of `<A x*, y - x*>` over every probed `y`.
    pub worst_violation: S,
    pub worst_point: Option<Vector<S>>,
    pub samples: usize,
    pub feasible: bool,
    pub passed: bool,
}

fn extreme_points<S: Scalar>(set: &ConvexSet<S>, x: &Vector<S>, g: &Vector<S>) -> Result<Vec<Vector<S>>> {
    let dim = x.dim();
    let mut points = Vec::new();
    match set {
        ConvexSet::Box { lo, hi } if dim <= 16 => {
            for mask in 0u32..(1 << dim) {
                let comps = (0..dim)
                    .map(|i| if mask & (1 << i) != 0 { hi[i] } else { lo[i] })
                    .collect();
                points.push(Vector::new(comps)?);
            }
        }
        ConvexSet::Simplex { .. } => points.extend((0..dim).map(|i| Vector::basis(dim, i))),
        ConvexSet::Ball { center, radius } => {
            let n = g.norm();
            if n > S::zero() {
                points.push(center.axpy(-*radius / n, g)?);
            }
        }
        _ => {}
    }
    for t in [1.0, 10.0, 100.0] {
        points.push(set.project(&x.axpy(-S::lit(t), g)?)?);
    }
    Ok(points)
}

/// Evaluates the variational inequality at `candidate` against
/// `sample_count` points drawn from the set plus its closed-form extreme
/// points. Passes when the candidate is feasible and the worst value is at
/// least `-tol.eps_certificate`.
pub fn verify_vi_certificate<S: Scalar>(
    set: &ConvexSet<S>,
    a: &IsmOperator<S>,
    candidate: &Vector<S>,
    sample_count: usize,
    seed: u64,
    tol: &Tolerance<S>,
) -> Result<VICertificate<S>> {
    if sample_count == 0 {
        return Err(Error::spec("certificate needs at least one sample"));
    }
    let dim = candidate.dim();
    if let Some(d) = set.dim() {
        check_dim(d, dim)?;
    }
    let g = a.apply_ism(candidate)?;
    let mut worst = S::infinity();
    let mut worst_point = None;
    let mut probe = |y: Vector<S>| -> Result<()> {
        let value = g.inner(&y.sub(candidate)?)?;
        if value < worst {
            worst = value;
            worst_point = Some(y);
        }
        Ok(())
    };
    let extremes = extreme_points(set, candidate, &g)?;
    let probed = extremes.len() + sample_count;
    for y in extremes {
        probe(y)?;
    }
    let mut r = rng(seed);
    let spread = S::lit(3.0) * set.extent();
    for _ in 0..sample_count {
        probe(set.sample_point(&mut r, dim, candidate, spread)?)?;
    }
    let feasible = set.contains(candidate, tol.eps_feasibility)?;
    Ok(VICertificate {
        candidate: candidate.clone(),
        worst_violation: worst,
        worst_point,
        samples: probed,
        feasible,
        passed: feasible && worst >= -tol.eps_certificate,
    })
}

/// Averaged iteration `x <- (x + T x) / 2` until `||x - T x|| <= tol`.
pub fn solve_fixed_point_reference<S: Scalar>(
    t_map: &NonexpansiveMap<S>,
    x0: &Vector<S>,
    tol: S,
) -> Result<Vector<S>, OracleError<S>> {
    if !(tol > S::zero()) {
        return Err(Error::spec("oracle tolerance must be positive").into());
    }
    let mut x = x0.clone();
    let mut best = (x.clone(), S::infinity());
    for _ in 0..ORACLE_BUDGET {
        let residual = residual_fixed_point(&x, t_map)?;
        if residual <= tol {
            return Ok(x);
        }
        if residual < best.1 {
            best = (x.clone(), residual);
        }
        x = x.add(&t_map.apply_t(&x)?)?.scale(S::half())?;
    }
    Err(OracleError::BudgetExhausted {
        best: best.0,
        residual: best.1,
    })
}
