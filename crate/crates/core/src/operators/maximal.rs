use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::sets::ConvexSet;
use crate::space::Vector;

use super::Mapping;

/// Maximal monotone operator `B`, represented through its resolvent.
#[derive(Debug, Clone, PartialEq)]
pub enum MaximalMonotone<S> {
    /// Normal cone `N_C`; its resolvent is the projection onto `C`.
    NormalCone(ConvexSet<S>),
    /// Componentwise subdifferential of `sum |x_i|`.
    AbsSubdifferential,
    /// `B(x) = M x` with `<Mx, x> >= 0`; `M` need not be symmetric.
    LinearMonotone(Matrix<S>),
}

impl<S: Scalar> MaximalMonotone<S> {
    /// Accepts `M` when its symmetric part is positive semidefinite, which
    /// is exactly `<Mx, x> >= 0` for all `x`.
    pub fn linear_monotone(m: Matrix<S>) -> Result<Self> {
        let d = m.dim();
        let sym_rows: Vec<Vec<S>> = (0..d)
            .map(|i| (0..d).map(|j| (m.get(i, j) + m.get(j, i)) * S::half()).collect())
            .collect();
        let sym = Matrix::from_rows(sym_rows)?;
        let lmin = sym.lambda_min_symmetric(S::lit(1e-12))?;
        let scale = m.rows().flatten().fold(S::zero(), |a, v| a.max(v.abs()));
        if lmin < -S::lit(1e-9) * (S::one() + scale) {
            return Err(Error::spec(format!(
                "linear operator is not monotone: symmetric part has eigenvalue {lmin}"
            )));
        }
        Ok(MaximalMonotone::LinearMonotone(m))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MaximalMonotone::NormalCone(_) => "normal_cone",
            MaximalMonotone::AbsSubdifferential => "abs_subdifferential",
            MaximalMonotone::LinearMonotone(_) => "linear_monotone",
        }
    }

    /// `J_r x = (I + r B)^{-1} x`: the unique `y` with `x in y + r B(y)`.
    pub fn resolvent(&self, r: S, x: &Vector<S>) -> Result<Vector<S>> {
        if !(r > S::zero()) || !r.is_finite() {
            return Err(Error::contract(format!("resolvent order must be positive, got {r}")));
        }
        match self {
            MaximalMonotone::NormalCone(set) => set.project(x),
            MaximalMonotone::AbsSubdifferential => x.map(|c| c.signum() * (c.abs() - r).max(S::zero())),
            MaximalMonotone::LinearMonotone(m) => m.shifted_identity(r).solve(x),
        }
    }
}

/// `J_r^B` bundled as a single-valued map.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolvent<S> {
    pub operator: MaximalMonotone<S>,
    pub r: S,
}

impl<S: Scalar> Resolvent<S> {
    pub fn new(operator: MaximalMonotone<S>, r: S) -> Result<Self> {
        if !(r > S::zero()) || !r.is_finite() {
            return Err(Error::contract(format!("resolvent order must be positive, got {r}")));
        }
        Ok(Self { operator, r })
    }
}

impl<S: Scalar> Mapping<S> for Resolvent<S> {
    fn apply(&self, x: &Vector<S>) -> Result<Vector<S>> {
        self.operator.resolvent(self.r, x)
    }
}
