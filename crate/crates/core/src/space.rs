//! Finite-dimensional real Hilbert space primitives.
//!
//! The space is `R^d` with the standard dot product. A [`Vector`] is an
//! immutable, finite point; every operation that builds a new vector
//! re-checks finiteness so an overflow anywhere in a scheme surfaces as
//! [`Error::NonFinite`] instead of silently propagating NaN.

use std::fmt;
use std::ops::Index;

use crate::error::{check_dim, Error, Result};
use crate::scalar::Scalar;

/// Point of `R^d`, `d >= 1`, with every component finite.
#[derive(Clone, PartialEq)]
pub struct Vector<S> {
    components: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn new(components: Vec<S>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::spec("vector dimension must be at least 1"));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                context: "vector construction",
            });
        }
        Ok(Self { components })
    }

    /// Builds a vector from `f64` literals, converting to `S`.
    pub fn from_f64(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| S::lit(v)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vector dimension must be at least 1");
        Self {
            components: vec![S::zero(); dim],
        }
    }

    pub fn filled(dim: usize, value: S) -> Result<Self> {
        Self::new(vec![value; dim])
    }

    /// Standard basis vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.components[i] = S::one();
        v
    }

    pub(crate) fn from_raw(components: Vec<S>, context: &'static str) -> Result<Self> {
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { context });
        }
        Ok(Self { components })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[S] {
        &self.components
    }

    pub fn iter(&self) -> impl Iterator<Item = &S> + '_ {
        self.components.iter()
    }

    pub fn into_vec(self) -> Vec<S> {
        self.components
    }

    pub fn map(&self, f: impl FnMut(S) -> S) -> Result<Self> {
        Self::from_raw(self.components.iter().copied().map(f).collect(), "componentwise map")
    }

    pub fn zip_map(&self, other: &Self, mut f: impl FnMut(S, S) -> S) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Self::from_raw(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            "componentwise map",
        )
    }

    pub fn inner(&self, other: &Self) -> Result<S> {
        inner(self, other)
    }

    pub fn norm(&self) -> S {
        norm(self)
    }

    pub fn norm_squared(&self) -> S {
        self.components.iter().map(|&c| c * c).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: S) -> Result<Self> {
        self.map(|c| c * factor)
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: S, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a + factor * b)
    }

    /// `||self - other||`.
    pub fn distance(&self, other: &Self) -> Result<S> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<S>()
            .sqrt())
    }

    pub fn max_abs(&self) -> S {
        self.components.iter().fold(S::zero(), |m, &c| m.max(c.abs()))
    }

    /// Converts every component to another scalar type.
    pub fn cast<T: Scalar>(&self) -> Result<Vector<T>> {
        Vector::new(self.components.iter().map(|c| T::lit(c.as_f64())).collect())
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;

    fn index(&self, i: usize) -> &S {
        &self.components[i]
    }
}

impl<S: fmt::Debug> fmt::Debug for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}

impl<S: fmt::Display> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// `sum_i u_i v_i`.
pub fn inner<S: Scalar>(u: &Vector<S>, v: &Vector<S>) -> Result<S> {
    check_dim(u.dim(), v.dim())?;
    Ok(u.components.iter().zip(&v.components).map(|(&a, &b)| a * b).sum())
}

pub fn norm<S: Scalar>(u: &Vector<S>) -> S {
    u.norm_squared().sqrt()
}

/// `a*u + b*v`, componentwise.
pub fn combine<S: Scalar>(a: S, u: &Vector<S>, b: S, v: &Vector<S>) -> Result<Vector<S>> {
    u.zip_map(v, |x, y| a * x + b * y)
}

/// Slack policy shared by invariant checks, stopping rules and audits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<S> {
    /// Additive slack for proof-inequality checks.
    pub eps_invariant: S,
    /// Stopping threshold on residuals.
    pub eps_residual: S,
    /// Slack for operator-class audits and VI certificates.
    pub eps_certificate: S,
    /// Set-membership slack.
    pub eps_feasibility: S,
}

impl<S: Scalar> Tolerance<S> {
    pub fn new(eps_invariant: S, eps_residual: S, eps_certificate: S, eps_feasibility: S) -> Result<Self> {
        let all = [eps_invariant, eps_residual, eps_certificate, eps_feasibility];
        if all.iter().any(|e| !(*e > S::zero()) || !e.is_finite()) {
            return Err(Error::spec("tolerances must be finite and strictly positive"));
        }
        Ok(Self {
            eps_invariant,
            eps_residual,
            eps_certificate,
            eps_feasibility,
        })
    }
}

impl<S: Scalar> Default for Tolerance<S> {
    fn default() -> Self {
        // f32 cannot resolve 1e-10 relative slack; fall back to a few ulps.
        let floor = S::epsilon() * S::lit(16.0);
        Self {
            eps_invariant: S::lit(1e-10).max(floor),
            eps_residual: S::lit(1e-8).max(floor),
            eps_certificate: S::lit(1e-8).max(floor),
            eps_feasibility: S::lit(1e-9).max(floor),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[f64]) -> Vector<f64> {
        Vector::from_f64(xs).unwrap()
    }

    #[test]
    fn inner_examples() {
        assert_eq!(inner(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), 0.0);
        assert_eq!(inner(&v(&[1.0, 2.0]), &v(&[3.0, 4.0])).unwrap(), 11.0);
        let u = v(&[3.0, 4.0]);
        assert_eq!(inner(&u, &u).unwrap(), 25.0);
    }

    #[test]
    fn inner_dimension_mismatch() {
        let err = inner(&v(&[1.0, 2.0]), &v(&[1.0])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 1 });
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&v(&[3.0, 4.0])), 5.0);
        assert_eq!(norm(&v(&[0.0, 0.0, 0.0])), 0.0);
        assert_eq!(norm(&v(&[3.0, 4.0]).scale(2.0).unwrap()), 10.0);
    }

    #[test]
    fn combine_examples() {
        assert_eq!(
            combine(0.5, &v(&[2.0, 0.0]), 0.5, &v(&[0.0, 2.0])).unwrap(),
            v(&[1.0, 1.0])
        );
        let u = v(&[0.3, -7.0]);
        assert_eq!(combine(1.0, &u, 0.0, &v(&[9.0, 9.0])).unwrap(), u);
        assert_eq!(
            combine(0.25, &v(&[4.0, 8.0]), 0.75, &v(&[0.0, 0.0])).unwrap(),
            v(&[1.0, 2.0])
        );
        assert!(combine(1.0, &u, 1.0, &v(&[1.0])).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Vector::<f64>::new(vec![1.0, f64::NAN]).is_err());
        assert!(Vector::<f64>::new(vec![f64::INFINITY]).is_err());
        assert!(Vector::<f64>::new(vec![]).is_err());
        let big = v(&[f64::MAX]);
        assert!(matches!(big.add(&big), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn combine_same_vector_is_exact() {
        let u = v(&[0.1, -3.7, 1e-300, 12345.678]);
        for a in [0.0, 0.25, 0.5, 1.0] {
            assert_eq!(combine(a, &u, 1.0 - a, &u).unwrap(), u);
        }
    }

    #[test]
    fn f32_vectors_work() {
        let u = Vector::<f32>::from_f64(&[3.0, 4.0]).unwrap();
        assert_eq!(u.norm(), 5.0f32);
    }

    #[test]
    fn tolerance_rejects_nonpositive() {
        assert!(Tolerance::new(0.0, 1e-8, 1e-8, 1e-9).is_err());
        let t = Tolerance::<f64>::default();
        assert!(t.eps_invariant <= 1e-9);
    }

    fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..8).prop_flat_map(|d| {
            (
                proptest::collection::vec(-1e3..1e3f64, d),
                proptest::collection::vec(-1e3..1e3f64, d),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn cauchy_schwarz((a, b) in pair()) {
            let (u, w) = (v(&a), v(&b));
            let eps = Tolerance::<f64>::default().eps_invariant;
            let lhs = inner(&u, &w).unwrap().abs();
            let rhs = norm(&u) * norm(&w);
            prop_assert!(lhs <= rhs + eps * (1.0 + rhs));
        }

        #[test]
        fn parallelogram_law((a, b) in pair()) {
            let (u, w) = (v(&a), v(&b));
            let eps = Tolerance::<f64>::default().eps_invariant;
            let lhs = u.add(&w).unwrap().norm_squared() + u.sub(&w).unwrap().norm_squared();
            let rhs = 2.0 * u.norm_squared() + 2.0 * w.norm_squared();
            prop_assert!((lhs - rhs).abs() <= eps * (1.0 + u.norm_squared() + w.norm_squared()));
        }

        #[test]
        fn inner_is_symmetric((a, b) in pair()) {
            let (u, w) = (v(&a), v(&b));
            prop_assert_eq!(inner(&u, &w).unwrap(), inner(&w, &u).unwrap());
        }
    }
}
