//! Small dense square matrices for the affine operator families.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::sampling::gaussian_vector;
use crate::scalar::Scalar;
use crate::space::Vector;

/// Row-major `d x d` matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::spec("matrix must have at least one row"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::spec(format!(
                    "matrix must be square: row of length {} in a {dim}-row matrix",
                    row.len()
                )));
            }
            data.extend(row);
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "matrix construction",
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_f64_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| S::lit(v)).collect()).collect())
    }

    pub fn diagonal(diag: &[S]) -> Result<Self> {
        let dim = diag.len();
        let mut rows = vec![vec![S::zero(); dim]; dim];
        for (i, &d) in diag.iter().enumerate() {
            rows[i][i] = d;
        }
        Self::from_rows(rows)
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![S::one(); dim]).expect("identity is well formed")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> + '_ {
        self.data.chunks(self.dim)
    }

    pub fn mul_vec(&self, x: &Vector<S>) -> Result<Vector<S>> {
        check_dim(self.dim, x.dim())?;
        let out = self
            .rows()
            .map(|row| row.iter().zip(x.iter()).map(|(&a, &b)| a * b).sum())
            .collect();
        Vector::from_raw(out, "matrix-vector product")
    }

    pub fn is_symmetric(&self, tol: S) -> bool {
        (0..self.dim).all(|i| {
            (0..i).all(|j| {
                let (a, b) = (self.get(i, j), self.get(j, i));
                (a - b).abs() <= tol * (S::one() + a.abs().max(b.abs()))
            })
        })
    }

    /// `I + r*self`.
    pub fn shifted_identity(&self, r: S) -> Self {
        let mut data: Vec<S> = self.data.iter().map(|&v| r * v).collect();
        for i in 0..self.dim {
            data[i * self.dim + i] = data[i * self.dim + i] + S::one();
        }
        Self { dim: self.dim, data }
    }

    /// `shift*I - self`.
    fn reflected(&self, shift: S) -> Self {
        let mut data: Vec<S> = self.data.iter().map(|&v| -v).collect();
        for i in 0..self.dim {
            data[i * self.dim + i] = data[i * self.dim + i] + shift;
        }
        Self { dim: self.dim, data }
    }

    /// Solves `self * y = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &Vector<S>) -> Result<Vector<S>> {
        check_dim(self.dim, b.dim())?;
        let n = self.dim;
        let mut a = self.data.clone();
        let mut rhs: Vec<S> = b.as_slice().to_vec();
        let scale = a.iter().fold(S::zero(), |m, v| m.max(v.abs()));
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].abs().partial_cmp(&a[j * n + col].abs()).unwrap())
                .unwrap();
            if a[pivot * n + col].abs() <= S::epsilon() * scale {
                return Err(Error::contract("singular linear system"));
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                rhs.swap(col, pivot);
            }
            let p = a[col * n + col];
            for row in col + 1..n {
                let f = a[row * n + col] / p;
                if f == S::zero() {
                    continue;
                }
                for k in col..n {
                    a[row * n + k] = a[row * n + k] - f * a[col * n + k];
                }
                rhs[row] = rhs[row] - f * rhs[col];
            }
        }
        let mut y = vec![S::zero(); n];
        for row in (0..n).rev() {
            let tail: S = (row + 1..n).map(|k| a[row * n + k] * y[k]).sum();
            y[row] = (rhs[row] - tail) / a[row * n + row];
        }
        Vector::from_raw(y, "linear solve")
    }

    /// Largest eigenvalue of a symmetric positive semidefinite matrix by
    /// power iteration, stopped once the Rayleigh quotient changes by less
    /// than `rel_tol` relative to its magnitude.
    pub fn lambda_max_psd(&self, rel_tol: S) -> Result<S> {
        if !self.is_symmetric(S::lit(1e-12)) {
            return Err(Error::spec("power iteration requires a symmetric matrix"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
        let mut v = gaussian_vector::<S>(&mut rng, self.dim);
        let n0 = v.norm();
        v = v.scale(S::one() / n0)?;
        let mut estimate = S::zero();
        for _ in 0..1_000_000 {
            let w = self.mul_vec(&v)?;
            let next = v.inner(&w)?;
            let wn = w.norm();
            if wn == S::zero() {
                return Ok(S::zero());
            }
            v = w.scale(S::one() / wn)?;
            if (next - estimate).abs() <= rel_tol * next.abs() {
                return Ok(next);
            }
            estimate = next;
        }
        Err(Error::contract("power iteration did not converge"))
    }

    /// Smallest eigenvalue of a symmetric matrix via power iteration on
    /// `lambda_max(|M|) I - M`.
    pub fn lambda_min_symmetric(&self, rel_tol: S) -> Result<S> {
        // Gershgorin bound keeps the shifted matrix PSD.
        let shift = self
            .rows()
            .map(|r| r.iter().fold(S::zero(), |s, v| s + v.abs()))
            .fold(S::zero(), S::max);
        let top = self.reflected(shift).lambda_max_psd(rel_tol)?;
        Ok(shift - top)
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.dim)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_recovers_known_solution() {
        let m = Matrix::<f64>::from_f64_rows(&[&[0.0, 2.0, 1.0], &[1.0, 1.0, 0.0], &[3.0, 0.0, 1.0]]).unwrap();
        let x = Vector::from_f64(&[1.0, -2.0, 0.5]).unwrap();
        let b = m.mul_vec(&x).unwrap();
        let y = m.solve(&b).unwrap();
        assert!(y.distance(&x).unwrap() < 1e-14);
    }

    #[test]
    fn singular_solve_is_an_error() {
        let m = Matrix::<f64>::from_f64_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(m.solve(&Vector::from_f64(&[1.0, 1.0]).unwrap()).is_err());
    }

    #[test]
    fn eigenvalue_extremes() {
        let m = Matrix::<f64>::from_f64_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        assert!((m.lambda_max_psd(1e-12).unwrap() - 3.0).abs() < 1e-9);
        assert!((m.lambda_min_symmetric(1e-12).unwrap() - 1.0).abs() < 1e-8);
        let d = Matrix::<f64>::diagonal(&[1.0, 2.0]).unwrap();
        assert!((d.lambda_max_psd(1e-10).unwrap() - 2.0).abs() < 1e-8);
        let z = Matrix::<f64>::diagonal(&[0.0, 0.0]).unwrap();
        assert_eq!(z.lambda_max_psd(1e-10).unwrap(), 0.0);
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(Matrix::<f64>::from_rows(vec![vec![1.0, 2.0], vec![1.0]]).is_err());
    }
}
