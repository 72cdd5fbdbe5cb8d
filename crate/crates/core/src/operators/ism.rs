use crate::audit::{quadratic_scale, AuditSuite, Tracker};
use crate::error::{check_dim, Error, Result};
use crate::matrix::Matrix;
use crate::sampling::{self, uniform_in_cube};
use crate::scalar::Scalar;
use crate::space::{inner, Tolerance, Vector};

use super::{Mapping, StrictPseudocontraction, AUDIT_SPREAD};

#[derive(Debug, Clone, PartialEq)]
pub enum IsmKind<S> {
    Zero,
    /// `A(x) = x - target`.
    ShiftResidual {
        target: Vector<S>,
    },
    /// `A(x) = M x + q` with `M` symmetric positive semidefinite.
    AffineGradient {
        matrix: Matrix<S>,
        offset: Vector<S>,
    },
    /// `A = I - S`.
    FromPseudocontraction(Box<StrictPseudocontraction<S>>),
    /// Quarter-turn in each coordinate plane: monotone, never inverse
    /// strongly monotone. Present so audits have something to refute.
    Rotation90,
}

/// Operator `A` with a claimed inverse-strong-monotonicity constant:
/// `<Ax - Ay, x - y> >= alpha ||Ax - Ay||^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsmOperator<S> {
    pub kind: IsmKind<S>,
    pub alpha: S,
}

/// Relative tolerance for the power iteration behind the default constant
/// of [`IsmKind::AffineGradient`].
const POWER_ITERATION_TOL: f64 = 1e-10;

impl<S: Scalar> IsmOperator<S> {
    pub fn new(kind: IsmKind<S>, alpha: S) -> Result<Self> {
        check_alpha(alpha)?;
        validate_kind(&kind)?;
        Ok(Self { kind, alpha })
    }

    /// Builds the operator with its library-computed constant: `1` for the
    /// zero map and shifts, `1/lambda_max(M)` for affine gradients,
    /// `(1 - k)/2` for `I - S`. The quarter-turn has no valid constant.
    pub fn with_default_alpha(kind: IsmKind<S>) -> Result<Self> {
        validate_kind(&kind)?;
        let alpha = default_alpha(&kind)?;
        Ok(Self { kind, alpha })
    }

    pub fn zero() -> Self {
        Self {
            kind: IsmKind::Zero,
            alpha: S::one(),
        }
    }

    pub fn shift_residual(target: Vector<S>) -> Self {
        Self {
            kind: IsmKind::ShiftResidual { target },
            alpha: S::one(),
        }
    }

    pub fn affine_gradient(matrix: Matrix<S>, offset: Vector<S>) -> Result<Self> {
        Self::with_default_alpha(IsmKind::AffineGradient { matrix, offset })
    }

    /// `A = I - S`, `(1 - k)/2`-inverse strongly monotone.
    pub fn from_pseudocontraction(s: StrictPseudocontraction<S>) -> Self {
        let alpha = (S::one() - s.k) * S::half();
        Self {
            kind: IsmKind::FromPseudocontraction(Box::new(s)),
            alpha,
        }
    }

    pub fn rotation90(alpha: S) -> Result<Self> {
        Self::new(IsmKind::Rotation90, alpha)
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            IsmKind::Zero => "zero",
            IsmKind::ShiftResidual { .. } => "shift_residual",
            IsmKind::AffineGradient { .. } => "affine_gradient",
            IsmKind::FromPseudocontraction(_) => "from_pseudocontraction",
            IsmKind::Rotation90 => "rotation90",
        }
    }

    /// Evaluates `A(x)`.
    pub fn apply_ism(&self, x: &Vector<S>) -> Result<Vector<S>> {
        match &self.kind {
            IsmKind::Zero => Ok(Vector::zeros(x.dim())),
            IsmKind::ShiftResidual { target } => x.sub(target),
            IsmKind::AffineGradient { matrix, offset } => matrix.mul_vec(x)?.add(offset),
            IsmKind::FromPseudocontraction(s) => x.sub(&s.apply_s(x)?),
            IsmKind::Rotation90 => {
                if !x.dim().is_multiple_of(2) {
                    return Err(Error::contract("quarter-turn operator needs an even dimension"));
                }
                let mut out = Vec::with_capacity(x.dim());
                for pair in x.as_slice().chunks(2) {
                    out.push(-pair[1]);
                    out.push(pair[0]);
                }
                Vector::new(out)
            }
        }
    }
}

impl<S: Scalar> Mapping<S> for IsmOperator<S> {
    fn apply(&self, x: &Vector<S>) -> Result<Vector<S>> {
        self.apply_ism(x)
    }
}

fn check_alpha<S: Scalar>(alpha: S) -> Result<()> {
    if alpha > S::zero() && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::spec(format!(
            "inverse strong monotonicity constant must be positive, got {alpha}"
        )))
    }
}

fn validate_kind<S: Scalar>(kind: &IsmKind<S>) -> Result<()> {
    if let IsmKind::AffineGradient { matrix, offset } = kind {
        check_dim(matrix.dim(), offset.dim())?;
        if !matrix.is_symmetric(S::lit(1e-12)) {
            return Err(Error::spec("affine gradient matrix must be symmetric"));
        }
        let lmin = matrix.lambda_min_symmetric(S::lit(1e-12))?;
        let scale = matrix.rows().flatten().fold(S::zero(), |a, v| a.max(v.abs()));
        if lmin < -S::lit(1e-9) * (S::one() + scale) {
            return Err(Error::spec(format!(
                "affine gradient matrix is not positive semidefinite (eigenvalue {lmin})"
            )));
        }
    }
    Ok(())
}

fn default_alpha<S: Scalar>(kind: &IsmKind<S>) -> Result<S> {
    match kind {
        IsmKind::Zero | IsmKind::ShiftResidual { .. } => Ok(S::one()),
        IsmKind::AffineGradient { matrix, .. } => {
            let top = matrix.lambda_max_psd(S::lit(POWER_ITERATION_TOL).max(S::epsilon()))?;
            if top <= S::zero() {
                return Err(Error::spec(
                    "affine gradient with a zero matrix has no finite default constant; supply alpha",
                ));
            }
            Ok(S::one() / top)
        }
        IsmKind::FromPseudocontraction(s) => Ok((S::one() - s.k) * S::half()),
        IsmKind::Rotation90 => Err(Error::spec("quarter-turn operator has no valid constant; supply alpha")),
    }
}

pub const AUDIT_ISM: &str = "inverse strongly monotone";
pub const AUDIT_MONOTONE: &str = "monotone";
pub const AUDIT_LIPSCHITZ: &str = "1/alpha-Lipschitz";

/// Samples the claimed constant and its two consequences on one stream of
/// pairs:
/// `<Ad, d> >= alpha ||Ad||^2`, `<Ad, d> >= 0` and
/// `||Ad||^2 <= ||d||^2 / alpha^2`, with `d = x - y`, `Ad = Ax - Ay`.
///
/// Violations are normalized by `1 + max(||d||^2, ||Ad||^2)`.
pub fn audit_ism<S: Scalar>(
    op: &IsmOperator<S>,
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
    let alpha = op.alpha;
    let mut ism = Tracker::new(AUDIT_ISM);
    let mut monotone = Tracker::new(AUDIT_MONOTONE);
    let mut lipschitz = Tracker::new(AUDIT_LIPSCHITZ);
    for _ in 0..sample_count {
        let x = uniform_in_cube(&mut rng, &origin, S::lit(AUDIT_SPREAD));
        let y = uniform_in_cube(&mut rng, &origin, S::lit(AUDIT_SPREAD));
        let d = x.sub(&y)?;
        let ad = op.apply_ism(&x)?.sub(&op.apply_ism(&y)?)?;
        let pairing = inner(&ad, &d)?;
        let scale = quadratic_scale(&[&d, &ad]);
        ism.observe((alpha * ad.norm_squared() - pairing) / scale, &x, &y);
        monotone.observe(-pairing / scale, &x, &y);
        lipschitz.observe((ad.norm_squared() - d.norm_squared() / (alpha * alpha)) / scale, &x, &y);
    }
    Ok(AuditSuite {
        subject: format!("operator {} (alpha = {})", op.kind_name(), alpha),
        reports: vec![
            ism.finish(tol.eps_certificate),
            monotone.finish(tol.eps_certificate),
            lipschitz.finish(tol.eps_certificate),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{NonexpansiveMap, PseudoKind};

    fn v(xs: &[f64]) -> Vector<f64> {
        Vector::from_f64(xs).unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(IsmOperator::zero().apply_ism(&v(&[5.0, -3.0])).unwrap(), v(&[0.0, 0.0]));
        let shift = IsmOperator::shift_residual(v(&[2.0, 0.5]));
        assert_eq!(shift.apply_ism(&v(&[0.0, 0.0])).unwrap(), v(&[-2.0, -0.5]));
        let affine = IsmOperator::affine_gradient(Matrix::diagonal(&[1.0, 2.0]).unwrap(), v(&[0.0, 0.0])).unwrap();
        assert_eq!(affine.apply_ism(&v(&[1.0, 1.0])).unwrap(), v(&[1.0, 2.0]));
        assert!((affine.alpha - 0.5).abs() < 1e-9);
        assert!(shift.apply_ism(&v(&[1.0])).is_err());
    }

    #[test]
    fn invalid_constants_and_matrices() {
        assert!(IsmOperator::new(IsmKind::<f64>::Zero, 0.0).is_err());
        assert!(IsmOperator::<f64>::with_default_alpha(IsmKind::Rotation90).is_err());
        let indefinite = Matrix::diagonal(&[1.0, -1.0]).unwrap();
        assert!(IsmOperator::affine_gradient(indefinite, v(&[0.0, 0.0])).is_err());
        let asym = Matrix::from_f64_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(IsmOperator::affine_gradient(asym, v(&[0.0, 0.0])).is_err());
        let zero = Matrix::diagonal(&[0.0, 0.0]).unwrap();
        assert!(IsmOperator::affine_gradient(zero.clone(), v(&[0.0, 0.0])).is_err());
        assert!(IsmOperator::new(
            IsmKind::AffineGradient {
                matrix: zero,
                offset: v(&[1.0, 1.0])
            },
            3.0
        )
        .is_ok());
    }

    #[test]
    fn operators_from_pseudocontractions() {
        let half_turn = NonexpansiveMap::rotation(std::f64::consts::PI).unwrap();
        let s = StrictPseudocontraction::new(PseudoKind::Nonexpansive(half_turn), 0.0).unwrap();
        let a = IsmOperator::from_pseudocontraction(s);
        assert_eq!(a.alpha, 0.5);
        let ax = a.apply_ism(&v(&[1.0, -2.0])).unwrap();
        assert!(ax.distance(&v(&[2.0, -4.0])).unwrap() < 1e-14);

        let s = StrictPseudocontraction::new(PseudoKind::ScaledNegation { s: 2.0f64 }, 1.0 / 3.0).unwrap();
        let a = IsmOperator::from_pseudocontraction(s);
        assert!((a.alpha - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(a.apply_ism(&v(&[1.0, 2.0])).unwrap(), v(&[3.0, 6.0]));

        let s = StrictPseudocontraction::new(PseudoKind::Nonexpansive(NonexpansiveMap::Identity), 0.0).unwrap();
        let a = IsmOperator::from_pseudocontraction(s);
        assert_eq!(a.alpha, 0.5);
        let suite = audit_ism(&a, 2, 500, 1, &Tolerance::default()).unwrap();
        assert!(suite.passed());
    }

    #[test]
    fn audit_examples() {
        let tol = Tolerance::<f64>::default();
        let shift = IsmOperator::shift_residual(v(&[7.0, -1.0, 0.25]));
        let suite = audit_ism(&shift, 3, 5000, 3, &tol).unwrap();
        assert!(suite.passed());
        assert!(suite.report(AUDIT_ISM).unwrap().max_violation.abs() < 1e-15);

        let m = Matrix::diagonal(&[1.0, 2.0]).unwrap();
        let good = IsmOperator::new(
            IsmKind::AffineGradient {
                matrix: m.clone(),
                offset: v(&[0.0, 0.0]),
            },
            0.5,
        )
        .unwrap();
        assert!(audit_ism(&good, 2, 5000, 3, &tol).unwrap().passed());
        let bad = IsmOperator::new(
            IsmKind::AffineGradient {
                matrix: m,
                offset: v(&[0.0, 0.0]),
            },
            0.9,
        )
        .unwrap();
        let suite = audit_ism(&bad, 2, 5000, 3, &tol).unwrap();
        let report = suite.report(AUDIT_ISM).unwrap();
        assert!(!report.passed);
        let (x, y) = report.worst_witness.clone().unwrap();
        let d = x.sub(&y).unwrap();
        assert!(d[1].abs() > 3.0 * d[0].abs(), "witness {d:?} should lie near e2");

        let rot = IsmOperator::rotation90(0.1).unwrap();
        let suite = audit_ism(&rot, 2, 5000, 3, &tol).unwrap();
        assert!(!suite.report(AUDIT_ISM).unwrap().passed);
        assert!(suite.report(AUDIT_MONOTONE).unwrap().passed);
    }
}
