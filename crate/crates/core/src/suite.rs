//! Ten small problems whose common solution `F(T) ∩ Ω` is a known point.

use crate::error::Result;
use crate::matrix::Matrix;
use crate::operators::{IsmOperator, NonexpansiveMap};
use crate::scalar::Scalar;
use crate::schemes::{Problem, Schedule};
use crate::sets::ConvexSet;
use crate::space::Vector;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteProblem<S> {
    pub name: &'static str,
    pub problem: Problem<S>,
    pub x0: Vector<S>,
    pub solution: Vector<S>,
}

impl<S: Scalar> SuiteProblem<S> {
    pub fn dim(&self) -> usize {
        self.x0.dim()
    }

    pub fn operator_a(&self) -> &IsmOperator<S> {
        self.problem.operator_a.as_ref().expect("suite problems configure A")
    }
}

fn v<S: Scalar>(xs: &[f64]) -> Result<Vector<S>> {
    Vector::from_f64(xs)
}

/// `q = -M z + shift`, so that `A z = M z + q = shift`.
fn affine<S: Scalar>(rows: &[&[f64]], z: &Vector<S>, shift: &Vector<S>) -> Result<IsmOperator<S>> {
    let m = Matrix::from_f64_rows(rows)?;
    let q = shift.sub(&m.mul_vec(z)?)?;
    IsmOperator::affine_gradient(m, q)
}

fn build<S: Scalar>(
    name: &'static str,
    set: ConvexSet<S>,
    a: IsmOperator<S>,
    t: NonexpansiveMap<S>,
    x0: Vector<S>,
    solution: Vector<S>,
) -> Result<SuiteProblem<S>> {
    let lambda = Schedule::constant(a.alpha * S::half())?;
    let problem = Problem::new(Schedule::constant(S::half())?)
        .with_set(set)
        .with_a(a)
        .with_t(t)
        .with_lambda(lambda)
        .with_known_solution(solution.clone());
    Ok(SuiteProblem {
        name,
        problem,
        x0,
        solution,
    })
}

/// The standard problems. Each uses `lambda = alpha / 2` and `alpha_n = 1/2`.
pub fn standard_suite<S: Scalar>() -> Result<Vec<SuiteProblem<S>>> {
    let unit_square = || ConvexSet::cube(2, S::zero(), S::one());
    let unit_disc = || ConvexSet::new_ball(Vector::zeros(2), S::one());
    let shift = || Ok::<_, crate::error::Error>(IsmOperator::shift_residual(v(&[2.0, 0.5])?));
    let box_solution = || v::<S>(&[1.0, 0.5]);

    let z4 = v::<S>(&[0.5, -0.25, 0.1])?;
    let z5 = v::<S>(&[0.6, 0.8])?;
    let z9 = v::<S>(&[1.0 / 15.0, 1.0 / 6.0, 23.0 / 30.0])?;
    let z10 = v::<S>(&[1.5, 0.5])?;
    let cube3 = ConvexSet::cube(3, -S::one(), S::one())?;
    let simplex3 = ConvexSet::new_simplex(3)?;

    Ok(vec![
        build(
            "box-shift-identity",
            unit_square()?,
            shift()?,
            NonexpansiveMap::Identity,
            v(&[0.0, 0.0])?,
            box_solution()?,
        )?,
        build(
            "ball-shift-identity",
            unit_disc()?,
            IsmOperator::shift_residual(v(&[3.0, 4.0])?),
            NonexpansiveMap::Identity,
            v(&[-2.0, 1.0])?,
            z5.clone(),
        )?,
        build(
            "simplex-shift-identity",
            simplex3.clone(),
            IsmOperator::shift_residual(v(&[1.0, 0.2, -0.5])?),
            NonexpansiveMap::Identity,
            v(&[0.0, 0.0, 1.0])?,
            v(&[0.9, 0.1, 0.0])?,
        )?,
        build(
            "cube-affine-projection",
            cube3.clone(),
            affine(
                &[&[1.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 3.0]],
                &z4,
                &Vector::zeros(3),
            )?,
            NonexpansiveMap::ProjectionOnto(cube3),
            v(&[3.0, 3.0, -3.0])?,
            z4,
        )?,
        build(
            "ball-affine-boundary",
            unit_disc()?,
            affine(&[&[2.0, 1.0], &[1.0, 2.0]], &z5, &z5.scale(-S::one())?)?,
            NonexpansiveMap::Identity,
            v(&[-1.0, -1.0])?,
            z5.clone(),
        )?,
        build(
            "ball-origin-rotation",
            unit_disc()?,
            IsmOperator::shift_residual(Vector::zeros(2)),
            NonexpansiveMap::rotation(S::one())?,
            v(&[0.9, -0.3])?,
            Vector::zeros(2),
        )?,
        build(
            "box-shift-contraction",
            unit_square()?,
            shift()?,
            NonexpansiveMap::contraction(S::half(), box_solution()?)?,
            v(&[0.0, 1.0])?,
            box_solution()?,
        )?,
        build(
            "box-shift-halfspace",
            unit_square()?,
            shift()?,
            NonexpansiveMap::ProjectionOnto(ConvexSet::new_halfspace(v(&[1.0, 1.0])?, S::lit(1.5))?),
            v(&[0.0, 1.0])?,
            box_solution()?,
        )?,
        build(
            "simplex-affine-averaged",
            simplex3.clone(),
            affine(
                &[&[2.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 2.0]],
                &Vector::zeros(3),
                &v(&[-0.4, -0.6, -1.8])?,
            )?,
            NonexpansiveMap::average(NonexpansiveMap::ProjectionOnto(simplex3), S::half())?,
            v(&[1.0, 0.0, 0.0])?,
            z9,
        )?,
        build(
            "ball-affine-contraction",
            ConvexSet::new_ball(v(&[1.0, 1.0])?, S::two())?,
            affine(&[&[1.0, 0.5], &[0.5, 1.0]], &z10, &Vector::zeros(2))?,
            NonexpansiveMap::average(NonexpansiveMap::contraction(S::lit(0.9), z10.clone())?, S::half())?,
            v(&[-0.5, 2.0])?,
            z10,
        )?,
    ])
}
