//! Seeded random draws used by audits and certificates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::Scalar;
use crate::space::Vector;

pub type AuditRng = ChaCha8Rng;

pub fn rng(seed: u64) -> AuditRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vector<S: Scalar>(rng: &mut impl Rng, dim: usize) -> Vector<S> {
    let comps = (0..dim).map(|_| S::lit(rng.sample::<f64, _>(StandardNormal))).collect();
    Vector::new(comps).expect("gaussian draws are finite")
}

/// Uniform draw from the cube `center + [-half_width, half_width]^d`.
pub fn uniform_in_cube<S: Scalar>(rng: &mut impl Rng, center: &Vector<S>, half_width: S) -> Vector<S> {
    let hw = half_width.as_f64();
    let comps = center.iter().map(|&c| c + S::lit(rng.random_range(-hw..=hw))).collect();
    Vector::new(comps).expect("bounded draws are finite")
}

pub fn uniform_unit<S: Scalar>(rng: &mut impl Rng) -> S {
    S::lit(rng.random::<f64>())
}
