//! Seeded randomness. Every batch item draws from its own ChaCha stream so
//! parallel and sequential runs see identical inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Mat, Vector};

pub type DetRng = ChaCha8Rng;

pub fn rng(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> DetRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| normal(rng))
}

pub fn gaussian_vector(rng: &mut impl Rng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| normal(rng))
}

/// Random symmetric positive-definite matrix with eigenvalues in a bounded range.
pub fn spd_matrix(rng: &mut impl Rng, n: usize) -> Mat {
    let a = gaussian_matrix(rng, n, n);
    &a * a.transpose() / (n as f64) + Mat::identity(n, n)
}
