#![allow(dead_code)]

use num_complex::Complex64;
use opapprox_core::linalg::{PsdWeight, Tolerances};
use opapprox_core::oracles::sample;
use opapprox_core::scalar::{CMatrix, CVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INSTANCES: usize = 200;
pub const MAX_DIM: usize = 30;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> Tolerances<f64> {
    Tolerances::default()
}

pub fn dim(rng: &mut ChaCha8Rng, max: usize) -> usize {
    rng.random_range(1..=max)
}

/// Gaussian matrix whose rank is drawn uniformly in `0..=min(rows, cols)`.
pub fn matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix<f64> {
    let r = rng.random_range(0..=rows.min(cols));
    sample::low_rank(rng, rows, cols, r)
}

pub fn full_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix<f64> {
    sample::gaussian(rng, rows, cols)
}

pub fn vector(rng: &mut ChaCha8Rng, n: usize) -> CVector<f64> {
    sample::gaussian_vector(rng, n)
}

/// Positive weight of random rank, possibly singular.
pub fn weight(rng: &mut ChaCha8Rng, n: usize) -> PsdWeight<f64> {
    let r = rng.random_range(0..=n);
    sample::psd(rng, n, r)
}

pub fn min_eig(m: &CMatrix<f64>) -> f64 {
    opapprox_core::linalg::hermitian_eigen(m).min()
}

pub fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
