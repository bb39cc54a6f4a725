//! Seeded sampling helpers. All randomized routines take an explicit seed so
//! reruns are reproducible.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, Matrix};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn unit_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vec(rng, n);
        if linalg::norm2(&v) > 1e-8 {
            return linalg::normalized(&v);
        }
    }
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix<f64> {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// A well-conditioned invertible matrix: `I + G/(2√n)` with Gaussian `G`,
/// redrawn until its smallest singular value exceeds 0.2.
pub fn invertible_matrix(rng: &mut impl Rng, n: usize) -> Matrix<f64> {
    loop {
        let g = gaussian_matrix(rng, n, n);
        let s = 0.5 / libm::sqrt(n as f64);
        let m = Matrix::from_fn(n, n, |r, c| if r == c { 1.0 } else { 0.0 } + s * g[(r, c)]);
        if m.svd().s.last().copied().unwrap_or(0.0) > 0.2 {
            return m;
        }
    }
}

/// `AᵀA + εI`-style positive definite matrix with spectrum in a bounded band.
pub fn pd_matrix(rng: &mut impl Rng, n: usize) -> Matrix<f64> {
    let a = invertible_matrix(rng, n);
    a.transpose().matmul(&a).expect("square").symmetrize()
}

/// Orthogonal matrix from the SVD of a Gaussian matrix.
pub fn orthogonal_matrix(rng: &mut impl Rng, n: usize) -> Matrix<f64> {
    let svd = gaussian_matrix(rng, n, n).svd();
    svd.u.matmul(&svd.v.transpose()).expect("square")
}
