//! Maximizing a quadratic form over unit decomposable vectors.
//!
//! For symmetric `K` on `ℝ^{d₁} ⊗ ⋯ ⊗ ℝ^{d_l}`, approximates
//! `sup { (x¹⊗⋯⊗x^l)ᵀ K (x¹⊗⋯⊗x^l) : ‖x^i‖₂ = 1 }` by block-coordinate
//! ascent: with all factors but one fixed the form is a Rayleigh quotient in
//! the free factor, whose maximizer is the top eigenvector of `J_iᵀKJ_i`.
//! Each sweep never decreases the value.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::random::{self, SeededRng};
use crate::tensor_space::{kron_vectors, unit, TensorShape};

#[derive(Clone, Debug)]
pub struct AltMaxOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for AltMaxOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iters: 200,
            tol: 1e-10,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecomposableMax {
    pub value: f64,
    /// Unit factors attaining `value`.
    pub factors: Vec<Vec<f64>>,
}

fn ascend(shape: &TensorShape, k: &Matrix<f64>, mut xs: Vec<Vec<f64>>, opts: &AltMaxOptions) -> DecomposableMax {
    let mut value = f64::NEG_INFINITY;
    for _ in 0..opts.max_iters {
        let mut last = value;
        for i in 0..shape.order() {
            let j = shape.slot_embedding(&xs, i).expect("anchor matches shape");
            let reduced = j.transpose().matmul(k).and_then(|m| m.matmul(&j)).expect("dims");
            let eig = reduced.sym_eigen();
            xs[i] = eig.vectors.column(0);
            last = eig.values[0];
        }
        let done = (last - value).abs() <= opts.tol * last.abs().max(1.0);
        value = last;
        if done {
            break;
        }
    }
    DecomposableMax { value, factors: xs }
}

/// Starts: every tuple of coordinate vectors (while there are at most 64),
/// then `opts.restarts` Gaussian tuples.
pub fn max_decomposable_form(shape: &TensorShape, k: &Matrix<f64>, opts: &AltMaxOptions) -> Result<DecomposableMax> {
    let d = shape.total();
    if k.rows() != d || k.cols() != d {
        return Err(Error::ShapeMismatch { expected: d, found: k.rows() });
    }
    let k = k.symmetrize();
    let mut starts: Vec<Vec<Vec<f64>>> = Vec::new();
    if d <= 64 {
        for idx in 0..d {
            let multi = shape.unflatten_index(idx)?;
            starts.push(multi.iter().enumerate().map(|(i, &m)| unit(shape.dim(i), m)).collect());
        }
    }
    let mut rng: SeededRng = random::seeded(opts.seed);
    for _ in 0..opts.restarts {
        starts.push(shape.dims().iter().map(|&di| random::unit_vec(&mut rng, di)).collect());
    }
    let mut best: Option<DecomposableMax> = None;
    for xs in starts {
        let cand = ascend(shape, &k, xs, opts);
        if best.as_ref().map_or(true, |b| cand.value > b.value) {
            best = Some(cand);
        }
    }
    Ok(best.expect("at least one start"))
}

/// `(x¹⊗⋯⊗x^l)ᵀ K (x¹⊗⋯⊗x^l)`, evaluated directly.
pub fn decomposable_form(k: &Matrix<f64>, factors: &[Vec<f64>]) -> f64 {
    let x = kron_vectors(factors);
    linalg::dot(&x, &k.mul_vec(&x).expect("dims"))
}
