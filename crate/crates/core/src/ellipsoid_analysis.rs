//! Tensorial ellipsoids.
//!
//! An ellipsoid `{x : xᵀMx ≤ 1}` is tensorial exactly when `M` is a
//! Kronecker product `M₁ ⊗ ⋯ ⊗ M_l`, and the only ellipsoid squeezed between
//! the projective and injective products of Euclidean balls is the Euclidean
//! ball itself. This module decides the first by nearest-Kronecker
//! approximation and probes the second numerically.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::multilinear::{max_decomposable_form, AltMaxOptions};
use crate::random;
use crate::scalar::Scalar;
use crate::tensor_space::TensorShape;

/// Relative Frobenius residual accepted by [`kronecker_decompose`].
pub const KRONECKER_TOL: f64 = 1e-8;

fn check_matrix<S: Scalar>(shape: &TensorShape, m: &Matrix<S>) -> Result<()> {
    if m.rows() != shape.total() || m.cols() != shape.total() {
        return Err(Error::ShapeMismatch {
            expected: shape.total(),
            found: m.rows(),
        });
    }
    Ok(())
}

/// `R[(i₁,j₁),(i₂,j₂)] = M[i₁·b + i₂, j₁·b + j₂]` for `M` of size `ab × ab`;
/// `M = A ⊗ B` exactly when `R = vec(A) vec(B)ᵀ`.
fn rearrange<S: Scalar>(m: &Matrix<S>, a: usize, b: usize) -> Matrix<S> {
    Matrix::from_fn(a * a, b * b, |r, c| {
        let (i1, j1) = (r / a, r % a);
        let (i2, j2) = (c / b, c % b);
        m[(i1 * b + i2, j1 * b + j2)].clone()
    })
}

fn trace<S: Scalar>(m: &Matrix<S>) -> S {
    m.diagonal().into_iter().fold(S::zero(), |acc, v| acc + v)
}

/// Split `M ≈ A ⊗ B` with `A` of size `a`; returns `(A, B, relative residual)`.
fn split_float(m: &Matrix<f64>, a: usize) -> (Matrix<f64>, Matrix<f64>, f64) {
    let b = m.rows() / a;
    let svd = rearrange(m, a, b).svd();
    let norm = m.frobenius();
    let tail: f64 = svd.s.iter().skip(1).map(|s| s * s).sum();
    let residual = libm::sqrt(tail) / norm.max(f64::MIN_POSITIVE);
    let mut fa = Matrix::from_row_major(a, a, svd.u.column(0)).expect("a²");
    let mut fb = Matrix::from_row_major(b, b, svd.v.column(0)).expect("b²").scale(&svd.s[0]);
    let tr = trace(&fa);
    if tr < 0.0 {
        fa = fa.scale(&-1.0);
        fb = fb.scale(&-1.0);
    }
    // trace(A) = a, scale pushed into B
    let c = a as f64 / trace(&fa);
    (fa.scale(&c).symmetrize(), fb.scale(&(1.0 / c)).symmetrize(), residual)
}

/// Factor `M = M₁ ⊗ ⋯ ⊗ M_l` with `trace(M_i) = d_i` for `i < l`.
///
/// Splits off one factor at a time through the leading singular pair of the
/// rearranged matrix; the discarded singular values give the residual.
pub fn kronecker_decompose(shape: &TensorShape, m: &Matrix<f64>, tol: f64) -> Result<Vec<Matrix<f64>>> {
    check_matrix(shape, m)?;
    if !m.is_symmetric(1e-10 * m.max_abs().max(1.0)) || !m.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let mut factors = Vec::with_capacity(shape.order());
    let mut rest = m.clone();
    let mut worst = 0.0f64;
    for i in 0..shape.order() - 1 {
        let (a, b, residual) = split_float(&rest, shape.dim(i));
        worst = worst.max(residual);
        if residual > tol {
            return Err(Error::NotKronecker { residual });
        }
        factors.push(a);
        rest = b;
    }
    factors.push(rest);
    for f in &factors {
        if !f.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
    }
    let rebuilt = Matrix::kron_all(&factors);
    let residual = rebuilt.sub(m)?.frobenius() / m.frobenius();
    if residual > tol {
        return Err(Error::NotKronecker {
            residual: residual.max(worst),
        });
    }
    Ok(factors)
}

/// Exact counterpart: the rearrangement must have rank one.
pub fn kronecker_decompose_exact<S: Scalar>(shape: &TensorShape, m: &Matrix<S>) -> Result<Vec<Matrix<S>>> {
    check_matrix(shape, m)?;
    if !m.is_symmetric(0.0) || !m.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let mut factors = Vec::with_capacity(shape.order());
    let mut rest = m.clone();
    for i in 0..shape.order() - 1 {
        let a = shape.dim(i);
        let b = rest.rows() / a;
        let r = rearrange(&rest, a, b);
        if r.rank(0.0) != 1 {
            return Err(Error::NotKronecker {
                residual: f64::INFINITY,
            });
        }
        // R = u vᵀ: take a nonzero entry's column and row
        let (pr, pc) = (0..r.rows())
            .flat_map(|row| (0..r.cols()).map(move |col| (row, col)))
            .find(|&(row, col)| !r[(row, col)].is_zero())
            .expect("PD matrix is nonzero");
        let pivot = r[(pr, pc)].clone();
        let fa = Matrix::from_row_major(a, a, r.column(pc))?;
        let fb = Matrix::from_row_major(b, b, r.row(pr).to_vec())?.scale(&(S::one() / pivot));
        let c = S::from_usize(a) / trace(&fa);
        factors.push(fa.scale(&c));
        rest = fb.scale(&(S::one() / c));
    }
    factors.push(rest);
    for f in &factors {
        if !f.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
    }
    Ok(factors)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EllipsoidTensoriality {
    pub verdict: bool,
    pub factors: Option<Vec<Matrix<f64>>>,
    /// Relative residual of the best Kronecker fit (0 when accepted exactly).
    pub residual: f64,
}

pub fn is_tensorial_ellipsoid(shape: &TensorShape, m: &Matrix<f64>, tol: f64) -> Result<EllipsoidTensoriality> {
    match kronecker_decompose(shape, m, tol) {
        Ok(factors) => {
            let residual = Matrix::kron_all(&factors).sub(m)?.frobenius() / m.frobenius();
            Ok(EllipsoidTensoriality {
                verdict: true,
                factors: Some(factors),
                residual,
            })
        }
        Err(Error::NotKronecker { residual }) => Ok(EllipsoidTensoriality {
            verdict: false,
            factors: None,
            residual,
        }),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BilinearCheck {
    pub passed: bool,
    pub samples: usize,
    pub max_deviation: f64,
    /// `(x, z, y, w)` of the first violation.
    pub failure: Option<Vec<Vec<f64>>>,
}

/// Sample unit `x, z ∈ ℝ^m`, `y, w ∈ ℝ^n` and test
/// `⟨x,z⟩⟨y,w⟩ = (⟨L(x⊗y), L(z⊗w)⟩ + ⟨L(x⊗w), L(z⊗y)⟩) / 2`
/// for `L = T⁻¹` and `L = Tᵀ`.
pub fn bilinear_identity_check(shape: &TensorShape, t: &Matrix<f64>, n_samples: usize, tol: f64, seed: u64) -> Result<BilinearCheck> {
    if shape.order() != 2 {
        return Err(Error::InvalidShape(format!(
            "the bilinear identity is stated for two factors, got {}",
            shape.order()
        )));
    }
    check_matrix(shape, t)?;
    let t_inv = t.inverse().map_err(|_| Error::SingularMatrix)?;
    let ls = [t_inv, t.transpose()];
    let (m, n) = (shape.dim(0), shape.dim(1));
    let mut rng = random::seeded(seed);
    let mut out = BilinearCheck {
        passed: true,
        samples: 0,
        max_deviation: 0.0,
        failure: None,
    };
    for _ in 0..n_samples {
        let x = random::unit_vec(&mut rng, m);
        let z = random::unit_vec(&mut rng, m);
        let y = random::unit_vec(&mut rng, n);
        let w = random::unit_vec(&mut rng, n);
        let lhs = linalg::dot(&x, &z) * linalg::dot(&y, &w);
        for l in &ls {
            let img = |a: &[f64], b: &[f64]| l.mul_vec(&shape.kron(&[a.to_vec(), b.to_vec()]).expect("dims")).expect("dims");
            let rhs = 0.5 * (linalg::dot(&img(&x, &y), &img(&z, &w)) + linalg::dot(&img(&x, &w), &img(&z, &y)));
            let dev = (lhs - rhs).abs();
            out.max_deviation = out.max_deviation.max(dev);
            if dev > tol && out.passed {
                out.passed = false;
                out.failure = Some(vec![x.clone(), z.clone(), y.clone(), w.clone()]);
            }
        }
        out.samples += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EuclideanSandwich {
    pub passed: bool,
    /// `sup (⊗x^i)ᵀ M (⊗x^i)` over unit factors.
    pub pi_value: f64,
    /// `sup (⊗x^i)ᵀ M⁻¹ (⊗x^i)` over unit factors.
    pub eps_value: f64,
    /// Unit factors of a decomposable direction where a bound fails.
    pub violation: Option<Vec<Vec<f64>>>,
    /// `‖M − I‖_F`.
    pub distance_from_identity: f64,
}

/// Test `B₂ ⊗_π ⋯ ⊗_π B₂ ⊆ E ⊆ B₂ ⊗_ε ⋯ ⊗_ε B₂` for `E = {xᵀMx ≤ 1}`.
pub fn sandwich_check_euclidean(shape: &TensorShape, m: &Matrix<f64>, tol: f64, restarts: usize, seed: u64) -> Result<EuclideanSandwich> {
    check_matrix(shape, m)?;
    if !m.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let opts = AltMaxOptions {
        restarts,
        seed,
        ..AltMaxOptions::default()
    };
    let pi = max_decomposable_form(shape, m, &opts)?;
    let eps = max_decomposable_form(shape, &m.inverse()?, &opts)?;
    let limit = 1.0 + tol;
    let violation = if pi.value > limit {
        Some(pi.factors.clone())
    } else if eps.value > limit {
        Some(eps.factors.clone())
    } else {
        None
    };
    Ok(EuclideanSandwich {
        passed: violation.is_none(),
        pi_value: pi.value,
        eps_value: eps.value,
        violation,
        distance_from_identity: m.sub(&Matrix::identity(m.rows()))?.frobenius(),
    })
}

/// `JᵀMJ` for `J : u ↦ u ⊗ z` (the last factor pinned to the unit vector `z`).
pub fn slice_ellipsoid(shape: &TensorShape, m: &Matrix<f64>, z: &[f64]) -> Result<Matrix<f64>> {
    check_matrix(shape, m)?;
    let l = shape.order();
    if l < 2 {
        return Err(Error::InvalidShape("slicing needs at least two factors".into()));
    }
    if z.len() != shape.dim(l - 1) {
        return Err(Error::ShapeMismatch {
            expected: shape.dim(l - 1),
            found: z.len(),
        });
    }
    let norm = linalg::norm2(z);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitVector { norm });
    }
    let head = shape.total() / z.len();
    let zcol = Matrix::from_columns(&[z.to_vec()])?;
    let j = Matrix::identity(head).kron(&zcol);
    j.transpose().matmul(m)?.matmul(&j)
}

/// Symmetric `mn × mn` matrix with identity diagonal blocks and
/// antisymmetric off-diagonal blocks `A_{ki}` above the diagonal,
/// `−A_{ki}` below.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrixWitness {
    pub m: usize,
    pub n: usize,
    /// `A_{ki}` for `k < i`, ordered `(0,1), (0,2), …, (1,2), …`.
    pub blocks: Vec<Matrix<f64>>,
}

impl BlockMatrixWitness {
    pub fn new(m: usize, n: usize, blocks: Vec<Matrix<f64>>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidDimension(format!("grid ({m}, {n})")));
        }
        let expected = m * (m - 1) / 2;
        if blocks.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                found: blocks.len(),
            });
        }
        for b in &blocks {
            if b.rows() != n || b.cols() != n {
                return Err(Error::ShapeMismatch { expected: n, found: b.rows() });
            }
            let skew = b.add(&b.transpose())?.max_abs();
            if skew > 1e-12 * b.max_abs().max(1.0) {
                return Err(Error::InvalidShape(format!("block is not antisymmetric (‖A + Aᵀ‖ = {skew:e})")));
            }
        }
        Ok(Self { m, n, blocks })
    }

    /// Random antisymmetric blocks with Gaussian entries times `scale`.
    pub fn random(m: usize, n: usize, scale: f64, rng: &mut random::SeededRng) -> Self {
        let blocks = (0..m * (m - 1) / 2)
            .map(|_| {
                let g = random::gaussian_matrix(rng, n, n);
                Matrix::from_fn(n, n, |r, c| scale * 0.5 * (g[(r, c)] - g[(c, r)]))
            })
            .collect();
        Self { m, n, blocks }
    }

    fn block_index(&self, k: usize, i: usize) -> usize {
        // position of (k, i), k < i, in row-major upper-triangle order
        k * self.m - k * (k + 1) / 2 + (i - k - 1)
    }

    pub fn assemble(&self) -> Matrix<f64> {
        let (m, n) = (self.m, self.n);
        Matrix::from_fn(m * n, m * n, |r, c| {
            let (k, i) = (r / n, c / n);
            let (a, b) = (r % n, c % n);
            match k.cmp(&i) {
                core::cmp::Ordering::Equal => {
                    if a == b {
                        1.0
                    } else {
                        0.0
                    }
                }
                core::cmp::Ordering::Less => self.blocks[self.block_index(k, i)][(a, b)],
                core::cmp::Ordering::Greater => -self.blocks[self.block_index(i, k)][(a, b)],
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BlockLemmaVerdict {
    /// `S⁻¹` has the block structure and `S = I`.
    ConfirmsLemma,
    /// `S⁻¹` lacks the structure; the first offending block and its deviation.
    StructureBroken { row_block: usize, col_block: usize, deviation: f64 },
    /// Structured `S⁻¹` with `‖S − I‖_F > √tol · d`: would refute the lemma.
    Counterexample { deviation: f64 },
}

/// Assemble `S`, invert it and check whether `S⁻¹` has the same block shape.
pub fn block_matrix_check(witness: &BlockMatrixWitness, tol: f64) -> Result<BlockLemmaVerdict> {
    let s = witness.assemble();
    if !s.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let inv = s.inverse().map_err(|_| Error::NotPositiveDefinite)?;
    let (m, n) = (witness.m, witness.n);
    for k in 0..m {
        for i in 0..m {
            let block = Matrix::from_fn(n, n, |a, b| inv[(k * n + a, i * n + b)]);
            let deviation = if k == i {
                block.sub(&Matrix::identity(n))?.max_abs()
            } else {
                block.add(&block.transpose())?.max_abs()
            };
            if deviation > tol {
                return Ok(BlockLemmaVerdict::StructureBroken {
                    row_block: k,
                    col_block: i,
                    deviation,
                });
            }
        }
    }
    // The structure test is quadratic in the blocks (diagonal blocks of S⁻¹
    // are I + O(‖A‖²)), so passing it at `tol` only pins S − I to O(√tol).
    let deviation = s.sub(&Matrix::identity(m * n))?.frobenius();
    if deviation <= libm::sqrt(tol) * (m * n) as f64 {
        Ok(BlockLemmaVerdict::ConfirmsLemma)
    } else {
        Ok(BlockLemmaVerdict::Counterexample { deviation })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FalsificationSummary {
    pub trials: usize,
    pub positive_definite: usize,
    pub structured_inverse: usize,
    pub counterexamples: usize,
}

/// Random search for a PD block matrix whose inverse keeps the block shape
/// while `S ≠ I`.
pub fn block_matrix_falsify(m: usize, n: usize, trials: usize, tol: f64, seed: u64) -> Result<FalsificationSummary> {
    let mut rng = random::seeded(seed);
    let mut out = FalsificationSummary::default();
    for t in 0..trials {
        // scales spread over several orders of magnitude, most PD
        let scale = libm::pow(10.0, -3.0 + 3.0 * (t % 7) as f64 / 6.0);
        let w = BlockMatrixWitness::random(m, n, scale, &mut rng);
        out.trials += 1;
        match block_matrix_check(&w, tol) {
            Err(Error::NotPositiveDefinite) => {}
            Err(e) => return Err(e),
            Ok(v) => {
                out.positive_definite += 1;
                match v {
                    BlockLemmaVerdict::StructureBroken { .. } => {}
                    BlockLemmaVerdict::ConfirmsLemma => out.structured_inverse += 1,
                    BlockLemmaVerdict::Counterexample { .. } => {
                        out.structured_inverse += 1;
                        out.counterexamples += 1;
                    }
                }
            }
        }
    }
    Ok(out)
}
