//! Coordinates on `ℝ^{d₁} ⊗ ⋯ ⊗ ℝ^{d_l}` and the decomposable-preserving maps.
//!
//! Flattening is lexicographic with the last factor fastest:
//! `e_{j₁} ⊗ ⋯ ⊗ e_{j_l}` sits at `Σ_i j_i · Π_{k>i} d_k` (0-based). Every
//! file format and every Kronecker matrix in the crate uses this order.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::body::Body;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;

/// Largest total dimension accepted anywhere in the crate.
pub const MAX_TOTAL_DIM: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorShape {
    dims: Vec<usize>,
}

impl TensorShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidShape("no factors".into()));
        }
        if let Some(i) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidShape(format!("factor {i} has dimension 0")));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&t| t <= MAX_TOTAL_DIM)
            .ok_or_else(|| {
                Error::InvalidShape(format!("total dimension exceeds {MAX_TOTAL_DIM}"))
            })?;
        debug_assert!(total >= 1);
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Shape with the last factor dropped (`None` for a single factor).
    pub fn without_last(&self) -> Option<Self> {
        (self.order() > 1).then(|| Self {
            dims: self.dims[..self.order() - 1].to_vec(),
        })
    }

    /// Linear index of a 0-based multi-index.
    pub fn flatten_index(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.order() {
            return Err(Error::ShapeMismatch {
                expected: self.order(),
                found: multi.len(),
            });
        }
        let mut idx = 0;
        for (axis, (&j, &d)) in multi.iter().zip(&self.dims).enumerate() {
            if j >= d {
                return Err(Error::IndexOutOfRange {
                    axis,
                    index: j,
                    dim: d,
                });
            }
            idx = idx * d + j;
        }
        Ok(idx)
    }

    pub fn unflatten_index(&self, mut idx: usize) -> Result<Vec<usize>> {
        if idx >= self.total() {
            return Err(Error::IndexOutOfRange {
                axis: 0,
                index: idx,
                dim: self.total(),
            });
        }
        let mut multi = vec![0; self.order()];
        for (slot, &d) in multi.iter_mut().zip(&self.dims).rev() {
            *slot = idx % d;
            idx /= d;
        }
        Ok(multi)
    }

    fn check_vector<S>(&self, u: &[S]) -> Result<()> {
        if u.len() != self.total() {
            return Err(Error::ShapeMismatch {
                expected: self.total(),
                found: u.len(),
            });
        }
        Ok(())
    }

    /// Kronecker product of one vector per factor.
    pub fn kron<S: Scalar>(&self, factors: &[Vec<S>]) -> Result<Vec<S>> {
        if factors.len() != self.order() {
            return Err(Error::ShapeMismatch {
                expected: self.order(),
                found: factors.len(),
            });
        }
        for (f, &d) in factors.iter().zip(&self.dims) {
            if f.len() != d {
                return Err(Error::ShapeMismatch {
                    expected: d,
                    found: f.len(),
                });
            }
        }
        Ok(kron_vectors(factors))
    }

    /// The Hilbert scalar product, i.e. the dot product of flattened coordinates.
    pub fn inner_h<S: Scalar>(&self, u: &[S], v: &[S]) -> Result<S> {
        self.check_vector(u)?;
        self.check_vector(v)?;
        Ok(linalg::dot(u, v))
    }

    /// The `d × d_i` matrix of `x ↦ a¹ ⊗ ⋯ ⊗ x ⊗ ⋯ ⊗ a^l` (slot `i` free).
    pub fn slot_embedding<S: Scalar>(&self, anchor: &[Vec<S>], i: usize) -> Result<Matrix<S>> {
        if i >= self.order() {
            return Err(Error::IndexOutOfRange {
                axis: 0,
                index: i,
                dim: self.order(),
            });
        }
        let columns = (0..self.dims[i])
            .map(|k| {
                let mut fs = anchor.to_vec();
                fs[i] = unit(self.dims[i], k);
                self.kron(&fs)
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(&columns)
    }

    /// Reshape a vector into the `(Π_{k≤split} d_k) × (Π_{k>split} d_k)`
    /// matrix whose row index runs over the leading factors.
    pub fn unfold(&self, u: &[f64], split: usize) -> Result<Matrix<f64>> {
        self.check_vector(u)?;
        let rows: usize = self.dims[..split].iter().product();
        Matrix::from_row_major(rows, self.total() / rows, u.to_vec())
    }
}

pub(crate) fn unit<S: Scalar>(n: usize, k: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[k] = S::one();
    v
}

pub(crate) fn kron_vectors<S: Scalar>(factors: &[Vec<S>]) -> Vec<S> {
    let mut acc = vec![S::one()];
    for f in factors {
        let mut next = Vec::with_capacity(acc.len() * f.len());
        for a in &acc {
            for b in f {
                next.push(a.clone() * b.clone());
            }
        }
        acc = next;
    }
    acc
}

/// A rank-one tensor `x¹ ⊗ ⋯ ⊗ x^l` kept in factored form.
#[derive(Clone, Debug, PartialEq)]
pub struct DecomposableVector<S> {
    pub factors: Vec<Vec<S>>,
}

impl<S: Scalar> DecomposableVector<S> {
    pub fn new(factors: Vec<Vec<S>>) -> Self {
        Self { factors }
    }

    pub fn flatten(&self) -> Vec<S> {
        kron_vectors(&self.factors)
    }

    pub fn to_f64(&self) -> DecomposableVector<f64> {
        DecomposableVector {
            factors: self
                .factors
                .iter()
                .map(|f| f.iter().map(S::to_f64).collect())
                .collect(),
        }
    }
}

/// An element of `GL_⊗`:
/// `T(x¹ ⊗ ⋯ ⊗ x^l) = T₁ x^{σ(1)} ⊗ ⋯ ⊗ T_l x^{σ(l)}`.
///
/// `sigma[i]` is the source factor feeding output slot `i`; permutations only
/// exchange factors of equal dimension so every `T_i` is square.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorMap<S> {
    shape: TensorShape,
    sigma: Vec<usize>,
    factors: Vec<Matrix<S>>,
}

impl<S: Scalar> TensorMap<S> {
    pub fn new(shape: TensorShape, sigma: Vec<usize>, factors: Vec<Matrix<S>>) -> Result<Self> {
        let l = shape.order();
        let mut seen = vec![false; l];
        for &s in &sigma {
            if s >= l || core::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidPermutation(sigma));
            }
        }
        if sigma.len() != l {
            return Err(Error::InvalidPermutation(sigma));
        }
        if factors.len() != l {
            return Err(Error::ShapeMismatch {
                expected: l,
                found: factors.len(),
            });
        }
        for (i, f) in factors.iter().enumerate() {
            if shape.dim(sigma[i]) != shape.dim(i) {
                return Err(Error::InvalidPermutation(sigma));
            }
            if f.rows() != shape.dim(i) || f.cols() != shape.dim(i) {
                return Err(Error::ShapeMismatch {
                    expected: shape.dim(i),
                    found: f.rows().max(f.cols()),
                });
            }
            // Exact singularity test; for floats a relative pivot floor.
            if f.inverse().is_err() || (!S::EXACT && f.rank(1e-12) < f.rows()) {
                return Err(Error::SingularFactor(i));
            }
        }
        Ok(Self {
            shape,
            sigma,
            factors,
        })
    }

    pub fn identity(shape: TensorShape) -> Self {
        let sigma = (0..shape.order()).collect();
        let factors = shape.dims().iter().map(|&d| Matrix::identity(d)).collect();
        Self {
            shape,
            sigma,
            factors,
        }
    }

    /// Same permutation with every factor replaced; no validation of sigma.
    pub fn with_factors(&self, factors: Vec<Matrix<S>>) -> Result<Self> {
        Self::new(self.shape.clone(), self.sigma.clone(), factors)
    }

    pub fn shape(&self) -> &TensorShape {
        &self.shape
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn factors(&self) -> &[Matrix<S>] {
        &self.factors
    }

    pub fn is_identity_permutation(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| i == s)
    }

    /// Maps `x¹ ⊗ ⋯ ⊗ x^l` to `x^{σ(1)} ⊗ ⋯ ⊗ x^{σ(l)}` on flat indices.
    fn permute_flat(&self, u: &[S]) -> Vec<S> {
        if self.is_identity_permutation() {
            return u.to_vec();
        }
        let mut out = vec![S::zero(); u.len()];
        for (src, value) in u.iter().enumerate() {
            let multi = self.shape.unflatten_index(src).expect("index within shape");
            let target: Vec<usize> = self.sigma.iter().map(|&s| multi[s]).collect();
            let dst = self.shape.flatten_index(&target).expect("index within shape");
            out[dst] = value.clone();
        }
        out
    }

    pub fn apply(&self, u: &[S]) -> Result<Vec<S>> {
        self.shape.check_vector(u)?;
        let permuted = self.permute_flat(u);
        Matrix::kron_all(&self.factors).mul_vec(&permuted)
    }

    pub fn apply_decomposable(&self, x: &DecomposableVector<S>) -> Result<DecomposableVector<S>> {
        let factors = self
            .factors
            .iter()
            .zip(&self.sigma)
            .map(|(t, &s)| t.mul_vec(&x.factors[s]))
            .collect::<Result<Vec<_>>>()?;
        Ok(DecomposableVector { factors })
    }

    /// Dense `d × d` matrix of the map.
    pub fn to_matrix(&self) -> Matrix<S> {
        let d = self.shape.total();
        let columns: Vec<Vec<S>> = (0..d)
            .map(|k| self.apply(&unit(d, k)).expect("unit vector has shape"))
            .collect();
        Matrix::from_columns(&columns).expect("columns share length")
    }

    pub fn inverse(&self) -> Result<Self> {
        let l = self.shape.order();
        let mut inv_sigma = vec![0; l];
        for (i, &s) in self.sigma.iter().enumerate() {
            inv_sigma[s] = i;
        }
        let factors = (0..l)
            .map(|j| {
                self.factors[inv_sigma[j]]
                    .inverse()
                    .map_err(|_| Error::SingularFactor(inv_sigma[j]))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.shape.clone(), inv_sigma, factors)
    }

    /// `T(Q)` for a body `Q` on the full space.
    pub fn image(&self, q: &Body<S>) -> Result<Body<S>> {
        q.linear_image(&self.to_matrix())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape.total(),
                found: other.shape.total(),
            });
        }
        let sigma = self.sigma.iter().map(|&s| other.sigma[s]).collect();
        let factors = self
            .factors
            .iter()
            .zip(&self.sigma)
            .map(|(t, &s)| t.matmul(&other.factors[s]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.shape.clone(), sigma, factors)
    }

    /// Multiply by a positive scalar (absorbed into the last factor).
    pub fn scaled(&self, c: &S) -> Self {
        let mut out = self.clone();
        let last = out.factors.len() - 1;
        out.factors[last] = out.factors[last].scale(c);
        out
    }

    pub fn to_f64(&self) -> TensorMap<f64> {
        TensorMap {
            shape: self.shape.clone(),
            sigma: self.sigma.clone(),
            factors: self.factors.iter().map(Matrix::to_f64).collect(),
        }
    }
}

/// All permutations `σ` of the factors with `d_{σ(i)} = d_i`, identity first.
pub fn admissible_permutations(shape: &TensorShape) -> Vec<Vec<usize>> {
    fn extend(shape: &TensorShape, prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let i = prefix.len();
        if i == shape.order() {
            out.push(prefix.clone());
            return;
        }
        for s in 0..shape.order() {
            if !used[s] && shape.dim(s) == shape.dim(i) {
                used[s] = true;
                prefix.push(s);
                extend(shape, prefix, used, out);
                prefix.pop();
                used[s] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(
        shape,
        &mut Vec::new(),
        &mut vec![false; shape.order()],
        &mut out,
    );
    out
}

/// Factor `u` as `x¹ ⊗ ⋯ ⊗ x^l`.
///
/// Peels one factor at a time: the current remainder is unfolded as
/// `d_i × (rest)` and accepted only if its second singular value is at most
/// `tol` times the first. The leading left singular vector (scaled by the
/// singular value) becomes the factor; the right one is carried on.
pub fn decompose_rank_one(
    shape: &TensorShape,
    u: &[f64],
    tol: f64,
) -> Result<DecomposableVector<f64>> {
    shape.check_vector(u)?;
    if u.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroVector);
    }
    let l = shape.order();
    let mut factors = Vec::with_capacity(l);
    let mut rest = u.to_vec();
    for i in 0..l - 1 {
        let rows = shape.dim(i);
        let m = Matrix::from_row_major(rows, rest.len() / rows, rest.clone())?;
        let svd = m.svd();
        let s0 = svd.s[0];
        let s1 = svd.s.get(1).copied().unwrap_or(0.0);
        if s1 > tol * s0 {
            return Err(Error::NotDecomposable { ratio: s1 / s0 });
        }
        factors.push(linalg::scaled(&svd.u.column(0), &s0));
        rest = svd.v.column(0);
    }
    factors.push(rest);
    let out = DecomposableVector { factors };
    let err: f64 = out
        .flatten()
        .iter()
        .zip(u)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let scale = linalg::norm2(u);
    if libm::sqrt(err) > tol.max(1e-12) * scale * 10.0 {
        return Err(Error::NotDecomposable {
            ratio: libm::sqrt(err) / scale,
        });
    }
    Ok(out)
}
