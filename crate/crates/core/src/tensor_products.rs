//! Projective, injective and Hilbertian tensor products of bodies.
//!
//! `Q₁ ⊗_π ⋯ ⊗_π Q_l = conv{x¹⊗⋯⊗x^l : x^i ∈ Q_i}` and
//! `Q₁ ⊗_ε ⋯ ⊗_ε Q_l = (Q₁° ⊗_π ⋯ ⊗_π Q_l°)°`. For polytopes both are
//! materialized from Kronecker products of generators; for two ellipsoids the
//! product gauges are nuclear and spectral norms of a reshaped tensor.

use alloc::format;
use alloc::vec::Vec;

use crate::body::{dedup_up_to_sign, max_abs_pairing, Body, GaugeResult, GaugeWitness, Representation};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lp;
use crate::scalar::Scalar;
use crate::tensor_space::{kron_vectors, TensorShape};

/// Duplicate tolerance for Kronecker-expanded generator lists.
pub const KRON_DEDUP_TOL: f64 = 1e-12;

fn check_factors<S: Scalar>(shape: &TensorShape, factors: &[Body<S>]) -> Result<()> {
    if factors.len() != shape.order() {
        return Err(Error::ShapeMismatch {
            expected: shape.order(),
            found: factors.len(),
        });
    }
    for (i, f) in factors.iter().enumerate() {
        if f.dim() != shape.dim(i) {
            return Err(Error::ShapeMismatch {
                expected: shape.dim(i),
                found: f.dim(),
            });
        }
    }
    Ok(())
}

/// All Kronecker products `v¹⊗⋯⊗v^l`, one vector per list, last list fastest.
pub fn kron_family<S: Scalar>(lists: &[Vec<Vec<S>>]) -> Vec<Vec<S>> {
    let mut idx = alloc::vec![0usize; lists.len()];
    let total: usize = lists.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    for _ in 0..total {
        let picks: Vec<Vec<S>> = idx.iter().zip(lists).map(|(&k, l)| l[k].clone()).collect();
        out.push(kron_vectors(&picks));
        for pos in (0..lists.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
    out
}

fn factor_generators<S: Scalar>(factors: &[Body<S>]) -> Result<Vec<Vec<Vec<S>>>> {
    factors
        .iter()
        .map(|f| {
            if !f.is_polytope() {
                return Err(Error::NotPolytopal(format!("{} factor", f.kind())));
            }
            Ok(f.to_v_rep()?.generators().expect("v-rep").to_vec())
        })
        .collect()
}

fn factor_normals<S: Scalar>(factors: &[Body<S>]) -> Result<Vec<Vec<Vec<S>>>> {
    factors
        .iter()
        .map(|f| {
            if !f.is_polytope() {
                return Err(Error::NotPolytopal(format!("{} factor", f.kind())));
            }
            Ok(f.to_h_rep()?.normals().expect("h-rep").to_vec())
        })
        .collect()
}

/// The projective product as a V-polytope. H-polytope factors are converted
/// to vertices first.
pub fn pi_product<S: Scalar>(shape: &TensorShape, factors: &[Body<S>]) -> Result<Body<S>> {
    check_factors(shape, factors)?;
    let gens = factor_generators(factors)?;
    Body::v_polytope(dedup_up_to_sign(kron_family(&gens), KRON_DEDUP_TOL))
}

/// The injective product as an H-polytope whose normals are Kronecker
/// products of the polar factors' generators.
pub fn eps_product<S: Scalar>(shape: &TensorShape, factors: &[Body<S>]) -> Result<Body<S>> {
    check_factors(shape, factors)?;
    let normals = factor_normals(factors)?;
    Body::h_polytope(dedup_up_to_sign(kron_family(&normals), KRON_DEDUP_TOL))
}

/// `M₁ ⊗ ⋯ ⊗ M_l` for ellipsoid factors (the ℓ₂ ball counts as `I`).
pub fn hilbert_product<S: Scalar>(shape: &TensorShape, factors: &[Body<S>]) -> Result<Body<S>> {
    check_factors(shape, factors)?;
    let mats = factors
        .iter()
        .map(|f| {
            f.materialize()?
                .ellipsoid_matrix()
                .cloned()
                .ok_or_else(|| Error::NotPolytopal(format!("hilbert product needs ellipsoids, got {}", f.kind())))
        })
        .collect::<Result<Vec<_>>>()?;
    Body::ellipsoid(Matrix::kron_all(&mats))
}

/// `(L₁ᵀ U L₂)` where `M_i = L_i L_iᵀ` and `U` is `u` reshaped `d₁ × d₂`;
/// its nuclear and spectral norms are the π and ε gauges.
fn whitened_matrix<S: Scalar>(shape: &TensorShape, factors: &[Body<S>], u: &[S]) -> Result<Option<Matrix<f64>>> {
    if shape.order() != 2 {
        return Ok(None);
    }
    let mut ls = Vec::with_capacity(2);
    for f in factors {
        match f.materialize()?.rep() {
            Representation::Ellipsoid { matrix } => ls.push(matrix.to_f64().cholesky()?),
            _ => return Ok(None),
        }
    }
    let uf: Vec<f64> = u.iter().map(S::to_f64).collect();
    let um = shape.unfold(&uf, 1)?;
    Ok(Some(ls[0].transpose().matmul(&um)?.matmul(&ls[1])?))
}

fn check_vector<S>(shape: &TensorShape, u: &[S]) -> Result<()> {
    if u.len() != shape.total() {
        return Err(Error::ShapeMismatch {
            expected: shape.total(),
            found: u.len(),
        });
    }
    Ok(())
}

/// Projective gauge without materializing the product body.
pub fn gauge_pi<S: Scalar>(shape: &TensorShape, factors: &[Body<S>], u: &[S]) -> Result<GaugeResult<S>> {
    check_factors(shape, factors)?;
    check_vector(shape, u)?;
    if factors.iter().all(Body::is_polytope) {
        let gens = dedup_up_to_sign(kron_family(&factor_generators(factors)?), KRON_DEDUP_TOL);
        if u.iter().all(|v| v.is_zero()) {
            return Ok(GaugeResult { value: S::zero(), witness: None });
        }
        let (value, lambda) = lp::min_l1_combination(&gens, u)
            .ok_or_else(|| Error::DegenerateBody("product generators do not span".into()))?;
        return Ok(GaugeResult {
            value,
            witness: Some(GaugeWitness::Multipliers(lambda)),
        });
    }
    match whitened_matrix(shape, factors, u)? {
        Some(w) => Ok(GaugeResult {
            value: S::from_f64(w.nuclear_norm()),
            witness: None,
        }),
        None => Err(Error::NotPolytopal(
            "projective gauge needs polytope factors or two ellipsoids".into(),
        )),
    }
}

/// Injective gauge without materializing the product body.
pub fn gauge_eps<S: Scalar>(shape: &TensorShape, factors: &[Body<S>], u: &[S]) -> Result<GaugeResult<S>> {
    check_factors(shape, factors)?;
    check_vector(shape, u)?;
    if factors.iter().all(Body::is_polytope) {
        let normals = kron_family(&factor_normals(factors)?);
        let (idx, value) = max_abs_pairing(&normals, u);
        return Ok(GaugeResult {
            value,
            witness: Some(GaugeWitness::ActiveConstraint(idx)),
        });
    }
    match whitened_matrix(shape, factors, u)? {
        Some(w) => Ok(GaugeResult {
            value: S::from_f64(w.spectral_norm()),
            witness: None,
        }),
        None => Err(Error::NotPolytopal(
            "injective gauge needs polytope factors or two ellipsoids".into(),
        )),
    }
}
