//! Deciding whether a body is tensorial.
//!
//! Fix a decomposable `a¹⊗⋯⊗a^l` on the boundary of `Q` and let
//! `Q_i = {x : a¹⊗⋯⊗x⊗⋯⊗a^l ∈ Q}` be the section bodies. `Q` is tensorial
//! exactly when `Q₁ ⊗_π ⋯ ⊗_π Q_l ⊆ Q ⊆ Q₁ ⊗_ε ⋯ ⊗_ε Q_l`, and the answer
//! does not depend on which boundary decomposable is chosen. Both inclusions
//! are checked on extreme points: products of section vertices against the
//! gauge of `Q`, and vertices of `Q` against the injective constraints.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::body::{dedup_up_to_sign, enumerate_vertices, irredundant_normals, Body, Representation};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::multilinear::{max_decomposable_form, AltMaxOptions};
use crate::random;
use crate::scalar::Scalar;
use crate::tensor_products::{gauge_pi, kron_family, KRON_DEDUP_TOL};
use crate::tensor_space::{unit, DecomposableVector, TensorShape};

/// Upper limit on the number of product vertices or constraints examined.
pub const MAX_PRODUCT_CANDIDATES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct SectionFamily<S> {
    pub anchor: DecomposableVector<S>,
    pub sections: Vec<Body<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation<S> {
    /// `x¹⊗⋯⊗x^l` with every `x^i` in its section but `g_Q > 1`.
    ProductPointOutside { factors: Vec<Vec<S>>, gauge: S },
    /// A point of `Q` and a decomposable functional `z¹⊗⋯⊗z^l` with each
    /// `z^i` in the polar section, pairing to more than 1.
    InjectiveConstraint {
        point: Vec<S>,
        functional: Vec<Vec<S>>,
        value: S,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TensorialityReport<S> {
    pub verdict: bool,
    pub sections: SectionFamily<S>,
    pub violation: Option<Violation<S>>,
    /// Largest `g_Q` seen on the projective product of the sections.
    pub pi_inclusion: S,
    /// Largest injective-constraint value seen on `Q`.
    pub eps_inclusion: S,
}

#[derive(Clone, Debug)]
pub struct TensorialityOptions {
    pub tol: f64,
    pub altmax: AltMaxOptions,
    /// Repeat the float-mode decision at a random boundary anchor and
    /// report [`Error::NumericallyAmbiguous`] if the verdicts differ.
    pub cross_check: bool,
    pub seed: u64,
}

impl Default for TensorialityOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            altmax: AltMaxOptions::default(),
            cross_check: true,
            seed: 0x7e45,
        }
    }
}

impl TensorialityOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

fn check_body<S: Scalar>(shape: &TensorShape, q: &Body<S>) -> Result<()> {
    if q.dim() != shape.total() {
        return Err(Error::ShapeMismatch {
            expected: shape.total(),
            found: q.dim(),
        });
    }
    Ok(())
}

/// Rescale the last factor so that `x¹⊗⋯⊗x^l` lies on `∂Q`.
pub fn boundary_anchor<S: Scalar>(shape: &TensorShape, q: &Body<S>, mut factors: Vec<Vec<S>>) -> Result<DecomposableVector<S>> {
    check_body(shape, q)?;
    let g = q.gauge_value(&shape.kron(&factors)?)?;
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    let last = factors.last_mut().expect("order ≥ 1");
    *last = linalg::scaled(last, &(S::one() / g));
    Ok(DecomposableVector::new(factors))
}

/// `(e₁, …, e₁, λe₁)` with `λ = 1/g_Q(e₁⊗⋯⊗e₁)`.
pub fn canonical_anchor<S: Scalar>(shape: &TensorShape, q: &Body<S>) -> Result<DecomposableVector<S>> {
    let factors = shape.dims().iter().map(|&d| unit(d, 0)).collect();
    boundary_anchor(shape, q, factors)
}

fn random_anchor<S: Scalar>(shape: &TensorShape, q: &Body<S>, seed: u64) -> Result<DecomposableVector<S>> {
    let mut rng = random::seeded(seed);
    let factors = shape
        .dims()
        .iter()
        .map(|&d| random::gaussian_vec(&mut rng, d).iter().map(|&v| S::from_f64(v)).collect())
        .collect();
    boundary_anchor(shape, q, factors)
}

/// H-representation or ellipsoid form of `Q`, converting a V-polytope by
/// enumerating the vertices of its polar.
fn sliceable<S: Scalar>(q: &Body<S>) -> Result<Body<S>> {
    let q = q.materialize()?;
    match q.rep() {
        Representation::HPolytope { .. } | Representation::Ellipsoid { .. } => Ok(q),
        Representation::VPolytope { .. } => q.to_h_rep(),
        Representation::LpBall { p } => Err(Error::NotPolytopal(format!("ℓ_{p} ball"))),
    }
}

fn slice<S: Scalar>(shape: &TensorShape, q: &Body<S>, anchor: &DecomposableVector<S>, i: usize) -> Result<Body<S>> {
    let j = shape.slot_embedding(&anchor.factors, i)?;
    match q.rep() {
        Representation::HPolytope { normals } => {
            let pulled: Vec<Vec<S>> = normals
                .iter()
                .map(|a| j.tr_mul_vec(a))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|v| !linalg::is_zero_vec(v))
                .collect();
            let pulled = irredundant_normals(dedup_up_to_sign(pulled, KRON_DEDUP_TOL));
            Body::h_polytope(pulled).map_err(|_| Error::DegenerateSection { factor: i })
        }
        Representation::Ellipsoid { matrix } => {
            let m = j.transpose().matmul(matrix)?.matmul(&j)?;
            Body::ellipsoid(m).map_err(|_| Error::DegenerateSection { factor: i })
        }
        _ => unreachable!("sliceable returns H-polytopes or ellipsoids"),
    }
}

/// The `i`-th section body of `Q` at `anchor`, i.e. the pullback of `Q`
/// under `x ↦ a¹⊗⋯⊗x⊗⋯⊗a^l`.
pub fn section_body<S: Scalar>(shape: &TensorShape, q: &Body<S>, anchor: &DecomposableVector<S>, i: usize) -> Result<Body<S>> {
    check_body(shape, q)?;
    check_anchor(shape, anchor)?;
    slice(shape, &sliceable(q)?, anchor, i)
}

fn check_anchor<S: Scalar>(shape: &TensorShape, anchor: &DecomposableVector<S>) -> Result<()> {
    if anchor.factors.len() != shape.order() {
        return Err(Error::ShapeMismatch {
            expected: shape.order(),
            found: anchor.factors.len(),
        });
    }
    for (i, f) in anchor.factors.iter().enumerate() {
        if f.len() != shape.dim(i) {
            return Err(Error::ShapeMismatch {
                expected: shape.dim(i),
                found: f.len(),
            });
        }
        if linalg::is_zero_vec(f) {
            return Err(Error::ZeroVector);
        }
    }
    Ok(())
}

pub fn sections_at<S: Scalar>(shape: &TensorShape, q: &Body<S>, anchor: &DecomposableVector<S>) -> Result<SectionFamily<S>> {
    check_body(shape, q)?;
    check_anchor(shape, anchor)?;
    let qs = sliceable(q)?;
    let sections = (0..shape.order())
        .map(|i| slice(shape, &qs, anchor, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(SectionFamily {
        anchor: anchor.clone(),
        sections,
    })
}

fn guard_product(counts: impl Iterator<Item = usize>) -> Result<()> {
    let mut total: usize = 1;
    for c in counts {
        total = total.saturating_mul(c);
    }
    if total > MAX_PRODUCT_CANDIDATES {
        return Err(Error::DimensionTooLarge(format!(
            "{total} product candidates exceed the limit of {MAX_PRODUCT_CANDIDATES}"
        )));
    }
    Ok(())
}

fn decide_polytope<S: Scalar>(
    shape: &TensorShape,
    q: &Body<S>,
    anchor: &DecomposableVector<S>,
    tol: f64,
) -> Result<TensorialityReport<S>> {
    let qh = sliceable(q)?;
    let qv = q.to_v_rep()?;
    let family = SectionFamily {
        anchor: anchor.clone(),
        sections: (0..shape.order())
            .map(|i| slice(shape, &qh, anchor, i))
            .collect::<Result<Vec<_>>>()?,
    };
    let limit = S::one() + S::tol(tol);

    // lower inclusion: products of section vertices stay in Q
    let vertex_lists: Vec<Vec<Vec<S>>> = family
        .sections
        .iter()
        .map(|s| Ok(enumerate_vertices(s)?.generators().expect("v-rep").to_vec()))
        .collect::<Result<_>>()?;
    guard_product(vertex_lists.iter().map(Vec::len))?;
    let mut pi_max = S::zero();
    let mut pi_arg: Option<Vec<usize>> = None;
    let mut idx = vec![0usize; vertex_lists.len()];
    let total: usize = vertex_lists.iter().map(Vec::len).product();
    for _ in 0..total {
        let picks: Vec<Vec<S>> = idx.iter().zip(&vertex_lists).map(|(&k, l)| l[k].clone()).collect();
        let g = qh.gauge_value(&shape.kron(&picks)?)?;
        if g > pi_max {
            pi_max = g;
            pi_arg = Some(idx.clone());
        }
        for pos in (0..idx.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < vertex_lists[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }

    // upper inclusion: vertices of Q satisfy the injective constraints
    let normal_lists: Vec<Vec<Vec<S>>> = family
        .sections
        .iter()
        .map(|s| s.normals().expect("sections are H-polytopes").to_vec())
        .collect();
    guard_product(normal_lists.iter().map(Vec::len))?;
    let constraints = kron_family(&normal_lists);
    let mut eps_max = S::zero();
    let mut eps_arg = (0usize, 0usize);
    for (vi, v) in qv.generators().expect("v-rep").iter().enumerate() {
        for (ci, c) in constraints.iter().enumerate() {
            let val = linalg::dot(c, v).abs();
            if val > eps_max {
                eps_max = val;
                eps_arg = (vi, ci);
            }
        }
    }

    let violation = if pi_max > limit {
        let idx = pi_arg.expect("set with max");
        Some(Violation::ProductPointOutside {
            factors: idx.iter().zip(&vertex_lists).map(|(&k, l)| l[k].clone()).collect(),
            gauge: pi_max.clone(),
        })
    } else if eps_max > limit {
        let point = qv.generators().expect("v-rep")[eps_arg.0].clone();
        let mut functional = Vec::with_capacity(normal_lists.len());
        let mut rest = eps_arg.1;
        for l in normal_lists.iter().rev() {
            functional.push(l[rest % l.len()].clone());
            rest /= l.len();
        }
        functional.reverse();
        Some(Violation::InjectiveConstraint {
            point,
            functional,
            value: eps_max.clone(),
        })
    } else {
        None
    };
    Ok(TensorialityReport {
        verdict: violation.is_none(),
        sections: family,
        violation,
        pi_inclusion: pi_max,
        eps_inclusion: eps_max,
    })
}

fn decide_ellipsoid<S: Scalar>(
    shape: &TensorShape,
    q: &Body<S>,
    anchor: &DecomposableVector<S>,
    opts: &TensorialityOptions,
) -> Result<TensorialityReport<S>> {
    let family = sections_at(shape, q, anchor)?;
    let m = q.ellipsoid_matrix().expect("ellipsoid").to_f64();
    let chol: Vec<Matrix<f64>> = family
        .sections
        .iter()
        .map(|s| s.ellipsoid_matrix().expect("ellipsoid sections").to_f64().cholesky())
        .collect::<Result<_>>()?;
    // x^i = L_i⁻ᵀ y^i runs over the section boundary as y^i runs over spheres
    let w = Matrix::kron_all(&chol);
    let w_inv = w.inverse()?;
    let k_pi = w_inv.matmul(&m)?.matmul(&w_inv.transpose())?;
    let k_eps = w.transpose().matmul(&m.inverse()?)?.matmul(&w)?;
    let pi_best = max_decomposable_form(shape, &k_pi, &opts.altmax)?;
    let eps_best = max_decomposable_form(shape, &k_eps, &opts.altmax)?;
    let pi_val = libm::sqrt(pi_best.value.max(0.0));
    let eps_val = libm::sqrt(eps_best.value.max(0.0));
    let limit = 1.0 + opts.tol;
    let to_s = |v: &[f64]| -> Vec<S> { v.iter().map(|&x| S::from_f64(x)).collect() };

    let violation = if pi_val > limit {
        let factors = pi_best
            .factors
            .iter()
            .zip(&chol)
            .map(|(y, l)| l.transpose().solve(y).map(|x| to_s(&x)))
            .collect::<Result<Vec<_>>>()?;
        Some(Violation::ProductPointOutside {
            factors,
            gauge: S::from_f64(pi_val),
        })
    } else if eps_val > limit {
        let zs: Vec<Vec<f64>> = eps_best
            .factors
            .iter()
            .zip(&chol)
            .map(|(y, l)| l.mul_vec(y))
            .collect::<Result<_>>()?;
        let z = shape.kron(&zs)?;
        // the point of ∂Q where the functional z attains its support value
        let mz = m.solve(&z)?;
        let point = linalg::scaled(&mz, &(1.0 / eps_val));
        Some(Violation::InjectiveConstraint {
            point: to_s(&point),
            functional: zs.iter().map(|v| to_s(v)).collect(),
            value: S::from_f64(eps_val),
        })
    } else {
        None
    };
    Ok(TensorialityReport {
        verdict: violation.is_none(),
        sections: family,
        violation,
        pi_inclusion: S::from_f64(pi_val),
        eps_inclusion: S::from_f64(eps_val),
    })
}

/// Decide tensoriality using the sections at a given boundary anchor.
pub fn tensoriality_at<S: Scalar>(
    shape: &TensorShape,
    q: &Body<S>,
    anchor: &DecomposableVector<S>,
    opts: &TensorialityOptions,
) -> Result<TensorialityReport<S>> {
    check_body(shape, q)?;
    check_anchor(shape, anchor)?;
    let q = q.materialize()?;
    match q.rep() {
        Representation::Ellipsoid { .. } => decide_ellipsoid(shape, &q, anchor, opts),
        Representation::LpBall { p } => Err(Error::NotPolytopal(format!("ℓ_{p} ball"))),
        _ => decide_polytope(shape, &q, anchor, opts.tol),
    }
}

pub fn is_tensorial<S: Scalar>(shape: &TensorShape, q: &Body<S>, tol: f64) -> Result<TensorialityReport<S>> {
    is_tensorial_with(shape, q, &TensorialityOptions::with_tol(tol))
}

/// Decide at the canonical anchor; in float mode also at a random anchor.
pub fn is_tensorial_with<S: Scalar>(shape: &TensorShape, q: &Body<S>, opts: &TensorialityOptions) -> Result<TensorialityReport<S>> {
    let anchor = canonical_anchor(shape, q)?;
    let report = tensoriality_at(shape, q, &anchor, opts)?;
    if opts.cross_check && !S::EXACT {
        let other = random_anchor(shape, q, opts.seed)?;
        if tensoriality_at(shape, q, &other, opts)?.verdict != report.verdict {
            return Err(Error::NumericallyAmbiguous);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationCheck {
    pub passed: bool,
    pub samples: usize,
    /// Largest relative deviation over both the body and its polar.
    pub max_rel_error: f64,
    /// First sampled factor tuple that broke the identity.
    pub failure: Option<Vec<Vec<f64>>>,
}

/// Sample `x¹, …, x^l` and compare `g_Q(⊗x^i)` with `Π g_{Q_i}(x^i)`, and
/// `g_{Q°}(⊗x^i)` with `Π g_{Q_i°}(x^i)`.
pub fn factorization_check<S: Scalar>(
    shape: &TensorShape,
    q: &Body<S>,
    sections: &[Body<S>],
    n_samples: usize,
    tol: f64,
    seed: u64,
) -> Result<FactorizationCheck> {
    check_body(shape, q)?;
    if sections.len() != shape.order() {
        return Err(Error::ShapeMismatch {
            expected: shape.order(),
            found: sections.len(),
        });
    }
    let q_polar = q.polar()?;
    let polars = sections.iter().map(Body::polar).collect::<Result<Vec<_>>>()?;
    let mut rng = random::seeded(seed);
    let mut out = FactorizationCheck {
        passed: true,
        samples: 0,
        max_rel_error: 0.0,
        failure: None,
    };
    for _ in 0..n_samples {
        let xs_f: Vec<Vec<f64>> = shape.dims().iter().map(|&d| random::gaussian_vec(&mut rng, d)).collect();
        let xs: Vec<Vec<S>> = xs_f.iter().map(|x| x.iter().map(|&v| S::from_f64(v)).collect()).collect();
        let u = shape.kron(&xs)?;
        let mut sample_ok = true;
        for (body, factors) in [(q, sections), (&q_polar, polars.as_slice())] {
            let lhs = body.gauge_value(&u)?;
            let rhs = xs
                .iter()
                .zip(factors)
                .try_fold(S::one(), |acc, (x, f)| Ok::<_, Error>(acc * f.gauge_value(x)?))?;
            let diff = (lhs - rhs.clone()).abs();
            let rel = diff.to_f64() / rhs.to_f64().max(f64::MIN_POSITIVE);
            out.max_rel_error = out.max_rel_error.max(rel);
            if diff > S::tol(tol) * rhs {
                sample_ok = false;
            }
        }
        out.samples += 1;
        if !sample_ok && out.passed {
            out.passed = false;
            out.failure = Some(xs_f);
        }
    }
    Ok(out)
}

/// Find `λ_i` with `B_i = λ_i A_i` and `Π λ_i = 1`, or explain why not.
pub fn sections_unique_up_to_scaling<S: Scalar>(
    family_a: &[Body<S>],
    family_b: &[Body<S>],
    tol: f64,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<S>> {
    if family_a.len() != family_b.len() {
        return Err(Error::ShapeMismatch {
            expected: family_a.len(),
            found: family_b.len(),
        });
    }
    let mut rng = random::seeded(seed);
    let mut lambdas = Vec::with_capacity(family_a.len());
    for (i, (a, b)) in family_a.iter().zip(family_b).enumerate() {
        if a.dim() != b.dim() {
            return Err(Error::ShapeMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        // Coordinate directions first so exact-mode probes stay simple.
        let mut probes: Vec<Vec<S>> = (0..a.dim()).map(|k| unit(a.dim(), k)).collect();
        for _ in 0..n_samples {
            probes.push(random::gaussian_vec(&mut rng, a.dim()).iter().map(|&v| S::from_f64(v)).collect());
        }
        let mut lambda: Option<S> = None;
        for v in &probes {
            let r = a.gauge_value(v)? / b.gauge_value(v)?;
            match &lambda {
                None => lambda = Some(r),
                Some(l) => {
                    if (r.clone() - l.clone()).abs() > S::tol(tol) * l.clone() {
                        return Err(Error::NotProportional(format!(
                            "factor {i}: gauge ratios {} and {} differ",
                            l.to_f64(),
                            r.to_f64()
                        )));
                    }
                }
            }
        }
        lambdas.push(lambda.expect("at least one probe"));
    }
    let prod = lambdas.iter().fold(S::one(), |acc, l| acc * l.clone());
    if (prod.clone() - S::one()).abs() > S::tol(tol) {
        return Err(Error::NotProportional(format!(
            "scalings multiply to {} instead of 1",
            prod.to_f64()
        )));
    }
    Ok(lambdas)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport<S> {
    pub polar: TensorialityReport<S>,
    pub scaled: TensorialityReport<S>,
}

/// Check that `Q°` and `λQ` are tensorial with sections `Q_i°` and
/// `(Q₁, …, λQ_k, …, Q_l)` (up to the usual rescaling).
pub fn polar_and_scaling_closure<S: Scalar>(
    shape: &TensorShape,
    q: &Body<S>,
    report: &TensorialityReport<S>,
    lambda: &S,
    k: usize,
    opts: &TensorialityOptions,
) -> Result<ClosureReport<S>> {
    if k >= shape.order() {
        return Err(Error::IndexOutOfRange {
            axis: 0,
            index: k,
            dim: shape.order(),
        });
    }
    let polar = is_tensorial_with(shape, &q.polar()?, opts)?;
    let scaled = is_tensorial_with(shape, &q.scaled(lambda)?, opts)?;
    if report.verdict {
        if !polar.verdict {
            return Err(Error::ClosureFailed("polar body is not tensorial".into()));
        }
        if !scaled.verdict {
            return Err(Error::ClosureFailed("scaled body is not tensorial".into()));
        }
        let expected_polar = report.sections.sections.iter().map(Body::polar).collect::<Result<Vec<_>>>()?;
        sections_unique_up_to_scaling(&polar.sections.sections, &expected_polar, opts.tol.max(1e-9), 20, opts.seed)
            .map_err(|e| Error::ClosureFailed(format!("polar sections: {e}")))?;
        let mut expected_scaled = report.sections.sections.clone();
        expected_scaled[k] = expected_scaled[k].scaled(lambda)?;
        sections_unique_up_to_scaling(&scaled.sections.sections, &expected_scaled, opts.tol.max(1e-9), 20, opts.seed)
            .map_err(|e| Error::ClosureFailed(format!("scaled sections: {e}")))?;
    }
    Ok(ClosureReport { polar, scaled })
}

/// For `Q ⊂ ℝ¹ ⊗ ℝ^d` return `Q̃ = {x : 1⊗x ∈ Q}`, checking
/// `Q = [−1,1] ⊗_π Q̃` on `n_rays` random directions.
pub fn trivial_case_decompose<S: Scalar>(shape: &TensorShape, q: &Body<S>, n_rays: usize, seed: u64) -> Result<Body<S>> {
    if shape.order() != 2 || shape.dim(0) != 1 {
        return Err(Error::ShapeMismatch {
            expected: 1,
            found: shape.dim(0),
        });
    }
    check_body(shape, q)?;
    let q_tilde = q.clone();
    let q_m = q.materialize()?;
    let segment = match q_m.rep() {
        Representation::Ellipsoid { .. } => Body::ellipsoid(Matrix::identity(1))?,
        Representation::LpBall { .. } => return Ok(q_tilde),
        _ => Body::v_polytope(vec![vec![S::one()]])?,
    };
    let factors = [segment, q_m.clone()];
    let mut rng = random::seeded(seed);
    for _ in 0..n_rays {
        let u: Vec<S> = random::gaussian_vec(&mut rng, shape.total()).iter().map(|&v| S::from_f64(v)).collect();
        let a = gauge_pi(shape, &factors, &u)?.value;
        let b = q_m.gauge_value(&u)?;
        if (a.clone() - b.clone()).abs() > S::tol(1e-9) * S::max_of(S::one(), b) {
            return Err(Error::ClosureFailed(format!(
                "projective product with the segment differs from the body ({} vs gauge)",
                a.to_f64()
            )));
        }
    }
    Ok(q_tilde)
}

/// Diagonal ellipsoid in `ℝ^m ⊗ ℝ^n` with weights `1/3` at `(1,1)`, `1/2`
/// at `(m,n)` and 1 elsewhere. Not tensorial for any `m, n ≥ 2`.
pub fn counterexample_body<S: Scalar>(m: usize, n: usize) -> Result<Body<S>> {
    if m < 2 || n < 2 {
        return Err(Error::InvalidDimension(format!("need m, n ≥ 2, got ({m}, {n})")));
    }
    let d = m * n;
    let diag: Vec<S> = (0..d)
        .map(|k| match k {
            0 => S::from_ratio(1, 3),
            k if k == d - 1 => S::from_ratio(1, 2),
            _ => S::one(),
        })
        .collect();
    Body::ellipsoid(Matrix::from_diag(&diag))
}
