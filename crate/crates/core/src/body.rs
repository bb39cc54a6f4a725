//! 0-symmetric convex bodies and their Minkowski gauges.
//!
//! A body is stored through one point of each `±` pair: a V-polytope is
//! `conv{±g_k}`, an H-polytope is `{x : |⟨a_j, x⟩| ≤ 1}`, an ellipsoid is
//! `{x : xᵀMx ≤ 1}`. Symmetry therefore holds by construction.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::lp;
use crate::scalar::Scalar;
use crate::tensor_space::unit;

/// Enumeration guard for H → V conversion.
pub const MAX_ENUMERATION_DIM: usize = 8;
pub const MAX_ENUMERATION_PAIRS: usize = 64;
/// Cap on the number of `d`-subsets of constraints tried.
pub const MAX_ENUMERATION_SUBSETS: u128 = 2_000_000;

/// Tolerance used to merge coincident vertices.
pub const VERTEX_DEDUP_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Representation<S> {
    VPolytope { generators: Vec<Vec<S>> },
    HPolytope { normals: Vec<Vec<S>> },
    Ellipsoid { matrix: Matrix<S> },
    /// Unit ball of ℓ_p; `p = f64::INFINITY` for the cube.
    LpBall { p: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Body<S> {
    dim: usize,
    rep: Representation<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GaugeWitness<S> {
    /// Index of the constraint attaining `max_j |⟨a_j, x⟩|`.
    ActiveConstraint(usize),
    /// Optimal `λ` with `x = Σ λ_k g_k`.
    Multipliers(Vec<S>),
    /// A functional `y` with `⟨y, x⟩ = g(x)` and support value 1.
    MaximizingDirection(Vec<S>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeResult<S> {
    pub value: S,
    pub witness: Option<GaugeWitness<S>>,
}

fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn lp_norm<S: Scalar>(x: &[S], p: f64) -> S {
    if p == 1.0 {
        x.iter().fold(S::zero(), |acc, v| acc + v.abs())
    } else if p.is_infinite() {
        linalg::max_abs(x)
    } else if p == 2.0 {
        linalg::dot(x, x).sqrt()
    } else {
        let s: f64 = x.iter().map(|v| libm::pow(libm::fabs(v.to_f64()), p)).sum();
        S::from_f64(libm::pow(s, 1.0 / p))
    }
}

fn check_family<S: Scalar>(dim: usize, vecs: &[Vec<S>], what: &str) -> Result<()> {
    if dim == 0 {
        return Err(Error::DegenerateBody("zero ambient dimension".into()));
    }
    for v in vecs {
        if v.len() != dim {
            return Err(Error::ShapeMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        if linalg::is_zero_vec(v) {
            return Err(Error::DegenerateBody(format!("zero {what}")));
        }
    }
    if vecs.is_empty() || Matrix::from_rows(vecs)?.rank(1e-10) < dim {
        return Err(Error::DegenerateBody(format!("{what}s do not span")));
    }
    Ok(())
}

impl<S: Scalar> Body<S> {
    pub fn v_polytope(generators: Vec<Vec<S>>) -> Result<Self> {
        let dim = generators.first().map_or(0, Vec::len);
        check_family(dim, &generators, "generator")?;
        Ok(Self {
            dim,
            rep: Representation::VPolytope { generators },
        })
    }

    pub fn h_polytope(normals: Vec<Vec<S>>) -> Result<Self> {
        let dim = normals.first().map_or(0, Vec::len);
        check_family(dim, &normals, "normal")?;
        Ok(Self {
            dim,
            rep: Representation::HPolytope { normals },
        })
    }

    pub fn ellipsoid(matrix: Matrix<S>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::ShapeMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if !matrix.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self {
            dim: matrix.rows(),
            rep: Representation::Ellipsoid { matrix },
        })
    }

    pub fn lp_ball(dim: usize, p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidP(p));
        }
        if dim == 0 {
            return Err(Error::DegenerateBody("zero ambient dimension".into()));
        }
        Ok(Self {
            dim,
            rep: Representation::LpBall { p },
        })
    }

    /// `B_p^d`. Ellipsoid for `p = 2`; for `p ∈ {1, ∞}` optionally as a
    /// V- resp. H-polytope on the unit vectors.
    pub fn standard_ball(dim: usize, p: f64, materialize: bool) -> Result<Self> {
        let ball = Self::lp_ball(dim, p)?;
        if p == 2.0 || (materialize && (p == 1.0 || p.is_infinite())) {
            ball.materialize()
        } else {
            Ok(ball)
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rep(&self) -> &Representation<S> {
        &self.rep
    }

    pub fn generators(&self) -> Option<&[Vec<S>]> {
        match &self.rep {
            Representation::VPolytope { generators } => Some(generators),
            _ => None,
        }
    }

    pub fn normals(&self) -> Option<&[Vec<S>]> {
        match &self.rep {
            Representation::HPolytope { normals } => Some(normals),
            _ => None,
        }
    }

    pub fn ellipsoid_matrix(&self) -> Option<&Matrix<S>> {
        match &self.rep {
            Representation::Ellipsoid { matrix } => Some(matrix),
            _ => None,
        }
    }

    pub fn is_polytope(&self) -> bool {
        match &self.rep {
            Representation::VPolytope { .. } | Representation::HPolytope { .. } => true,
            Representation::LpBall { p } => *p == 1.0 || p.is_infinite(),
            Representation::Ellipsoid { .. } => false,
        }
    }

    /// Replace ℓ₁/ℓ∞ balls by polytopes and the ℓ₂ ball by `I`; anything
    /// else is returned unchanged.
    pub fn materialize(&self) -> Result<Self> {
        let Representation::LpBall { p } = self.rep else {
            return Ok(self.clone());
        };
        let units: Vec<Vec<S>> = (0..self.dim).map(|k| unit(self.dim, k)).collect();
        if p == 1.0 {
            Self::v_polytope(units)
        } else if p.is_infinite() {
            Self::h_polytope(units)
        } else if p == 2.0 {
            Self::ellipsoid(Matrix::identity(self.dim))
        } else {
            Ok(self.clone())
        }
    }

    fn check_point(&self, x: &[S]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::ShapeMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn gauge(&self, x: &[S]) -> Result<GaugeResult<S>> {
        self.check_point(x)?;
        match &self.rep {
            Representation::HPolytope { normals } => {
                let (idx, value) = max_abs_pairing(normals, x);
                Ok(GaugeResult {
                    value,
                    witness: Some(GaugeWitness::ActiveConstraint(idx)),
                })
            }
            Representation::VPolytope { generators } => {
                if linalg::is_zero_vec(x) {
                    return Ok(GaugeResult {
                        value: S::zero(),
                        witness: None,
                    });
                }
                let (value, lambda) = lp::min_l1_combination(generators, x)
                    .ok_or_else(|| Error::DegenerateBody("generators do not span".into()))?;
                Ok(GaugeResult {
                    value,
                    witness: Some(GaugeWitness::Multipliers(lambda)),
                })
            }
            Representation::Ellipsoid { matrix } => {
                let mx = matrix.mul_vec(x)?;
                let value = linalg::dot(x, &mx).sqrt();
                let witness = (!value.is_zero())
                    .then(|| GaugeWitness::MaximizingDirection(linalg::scaled(&mx, &(S::one() / value.clone()))));
                Ok(GaugeResult { value, witness })
            }
            Representation::LpBall { p } => Ok(GaugeResult {
                value: lp_norm(x, *p),
                witness: None,
            }),
        }
    }

    pub fn gauge_value(&self, x: &[S]) -> Result<S> {
        Ok(self.gauge(x)?.value)
    }

    /// `h_Q(y) = max_{x ∈ Q} ⟨x, y⟩`, the gauge of the polar body.
    pub fn support(&self, y: &[S]) -> Result<S> {
        self.check_point(y)?;
        match &self.rep {
            Representation::VPolytope { generators } => Ok(max_abs_pairing(generators, y).1),
            Representation::Ellipsoid { matrix } => {
                let z = matrix.solve(y).map_err(|_| Error::NotPositiveDefinite)?;
                Ok(linalg::dot(y, &z).sqrt())
            }
            Representation::HPolytope { .. } => self.polar()?.gauge_value(y),
            Representation::LpBall { p } => Ok(lp_norm(y, conjugate_exponent(*p))),
        }
    }

    pub fn polar(&self) -> Result<Self> {
        let rep = match &self.rep {
            Representation::VPolytope { generators } => Representation::HPolytope {
                normals: generators.clone(),
            },
            Representation::HPolytope { normals } => Representation::VPolytope {
                generators: normals.clone(),
            },
            Representation::Ellipsoid { matrix } => Representation::Ellipsoid {
                matrix: matrix.inverse().map_err(|_| Error::NotPositiveDefinite)?,
            },
            Representation::LpBall { p } => Representation::LpBall {
                p: conjugate_exponent(*p),
            },
        };
        Ok(Self { dim: self.dim, rep })
    }

    pub fn contains(&self, x: &[S], tol: f64) -> Result<bool> {
        Ok(self.gauge_value(x)? <= S::one() + S::tol(tol))
    }

    /// `λ Q` for `λ > 0`.
    pub fn scaled(&self, lambda: &S) -> Result<Self> {
        if !(*lambda > S::zero()) {
            return Err(Error::DegenerateBody("non-positive scale".into()));
        }
        let rep = match &self.materialize()?.rep {
            Representation::VPolytope { generators } => Representation::VPolytope {
                generators: generators.iter().map(|g| linalg::scaled(g, lambda)).collect(),
            },
            Representation::HPolytope { normals } => {
                let inv = S::one() / lambda.clone();
                Representation::HPolytope {
                    normals: normals.iter().map(|a| linalg::scaled(a, &inv)).collect(),
                }
            }
            Representation::Ellipsoid { matrix } => Representation::Ellipsoid {
                matrix: matrix.scale(&(S::one() / (lambda.clone() * lambda.clone()))),
            },
            Representation::LpBall { p } if lambda.is_one() => Representation::LpBall { p: *p },
            Representation::LpBall { p } => {
                return Err(Error::NotPolytopal(format!("scaled ℓ_{p} ball")))
            }
        };
        Ok(Self { dim: self.dim, rep })
    }

    /// The image `T(Q)` under an invertible `T`.
    pub fn linear_image(&self, t: &Matrix<S>) -> Result<Self> {
        if t.rows() != self.dim || t.cols() != self.dim {
            return Err(Error::ShapeMismatch {
                expected: self.dim,
                found: t.rows(),
            });
        }
        let rep = match &self.materialize()?.rep {
            Representation::VPolytope { generators } => Representation::VPolytope {
                generators: generators
                    .iter()
                    .map(|g| t.mul_vec(g))
                    .collect::<Result<_>>()?,
            },
            Representation::HPolytope { normals } => {
                let inv = t.inverse()?;
                Representation::HPolytope {
                    normals: normals
                        .iter()
                        .map(|a| inv.tr_mul_vec(a))
                        .collect::<Result<_>>()?,
                }
            }
            Representation::Ellipsoid { matrix } => {
                let inv = t.inverse()?;
                Representation::Ellipsoid {
                    matrix: inv.transpose().matmul(matrix)?.matmul(&inv)?,
                }
            }
            Representation::LpBall { p } => {
                return Err(Error::NotPolytopal(format!("image of ℓ_{p} ball")))
            }
        };
        Ok(Self { dim: self.dim, rep })
    }

    /// Equivalent V-polytope (vertex enumeration for H-input).
    pub fn to_v_rep(&self) -> Result<Self> {
        let b = self.materialize()?;
        match &b.rep {
            Representation::VPolytope { .. } => Ok(b),
            Representation::HPolytope { .. } => enumerate_vertices(&b),
            _ => Err(Error::NotPolytopal(self.kind().to_string())),
        }
    }

    /// Equivalent H-polytope (facets via the polar's vertices).
    pub fn to_h_rep(&self) -> Result<Self> {
        let b = self.materialize()?;
        match &b.rep {
            Representation::HPolytope { .. } => Ok(b),
            Representation::VPolytope { .. } => enumerate_vertices(&b.polar()?)?.polar(),
            _ => Err(Error::NotPolytopal(self.kind().to_string())),
        }
    }

    pub fn kind(&self) -> &'static str {
        match &self.rep {
            Representation::VPolytope { .. } => "v-polytope",
            Representation::HPolytope { .. } => "h-polytope",
            Representation::Ellipsoid { .. } => "ellipsoid",
            Representation::LpBall { .. } => "lp-ball",
        }
    }

    pub fn to_f64(&self) -> Body<f64> {
        let conv = |vs: &Vec<Vec<S>>| -> Vec<Vec<f64>> {
            vs.iter().map(|v| v.iter().map(S::to_f64).collect()).collect()
        };
        let rep = match &self.rep {
            Representation::VPolytope { generators } => Representation::VPolytope {
                generators: conv(generators),
            },
            Representation::HPolytope { normals } => Representation::HPolytope {
                normals: conv(normals),
            },
            Representation::Ellipsoid { matrix } => Representation::Ellipsoid {
                matrix: matrix.to_f64(),
            },
            Representation::LpBall { p } => Representation::LpBall { p: *p },
        };
        Body { dim: self.dim, rep }
    }
}

/// `(argmax_j, max_j |⟨v_j, x⟩|)`.
pub(crate) fn max_abs_pairing<S: Scalar>(vs: &[Vec<S>], x: &[S]) -> (usize, S) {
    let mut best = (0, S::zero());
    for (j, v) in vs.iter().enumerate() {
        let val = linalg::dot(v, x).abs();
        if val > best.1 {
            best = (j, val);
        }
    }
    best
}

/// Remove duplicates up to sign; survivors keep a positive first nonzero entry.
/// Drop constraints `|⟨a_j, x⟩| ≤ 1` implied by the others, i.e. those with
/// `a_j ∈ conv{±a_k : k ≠ j}`. The body is unchanged.
pub fn irredundant_normals<S: Scalar>(normals: Vec<Vec<S>>) -> Vec<Vec<S>> {
    let mut keep = normals;
    let mut j = 0;
    while j < keep.len() {
        let others: Vec<Vec<S>> = keep.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, a)| a.clone()).collect();
        let redundant = match lp::min_l1_combination(&others, &keep[j]) {
            Some((g, _)) => g <= S::one() + S::tol(1e-12),
            None => false,
        };
        if redundant {
            keep.remove(j);
        } else {
            j += 1;
        }
    }
    keep
}

pub fn dedup_up_to_sign<S: Scalar>(vecs: Vec<Vec<S>>, tol: f64) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = Vec::with_capacity(vecs.len());
    for v in vecs {
        let c = linalg::canonical_sign(&v);
        let slack = S::tol(tol) * S::max_of(S::one(), linalg::max_abs(&c));
        let dup = out.iter().any(|w| {
            w.iter()
                .zip(&c)
                .all(|(a, b)| (a.clone() - b.clone()).abs() <= slack)
        });
        if !dup {
            out.push(c);
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

fn for_each_combination(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 && idx[0] == m - k {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of an H-polytope by brute force over `d`-subsets of constraints.
///
/// For each nonsingular `d × d` subsystem `A_S x = s` with `s ∈ {±1}^d`
/// (first sign fixed, the other half is `-x`), feasible solutions are kept
/// and merged up to sign.
pub fn enumerate_vertices<S: Scalar>(body: &Body<S>) -> Result<Body<S>> {
    let body = body.materialize()?;
    let Representation::HPolytope { normals } = &body.rep else {
        return Err(Error::NotPolytopal(format!(
            "vertex enumeration needs an H-polytope, got {}",
            body.kind()
        )));
    };
    let d = body.dim;
    if d > MAX_ENUMERATION_DIM || normals.len() > MAX_ENUMERATION_PAIRS {
        return Err(Error::DimensionTooLarge(format!(
            "enumeration limited to d ≤ {MAX_ENUMERATION_DIM} and ≤ {MAX_ENUMERATION_PAIRS} constraint pairs (got d = {d}, {} pairs)",
            normals.len()
        )));
    }
    let subsets = binomial(normals.len(), d);
    if subsets > MAX_ENUMERATION_SUBSETS {
        return Err(Error::DimensionTooLarge(format!(
            "{subsets} constraint subsets exceed the limit of {MAX_ENUMERATION_SUBSETS}"
        )));
    }
    let slack = S::one() + S::tol(VERTEX_DEDUP_TOL);
    let mut found: Vec<Vec<S>> = Vec::new();
    for_each_combination(normals.len(), d, |subset| {
        let rows: Vec<Vec<S>> = subset.iter().map(|&j| normals[j].clone()).collect();
        let Ok(inv) = Matrix::from_rows(&rows).and_then(|a| a.inverse()) else {
            return;
        };
        for mask in 0..(1usize << (d - 1)) {
            let signs: Vec<S> = (0..d)
                .map(|k| {
                    if k > 0 && mask & (1 << (k - 1)) != 0 {
                        -S::one()
                    } else {
                        S::one()
                    }
                })
                .collect();
            let x = inv.mul_vec(&signs).expect("square system");
            if max_abs_pairing(normals, &x).1 <= slack {
                found.push(x);
            }
        }
    });
    let vertices = dedup_up_to_sign(found, VERTEX_DEDUP_TOL);
    if vertices.is_empty() {
        return Err(Error::DegenerateBody("no vertices found".into()));
    }
    Body::v_polytope(vertices)
}
