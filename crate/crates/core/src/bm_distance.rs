//! Upper bounds for the tensorial Banach–Mazur distance.
//!
//! For polytopes `P, Q` and an invertible `T`, the smallest `λ` with
//! `Q ⊆ cTP ⊆ λQ` for some `c > 0` is `s_in · s_out`, where
//! `s_in = max_{v ∈ vert Q} g_{TP}(v)` and `s_out = max_{w ∈ vert TP} g_Q(w)`.
//! The search minimizes this over tensor maps (or over all of `GL_d` for the
//! classical distance). Results are certified upper bounds with a witness,
//! never lower bounds.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::body::Body;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::lp::{self, LpOutcome};
use crate::random::{self, SeededRng};
use crate::scalar::Scalar;
use crate::tensor_products::pi_product;
use crate::tensor_space::{admissible_permutations, TensorMap, TensorShape};

/// Factor permutations are enumerated only up to this order.
pub const MAX_PERMUTATION_ORDER: usize = 5;

#[derive(Clone, Debug)]
pub struct DistanceOptions {
    /// Restarts per factor permutation (the first starts from the identity).
    pub budget: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Number of best candidates refined by trust-region linear programs.
    pub polish: usize,
    /// Additional starting maps.
    pub seed_maps: Vec<TensorMap<f64>>,
    /// Known per-factor distance bounds, for the product bound.
    pub factor_bounds: Option<Vec<f64>>,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            budget: 20,
            seed: 7,
            max_iters: 500,
            initial_step: 0.5,
            min_step: 1e-6,
            polish: 3,
            seed_maps: Vec::new(),
            factor_bounds: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceReport<S> {
    pub upper: S,
    /// Witness matrix `T` with `Q ⊆ TP ⊆ upper · Q`.
    pub witness: Matrix<f64>,
    /// The same witness as a tensor map, for the tensorial search.
    pub witness_map: Option<TensorMap<f64>>,
    pub product_bound: Option<f64>,
    pub diameter_bound: f64,
    pub restarts_used: usize,
}

/// Both representations of both bodies.
struct Pair<S> {
    pv: Vec<Vec<S>>,
    pn: Vec<Vec<S>>,
    qv: Vec<Vec<S>>,
    qn: Vec<Vec<S>>,
}

impl<S: Scalar> Pair<S> {
    fn new(p: &Body<S>, q: &Body<S>) -> Result<Self> {
        if p.dim() != q.dim() {
            return Err(Error::ShapeMismatch {
                expected: q.dim(),
                found: p.dim(),
            });
        }
        for b in [p, q] {
            if !b.is_polytope() {
                return Err(Error::NotPolytopal(format!("{} body", b.kind())));
            }
        }
        let reps = |b: &Body<S>| -> Result<(Vec<Vec<S>>, Vec<Vec<S>>)> {
            Ok((
                b.to_v_rep()?.generators().expect("v-rep").to_vec(),
                b.to_h_rep()?.normals().expect("h-rep").to_vec(),
            ))
        };
        let (pv, pn) = reps(p)?;
        let (qv, qn) = reps(q)?;
        Ok(Self { pv, pn, qv, qn })
    }

    fn to_f64(&self) -> Pair<f64> {
        let c = |vs: &Vec<Vec<S>>| vs.iter().map(|v| v.iter().map(S::to_f64).collect()).collect();
        Pair {
            pv: c(&self.pv),
            pn: c(&self.pn),
            qv: c(&self.qv),
            qn: c(&self.qn),
        }
    }

    /// `(s_in, s_out)` for the map `T` with inverse `T⁻¹`.
    fn ratios(&self, t: &Matrix<S>, t_inv: &Matrix<S>) -> (S, S) {
        let mut s_in = S::zero();
        for v in &self.qv {
            let y = t_inv.mul_vec(v).expect("dims");
            for a in &self.pn {
                let val = linalg::dot(a, &y).abs();
                if val > s_in {
                    s_in = val;
                }
            }
        }
        let mut s_out = S::zero();
        for g in &self.pv {
            let w = t.mul_vec(g).expect("dims");
            for b in &self.qn {
                let val = linalg::dot(b, &w).abs();
                if val > s_out {
                    s_out = val;
                }
            }
        }
        (s_in, s_out)
    }
}

/// `s_in · s_out`: the best `λ` for this `T` once it is rescaled by `s_in`.
pub fn lambda_for_map<S: Scalar>(shape: &TensorShape, p: &Body<S>, q: &Body<S>, t: &TensorMap<S>) -> Result<S> {
    if t.shape() != shape || p.dim() != shape.total() {
        return Err(Error::ShapeMismatch {
            expected: shape.total(),
            found: p.dim(),
        });
    }
    let pair = Pair::new(p, q)?;
    let (s_in, s_out) = pair.ratios(&t.to_matrix(), &t.inverse()?.to_matrix());
    Ok(s_in * s_out)
}

/// Parametrization of maps `T = (T₁ ⊗ ⋯ ⊗ T_l) Π_σ` with fixed `σ`.
struct Family {
    dims: Vec<usize>,
    perm: Matrix<f64>,
}

impl Family {
    fn new(shape: &TensorShape, sigma: &[usize]) -> Result<Self> {
        let ident = shape.dims().iter().map(|&d| Matrix::identity(d)).collect();
        let perm = TensorMap::new(shape.clone(), sigma.to_vec(), ident)?.to_matrix();
        Ok(Self {
            dims: shape.dims().to_vec(),
            perm,
        })
    }

    fn n_params(&self) -> usize {
        self.dims.iter().map(|d| d * d).sum()
    }

    fn assemble(&self, factors: &[Matrix<f64>]) -> Option<(Matrix<f64>, Matrix<f64>)> {
        let invs = factors.iter().map(|f| f.inverse().ok()).collect::<Option<Vec<_>>>()?;
        let t = Matrix::kron_all(factors).matmul(&self.perm).ok()?;
        let t_inv = self.perm.transpose().matmul(&Matrix::kron_all(&invs)).ok()?;
        Some((t, t_inv))
    }

    fn objective(&self, pair: &Pair<f64>, factors: &[Matrix<f64>]) -> f64 {
        match self.assemble(factors) {
            Some((t, t_inv)) => {
                let (a, b) = pair.ratios(&t, &t_inv);
                let v = a * b;
                if v.is_finite() {
                    v
                } else {
                    f64::INFINITY
                }
            }
            None => f64::INFINITY,
        }
    }

    /// `∂T/∂(T_i)_{rc}` in parameter order.
    fn tangents(&self, factors: &[Matrix<f64>]) -> Vec<Matrix<f64>> {
        let mut out = Vec::with_capacity(self.n_params());
        for (i, &d) in self.dims.iter().enumerate() {
            for r in 0..d {
                for c in 0..d {
                    let mut fs = factors.to_vec();
                    fs[i] = Matrix::from_fn(d, d, |a, b| if a == r && b == c { 1.0 } else { 0.0 });
                    out.push(Matrix::kron_all(&fs).matmul(&self.perm).expect("dims"));
                }
            }
        }
        out
    }
}

fn normalize(factors: &mut [Matrix<f64>]) {
    for f in factors.iter_mut() {
        let m = f.max_abs();
        if m > 0.0 {
            *f = f.scale(&(1.0 / m));
        }
    }
}

fn perturbed(factors: &[Matrix<f64>], dir: &[f64], step: f64) -> Vec<Matrix<f64>> {
    let mut out = factors.to_vec();
    let mut k = 0;
    for f in out.iter_mut() {
        let (rows, cols) = (f.rows(), f.cols());
        *f = Matrix::from_fn(rows, cols, |r, c| f[(r, c)] + step * dir[k + r * cols + c]);
        k += rows * cols;
    }
    out
}

/// Coordinate moves `±step` on each entry (factors are kept at unit max-norm,
/// so steps are relative), then random-direction moves; the step halves when
/// neither improves.
fn descend(family: &Family, pair: &Pair<f64>, mut factors: Vec<Matrix<f64>>, opts: &DistanceOptions, rng: &mut SeededRng) -> (f64, Vec<Matrix<f64>>) {
    normalize(&mut factors);
    let n = family.n_params();
    let mut best = family.objective(pair, &factors);
    let mut step = opts.initial_step;
    let mut iters = 0;
    while step >= opts.min_step && iters < opts.max_iters && best.is_finite() {
        iters += 1;
        let mut improved = false;
        let mut coord = vec![0.0; n];
        for k in 0..n {
            coord[k] = 1.0;
            for sign in [1.0, -1.0] {
                let trial = perturbed(&factors, &coord, sign * step);
                let val = family.objective(pair, &trial);
                if val < best {
                    best = val;
                    factors = trial;
                    improved = true;
                    break;
                }
            }
            coord[k] = 0.0;
        }
        if !improved {
            for _ in 0..n {
                let dir = random::gaussian_vec(rng, n);
                let scale = linalg::max_abs(&dir);
                let dir = linalg::scaled(&dir, &(1.0 / scale));
                for sign in [1.0, -1.0] {
                    let trial = perturbed(&factors, &dir, sign * step);
                    let val = family.objective(pair, &trial);
                    if val < best {
                        best = val;
                        factors = trial;
                        improved = true;
                        break;
                    }
                }
                if improved {
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
        normalize(&mut factors);
    }
    (best, factors)
}

/// Pairs whose value is within this fraction of the maximum enter the LP.
const ACTIVE_FRACTION: f64 = 0.3;
const MAX_LP_ROWS: usize = 600;

/// Sequential linear programming with a box trust region: linearize
/// `T ↦ T + dT`, `T⁻¹ ↦ T⁻¹ − T⁻¹ dT T⁻¹`, minimize the largest outer
/// pairing subject to inner pairings ≤ 1, accept only actual improvements.
fn polish(family: &Family, pair: &Pair<f64>, mut factors: Vec<Matrix<f64>>, max_rounds: usize) -> (f64, Vec<Matrix<f64>>) {
    normalize(&mut factors);
    let mut best = family.objective(pair, &factors);
    let mut radius = 0.1;
    let n = family.n_params();
    for _ in 0..max_rounds {
        if radius < 1e-13 || !best.is_finite() {
            break;
        }
        let Some((t, t_inv)) = family.assemble(&factors) else { break };
        let (s_in, _) = pair.ratios(&t, &t_inv);
        // rescale so Q ⊆ TP is tight: T → s_in T
        let t = t.scale(&s_in);
        let t_inv = t_inv.scale(&(1.0 / s_in));
        let tangents: Vec<Matrix<f64>> = family.tangents(&factors).iter().map(|m| m.scale(&s_in)).collect();

        // rows: (constant, coefficients) meaning |constant + coeff·δ| ≤ bound
        let mut outer: Vec<(f64, Vec<f64>)> = Vec::new();
        for g in &pair.pv {
            let tg = t.mul_vec(g).expect("dims");
            let dg: Vec<Vec<f64>> = tangents.iter().map(|m| m.mul_vec(g).expect("dims")).collect();
            for b in &pair.qn {
                outer.push((linalg::dot(b, &tg), dg.iter().map(|v| linalg::dot(b, v)).collect()));
            }
        }
        let mut inner: Vec<(f64, Vec<f64>)> = Vec::new();
        for v in &pair.qv {
            let y = t_inv.mul_vec(v).expect("dims");
            let dy: Vec<Vec<f64>> = tangents
                .iter()
                .map(|m| t_inv.mul_vec(&m.mul_vec(&y).expect("dims")).expect("dims"))
                .collect();
            for a in &pair.pn {
                inner.push((linalg::dot(a, &y), dy.iter().map(|w| -linalg::dot(a, w)).collect()));
            }
        }
        let select = |rows: Vec<(f64, Vec<f64>)>| -> Vec<(f64, Vec<f64>)> {
            let top = rows.iter().map(|r| r.0.abs()).fold(0.0, f64::max);
            let mut kept: Vec<_> = rows.into_iter().filter(|r| r.0.abs() >= (1.0 - ACTIVE_FRACTION) * top).collect();
            kept.sort_by(|a, b| b.0.abs().partial_cmp(&a.0.abs()).unwrap_or(core::cmp::Ordering::Equal));
            kept.truncate(MAX_LP_ROWS / 2);
            kept
        };
        let outer = select(outer);
        let inner = select(inner);

        // variables: δ⁺ (n), δ⁻ (n), t, then one slack per inequality
        let n_ineq = 2 * outer.len() + 2 * inner.len() + 2 * n;
        let cols = 2 * n + 1 + n_ineq;
        let mut a = Matrix::zeros(n_ineq, cols);
        let mut rhs = vec![0.0; n_ineq];
        let mut row = 0;
        for (c0, coef) in &outer {
            for sign in [1.0, -1.0] {
                for k in 0..n {
                    a[(row, k)] = sign * coef[k];
                    a[(row, n + k)] = -sign * coef[k];
                }
                a[(row, 2 * n)] = -1.0;
                a[(row, 2 * n + 1 + row)] = 1.0;
                rhs[row] = -sign * c0;
                row += 1;
            }
        }
        for (c0, coef) in &inner {
            for sign in [1.0, -1.0] {
                for k in 0..n {
                    a[(row, k)] = sign * coef[k];
                    a[(row, n + k)] = -sign * coef[k];
                }
                a[(row, 2 * n + 1 + row)] = 1.0;
                rhs[row] = 1.0 - sign * c0;
                row += 1;
            }
        }
        for k in 0..2 * n {
            a[(row, k)] = 1.0;
            a[(row, 2 * n + 1 + row)] = 1.0;
            rhs[row] = radius;
            row += 1;
        }
        let mut cost = vec![0.0; cols];
        cost[2 * n] = 1.0;
        let LpOutcome::Optimal { solution, .. } = lp::solve_standard_form(&a, &rhs, &cost) else {
            radius *= 0.25;
            continue;
        };
        let delta: Vec<f64> = (0..n).map(|k| solution[k] - solution[n + k]).collect();
        let trial = perturbed(&factors, &delta, 1.0);
        let val = family.objective(pair, &trial);
        if val < best {
            let gain = best - val;
            best = val;
            factors = trial;
            normalize(&mut factors);
            radius = (radius * 2.0).min(0.5);
            if gain < 1e-15 {
                break;
            }
        } else {
            radius *= 0.25;
        }
    }
    (best, factors)
}

struct Candidate {
    value: f64,
    sigma: Vec<usize>,
    factors: Vec<Matrix<f64>>,
    /// Position in the deterministic enumeration order (tie-breaker).
    order: usize,
}

fn restart_seed(seed: u64, perm: usize, restart: usize) -> u64 {
    seed ^ (perm as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (restart as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

fn random_start(rng: &mut SeededRng, dims: &[usize]) -> Vec<Matrix<f64>> {
    dims.iter()
        .map(|&d| loop {
            let g = random::gaussian_matrix(rng, d, d);
            if g.svd().s.last().copied().unwrap_or(0.0) > 1e-3 {
                break g;
            }
        })
        .collect()
}

#[cfg(feature = "parallel")]
fn run_all<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_all<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

fn search(
    shape: &TensorShape,
    pair: &Pair<f64>,
    starts_extra: &[TensorMap<f64>],
    opts: &DistanceOptions,
) -> Result<(Vec<Candidate>, usize)> {
    if shape.order() > MAX_PERMUTATION_ORDER {
        return Err(Error::DimensionTooLarge(format!(
            "permutation search limited to order ≤ {MAX_PERMUTATION_ORDER}"
        )));
    }
    let budget = opts.budget.max(1);
    let mut all = Vec::new();
    let mut used = 0;
    for (pi, sigma) in admissible_permutations(shape).into_iter().enumerate() {
        let family = Family::new(shape, &sigma)?;
        let extra: Vec<&TensorMap<f64>> = starts_extra.iter().filter(|m| m.sigma() == sigma.as_slice()).collect();
        let n_starts = budget + extra.len();
        let results = run_all(n_starts, |k| {
            let mut rng = random::seeded(restart_seed(opts.seed, pi, k));
            let start = if k < extra.len() {
                extra[k].factors().to_vec()
            } else if k == extra.len() {
                shape.dims().iter().map(|&d| Matrix::identity(d)).collect()
            } else {
                random_start(&mut rng, shape.dims())
            };
            descend(&family, pair, start, opts, &mut rng)
        });
        used += n_starts;
        let mut ranked: Vec<Candidate> = results
            .into_iter()
            .enumerate()
            .map(|(k, (value, factors))| Candidate {
                value,
                sigma: sigma.clone(),
                factors,
                order: pi * (n_starts + 1) + k,
            })
            .collect();
        ranked.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(core::cmp::Ordering::Equal).then(a.order.cmp(&b.order)));
        let polished = run_all(opts.polish.min(ranked.len()), |k| polish(&family, pair, ranked[k].factors.clone(), 200));
        for (k, (value, factors)) in polished.into_iter().enumerate() {
            if value < ranked[k].value {
                ranked[k].value = value;
                ranked[k].factors = factors;
            }
        }
        all.extend(ranked);
    }
    all.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(core::cmp::Ordering::Equal).then(a.order.cmp(&b.order)));
    Ok((all, used))
}

fn finalize<S: Scalar>(
    shape: &TensorShape,
    pair: &Pair<S>,
    candidates: &[Candidate],
    tensorial: bool,
    opts: &DistanceOptions,
    restarts_used: usize,
) -> Result<DistanceReport<S>> {
    // Re-evaluate the leading candidates in the working scalar type and keep
    // the smallest; exact mode then reports exact values.
    let mut best: Option<(S, TensorMap<S>)> = None;
    for cand in candidates.iter().take(4) {
        if !cand.value.is_finite() {
            continue;
        }
        let factors: Vec<Matrix<S>> = cand.factors.iter().map(|f| f.map(|&v| S::from_f64(v))).collect();
        let Ok(map) = TensorMap::new(shape.clone(), cand.sigma.clone(), factors) else { continue };
        let (t, t_inv) = (map.to_matrix(), map.inverse()?.to_matrix());
        let (s_in, s_out) = pair.ratios(&t, &t_inv);
        let value = s_in.clone() * s_out;
        if best.as_ref().map_or(true, |(b, _)| value < *b) {
            best = Some((value, map.scaled(&s_in)));
        }
    }
    let (upper, map) = best.ok_or_else(|| Error::DegenerateBody("no finite candidate".into()))?;
    let map64 = map.to_f64();
    Ok(DistanceReport {
        upper,
        witness: map64.to_matrix(),
        witness_map: tensorial.then_some(map64),
        product_bound: opts.factor_bounds.as_deref().map(product_bound),
        diameter_bound: diameter_bound(shape),
        restarts_used,
    })
}

/// Search over `GL_⊗`: every admissible permutation, `budget` restarts each.
pub fn tensorial_bm_upper<S: Scalar>(shape: &TensorShape, p: &Body<S>, q: &Body<S>, opts: &DistanceOptions) -> Result<DistanceReport<S>> {
    if p.dim() != shape.total() {
        return Err(Error::ShapeMismatch {
            expected: shape.total(),
            found: p.dim(),
        });
    }
    let pair = Pair::new(p, q)?;
    let (cands, used) = search(shape, &pair.to_f64(), &opts.seed_maps, opts)?;
    finalize(shape, &pair, &cands, true, opts, used)
}

/// Search over all invertible `d × d` matrices, seeded with `seed_map`
/// (typically the tensorial witness) so the estimate never exceeds it.
pub fn classical_bm_upper<S: Scalar>(
    shape: &TensorShape,
    p: &Body<S>,
    q: &Body<S>,
    opts: &DistanceOptions,
    seed_map: Option<&Matrix<f64>>,
) -> Result<DistanceReport<S>> {
    if p.dim() != shape.total() {
        return Err(Error::ShapeMismatch {
            expected: shape.total(),
            found: p.dim(),
        });
    }
    let flat = TensorShape::new(vec![shape.total()])?;
    let pair = Pair::new(p, q)?;
    let extra = match seed_map {
        Some(m) => vec![TensorMap::new(flat.clone(), vec![0], vec![m.clone()])?],
        None => Vec::new(),
    };
    let (cands, used) = search(&flat, &pair.to_f64(), &extra, opts)?;
    let mut report = finalize(&flat, &pair, &cands, false, opts, used)?;
    report.diameter_bound = diameter_bound(shape);
    Ok(report)
}

/// Check `Q ⊆ TP ⊆ λQ` on vertices, within `tol`.
pub fn verify_witness(p: &Body<f64>, q: &Body<f64>, t: &Matrix<f64>, lambda: f64, tol: f64) -> Result<bool> {
    let pair = Pair::new(p, q)?;
    let t_inv = t.inverse()?;
    let (s_in, s_out) = pair.ratios(t, &t_inv);
    Ok(s_in <= 1.0 + tol && s_out <= lambda * (1.0 + tol))
}

/// `Π δ_i` over per-factor distance bounds.
pub fn product_bound(factor_bounds: &[f64]) -> f64 {
    factor_bounds.iter().product()
}

/// `(d₁⋯d_{l−1})² · (d₁⋯d_l)`.
pub fn diameter_bound(shape: &TensorShape) -> f64 {
    let head: f64 = shape.dims()[..shape.order() - 1].iter().map(|&d| d as f64).product();
    head * head * shape.total() as f64
}

/// `(d₁⋯d_{l−1})² · Π δ_i` when per-factor bounds are known.
pub fn diameter_bound_sections(shape: &TensorShape, factor_bounds: &[f64]) -> f64 {
    let head: f64 = shape.dims()[..shape.order() - 1].iter().map(|&d| d as f64).product();
    head * head * product_bound(factor_bounds)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SandwichFactor<S> {
    /// Smallest `c` with `Q ⊆ c · (Q₁ ⊗_π ⋯ ⊗_π Q_l)`.
    pub factor: S,
    /// `d / d_l`.
    pub bound: f64,
}

/// Inflation needed to cover `Q` by the projective product of `sections`.
pub fn sandwich_factor_check<S: Scalar>(shape: &TensorShape, q: &Body<S>, sections: &[Body<S>]) -> Result<SandwichFactor<S>> {
    if !q.is_polytope() {
        return Err(Error::NotPolytopal(format!("{} body", q.kind())));
    }
    let prod = pi_product(shape, sections)?;
    let mut factor = S::zero();
    for v in q.to_v_rep()?.generators().expect("v-rep") {
        let g = prod.gauge_value(v)?;
        if g > factor {
            factor = g;
        }
    }
    Ok(SandwichFactor {
        factor,
        bound: (shape.total() / shape.dim(shape.order() - 1)) as f64,
    })
}
