//! Dense two-phase simplex with Bland's rule.
//!
//! Solves `min cᵀz  s.t.  A z = b, z ≥ 0` over any [`Scalar`]. With
//! rationals every pivot is exact, so the reported optimum is the true one.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { value: S, solution: Vec<S> },
    Infeasible,
    Unbounded,
}

struct Tableau<S> {
    // rows 0..m are constraints, row m is the objective; last column is rhs
    t: Matrix<S>,
    basis: Vec<usize>,
    eps: S,
}

impl<S: Scalar> Tableau<S> {
    fn rows(&self) -> usize {
        self.t.rows() - 1
    }

    fn rhs_col(&self) -> usize {
        self.t.cols() - 1
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.t.cols();
        let p = self.t[(row, col)].clone();
        for c in 0..width {
            self.t[(row, c)] = self.t[(row, c)].clone() / p.clone();
        }
        for r in 0..self.t.rows() {
            if r == row {
                continue;
            }
            let f = self.t[(r, col)].clone();
            if f.is_zero() {
                continue;
            }
            for c in 0..width {
                let delta = f.clone() * self.t[(row, c)].clone();
                self.t[(r, c)] = self.t[(r, c)].clone() - delta;
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule over columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let m = self.rows();
        let rhs = self.rhs_col();
        let neg_eps = -self.eps.clone();
        loop {
            let entering = (0..allowed).find(|&j| self.t[(m, j)] < neg_eps);
            let Some(col) = entering else { return true };
            let mut best: Option<(usize, S)> = None;
            for r in 0..m {
                let a = self.t[(r, col)].clone();
                if a <= self.eps {
                    continue;
                }
                let ratio = self.t[(r, rhs)].clone() / a;
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bv)) => {
                        if ratio < bv || (ratio == bv && self.basis[r] < self.basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bv))
                        }
                    }
                };
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

pub fn solve_standard_form<S: Scalar>(a: &Matrix<S>, b: &[S], c: &[S]) -> LpOutcome<S> {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);
    let scale = a.max_abs().to_f64().max(1.0);
    let eps = S::tol(1e-11 * scale);

    // Phase 1 tableau: [A | I | b] with artificial objective.
    let width = n + m + 1;
    let mut t = Matrix::zeros(m + 1, width);
    for r in 0..m {
        let flip = b[r] < S::zero();
        for j in 0..n {
            let v = a[(r, j)].clone();
            t[(r, j)] = if flip { -v } else { v };
        }
        t[(r, n + r)] = S::one();
        t[(r, width - 1)] = if flip { -b[r].clone() } else { b[r].clone() };
    }
    for j in 0..width {
        if (n..n + m).contains(&j) {
            continue;
        }
        let s = (0..m).fold(S::zero(), |acc, r| acc + t[(r, j)].clone());
        t[(m, j)] = -s;
    }
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        eps: eps.clone(),
    };
    tab.optimize(n + m);
    let phase1 = -tab.t[(m, width - 1)].clone();
    if phase1 > S::tol(1e-9 * scale) {
        return LpOutcome::Infeasible;
    }

    // Drive remaining artificials out; rows that cannot be pivoted are redundant.
    let mut redundant = Vec::new();
    for r in 0..m {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| tab.t[(r, j)].abs() > eps) {
                Some(j) => tab.pivot(r, j),
                None => redundant.push(r),
            }
        }
    }

    // Phase 2 tableau over the original columns.
    let keep: Vec<usize> = (0..m).filter(|r| !redundant.contains(r)).collect();
    let m2 = keep.len();
    let mut t2 = Matrix::zeros(m2 + 1, n + 1);
    let mut basis = Vec::with_capacity(m2);
    for (r2, &r) in keep.iter().enumerate() {
        for j in 0..n {
            t2[(r2, j)] = tab.t[(r, j)].clone();
        }
        t2[(r2, n)] = tab.t[(r, width - 1)].clone();
        basis.push(tab.basis[r]);
    }
    for j in 0..=n {
        let base = if j < n { c[j].clone() } else { S::zero() };
        let s = basis
            .iter()
            .enumerate()
            .fold(S::zero(), |acc, (r2, &bj)| acc + c[bj].clone() * t2[(r2, j)].clone());
        t2[(m2, j)] = base - s;
    }
    let mut tab2 = Tableau { t: t2, basis, eps };
    if !tab2.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![S::zero(); n];
    for (r2, &bj) in tab2.basis.iter().enumerate() {
        solution[bj] = tab2.t[(r2, n)].clone();
    }
    let value = -tab2.t[(m2, n)].clone();
    LpOutcome::Optimal { value, solution }
}

/// `min Σ|λ_k|  s.t.  Σ λ_k g_k = x`; returns the optimum and the multipliers.
pub fn min_l1_combination<S: Scalar>(generators: &[Vec<S>], x: &[S]) -> Option<(S, Vec<S>)> {
    let k = generators.len();
    let d = x.len();
    let a = Matrix::from_fn(d, 2 * k, |r, j| {
        if j < k {
            generators[j][r].clone()
        } else {
            -generators[j - k][r].clone()
        }
    });
    let c = vec![S::one(); 2 * k];
    match solve_standard_form(&a, x, &c) {
        LpOutcome::Optimal { value, solution } => {
            let lambda = (0..k)
                .map(|j| solution[j].clone() - solution[j + k].clone())
                .collect();
            Some((value, lambda))
        }
        _ => None,
    }
}
