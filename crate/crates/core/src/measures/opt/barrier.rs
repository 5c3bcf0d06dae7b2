//! Log-barrier Newton method for small linear programs over Hermitian
//! matrix inequalities:
//!
//! ```text
//! minimize  cᵀx   subject to  F_i(x) = F_i0 + Σ_k x_k F_ik ⪰ 0
//! ```
//!
//! Coefficient matrices are stored sparsely, which keeps the Hessian
//! `H_kl = Σ_i tr(G_i F_ik G_i F_il)`, `G_i = F_i(x)⁻¹`, cheap for the
//! elementary bases used by the coherence programs.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::linalg::{CMatrix, C64};

/// Sparse Hermitian coefficient: `(row, col, value)` with both triangles.
pub(crate) type Sparse = Vec<(usize, usize, C64)>;

#[derive(Debug, Clone)]
pub(crate) struct Block {
    pub f0: CMatrix,
    pub terms: Vec<(usize, Sparse)>,
}

impl Block {
    pub fn new(f0: CMatrix) -> Self {
        Block { f0, terms: Vec::new() }
    }

    pub fn add(&mut self, var: usize, coeff: Sparse) {
        self.terms.push((var, coeff));
    }

    fn size(&self) -> usize {
        self.f0.nrows()
    }

    pub fn eval(&self, x: &[f64]) -> CMatrix {
        let mut m = self.f0.clone();
        for (k, coeff) in &self.terms {
            let xk = x[*k];
            if xk == 0.0 {
                continue;
            }
            for &(r, c, a) in coeff {
                m[(r, c)] += a * xk;
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Problem {
    pub cost: Vec<f64>,
    pub blocks: Vec<Block>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Options {
    pub tol: f64,
    pub max_newton: usize,
    pub growth: f64,
    pub t0: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Duality-gap bound `ν/t` at the last centered point.
    pub gap: f64,
    pub newton_steps: usize,
}

/// Newton steps allowed per centering.
const MAX_INNER: usize = 60;

fn log_det(m: &CMatrix) -> Option<f64> {
    crate::linalg::hermitian_log_det(m)
}

impl Problem {
    fn nvars(&self) -> usize {
        self.cost.len()
    }

    fn barrier_param(&self) -> f64 {
        self.blocks.iter().map(|b| b.size() as f64).sum()
    }

    /// `Σ log det F_i(x)`, or `None` outside the interior.
    fn log_barrier(&self, x: &[f64]) -> Option<f64> {
        let mut val = 0.0;
        for b in &self.blocks {
            val += log_det(&b.eval(x))?;
        }
        Some(val)
    }

    fn newton_system(&self, t: f64, x: &[f64]) -> Option<(DVector<f64>, DMatrix<f64>)> {
        let n = self.nvars();
        let mut grad = DVector::from_iterator(n, self.cost.iter().map(|c| t * c));
        let mut hess = DMatrix::<f64>::zeros(n, n);
        for b in &self.blocks {
            let f = b.eval(x);
            log_det(&f)?;
            let g = Cholesky::new(f)?.inverse();
            for (k, fk) in &b.terms {
                let tr: C64 = fk.iter().map(|&(r, c, a)| a * g[(c, r)]).sum();
                grad[*k] -= tr.re;
            }
            for (i, (k, fk)) in b.terms.iter().enumerate() {
                for (l, fl) in &b.terms[i..] {
                    let mut acc = C64::new(0.0, 0.0);
                    for &(r, c, a) in fk {
                        for &(s, u, bv) in fl {
                            acc += a * g[(c, s)] * bv * g[(u, r)];
                        }
                    }
                    hess[(*k, *l)] += acc.re;
                    if k != l {
                        hess[(*l, *k)] += acc.re;
                    }
                }
            }
        }
        Some((grad, hess))
    }

    /// Follows the central path from the strictly feasible `x0`.
    pub fn solve(&self, x0: Vec<f64>, opts: Options) -> Solution {
        let nu = self.barrier_param();
        let mut x = x0;
        let mut t = opts.t0;
        let mut steps = 0usize;
        let mut gap = f64::INFINITY;
        'outer: loop {
            let mut inner = 0;
            loop {
                if steps >= opts.max_newton {
                    break 'outer;
                }
                let Some((grad, hess)) = self.newton_system(t, &x) else {
                    break 'outer;
                };
                let Some(delta) = solve_pd(hess, &grad) else {
                    break 'outer;
                };
                steps += 1;
                let decrement = -grad.dot(&delta);
                if !decrement.is_finite() {
                    break 'outer;
                }
                if decrement < 1e-10 || inner >= MAX_INNER {
                    break;
                }
                inner += 1;
                // The linear part is evaluated as a difference so that large
                // `t cᵀx` does not swamp the barrier in floating point.
                let slope = t * dot(&self.cost, delta.as_slice());
                let Some(b0) = self.log_barrier(&x) else {
                    break 'outer;
                };
                let mut s = 1.0;
                let mut accepted = false;
                while s > 1e-14 {
                    let trial: Vec<f64> = x
                        .iter()
                        .zip(delta.iter())
                        .map(|(xi, di)| xi + s * di)
                        .collect();
                    if let Some(b1) = self.log_barrier(&trial) {
                        if s * slope - (b1 - b0) <= -0.25 * s * decrement {
                            x = trial;
                            accepted = true;
                            break;
                        }
                    }
                    s *= 0.5;
                }
                if !accepted {
                    break;
                }
            }
            gap = nu / t;
            if gap <= opts.tol {
                break;
            }
            t *= opts.growth;
        }
        Solution {
            objective: dot(&self.cost, &x),
            x,
            gap,
            newton_steps: steps,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `−H⁻¹ g` with a small diagonal shift if `H` is numerically singular.
fn solve_pd(hess: DMatrix<f64>, grad: &DVector<f64>) -> Option<DVector<f64>> {
    let scale = hess.diagonal().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut shift = 0.0;
    for _ in 0..4 {
        let mut h = hess.clone();
        for j in 0..h.nrows() {
            h[(j, j)] += shift;
        }
        if let Some(ch) = Cholesky::new(h) {
            let d = -ch.solve(grad);
            if d.iter().all(|v| v.is_finite()) {
                return Some(d);
            }
        }
        shift = if shift == 0.0 { 1e-14 * scale.max(1.0) } else { shift * 1e3 };
    }
    None
}

/// Elementary Hermitian basis of `d x d` matrices: `d` diagonal units,
/// then `E_jk + E_kj` and `i(E_jk − E_kj)` for `j < k`.
pub(crate) fn hermitian_basis(d: usize) -> Vec<Sparse> {
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let mut out: Vec<Sparse> = (0..d).map(|j| vec![(j, j, one)]).collect();
    for j in 0..d {
        for k in j + 1..d {
            out.push(vec![(j, k, one), (k, j, one)]);
            out.push(vec![(j, k, i), (k, j, -i)]);
        }
    }
    out
}

/// `tr(A B)` for a dense Hermitian `A` and a sparse Hermitian `B`.
pub(crate) fn trace_with(a: &CMatrix, b: &Sparse) -> f64 {
    b.iter().map(|&(r, c, v)| (a[(c, r)] * v).re).sum()
}

/// Rebuilds the Hermitian matrix parameterized by `x[offset..]`.
pub(crate) fn assemble(d: usize, basis: &[Sparse], x: &[f64], offset: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for (k, coeff) in basis.iter().enumerate() {
        for &(r, c, a) in coeff {
            m[(r, c)] += a * x[offset + k];
        }
    }
    m
}
