//! Programs over a nonnegative diagonal vector `c`.
//!
//! * robustness: `min Σc − 1` s.t. `diag(c) ⪰ ρ`. Writing the mixture
//!   `(ρ + sτ)/(1+s) = σ` with `τ ⪰ 0` and `σ` diagonal is the same as
//!   `(1+s)σ ⪰ ρ`, so `c = (1+s)·diag(σ)` absorbs both `s` and `τ`.
//! * weight: `1 − max Σc` s.t. `ρ ⪰ diag(c)`, `c ≥ 0`, with
//!   `c = (1−s)·diag(σ)`. Solved through its dual
//!   `min tr(ρY)` s.t. `Y ⪰ 0`, `Y_jj ≥ 1`, which has a strictly feasible
//!   point even when `ρ` is singular.
//! * trace norm: `min ‖ρ − diag(c)‖_tr` over `c ≥ 0` (`c = λσ`), via
//!   `min 1 − Σc + 2 tr N` s.t. `N ⪰ 0`, `N + ρ − diag(c) ⪰ 0`.

use super::barrier::{self, Block, Options, Problem, Sparse};
use super::{check_dim, Solved};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::measures::SolverConfig;
use crate::qstate::DensityMatrix;

/// Practical dimension cap for the diagonal programs.
pub const MAX_DIM: usize = 16;
/// Primal feasibility slack accepted for returned certificates.
pub const FEAS_TOL: f64 = 1e-9;
/// Gap estimates above this are reported as non-convergence.
const ACCEPT_GAP: f64 = 1e-6;
/// Bound on `tr Y / d` in the weight dual.
const TRACE_CAP: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// `min Σc` with `diag(c) ⪰ ρ`.
    MinTraceDominating,
    /// `max Σc` with `ρ ⪰ diag(c)`, `c ≥ 0`.
    MaxTraceDominated,
}

#[derive(Debug, Clone)]
pub struct DiagonalProgram {
    pub target: DensityMatrix,
    pub sense: Sense,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgramSolution {
    /// `Σ_j c_j` at the returned certificate.
    pub value: f64,
    pub certificate: Vec<f64>,
    /// `λ_min` of the constraint matrix at the certificate.
    pub feasibility: f64,
    pub gap: f64,
    pub iterations: usize,
}

fn unit(k: usize) -> Sparse {
    vec![(k, k, C64::new(1.0, 0.0))]
}

fn neg_unit(k: usize) -> Sparse {
    vec![(k, k, C64::new(-1.0, 0.0))]
}

fn scalar_block(var: usize, offset: f64) -> Block {
    let mut b = Block::new(CMatrix::from_element(1, 1, C64::new(offset, 0.0)));
    b.add(var, unit(0));
    b
}

pub(crate) fn options(cfg: &SolverConfig, growth: f64) -> Options {
    Options {
        tol: cfg.tol.max(1e-12),
        max_newton: cfg.max_iters,
        growth,
        t0: 1.0,
    }
}

fn converged(gap: f64, best: f64, iterations: usize) -> Result<()> {
    if gap.is_finite() && gap <= ACCEPT_GAP {
        Ok(())
    } else {
        Err(Error::NotConverged {
            best,
            gap,
            iterations,
        })
    }
}

fn dominating(rho: &DensityMatrix, opts: Options) -> Result<ProgramSolution> {
    let d = rho.dim();
    let mut block = Block::new(-rho.matrix().clone());
    for k in 0..d {
        block.add(k, unit(k));
    }
    let problem = Problem {
        cost: vec![1.0; d],
        blocks: vec![block],
    };
    let lmax = linalg::hermitian_eigenvalues(rho.matrix())
        .last()
        .copied()
        .unwrap_or(1.0);
    let sol = problem.solve(vec![lmax + 1.0; d], opts);
    let c = sol.x;
    let value: f64 = c.iter().sum();
    converged(sol.gap, value, sol.newton_steps)?;
    let feasibility = linalg::lambda_min(&(linalg::diag_complex(&c) - rho.matrix()));
    Ok(ProgramSolution {
        value,
        certificate: c,
        feasibility,
        gap: sol.gap,
        iterations: sol.newton_steps,
    })
}

fn dominated(rho: &DensityMatrix, opts: Options) -> Result<ProgramSolution> {
    let d = rho.dim();
    let basis = barrier::hermitian_basis(d);
    let n = basis.len();
    let mut psd = Block::new(CMatrix::zeros(d, d));
    for (k, b) in basis.iter().enumerate() {
        psd.add(k, b.clone());
    }
    let mut blocks = vec![psd];
    for j in 0..d {
        blocks.push(scalar_block(j, -1.0));
    }
    // When ρ is singular the optimal set contains rays along ker ρ, and the
    // central path only exists once tr Y is bounded.
    let mut cap = Block::new(CMatrix::from_element(1, 1, C64::new(TRACE_CAP * d as f64, 0.0)));
    for j in 0..d {
        cap.add(j, neg_unit(0));
    }
    blocks.push(cap);
    let cost: Vec<f64> = basis
        .iter()
        .map(|b| barrier::trace_with(rho.matrix(), b))
        .collect();
    let problem = Problem { cost, blocks };
    let mut x0 = vec![0.0; n];
    x0[..d].fill(2.0);
    let sol = problem.solve(x0, opts);
    converged(sol.gap, 1.0 - sol.objective, sol.newton_steps)?;

    // Two central-path estimates of the primal point: from the scalar
    // multipliers `c_j = 1/(t (Y_jj − 1))` and from `ρ − diag(c) = Y⁻¹/t`.
    let t = problem_nu(d) / sol.gap;
    let from_scalars: Vec<f64> = (0..d)
        .map(|j| 1.0 / (t * (sol.x[j] - 1.0)).max(f64::MIN_POSITIVE))
        .collect();
    let y = barrier::assemble(d, &basis, &sol.x, 0);
    let from_psd: Vec<f64> = match y.clone().try_inverse() {
        Some(inv) => (0..d).map(|j| (rho.entry(j, j).re - inv[(j, j)].re / t).max(0.0)).collect(),
        None => vec![0.0; d],
    };
    let c = [from_scalars, from_psd]
        .iter()
        .map(|raw| polish_dominated(rho, raw))
        .max_by(|a, b| a.iter().sum::<f64>().total_cmp(&b.iter().sum::<f64>()))
        .expect("two candidates");
    let primal: f64 = c.iter().sum();
    let feasibility = linalg::lambda_min(&(rho.matrix() - linalg::diag_complex(&c)));
    // The dual objective is the sharper estimate; the certificate brackets it.
    Ok(ProgramSolution {
        value: sol.objective.max(primal).min(1.0),
        certificate: c,
        feasibility,
        gap: (sol.objective - primal).max(sol.gap),
        iterations: sol.newton_steps,
    })
}

/// Barrier parameter of the weight dual: the PSD block, `d` scalar blocks
/// and the trace cap.
fn problem_nu(d: usize) -> f64 {
    2.0 * d as f64 + 1.0
}

/// Largest `s ∈ [0, 1]` with `ρ − s·diag(c) ⪰ 0`, applied to `c`.
fn polish_dominated(rho: &DensityMatrix, c: &[f64]) -> Vec<f64> {
    let feasible = |s: f64| {
        let scaled: Vec<f64> = c.iter().map(|v| v * s).collect();
        linalg::lambda_min(&(rho.matrix() - linalg::diag_complex(&scaled))) >= 0.0
    };
    if feasible(1.0) {
        return c.to_vec();
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    c.iter().map(|v| v * lo).collect()
}

pub fn solve_diagonal_program(prog: &DiagonalProgram, cfg: &SolverConfig) -> Result<ProgramSolution> {
    solve_with_growth(prog, cfg, 10.0)
}

/// As [`solve_diagonal_program`] with an explicit barrier growth factor.
pub fn solve_with_growth(
    prog: &DiagonalProgram,
    cfg: &SolverConfig,
    growth: f64,
) -> Result<ProgramSolution> {
    cfg.validate()?;
    check_dim(&prog.target, MAX_DIM, "diagonal programs")?;
    if !(growth > 1.0) {
        return Err(Error::InvalidArgument(format!("barrier growth {growth} must exceed 1")));
    }
    let opts = options(cfg, growth);
    match prog.sense {
        Sense::MinTraceDominating => dominating(&prog.target, opts),
        Sense::MaxTraceDominated => dominated(&prog.target, opts),
    }
}

pub fn c_robustness(rho: &DensityMatrix, cfg: &SolverConfig) -> Result<Solved> {
    if rho.is_diagonal(0.0) {
        return Ok(Solved::exact(0.0, Some(rho.populations())));
    }
    let prog = DiagonalProgram {
        target: rho.clone(),
        sense: Sense::MinTraceDominating,
    };
    let sol = solve_diagonal_program(&prog, cfg)?;
    Ok(Solved {
        value: (sol.value - 1.0).max(0.0),
        certificate: Some(sol.certificate),
        feasibility: Some(sol.feasibility),
        iterations: sol.iterations,
    })
}

pub fn c_weight(rho: &DensityMatrix, cfg: &SolverConfig) -> Result<Solved> {
    if rho.is_diagonal(0.0) {
        return Ok(Solved::exact(0.0, Some(rho.populations())));
    }
    let prog = DiagonalProgram {
        target: rho.clone(),
        sense: Sense::MaxTraceDominated,
    };
    let sol = solve_diagonal_program(&prog, cfg)?;
    Ok(Solved {
        value: (1.0 - sol.value).clamp(0.0, 1.0),
        certificate: Some(sol.certificate),
        feasibility: Some(sol.feasibility),
        iterations: sol.iterations,
    })
}

pub fn c_trace_norm(rho: &DensityMatrix, cfg: &SolverConfig) -> Result<Solved> {
    cfg.validate()?;
    check_dim(rho, MAX_DIM, "trace-norm coherence")?;
    if rho.is_diagonal(0.0) {
        return Ok(Solved::exact(0.0, Some(rho.populations())));
    }
    trace_norm_program(rho, options(cfg, 10.0))
}

fn trace_norm_program(rho: &DensityMatrix, opts: Options) -> Result<Solved> {
    let d = rho.dim();
    let basis = barrier::hermitian_basis(d);
    let nv = d + basis.len();
    let mut n_psd = Block::new(CMatrix::zeros(d, d));
    let mut shifted = Block::new(rho.matrix().clone());
    for (k, b) in basis.iter().enumerate() {
        n_psd.add(d + k, b.clone());
        shifted.add(d + k, b.clone());
    }
    for k in 0..d {
        shifted.add(k, neg_unit(k));
    }
    let mut blocks = vec![n_psd, shifted];
    for k in 0..d {
        blocks.push(scalar_block(k, 0.0));
    }
    let mut cost = vec![0.0; nv];
    cost[..d].fill(-1.0);
    for j in 0..d {
        cost[d + j] = 2.0;
    }
    let problem = Problem { cost, blocks };
    let mut x0 = vec![0.0; nv];
    x0[..d].fill(0.5 / d as f64);
    x0[d..2 * d].fill(1.0);
    let sol = problem.solve(x0, opts);
    let c: Vec<f64> = sol.x[..d].iter().map(|v| v.max(0.0)).collect();
    let value = linalg::hermitian_trace_norm(&(rho.matrix() - linalg::diag_complex(&c)));
    converged(sol.gap, value, sol.newton_steps)?;
    Ok(Solved {
        value,
        feasibility: Some(c.iter().copied().fold(f64::INFINITY, f64::min)),
        certificate: Some(c),
        iterations: sol.newton_steps,
    })
}
