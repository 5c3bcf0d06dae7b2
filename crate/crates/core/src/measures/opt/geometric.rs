//! Geometric coherence `1 − max_σ F(ρ, σ)²` over diagonal states `σ = diag(q)`.
//!
//! The fidelity is the value of the semidefinite program
//! `max Re tr X` subject to `[[ρ, X], [X†, σ]] ⪰ 0`. Writing `ρ = V Λ V†` on
//! its support (`Λ ≻ 0`, `V` an isometry) every feasible `X` has the form
//! `V Y`, and the constraint becomes `[[Λ, Y], [Y†, diag(q)]] ⪰ 0`. That block
//! has a strictly feasible point (`Y = 0`, `q` uniform), so the barrier
//! solver applies even to rank-deficient states. The weight `q_d` is
//! eliminated through `Σ q = 1`.

use super::barrier::{Block, Problem, Sparse};
use super::diagonal::options;
use super::{check_dim, Solved};
use crate::error::{Error, Result};
use crate::linalg::{lambda_min, HermitianEigen, C64};
use crate::measures::SolverConfig;
use crate::qstate::DensityMatrix;

pub const MAX_DIM: usize = 16;
/// Eigenvalues of `ρ` below this are treated as zero when restricting to
/// the support.
const RANK_FLOOR: f64 = 1e-13;
/// Largest accepted duality-gap bound on the fidelity.
const ACCEPT_GAP: f64 = 1e-6;

/// Optimal fidelity with a diagonal state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalFidelity {
    /// A feasible (hence lower) value of `max_q F(ρ, diag q)`.
    pub fidelity: f64,
    /// Bound on `optimum − fidelity`.
    pub gap: f64,
    pub q: Vec<f64>,
    /// `λ_min` of the constraint block at the returned point.
    pub feasibility: f64,
    pub newton_steps: usize,
}

fn entry(r: usize, c: usize, v: C64) -> Sparse {
    vec![(r, c, v), (c, r, v.conj())]
}

/// Maximal `F(ρ, diag q)` over the probability simplex.
pub fn max_diagonal_fidelity(rho: &DensityMatrix, cfg: &SolverConfig) -> Result<DiagonalFidelity> {
    cfg.validate()?;
    check_dim(rho, MAX_DIM, "geometric coherence")?;
    let d = rho.dim();
    let eig = HermitianEigen::new(rho.matrix());
    let support: Vec<usize> = (0..d).filter(|&k| eig.values[k] > RANK_FLOOR).collect();
    let r = support.len();
    let n = r + d;

    // Variables: Re Y_aj and Im Y_aj for every (a, j), then q_0 .. q_{d−2}.
    let ny = 2 * r * d;
    let mut f0 = crate::linalg::CMatrix::zeros(n, n);
    for (a, &k) in support.iter().enumerate() {
        f0[(a, a)] = C64::new(eig.values[k], 0.0);
    }
    f0[(n - 1, n - 1)] = C64::new(1.0, 0.0);
    let mut block = Block::new(f0);
    let mut cost = vec![0.0; ny + d - 1];
    let (one, i) = (C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    for (a, &k) in support.iter().enumerate() {
        for j in 0..d {
            let var = 2 * (a * d + j);
            block.add(var, entry(a, r + j, one));
            block.add(var + 1, entry(a, r + j, i));
            // Re tr(V Y) = Σ Re(V_ja) Re Y_aj − Im(V_ja) Im Y_aj.
            let v = eig.vectors[(j, k)];
            cost[var] = -v.re;
            cost[var + 1] = v.im;
        }
    }
    for j in 0..d - 1 {
        block.add(ny + j, vec![(r + j, r + j, one), (n - 1, n - 1, -one)]);
    }
    let problem = Problem {
        cost,
        blocks: vec![block.clone()],
    };
    let mut x0 = vec![0.0; ny + d - 1];
    x0[ny..].fill(1.0 / d as f64);
    let sol = problem.solve(x0, options(cfg, 10.0));
    let fidelity = (-sol.objective).clamp(0.0, 1.0);
    if !(sol.gap.is_finite() && sol.gap <= ACCEPT_GAP) {
        return Err(Error::NotConverged {
            best: fidelity,
            gap: sol.gap,
            iterations: sol.newton_steps,
        });
    }
    let mut q: Vec<f64> = sol.x[ny..].to_vec();
    q.push(1.0 - q.iter().sum::<f64>());
    Ok(DiagonalFidelity {
        fidelity,
        gap: sol.gap,
        feasibility: lambda_min(&block.eval(&sol.x)),
        q,
        newton_steps: sol.newton_steps,
    })
}

pub fn c_geometric(rho: &DensityMatrix, cfg: &SolverConfig) -> Result<Solved> {
    cfg.validate()?;
    check_dim(rho, MAX_DIM, "geometric coherence")?;
    if rho.is_diagonal(0.0) {
        return Ok(Solved::exact(0.0, Some(rho.populations())));
    }
    if let Some(p) = crate::measures::closed::pure_probabilities(rho) {
        let (j, pmax) = p
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |a, (i, v)| if v > a.1 { (i, v) } else { a });
        let mut q = vec![0.0; p.len()];
        q[j] = 1.0;
        return Ok(Solved::exact((1.0 - pmax).max(0.0), Some(q)));
    }
    let best = max_diagonal_fidelity(rho, cfg)?;
    let f = best.fidelity;
    Ok(Solved {
        value: (1.0 - f * f).clamp(0.0, 1.0),
        feasibility: Some(best.feasibility),
        certificate: Some(best.q),
        iterations: best.newton_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::PureState;
    use approx::assert_abs_diff_eq;

    fn qubit_closed_form(rho: &DensityMatrix) -> f64 {
        let c = rho.entry(0, 1).norm();
        0.5 * (1.0 - (1.0 - 4.0 * c * c).sqrt())
    }

    #[test]
    fn plus_and_diagonal() {
        let cfg = SolverConfig::default();
        let plus = PureState::uniform(2).unwrap().to_density();
        assert_abs_diff_eq!(c_geometric(&plus, &cfg).unwrap().value, 0.5, epsilon = 1e-12);
        let diag = DensityMatrix::diagonal(&[0.1, 0.9]).unwrap();
        assert_eq!(c_geometric(&diag, &cfg).unwrap().value, 0.0);
    }

    #[test]
    fn qubit_mixed_states_match_closed_form() {
        let cfg = SolverConfig::default();
        for &(x, y, z) in &[(0.3, 0.4, 0.1), (0.1, -0.2, 0.9), (0.7, 0.0, -0.7), (0.05, 0.05, 0.0)] {
            let rho = DensityMatrix::bloch(x, y, z).unwrap();
            let got = c_geometric(&rho, &cfg).unwrap().value;
            assert_abs_diff_eq!(got, qubit_closed_form(&rho), epsilon = 1e-8);
        }
    }
}
