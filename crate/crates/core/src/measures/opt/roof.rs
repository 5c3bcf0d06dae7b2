//! Upper bound on a convex-roof coherence for mixed states.
//!
//! With `ρ = A A†`, `A = E √Λ` (`d x r`), every decomposition into at most
//! `m` pure states is `Φ = W Aᵀ` for an `m x r` isometry `W`: row `μ` of `Φ`
//! is the unnormalized vector `√q_μ |φ_μ>`. The cost
//! `Σ_μ q_μ f(|Φ_μj|²/q_μ)` is minimized by Riemannian gradient descent on
//! the Stiefel manifold with a polar retraction.

use super::{check_dim, Solved};
use crate::error::Result;
use crate::linalg::{CMatrix, HermitianEigen, C64};
use crate::measures::{RoofFn, SolverConfig};
use crate::qstate::random::ginibre;
use crate::qstate::DensityMatrix;
use crate::seed::{derive_seed, rng_from};

pub const MAX_DIM: usize = 8;

fn cost(phi: &CMatrix, f: RoofFn) -> f64 {
    let mut total = 0.0;
    let mut probs = vec![0.0; phi.ncols()];
    for mu in 0..phi.nrows() {
        let mut q = 0.0;
        for j in 0..phi.ncols() {
            probs[j] = phi[(mu, j)].norm_sqr();
            q += probs[j];
        }
        if q <= 1e-300 {
            continue;
        }
        probs.iter_mut().for_each(|p| *p /= q);
        total += q * f.eval(&probs);
    }
    total
}

/// Euclidean gradient of the cost with respect to `conj(Φ)`.
fn cost_gradient(phi: &CMatrix, f: RoofFn) -> CMatrix {
    let (m, d) = phi.shape();
    let mut g = CMatrix::zeros(m, d);
    for mu in 0..m {
        let a: Vec<f64> = (0..d).map(|j| phi[(mu, j)].norm_sqr()).collect();
        let q: f64 = a.iter().sum();
        if q <= 1e-300 {
            continue;
        }
        match f {
            RoofFn::Shannon => {
                for j in 0..d {
                    if a[j] > 0.0 {
                        g[(mu, j)] = phi[(mu, j)] * (q / a[j]).log2();
                    }
                }
            }
            RoofFn::OneMinusMax => {
                let jmax = (0..d)
                    .max_by(|&x, &y| a[x].total_cmp(&a[y]))
                    .unwrap_or(0);
                for j in 0..d {
                    if j != jmax {
                        g[(mu, j)] = phi[(mu, j)];
                    }
                }
            }
        }
    }
    g
}

/// `U V†` from the SVD, the closest isometry.
fn polar(w: CMatrix) -> CMatrix {
    let svd = w.svd(true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    u * vt
}

fn descend(a_t: &CMatrix, mut w: CMatrix, f: RoofFn, cfg: &SolverConfig) -> (f64, usize) {
    let a_conj = a_t.transpose().map(|z| z.conj());
    let mut phi = &w * a_t;
    let mut val = cost(&phi, f);
    let mut best = val;
    let mut step = 1.0;
    let mut iters = 0;
    for _ in 0..cfg.max_iters {
        iters += 1;
        let g_phi = cost_gradient(&phi, f);
        let g = &g_phi * &a_conj;
        let wg = w.adjoint() * &g;
        let sym = (&wg + wg.adjoint()) * C64::new(0.5, 0.0);
        let xi = &g - &w * sym;
        let norm2 = xi.norm_squared();
        if norm2.sqrt() <= cfg.tol {
            break;
        }
        let mut accepted = false;
        while step > 1e-12 {
            let cand = polar(&w - &xi * C64::new(step, 0.0));
            let cand_phi = &cand * a_t;
            let cand_val = cost(&cand_phi, f);
            if cand_val <= val - 1e-4 * step * norm2 {
                w = cand;
                phi = cand_phi;
                val = cand_val;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        best = best.min(val);
        if !accepted {
            break;
        }
        step = (step * 2.0).min(8.0);
    }
    (best, iters)
}

/// Best decomposition cost found, an upper bound on the convex roof.
pub fn c_convex_roof_upper(rho: &DensityMatrix, f: RoofFn, cfg: &SolverConfig) -> Result<Solved> {
    cfg.validate()?;
    check_dim(rho, MAX_DIM, "convex-roof upper bound")?;
    if rho.is_diagonal(0.0) {
        return Ok(Solved::exact(0.0, None));
    }
    if let Some(p) = crate::measures::closed::pure_probabilities(rho) {
        return Ok(Solved::exact(f.eval(&p), None));
    }
    let d = rho.dim();
    let eig = HermitianEigen::new(rho.matrix());
    let keep: Vec<usize> = (0..d).filter(|&k| eig.values[k] > 1e-14).collect();
    let r = keep.len();
    let m = d * d;
    // Aᵀ is r x d with rows √λ_k e_kᵀ.
    let a_t = CMatrix::from_fn(r, d, |i, j| {
        let k = keep[i];
        eig.vectors[(j, k)] * eig.values[k].sqrt()
    });

    let mut eigen_start = CMatrix::zeros(m, r);
    for i in 0..r {
        eigen_start[(i, i)] = C64::new(1.0, 0.0);
    }
    let (mut best, mut iterations) = descend(&a_t, eigen_start.clone(), f, cfg);
    best = best.min(cost(&(&eigen_start * &a_t), f));
    for k in 1..cfg.restarts {
        let mut rng = rng_from(derive_seed(cfg.seed, "roof", k as u64));
        let w0 = polar(ginibre(m, r, &mut rng));
        let (v, it) = descend(&a_t, w0, f, cfg);
        iterations += it;
        best = best.min(v);
    }
    Ok(Solved {
        value: best.max(0.0),
        certificate: None,
        feasibility: None,
        iterations,
    })
}

/// Cost of the eigendecomposition itself, `Σ_k λ_k f(|<j|e_k>|²)`.
pub fn eigen_decomposition_cost(rho: &DensityMatrix, f: RoofFn) -> f64 {
    let eig = HermitianEigen::new(rho.matrix());
    let d = rho.dim();
    let a_t = CMatrix::from_fn(d, d, |i, j| eig.vectors[(j, i)] * eig.values[i].max(0.0).sqrt());
    cost(&a_t, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::PureState;
    use approx::assert_abs_diff_eq;

    fn h2(p: f64) -> f64 {
        crate::linalg::binary_entropy(p)
    }

    #[test]
    fn qubit_roof_reaches_known_values() {
        let cfg = SolverConfig::default();
        for &(x, y, z) in &[(0.4, 0.3, 0.2), (0.1, 0.5, -0.3), (0.6, 0.0, 0.0)] {
            let rho = DensityMatrix::bloch(x, y, z).unwrap();
            let c = rho.entry(0, 1).norm();
            let s = (1.0 - 4.0 * c * c).sqrt();
            let shannon = c_convex_roof_upper(&rho, RoofFn::Shannon, &cfg).unwrap().value;
            assert!(shannon >= h2(0.5 * (1.0 + s)) - 1e-9);
            assert_abs_diff_eq!(shannon, h2(0.5 * (1.0 + s)), epsilon = 1e-4);
            let omm = c_convex_roof_upper(&rho, RoofFn::OneMinusMax, &cfg).unwrap().value;
            assert!(omm >= 0.5 * (1.0 - s) - 1e-9);
            assert_abs_diff_eq!(omm, 0.5 * (1.0 - s), epsilon = 1e-3);
        }
    }

    #[test]
    fn pure_and_diagonal_shortcuts() {
        let cfg = SolverConfig::default();
        let psi = PureState::uniform(3).unwrap();
        let v = c_convex_roof_upper(&psi.to_density(), RoofFn::Shannon, &cfg).unwrap().value;
        assert_abs_diff_eq!(v, 3f64.log2(), epsilon = 1e-12);
        let diag = DensityMatrix::diagonal(&[0.5, 0.25, 0.25]).unwrap();
        assert_eq!(c_convex_roof_upper(&diag, RoofFn::Shannon, &cfg).unwrap().value, 0.0);
    }

    #[test]
    fn never_above_eigendecomposition() {
        let cfg = SolverConfig::default();
        let rho = DensityMatrix::bloch(0.2, 0.5, 0.1).unwrap();
        let ub = c_convex_roof_upper(&rho, RoofFn::Shannon, &cfg).unwrap().value;
        assert!(ub <= eigen_decomposition_cost(&rho, RoofFn::Shannon) + 1e-12);
    }
}
