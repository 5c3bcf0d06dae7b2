//! Seeded Gaussian instance generators.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{omega, GaussianChannel, GaussianState};
use crate::linalg::{self, RMatrix};
use crate::qstate::random::random_unitary;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Passive (orthogonal symplectic) transformation of a Haar unitary.
fn passive<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMatrix {
    let u = random_unitary(n, rng);
    let mut m = RMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let z = u[(j, k)];
            m[(2 * j, 2 * k)] = z.re;
            m[(2 * j, 2 * k + 1)] = -z.im;
            m[(2 * j + 1, 2 * k)] = z.im;
            m[(2 * j + 1, 2 * k + 1)] = z.re;
        }
    }
    m
}

/// `P₁ Z P₂` with passive `P_i` and single-mode squeezers `Z`,
/// squeezing parameters uniform in `[−1, 1]`.
pub fn random_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMatrix {
    let p1 = passive(n, rng);
    let p2 = passive(n, rng);
    let mut z = RMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        let r: f64 = rng.random_range(-1.0..=1.0);
        z[(2 * j, 2 * j)] = r.exp();
        z[(2 * j + 1, 2 * j + 1)] = (-r).exp();
    }
    p1 * z * p2
}

/// `V = S D Sᵀ` with `D = ⊕ ν_j I₂`, `ν_j` uniform in `[1, 5]`, and a
/// standard normal mean.
pub fn random_gaussian_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GaussianState {
    let nu: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..=5.0)).collect();
    random_state_with_spectrum(&nu, rng)
}

/// As [`random_gaussian_state`] with a prescribed symplectic spectrum.
pub fn random_state_with_spectrum<R: Rng + ?Sized>(nu: &[f64], rng: &mut R) -> GaussianState {
    let n = nu.len();
    let s = random_symplectic(n, rng);
    let d = RMatrix::from_diagonal(&DVector::from_iterator(2 * n, nu.iter().flat_map(|&v| [v, v])));
    let cov = &s * d * s.transpose();
    let mean = DVector::from_fn(2 * n, |_, _| normal(rng));
    GaussianState::from_trusted(mean, cov)
}

/// Random symmetric positive definite `dim x dim` matrix `GGᵀ/dim + 0.1 I`.
pub fn random_pd<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> RMatrix {
    let g = RMatrix::from_fn(dim, dim, |_, _| normal(rng));
    &g * g.transpose() / dim as f64 + RMatrix::identity(dim, dim) * 0.1
}

/// Random completely positive channel: Gaussian `T` and `b`, and `N` a
/// random PSD matrix shifted just enough to satisfy the CP condition.
pub fn random_gaussian_channel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GaussianChannel {
    let dim = 2 * n;
    let t = RMatrix::from_fn(dim, dim, |_, _| 0.7 * normal(rng));
    let g = RMatrix::from_fn(dim, dim, |_, _| normal(rng));
    let base = &g * g.transpose() * (0.2 / dim as f64);
    let w = omega(n);
    let anti = &w - &t * &w * t.transpose();
    let h = base.zip_map(&anti, nalgebra::Complex::new);
    let shift = (-linalg::lambda_min(&h)).max(0.0) + 1e-6;
    let noise = base + RMatrix::identity(dim, dim) * shift;
    let b = DVector::from_fn(dim, |_, _| normal(rng));
    GaussianChannel::from_trusted(b, t, noise)
}

/// Mode-wise phase rotations with attenuation or amplification,
/// `T = ⊕ t_j R(θ_j)`, `N = ⊕ m_j I₂` with `m_j ≥ |1 − t_j²|`. Maps thermal
/// states to thermal states.
pub fn random_incoherent_gaussian_channel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GaussianChannel {
    let dim = 2 * n;
    let mut t = RMatrix::zeros(dim, dim);
    let mut noise = RMatrix::zeros(dim, dim);
    for j in 0..n {
        let gain: f64 = rng.random_range(0.0..=2.0);
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let extra: f64 = rng.random_range(0.0..=1.0);
        let (s, c) = theta.sin_cos();
        let (q, p) = (2 * j, 2 * j + 1);
        t[(q, q)] = gain * c;
        t[(q, p)] = -gain * s;
        t[(p, q)] = gain * s;
        t[(p, p)] = gain * c;
        let m = (1.0 - gain * gain).abs() + extra;
        noise[(q, q)] = m;
        noise[(p, p)] = m;
    }
    GaussianChannel::from_trusted(DVector::zeros(dim), t, noise)
}
