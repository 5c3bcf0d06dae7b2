//! Checks on Gaussian states and channels.

use nalgebra::Complex;
use rand::Rng as _;
use rand_distr::{Distribution, Exp1};
use serde_json::{json, Value};

use super::{Check, Trial, TOL_CHANNEL_CONJ, TOL_GAUSSIAN};
use crate::gaussian::random::{
    random_gaussian_channel, random_gaussian_state, random_incoherent_gaussian_channel, random_pd,
};
use crate::gaussian::{
    boxplus, boxplus_many, c_gr, c_gr_symmetrized, coherent_state, default_probes, gap_coherent_closed_form,
    gap_squeezed_closed_form, gr_real_gap, probe_incoherent_gaussian, squeezed_state,
    supermajorization_margin, symplectic_eigenvalues, GaussianState,
};
use crate::io::{gaussian_channel_to_json, gaussian_state_to_json};
use crate::linalg::max_abs;
use crate::seed::Rng;

/// Side of the coherent-amplitude grid.
pub const ALPHA_GRID: usize = 41;
/// Coherent amplitudes span `[−ALPHA_MAX, ALPHA_MAX]²`.
pub const ALPHA_MAX: f64 = 2.0;

fn modes(rng: &mut Rng) -> usize {
    rng.random_range(1..=3)
}

fn state_json(s: &GaussianState) -> Value {
    json!(gaussian_state_to_json(s))
}

fn weights(k: usize, rng: &mut Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

fn max_state_diff(a: &GaussianState, b: &GaussianState) -> f64 {
    (a.mean() - b.mean()).amax().max(max_abs(&(a.cov() - b.cov())))
}

/// Point `i` of the coherent-amplitude grid.
pub fn alpha_grid_point(i: usize) -> Complex<f64> {
    let step = 2.0 * ALPHA_MAX / (ALPHA_GRID - 1) as f64;
    let (r, c) = (i / ALPHA_GRID, i % ALPHA_GRID);
    Complex::new(-ALPHA_MAX + c as f64 * step, -ALPHA_MAX + r as f64 * step)
}

pub(crate) fn checks() -> Vec<Check> {
    vec![
        Check::new("gaussian.theorem5", TOL_GAUSSIAN, |rng, _| {
            let s = random_gaussian_state(modes(rng), rng);
            let g = gr_real_gap(&s)?;
            let slack = g.gap.min(g.thermal_term).min(g.entropy_term);
            Ok(Trial::new(slack, state_json(&s)))
        }),
        Check::new("gaussian.corollary1", TOL_GAUSSIAN, |rng, _| {
            let n = modes(rng);
            let ch = random_incoherent_gaussian_channel(n, rng);
            let probe = probe_incoherent_gaussian(&ch, &default_probes(n)?)?;
            let slack = if probe.non_thermal > 0 {
                f64::NEG_INFINITY
            } else {
                -probe.conjugation_deviation
            };
            Ok(Trial::new(slack, json!(gaussian_channel_to_json(&ch))))
        }),
        Check::new("gaussian.corollary2", TOL_GAUSSIAN, |rng, _| {
            let s = random_gaussian_state(modes(rng), rng);
            let slack = s.real_projection().entropy()? - s.entropy()?;
            Ok(Trial::new(slack, state_json(&s)))
        }),
        Check::new("gaussian.theorem6", TOL_GAUSSIAN, |rng, _| {
            let n = modes(rng);
            let a = random_gaussian_state(n, rng);
            let b = random_gaussian_state(n, rng);
            let p: f64 = rng.random_range(0.01..0.99);
            let mix = boxplus(p, &a, &b)?;
            let slack = mix.entropy()? - (p * a.entropy()? + (1.0 - p) * b.entropy()?);
            Ok(Trial::new(slack, json!({ "p": p, "rho": state_json(&a), "sigma": state_json(&b) })))
        }),
        Check::new("gaussian.corollary3", TOL_GAUSSIAN, |rng, _| {
            let n = modes(rng);
            let k = rng.random_range(2..=4);
            let w = weights(k, rng);
            let states: Vec<GaussianState> = (0..k).map(|_| random_gaussian_state(n, rng)).collect();
            let mix = boxplus_many(&w, &states)?;
            let mut avg = 0.0;
            for (p, s) in w.iter().zip(&states) {
                avg += p * s.entropy()?;
            }
            let parts: Vec<Value> = states.iter().map(state_json).collect();
            Ok(Trial::new(mix.entropy()? - avg, json!({ "weights": w, "states": parts })))
        }),
        Check::new("gaussian.lemma1", TOL_GAUSSIAN, |rng, _| {
            let n = modes(rng);
            let a = random_pd(2 * n, rng);
            let b = random_pd(2 * n, rng);
            let na = symplectic_eigenvalues(&a)?;
            let nb = symplectic_eigenvalues(&b)?;
            let nab = symplectic_eigenvalues(&(&a + &b))?;
            let sum: Vec<f64> = na.iter().zip(&nb).map(|(x, y)| x + y).collect();
            let slack = supermajorization_margin(&nab, &sum)?;
            let rows = |m: &crate::linalg::RMatrix| -> Vec<Vec<f64>> {
                (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
            };
            Ok(Trial::new(slack, json!({ "A": rows(&a), "B": rows(&b) })))
        }),
        Check::new("gaussian.channel_conjugation", TOL_CHANNEL_CONJ, |rng, _| {
            let n = modes(rng);
            let ch = random_gaussian_channel(n, rng);
            let s = random_gaussian_state(n, rng);
            let lhs = ch.conjugate().apply(&s.conjugate())?;
            let rhs = ch.apply(&s)?.conjugate();
            Ok(Trial::new(
                -max_state_diff(&lhs, &rhs),
                json!({ "channel": gaussian_channel_to_json(&ch), "rho": state_json(&s) }),
            ))
        }),
        Check::new("gaussian.theorem4", TOL_GAUSSIAN, |rng, _| {
            let n = modes(rng);
            let s = random_gaussian_state(n, rng);
            let ch = random_incoherent_gaussian_channel(n, rng);
            let sym_conj = -(c_gr_symmetrized(&s)? - c_gr_symmetrized(&s.conjugate())?).abs();
            let mono = c_gr_symmetrized(&s)? - c_gr_symmetrized(&ch.apply(&s)?)?;
            let nu: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..=5.0)).collect();
            let thermal = GaussianState::thermal(&nu)?;
            let faithful = -c_gr_symmetrized(&thermal)?.abs();
            Ok(Trial::new(
                sym_conj.min(mono).min(faithful),
                json!({ "rho": state_json(&s), "channel": gaussian_channel_to_json(&ch), "thermal": nu }),
            ))
        }),
        Check::new("gaussian.cg2", TOL_GAUSSIAN, |rng, _| {
            let n = modes(rng);
            let s = random_gaussian_state(n, rng);
            let ch = random_incoherent_gaussian_channel(n, rng);
            let slack = c_gr(&s)? - c_gr(&ch.apply(&s)?)?;
            Ok(Trial::new(
                slack,
                json!({ "rho": state_json(&s), "channel": gaussian_channel_to_json(&ch) }),
            ))
        }),
        Check::new("gaussian.uncertainty", TOL_GAUSSIAN, |rng, _| {
            let n = modes(rng);
            let a = random_gaussian_state(n, rng);
            let b = random_gaussian_state(n, rng);
            let ch = random_gaussian_channel(n, rng);
            let p: f64 = rng.random_range(0.01..0.99);
            let outputs = [
                a.conjugate(),
                a.real_projection(),
                boxplus(p, &a, &b)?,
                ch.apply(&a)?,
            ];
            let slack = outputs
                .iter()
                .map(GaussianState::uncertainty_margin)
                .fold(f64::INFINITY, f64::min);
            Ok(Trial::new(
                slack,
                json!({ "p": p, "rho": state_json(&a), "sigma": state_json(&b), "channel": gaussian_channel_to_json(&ch) }),
            ))
        }),
        Check::new("gaussian.spectrum_conjugation", TOL_GAUSSIAN, |rng, _| {
            let s = random_gaussian_state(modes(rng), rng);
            let a = s.symplectic_eigenvalues()?;
            let b = s.conjugate().symplectic_eigenvalues()?;
            let dev = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            Ok(Trial::new(-dev, state_json(&s)))
        }),
        Check::new("gaussian.cg1", TOL_GAUSSIAN, |rng, _| {
            let n = modes(rng);
            let nu: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..=10.0)).collect();
            let thermal = GaussianState::thermal(&nu)?;
            Ok(Trial::new(-c_gr(&thermal)?.abs(), json!({ "thermal": nu })))
        }),
        Check::new("gaussian.example4", TOL_GAUSSIAN, |_, i| {
            let alpha = alpha_grid_point(i);
            let g = gr_real_gap(&coherent_state(alpha))?;
            let slack = -(g.gap - gap_coherent_closed_form(alpha)).abs();
            Ok(Trial::new(slack, json!({ "alpha": [alpha.re, alpha.im] })))
        })
        .with_trials(ALPHA_GRID * ALPHA_GRID),
        Check::new("gaussian.example5", TOL_GAUSSIAN, |rng, _| {
            let zeta = Complex::new(rng.random_range(-1.5..=1.5), rng.random_range(-1.5..=1.5));
            let g = gr_real_gap(&squeezed_state(zeta))?;
            let slack = -(g.gap - gap_squeezed_closed_form(zeta)).abs();
            Ok(Trial::new(slack, json!({ "zeta": [zeta.re, zeta.im] })))
        }),
    ]
}
