//! Bosonic Gaussian states and channels in the `(X̄, V)` representation.
//!
//! Quadratures are ordered `(q₁, p₁, …, q_n, p_n)`. The vacuum has `V = I`.

pub mod random;
pub mod symplectic;

use nalgebra::{Complex, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, RMatrix};

pub use symplectic::{
    conjugation_matrix, g_function, omega, supermajorization_margin, symplectic_eigenvalues,
    weak_supermajorize, williamson_check,
};

use symplectic::conjugate_by_o;

/// Symmetry tolerance on covariance and noise matrices.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Slack on `V + iΩ ⪰ 0` and on the channel CP condition.
pub const UNCERTAINTY_TOL: f64 = 1e-9;
/// Tolerance used by [`GaussianState::is_thermal`].
pub const THERMAL_TOL: f64 = 1e-9;
/// Negative entropy differences down to this are clamped to zero.
pub const CLAMP: f64 = 1e-9;

fn check_square(m: &RMatrix, dim: usize, what: &'static str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    if m.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: m.nrows(),
        });
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(what));
    }
    Ok(())
}

fn asymmetry(m: &RMatrix) -> f64 {
    linalg::max_abs(&(m - m.transpose()))
}

fn symmetrize(m: &RMatrix) -> RMatrix {
    (m + m.transpose()) * 0.5
}

/// `λ_min(A + iB)` for real symmetric `A` and real antisymmetric `B`.
fn min_eig_plus_i(a: &RMatrix, b: &RMatrix) -> f64 {
    let h = a.zip_map(b, Complex::new);
    linalg::lambda_min(&h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: RMatrix,
}

impl GaussianState {
    /// Validates symmetry, the uncertainty principle and `V > 0`.
    pub fn new(mean: DVector<f64>, cov: RMatrix) -> Result<Self> {
        if mean.is_empty() || !mean.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "mean must have even length 2n >= 2, got {}",
                mean.len()
            )));
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("mean"));
        }
        check_square(&cov, mean.len(), "covariance")?;
        let asym = asymmetry(&cov);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        let cov = symmetrize(&cov);
        let n = mean.len() / 2;
        let margin = min_eig_plus_i(&cov, &omega(n));
        if margin < -UNCERTAINTY_TOL {
            return Err(Error::Uncertainty(margin));
        }
        let lmin = linalg::symmetric_eigenvalues(&cov)[0];
        if !(lmin > 0.0) {
            return Err(Error::NotPositive(lmin));
        }
        Ok(GaussianState { mean, cov })
    }

    pub(crate) fn from_trusted(mean: DVector<f64>, cov: RMatrix) -> Self {
        GaussianState {
            mean,
            cov: symmetrize(&cov),
        }
    }

    pub fn vacuum(n: usize) -> Result<Self> {
        Self::thermal(&vec![1.0; n])
    }

    /// `(0, ⊕ ν_j I₂)`.
    pub fn thermal(nu: &[f64]) -> Result<Self> {
        if nu.is_empty() {
            return Err(Error::EmptyDimension);
        }
        let diag: Vec<f64> = nu.iter().flat_map(|&v| [v, v]).collect();
        Self::new(
            DVector::zeros(2 * nu.len()),
            RMatrix::from_diagonal(&DVector::from_vec(diag)),
        )
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &RMatrix {
        &self.cov
    }

    /// `λ_min(V + iΩ)`.
    pub fn uncertainty_margin(&self) -> f64 {
        min_eig_plus_i(&self.cov, &omega(self.modes()))
    }

    /// `ρ* = (O X̄, O V O)`.
    pub fn conjugate(&self) -> GaussianState {
        let mean = DVector::from_fn(self.mean.len(), |i, _| {
            if i % 2 == 0 {
                self.mean[i]
            } else {
                -self.mean[i]
            }
        });
        GaussianState {
            mean,
            cov: conjugate_by_o(&self.cov),
        }
    }

    /// `ρ′ = ((X̄ + O X̄)/2, (V + O V O)/2)`.
    pub fn real_projection(&self) -> GaussianState {
        let mean = DVector::from_fn(self.mean.len(), |i, _| {
            if i % 2 == 0 {
                self.mean[i]
            } else {
                0.0
            }
        });
        let cov = RMatrix::from_fn(self.cov.nrows(), self.cov.ncols(), |r, c| {
            if (r + c) % 2 == 0 {
                self.cov[(r, c)]
            } else {
                0.0
            }
        });
        GaussianState { mean, cov }
    }

    /// Whether `ρ = ρ*` within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        let c = self.conjugate();
        (&c.mean - &self.mean).amax() <= tol && linalg::max_abs(&(&c.cov - &self.cov)) <= tol
    }

    /// Thermal: zero mean and `V = ⊕ ν_j I₂` with `ν_j ≥ 1`.
    pub fn is_thermal(&self) -> bool {
        if self.mean.amax() > THERMAL_TOL {
            return false;
        }
        let dim = self.cov.nrows();
        for r in 0..dim {
            for c in 0..dim {
                if r != c && self.cov[(r, c)].abs() > THERMAL_TOL {
                    return false;
                }
            }
        }
        (0..self.modes()).all(|j| {
            let (a, b) = (self.cov[(2 * j, 2 * j)], self.cov[(2 * j + 1, 2 * j + 1)]);
            (a - b).abs() <= THERMAL_TOL && a >= 1.0 - 1e-8
        })
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(&self.cov)
    }

    /// `Σ_j g(ν_j)` in bits.
    pub fn entropy(&self) -> Result<f64> {
        self.symplectic_eigenvalues()?
            .into_iter()
            .map(g_function)
            .sum()
    }

    /// `ν̄_j = ½ (V_{qq} + V_{pp} + X̄_q² + X̄_p²)` per mode.
    pub fn thermal_occupations(&self) -> Vec<f64> {
        (0..self.modes())
            .map(|j| {
                let (q, p) = (2 * j, 2 * j + 1);
                0.5 * (self.cov[(q, q)] + self.cov[(p, p)] + self.mean[q].powi(2) + self.mean[p].powi(2))
            })
            .collect()
    }

    /// Thermal state with the same mean particle number in every mode.
    pub fn thermal_reference(&self) -> Result<GaussianState> {
        let nu = self.thermal_occupations();
        if let Some(&bad) = nu.iter().find(|&&v| v < 1.0 - 1e-8) {
            return Err(Error::BelowOne { value: bad });
        }
        let clamped: Vec<f64> = nu.iter().map(|v| v.max(1.0)).collect();
        GaussianState::thermal(&clamped)
    }

    pub fn to_json_parts(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        let cov = (0..self.cov.nrows())
            .map(|r| self.cov.row(r).iter().copied().collect())
            .collect();
        (self.mean.iter().copied().collect(), cov)
    }
}

/// `(X̄, V) = (2 Re α, 2 Im α; I₂)`.
pub fn coherent_state(alpha: Complex<f64>) -> GaussianState {
    GaussianState::from_trusted(
        DVector::from_vec(vec![2.0 * alpha.re, 2.0 * alpha.im]),
        RMatrix::identity(2, 2),
    )
}

/// Single-mode squeezed vacuum with `ζ = r e^{iθ}`.
pub fn squeezed_state(zeta: Complex<f64>) -> GaussianState {
    let r2 = 2.0 * zeta.norm();
    let theta = zeta.arg();
    let (ch, sh) = (r2.cosh(), r2.sinh());
    let cov = RMatrix::from_row_slice(
        2,
        2,
        &[
            ch + theta.cos() * sh,
            theta.sin() * sh,
            theta.sin() * sh,
            ch - theta.cos() * sh,
        ],
    );
    GaussianState::from_trusted(DVector::zeros(2), cov)
}

/// `p ρ ⊞ (1−p) σ = (p X̄ + (1−p) Ȳ, p V + (1−p) W)`.
pub fn boxplus(p: f64, rho: &GaussianState, sigma: &GaussianState) -> Result<GaussianState> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p, "(0, 1)"));
    }
    boxplus_many(&[p, 1.0 - p], &[rho.clone(), sigma.clone()])
}

/// `⊞_j p_j ρ_j` for a probability vector `p`.
pub fn boxplus_many(weights: &[f64], states: &[GaussianState]) -> Result<GaussianState> {
    if weights.len() != states.len() || states.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: states.len(),
            got: weights.len(),
        });
    }
    let n = states[0].modes();
    if let Some(s) = states.iter().find(|s| s.modes() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: s.modes(),
        });
    }
    if let Some(&w) = weights.iter().find(|w| !(**w >= 0.0 && **w <= 1.0)) {
        return Err(Error::InvalidProbability(w, "[0, 1]"));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("weights sum to {total}, not 1")));
    }
    let mut mean = DVector::zeros(2 * n);
    let mut cov = RMatrix::zeros(2 * n, 2 * n);
    for (w, s) in weights.iter().zip(states) {
        mean += &s.mean * *w;
        cov += &s.cov * *w;
    }
    Ok(GaussianState::from_trusted(mean, cov))
}

/// `C_Gr(ρ) = S(ρ̄) − S(ρ)`.
pub fn c_gr(rho: &GaussianState) -> Result<f64> {
    let v = rho.thermal_reference()?.entropy()? - rho.entropy()?;
    Ok(clamp_small(v))
}

fn clamp_small(v: f64) -> f64 {
    if (-CLAMP..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// `½ [C_Gr(ρ) + C_Gr(ρ*)]`.
pub fn c_gr_symmetrized(rho: &GaussianState) -> Result<f64> {
    Ok(0.5 * (c_gr(rho)? + c_gr(&rho.conjugate())?))
}

/// `C_Gr(ρ) − C_Gr(ρ′)` split as `[S(ρ̄) − S(ρ̄′)] + [S(ρ′) − S(ρ)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealGap {
    pub gap: f64,
    pub thermal_term: f64,
    pub entropy_term: f64,
}

pub fn gr_real_gap(rho: &GaussianState) -> Result<RealGap> {
    let real = rho.real_projection();
    let s = rho.entropy()?;
    let s_real = real.entropy()?;
    let s_bar = rho.thermal_reference()?.entropy()?;
    let s_bar_real = real.thermal_reference()?.entropy()?;
    let thermal_term = s_bar - s_bar_real;
    let entropy_term = s_real - s;
    Ok(RealGap {
        gap: thermal_term + entropy_term,
        thermal_term,
        entropy_term,
    })
}

/// `g(1 + 2|α|²) − g(1 + 2 (Re α)²)`.
pub fn gap_coherent_closed_form(alpha: Complex<f64>) -> f64 {
    let full = g_function(1.0 + 2.0 * alpha.norm_sqr()).expect("argument >= 1");
    let real = g_function(1.0 + 2.0 * alpha.re * alpha.re).expect("argument >= 1");
    full - real
}

/// `g(√(1 + sin²θ sinh²(2|ζ|)))`: the squeezed-state gap under the `iΩV`
/// definition of symplectic eigenvalues.
pub fn gap_squeezed_closed_form(zeta: Complex<f64>) -> f64 {
    let s = zeta.arg().sin() * (2.0 * zeta.norm()).sinh();
    g_function((1.0 + s * s).sqrt()).expect("argument >= 1")
}

/// `g(1 + sin²θ sinh²(2|ζ|))`, the published expression taken literally.
pub fn gap_squeezed_paper_formula(zeta: Complex<f64>) -> f64 {
    let s = zeta.arg().sin() * (2.0 * zeta.norm()).sinh();
    g_function(1.0 + s * s).expect("argument >= 1")
}

/// A Gaussian channel `X̄ → T X̄ + b`, `V → T V Tᵀ + N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    b: DVector<f64>,
    t: RMatrix,
    n: RMatrix,
}

impl GaussianChannel {
    /// Validates shapes, symmetry of `N` and `N + iΩ − i T Ω Tᵀ ⪰ 0`.
    pub fn new(b: DVector<f64>, t: RMatrix, n: RMatrix) -> Result<Self> {
        if b.is_empty() || !b.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "displacement must have even length 2n >= 2, got {}",
                b.len()
            )));
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("displacement"));
        }
        check_square(&t, b.len(), "T")?;
        check_square(&n, b.len(), "N")?;
        let asym = asymmetry(&n);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        let ch = GaussianChannel {
            b,
            t,
            n: symmetrize(&n),
        };
        let margin = ch.cp_margin();
        if margin < -UNCERTAINTY_TOL {
            return Err(Error::NotCompletelyPositive(margin));
        }
        Ok(ch)
    }

    pub(crate) fn from_trusted(b: DVector<f64>, t: RMatrix, n: RMatrix) -> Self {
        GaussianChannel {
            b,
            t,
            n: symmetrize(&n),
        }
    }

    pub fn identity(modes: usize) -> Self {
        Self::displacement(DVector::zeros(2 * modes))
    }

    pub fn displacement(b: DVector<f64>) -> Self {
        let dim = b.len();
        GaussianChannel {
            b,
            t: RMatrix::identity(dim, dim),
            n: RMatrix::zeros(dim, dim),
        }
    }

    pub fn modes(&self) -> usize {
        self.b.len() / 2
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn t(&self) -> &RMatrix {
        &self.t
    }

    pub fn n(&self) -> &RMatrix {
        &self.n
    }

    /// `λ_min(N + iΩ − i T Ω Tᵀ)`.
    pub fn cp_margin(&self) -> f64 {
        let w = omega(self.modes());
        let anti = &w - &self.t * &w * self.t.transpose();
        min_eig_plus_i(&self.n, &anti)
    }

    /// `φ* = (O b, O T O, O N O)`.
    pub fn conjugate(&self) -> GaussianChannel {
        let b = DVector::from_fn(self.b.len(), |i, _| if i % 2 == 0 { self.b[i] } else { -self.b[i] });
        GaussianChannel {
            b,
            t: conjugate_by_o(&self.t),
            n: conjugate_by_o(&self.n),
        }
    }

    pub fn apply(&self, rho: &GaussianState) -> Result<GaussianState> {
        if rho.modes() != self.modes() {
            return Err(Error::DimensionMismatch {
                expected: self.modes(),
                got: rho.modes(),
            });
        }
        let mean = &self.t * &rho.mean + &self.b;
        let cov = &self.t * &rho.cov * self.t.transpose() + &self.n;
        Ok(GaussianState::from_trusted(mean, cov))
    }
}

/// Outcome of testing a channel on thermal probe states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeOutcome {
    pub probes: usize,
    /// Probes whose image is not thermal.
    pub non_thermal: usize,
    /// `max |φ*(σ) − φ(σ)|` over probes, entrywise in mean and covariance.
    pub conjugation_deviation: f64,
}

impl ProbeOutcome {
    pub fn passed(&self) -> bool {
        self.non_thermal == 0 && self.conjugation_deviation <= THERMAL_TOL
    }
}

/// Thermal probes with `ν_j ∈ {1, 1.5, 3, 10}`, at most 16, spread evenly
/// over the full product grid.
pub fn default_probes(modes: usize) -> Result<Vec<GaussianState>> {
    const LEVELS: [f64; 4] = [1.0, 1.5, 3.0, 10.0];
    const CAP: usize = 16;
    if modes == 0 {
        return Err(Error::EmptyDimension);
    }
    let total = 4usize.checked_pow(modes as u32).unwrap_or(usize::MAX);
    let count = total.min(CAP);
    (0..count)
        .map(|k| {
            let mut idx = if total <= CAP { k } else { k * (total / CAP) + k % (total / CAP).max(1) };
            let nu: Vec<f64> = (0..modes)
                .map(|_| {
                    let v = LEVELS[idx % 4];
                    idx /= 4;
                    v
                })
                .collect();
            GaussianState::thermal(&nu)
        })
        .collect()
}

/// Necessary condition for incoherence: every thermal probe is mapped to a
/// thermal state. Also records the deviation `φ*(σ) − φ(σ)`, which must
/// vanish for incoherent channels.
pub fn probe_incoherent_gaussian(ch: &GaussianChannel, probes: &[GaussianState]) -> Result<ProbeOutcome> {
    let conj = ch.conjugate();
    let mut non_thermal = 0;
    let mut dev: f64 = 0.0;
    for sigma in probes {
        if !sigma.is_thermal() {
            return Err(Error::NotThermal);
        }
        let out = ch.apply(sigma)?;
        if !out.is_thermal() {
            non_thermal += 1;
        }
        let out_conj = conj.apply(sigma)?;
        dev = dev
            .max((&out.mean - &out_conj.mean).amax())
            .max(linalg::max_abs(&(&out.cov - &out_conj.cov)));
    }
    Ok(ProbeOutcome {
        probes: probes.len(),
        non_thermal,
        conjugation_deviation: dev,
    })
}
