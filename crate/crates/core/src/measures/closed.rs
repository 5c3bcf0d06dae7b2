//! Closed-form coherence measures.

use crate::error::{Error, Result};
use crate::linalg::HermitianEigen;
use crate::qstate::{shannon_entropy, von_neumann_entropy, DensityMatrix, PureState};

use super::RoofFn;

/// Eigenvalues below this are treated as zero before taking fractional
/// powers; rounding noise of order `1e-16` would otherwise surface as
/// `1e-8` after a square root.
const RANK_FLOOR: f64 = 1e-13;

/// Measures are clamped to zero when they come out in `[−CLAMP, 0)`.
pub const CLAMP: f64 = 1e-9;

pub(crate) fn clamp_small_negative(v: f64) -> f64 {
    if (-CLAMP..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// `Σ_{j≠k} |ρ_jk|`.
pub fn c_l1(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let m = rho.matrix();
    let mut acc = 0.0;
    for r in 0..d {
        for c in 0..d {
            if r != c {
                acc += m[(r, c)].norm();
            }
        }
    }
    acc
}

/// `S(ρ_diag) − S(ρ)` in bits.
pub fn c_rel_ent(rho: &DensityMatrix) -> f64 {
    clamp_small_negative(shannon_entropy(&rho.populations()) - von_neumann_entropy(rho))
}

pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && (0.0..=2.0).contains(&alpha) && alpha != 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// `(1/(α−1)) [Σ_j <j|ρ^α|j>^{1/α} − 1]` for `α ∈ [0,1) ∪ (1,2]`.
///
/// At `α = 0` each term is replaced by its limit: `exp(<j|ln ρ|j>)` when
/// `|j>` lies in the support of `ρ`, and `0` otherwise.
pub fn c_tsallis(rho: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let eig = HermitianEigen::new(rho.matrix());
    let d = rho.dim();
    let sum: f64 = if alpha == 0.0 {
        let support = 1e-12;
        (0..d)
            .map(|j| {
                let mut log_mean = 0.0;
                for (k, &l) in eig.values.iter().enumerate() {
                    let w = eig.vectors[(j, k)].norm_sqr();
                    if w <= 1e-14 {
                        continue;
                    }
                    if l <= support {
                        return 0.0;
                    }
                    log_mean += w * l.ln();
                }
                log_mean.exp()
            })
            .sum()
    } else {
        let powered = eig.map(|l| if l < RANK_FLOOR { 0.0 } else { l.min(1.0).powf(alpha) });
        (0..d)
            .map(|j| powered[(j, j)].re.max(0.0).powf(1.0 / alpha))
            .sum()
    };
    Ok(clamp_small_negative((sum - 1.0) / (alpha - 1.0)))
}

/// `f(|<1|ψ>|², …, |<d|ψ>|²)`.
pub fn c_convex_roof_pure(psi: &PureState, f: RoofFn) -> f64 {
    f.eval(&psi.probabilities())
}

/// `√(x²+y²) − |x|`, the l1 real-part gap of the Bloch state `(x, y, z)`.
pub fn bloch_gap_l1(x: f64, y: f64) -> Result<f64> {
    if !(x.is_finite() && y.is_finite()) || x * x + y * y > 1.0 + 1e-12 {
        return Err(Error::OutsideUnitDisk(x, y));
    }
    Ok(x.hypot(y) - x.abs())
}

/// `Σ_{j,k} (|ρ_jk| − |Re ρ_jk|)`.
pub fn l1_gap_entrywise(rho: &DensityMatrix) -> f64 {
    rho.matrix().iter().map(|z| z.norm() - z.re.abs()).sum()
}

/// Whether every off-diagonal entry is at most `tol` in modulus.
pub fn is_incoherent_state(rho: &DensityMatrix, tol: f64) -> bool {
    rho.is_diagonal(tol)
}

pub(crate) fn pure_probabilities(rho: &DensityMatrix) -> Option<Vec<f64>> {
    rho.as_pure(1e-12).map(|p| p.probabilities())
}
