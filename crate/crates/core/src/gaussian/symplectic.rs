//! Symplectic structure: `Ω`, the conjugation matrix `O`, symplectic
//! spectra, the thermal entropy function and weak supermajorization.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_sqrt, HermitianEigen, RMatrix};

/// Relative tolerance on the `±ν` pairing of the `iΩV` spectrum.
pub const PAIRING_TOL: f64 = 1e-8;
/// Slack below 1 accepted by [`g_function`] before rejecting.
pub const BELOW_ONE_TOL: f64 = 1e-8;

/// `Ω = ⊕ [[0, 1], [−1, 0]]` in `(q₁, p₁, …, q_n, p_n)` ordering.
pub fn omega(n: usize) -> RMatrix {
    let mut w = RMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        w[(2 * j, 2 * j + 1)] = 1.0;
        w[(2 * j + 1, 2 * j)] = -1.0;
    }
    w
}

/// `O = ⊕ diag(1, −1)`, the phase-space image of complex conjugation.
pub fn conjugation_matrix(n: usize) -> RMatrix {
    RMatrix::from_fn(2 * n, 2 * n, |r, c| {
        if r != c {
            0.0
        } else if r % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    })
}

/// `O M O` without forming `O`: flips the sign of mixed q/p entries.
pub(crate) fn conjugate_by_o(m: &RMatrix) -> RMatrix {
    RMatrix::from_fn(m.nrows(), m.ncols(), |r, c| {
        if (r + c) % 2 == 0 {
            m[(r, c)]
        } else {
            -m[(r, c)]
        }
    })
}

/// Eigenvalues of the Hermitian matrix `i·A` for a real antisymmetric `A`.
fn i_times_eigenvalues(a: &RMatrix) -> Vec<f64> {
    let h = a.map(|v| Complex::new(0.0, v));
    HermitianEigen::new(&h).values
}

/// Symplectic eigenvalues of a symmetric positive definite `V`, ascending.
///
/// The spectrum of `iΩV` equals that of the Hermitian `V^{1/2}(iΩ)V^{1/2}`;
/// it consists of pairs `±ν_j`, one `ν_j` per mode.
pub fn symplectic_eigenvalues(v: &RMatrix) -> Result<Vec<f64>> {
    let dim = v.nrows();
    if dim == 0 || !dim.is_multiple_of(2) || v.ncols() != dim {
        return Err(Error::InvalidArgument(format!(
            "covariance must be 2n x 2n, got {}x{}",
            v.nrows(),
            v.ncols()
        )));
    }
    let n = dim / 2;
    let s = symmetric_sqrt(v);
    let vals = i_times_eigenvalues(&(&s * omega(n) * &s));
    let scale = vals.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
    let mut mismatch: f64 = 0.0;
    let mut nu = Vec::with_capacity(n);
    for k in 0..n {
        let lo = vals[k];
        let hi = vals[dim - 1 - k];
        mismatch = mismatch.max((lo + hi).abs() / scale);
        nu.push(0.5 * (hi - lo));
    }
    if mismatch > PAIRING_TOL || nu.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::SymplecticPairing(mismatch));
    }
    nu.sort_by(f64::total_cmp);
    Ok(nu)
}

/// `max |M Ω Mᵀ − Ω|`.
pub fn symplectic_defect(m: &RMatrix) -> f64 {
    let n = m.nrows() / 2;
    let w = omega(n);
    crate::linalg::max_abs(&(m * &w * m.transpose() - w))
}

/// Whether `M` is symplectic and brings `V` to `⊕ ν_j I₂` with the
/// symplectic spectrum of `V` (in any order), all within `1e-8`.
pub fn williamson_check(v: &RMatrix, m: &RMatrix) -> bool {
    const TOL: f64 = 1e-8;
    let dim = v.nrows();
    if dim == 0 || !dim.is_multiple_of(2) || m.shape() != v.shape() {
        return false;
    }
    if symplectic_defect(m) > TOL {
        return false;
    }
    let Ok(nu) = symplectic_eigenvalues(v) else {
        return false;
    };
    let w = m * v * m.transpose();
    let n = dim / 2;
    let mut blocks = Vec::with_capacity(n);
    for r in 0..dim {
        for c in 0..dim {
            let same_block = r / 2 == c / 2;
            if (!same_block || r != c)
                && w[(r, c)].abs() > TOL {
                    return false;
                }
        }
    }
    for j in 0..n {
        let (a, b) = (w[(2 * j, 2 * j)], w[(2 * j + 1, 2 * j + 1)]);
        if (a - b).abs() > TOL {
            return false;
        }
        blocks.push(0.5 * (a + b));
    }
    blocks.sort_by(f64::total_cmp);
    blocks.iter().zip(&nu).all(|(a, b)| (a - b).abs() <= TOL)
}

/// `g(x) = ((x+1)/2) log₂((x+1)/2) − ((x−1)/2) log₂((x−1)/2)`, `g(1) = 0`.
pub fn g_function(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 1.0 - BELOW_ONE_TOL {
        return Err(Error::BelowOne { value: x });
    }
    let x = x.max(1.0);
    let a = 0.5 * (x + 1.0);
    let b = 0.5 * (x - 1.0);
    let tail = if b > 0.0 { b * b.log2() } else { 0.0 };
    Ok(a * a.log2() - tail)
}

/// Whether `x` is weakly supermajorized by `y`: every prefix sum of the
/// ascending `x` is at least the matching prefix sum of the ascending `y`.
pub fn weak_supermajorize(x: &[f64], y: &[f64]) -> Result<bool> {
    Ok(supermajorization_margin(x, y)? >= 0.0)
}

/// `min_k (Σ_{j≤k} x↑_j − Σ_{j≤k} y↑_j)`; nonnegative iff `x` is weakly
/// supermajorized by `y`.
pub fn supermajorization_margin(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (mut sx, mut sy) = (0.0, 0.0);
    let mut margin = f64::INFINITY;
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        margin = margin.min(sx - sy);
    }
    Ok(if x.is_empty() { 0.0 } else { margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn omega_and_o_relations() {
        for n in 1..=3 {
            let w = omega(n);
            let o = conjugation_matrix(n);
            let id = RMatrix::identity(2 * n, 2 * n);
            assert_eq!(&w * &w, -&id);
            assert_eq!(&w * w.transpose(), id);
            assert_eq!(&o * &w, -(&w * &o));
            assert_eq!(&o * &o, id);
            assert_eq!(conjugate_by_o(&w), &o * &w * &o);
        }
        assert_eq!(omega(1), RMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
    }

    #[test]
    fn spectra_of_williamson_forms() {
        let v = RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 3.0, 1.5, 1.5]));
        let nu = symplectic_eigenvalues(&v).unwrap();
        assert_abs_diff_eq!(nu[0], 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(nu[1], 3.0, epsilon = 1e-12);
        // ν = √det V for one mode.
        let sq = RMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 3.0]);
        let nu = symplectic_eigenvalues(&sq).unwrap();
        assert_abs_diff_eq!(nu[0], (6.0f64 - 0.25).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn williamson_examples() {
        let v = RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0, 5.0, 5.0]));
        assert!(williamson_check(&v, &RMatrix::identity(4, 4)));
        assert!(williamson_check(&RMatrix::identity(2, 2), &omega(1)));
        let mut m = RMatrix::identity(2, 2);
        m[(0, 1)] = 0.1;
        m[(1, 1)] = 1.2;
        assert!(!williamson_check(&RMatrix::identity(2, 2), &m));
    }

    #[test]
    fn g_values() {
        assert_eq!(g_function(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(g_function(3.0).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g_function(2.0).unwrap(), 1.5 * 1.5f64.log2() + 0.5, epsilon = 1e-14);
        assert!(g_function(0.9).is_err());
        assert_eq!(g_function(1.0 - 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn majorization_examples() {
        assert!(weak_supermajorize(&[1.0, 2.0], &[1.0, 2.0]).unwrap());
        assert!(weak_supermajorize(&[1.0, 2.0], &[0.5, 1.5]).unwrap());
        assert!(!weak_supermajorize(&[0.4, 2.0], &[0.5, 1.5]).unwrap());
        assert!(weak_supermajorize(&[1.0], &[1.0, 2.0]).is_err());
    }
}
