//! Seeded instance generators.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{ChannelKind, DensityMatrix, KrausChannel, PureState};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianEigen, C64};

/// Complex standard Gaussian with `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(s * re, s * im)
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// `GG†/tr(GG†)` with `G` a `d x rank` Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(Error::EmptyDimension);
    }
    if rank == 0 || rank > d {
        return Err(Error::InvalidRank { rank, dim: d });
    }
    let g = ginibre(d, rank, rng);
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m).re;
    Ok(DensityMatrix::from_trusted(m / C64::new(tr, 0.0)))
}

/// Real symmetric state: `GGᵀ/tr(GGᵀ)` with real Gaussian `G`.
pub fn random_real_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(Error::EmptyDimension);
    }
    let g = CMatrix::from_fn(d, d, |_, _| {
        let x: f64 = StandardNormal.sample(rng);
        C64::new(x, 0.0)
    });
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m).re;
    Ok(DensityMatrix::from_trusted(m / C64::new(tr, 0.0)))
}

pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<PureState> {
    if d == 0 {
        return Err(Error::EmptyDimension);
    }
    let v = DVector::from_fn(d, |_, _| complex_normal(rng));
    let n = v.norm();
    Ok(PureState::from_trusted(v / C64::new(n, 0.0)))
}

/// Uniform phases on the diagonal.
pub fn random_diag_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<KrausChannel> {
    if d == 0 {
        return Err(Error::EmptyDimension);
    }
    let tau = std::f64::consts::TAU;
    let phases: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * tau).collect();
    KrausChannel::diagonal_unitary(&phases)
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(d, d, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..d {
        let rjj = r[(j, j)];
        let ph = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { linalg::ONE };
        for i in 0..d {
            u[(i, j)] *= ph;
        }
    }
    u
}

/// Random incoherent channel with `branches` structured Kraus operators.
///
/// Each operator sends column `c` to a random row with a complex Gaussian
/// amplitude. The set is scaled by `1/√λ_max(S)`, `S = Σ A†A`, and completed
/// with rank-one operators `√r_ν |t_ν><e_ν|` built from the eigenpairs of
/// `I − S/λ_max`; each has a single nonzero row, so the whole set stays
/// incoherent and `Σ K†K = I`.
pub fn random_incoherent_channel<R: Rng + ?Sized>(
    d: usize,
    branches: usize,
    rng: &mut R,
) -> Result<KrausChannel> {
    if d == 0 {
        return Err(Error::EmptyDimension);
    }
    if branches == 0 {
        return Err(Error::InvalidArgument("at least one Kraus branch required".into()));
    }
    let mut ops: Vec<CMatrix> = (0..branches)
        .map(|_| {
            let mut a = CMatrix::zeros(d, d);
            for c in 0..d {
                let r = rng.random_range(0..d);
                a[(r, c)] = complex_normal(rng);
            }
            a
        })
        .collect();
    let mut s = CMatrix::zeros(d, d);
    for a in &ops {
        s += a.adjoint() * a;
    }
    let lmax = linalg::hermitian_eigenvalues(&s).last().copied().unwrap_or(0.0);
    if lmax <= 0.0 {
        return KrausChannel::identity(d);
    }
    let scale = C64::new(1.0 / lmax.sqrt(), 0.0);
    for a in &mut ops {
        *a *= scale;
    }
    let rest = linalg::identity(d) - s / C64::new(lmax, 0.0);
    let eig = HermitianEigen::new(&rest);
    for (k, &r) in eig.values.iter().enumerate() {
        if r <= 1e-14 {
            continue;
        }
        let t = rng.random_range(0..d);
        let e = eig.vectors.column(k);
        let mut b = CMatrix::zeros(d, d);
        for c in 0..d {
            b[(t, c)] = e[c].conj() * r.sqrt();
        }
        ops.push(b);
    }
    KrausChannel::new(ops, ChannelKind::Channel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from;

    #[test]
    fn densities_are_valid_and_deterministic() {
        for rank in 1..=3 {
            let a = random_density(3, rank, &mut rng_from(11)).unwrap();
            let b = random_density(3, rank, &mut rng_from(11)).unwrap();
            assert_eq!(a, b);
            assert!(DensityMatrix::new(a.matrix().clone()).is_ok());
        }
        assert!(matches!(
            random_density(3, 4, &mut rng_from(0)),
            Err(Error::InvalidRank { .. })
        ));
    }

    #[test]
    fn incoherent_channels_are_valid() {
        let mut rng = rng_from(5);
        for d in 1..=5 {
            for branches in 1..=4 {
                let ch = random_incoherent_channel(d, branches, &mut rng).unwrap();
                assert!(ch.is_incoherent());
                assert!(ch.conjugate().is_incoherent());
            }
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let u = random_unitary(4, &mut rng_from(2));
        let dev = linalg::max_abs_diff(&(u.adjoint() * &u), &linalg::identity(4));
        assert!(dev < 1e-12);
    }
}
