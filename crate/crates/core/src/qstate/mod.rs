//! Finite-dimensional states and Kraus channels in the fixed orthonormal
//! basis `{|j>}`, together with the conjugation / real-part / dephasing
//! constructions.
//!
//! Matrices are validated on ingestion: the Hermitian part `(ρ + ρ†)/2` is
//! kept, and the Hermiticity, unit-trace and positivity invariants are
//! checked at [`STATE_TOL`].

pub mod random;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, binary_entropy, hermitian_eigenvalues, max_hermitian_defect, CMatrix, HermitianEigen,
    C64, ONE, ZERO,
};
use nalgebra::DVector;

/// Tolerance for the Hermitian, trace and positivity invariants of a state.
pub const STATE_TOL: f64 = 1e-10;
/// Entrywise tolerance on `Σ K†K = I` for channels.
pub const CHANNEL_TOL: f64 = 1e-9;
/// Branches lighter than this are dropped by [`KrausChannel::branches`].
pub const BRANCH_CUTOFF: f64 = 1e-12;
/// Entries at or below this modulus count as zero in the incoherence test.
pub const ZERO_ENTRY: f64 = 1e-12;

/// A `d x d` density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates `mat` as a density matrix after Hermitian symmetrization.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare(mat.nrows(), mat.ncols()));
        }
        if mat.nrows() == 0 {
            return Err(Error::EmptyDimension);
        }
        if !linalg::is_finite_complex(&mat) {
            return Err(Error::NonFinite("density matrix"));
        }
        let defect = max_hermitian_defect(&mat);
        if defect > STATE_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let mat = linalg::hermitian_part(&mat);
        let tr = linalg::trace(&mat).re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let lmin = linalg::lambda_min(&mat);
        if lmin < -STATE_TOL {
            return Err(Error::NotPositive(lmin));
        }
        Ok(DensityMatrix { mat })
    }

    /// Builds from separate real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let d = re.len();
        if im.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: im.len(),
            });
        }
        for row in re.iter().chain(im.iter()) {
            if row.len() != d {
                return Err(Error::NotSquare(d, row.len()));
            }
        }
        Self::new(CMatrix::from_fn(d, d, |r, c| C64::new(re[r][c], im[r][c])))
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(linalg::diag_complex(populations))
    }

    /// Qubit state `½[[1+z, x−iy], [x+iy, 1−z]]`.
    pub fn bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let h = 0.5;
        Self::new(CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(h * (1.0 + z), 0.0),
                C64::new(h * x, -h * y),
                C64::new(h * x, h * y),
                C64::new(h * (1.0 - z), 0.0),
            ],
        ))
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0 / d as f64; d])
    }

    /// Wraps a matrix produced by an invariant-preserving construction.
    pub(crate) fn from_trusted(mat: CMatrix) -> Self {
        DensityMatrix {
            mat: linalg::hermitian_part(&mat),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn entry(&self, j: usize, k: usize) -> C64 {
        self.mat[(j, k)]
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Sorted eigenvalues.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|r| (0..d).all(|c| r == c || self.mat[(r, c)].norm() <= tol))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.mat.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.mat[(j, j)].re).collect()
    }

    /// `(ρ*)_jk = conj(ρ_jk)`.
    pub fn conjugate(&self) -> DensityMatrix {
        DensityMatrix {
            mat: linalg::conj_matrix(&self.mat),
        }
    }

    /// `Re ρ = (ρ + ρ*)/2`.
    pub fn real_part(&self) -> DensityMatrix {
        DensityMatrix {
            mat: self.mat.map(|z| C64::new(z.re, 0.0)),
        }
    }

    /// Entries `Im ρ_jk` (a real antisymmetric matrix).
    pub fn imag_part(&self) -> linalg::RMatrix {
        self.mat.map(|z| z.im)
    }

    /// `ρ_diag = Σ ρ_jj |j><j|`.
    pub fn dephase(&self) -> DensityMatrix {
        let d = self.dim();
        DensityMatrix {
            mat: CMatrix::from_fn(d, d, |r, c| if r == c { self.mat[(r, c)] } else { ZERO }),
        }
    }

    /// Purity test via the largest eigenvalue.
    pub fn is_pure(&self, tol: f64) -> bool {
        self.spectrum().last().is_some_and(|&l| l >= 1.0 - tol)
    }

    /// Leading eigenvector when the state is pure within `tol`.
    pub fn as_pure(&self, tol: f64) -> Option<PureState> {
        let eig = HermitianEigen::new(&self.mat);
        let d = self.dim();
        let top = *eig.values.last()?;
        if top < 1.0 - tol {
            return None;
        }
        let v = eig.vectors.column(d - 1).into_owned();
        let norm = v.norm();
        Some(PureState { amps: v / C64::new(norm, 0.0) })
    }
}

impl DensityMatrix {
    /// Serialization-friendly `{dim, re, im}` form.
    pub fn to_json_parts(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let d = self.dim();
        let re = (0..d)
            .map(|r| (0..d).map(|c| self.mat[(r, c)].re).collect())
            .collect();
        let im = (0..d)
            .map(|r| (0..d).map(|c| self.mat[(r, c)].im).collect())
            .collect();
        (re, im)
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: DVector<C64>,
}

impl PureState {
    pub fn new(amps: DVector<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state vector"));
        }
        let n2 = amps.norm_squared();
        if (n2 - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(PureState { amps })
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amps))
    }

    /// Basis state `|j>` in dimension `d`.
    pub fn basis(d: usize, j: usize) -> Result<Self> {
        if j >= d {
            return Err(Error::InvalidArgument(format!("basis index {j} >= {d}")));
        }
        let mut v = DVector::from_element(d, ZERO);
        v[j] = ONE;
        Self::new(v)
    }

    /// Uniform superposition `Σ_j |j>/√d`.
    pub fn uniform(d: usize) -> Result<Self> {
        Self::new(DVector::from_element(
            d,
            C64::new(1.0 / (d as f64).sqrt(), 0.0),
        ))
    }

    pub(crate) fn from_trusted(amps: DVector<C64>) -> Self {
        PureState { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    /// `|<j|ψ>|²` for every basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn conjugate(&self) -> PureState {
        PureState {
            amps: self.amps.map(|z| z.conj()),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(&self.amps * self.amps.adjoint())
    }
}

/// Whether the Kraus set is trace preserving or merely trace non-increasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Channel,
    Operation,
}

/// A quantum operation `φ = {K_μ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<CMatrix>,
    kind: ChannelKind,
}

impl KrausChannel {
    /// Validates `Σ K†K = I` (channel) or `Σ K†K ⪯ I` (operation).
    pub fn new(kraus: Vec<CMatrix>, kind: ChannelKind) -> Result<Self> {
        let dim = kraus.first().map(|k| k.nrows()).ok_or_else(|| {
            Error::InvalidArgument("a Kraus set needs at least one operator".into())
        })?;
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        for k in &kraus {
            if k.nrows() != k.ncols() {
                return Err(Error::NotSquare(k.nrows(), k.ncols()));
            }
            if k.nrows() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: k.nrows(),
                });
            }
            if !linalg::is_finite_complex(k) {
                return Err(Error::NonFinite("Kraus operator"));
            }
        }
        let channel = KrausChannel { dim, kraus, kind };
        let gram = channel.completeness();
        match kind {
            ChannelKind::Channel => {
                let dev = linalg::max_abs_diff(&gram, &linalg::identity(dim));
                if dev > CHANNEL_TOL {
                    return Err(Error::NotTracePreserving(dev));
                }
            }
            ChannelKind::Operation => {
                let lmin = linalg::lambda_min(&(linalg::identity(dim) - gram));
                if lmin < -CHANNEL_TOL {
                    return Err(Error::NotSubnormalized(lmin));
                }
            }
        }
        Ok(channel)
    }

    /// Single-Kraus unitary channel. The unitarity check is the channel check.
    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u], ChannelKind::Channel)
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::unitary(linalg::identity(d))
    }

    /// `{|j><j|}_j`.
    pub fn full_dephasing(d: usize) -> Result<Self> {
        let kraus = (0..d)
            .map(|j| {
                let mut k = CMatrix::zeros(d, d);
                k[(j, j)] = ONE;
                k
            })
            .collect();
        Self::new(kraus, ChannelKind::Channel)
    }

    /// `U = Σ e^{iθ_j}|j><j|`.
    pub fn diagonal_unitary(phases: &[f64]) -> Result<Self> {
        let d = phases.len();
        let mut u = CMatrix::zeros(d, d);
        for (j, &t) in phases.iter().enumerate() {
            u[(j, j)] = C64::from_polar(1.0, t);
        }
        Self::unitary(u)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// `Σ_μ K_μ† K_μ`.
    pub fn completeness(&self) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc += k.adjoint() * k;
        }
        acc
    }

    fn check_dim(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        Ok(())
    }

    /// `Σ_μ K_μ ρ K_μ†`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if self.kind != ChannelKind::Channel {
            return Err(Error::NotAChannel);
        }
        self.check_dim(rho)?;
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out += k * rho.matrix() * k.adjoint();
        }
        Ok(DensityMatrix::from_trusted(out))
    }

    /// Normalized post-measurement branches `(p_μ, K_μ ρ K_μ† / p_μ)`,
    /// omitting branches with `p_μ` below [`BRANCH_CUTOFF`].
    pub fn branches(&self, rho: &DensityMatrix) -> Result<Vec<(f64, DensityMatrix)>> {
        self.check_dim(rho)?;
        let mut out = Vec::with_capacity(self.kraus.len());
        for k in &self.kraus {
            let m = k * rho.matrix() * k.adjoint();
            let p = linalg::trace(&m).re;
            if p < BRANCH_CUTOFF {
                continue;
            }
            out.push((p, DensityMatrix::from_trusted(m / C64::new(p, 0.0))));
        }
        Ok(out)
    }

    /// `φ* = {K_μ*}`.
    pub fn conjugate(&self) -> KrausChannel {
        KrausChannel {
            dim: self.dim,
            kraus: self.kraus.iter().map(linalg::conj_matrix).collect(),
            kind: self.kind,
        }
    }

    /// Every column of every Kraus operator has at most one entry above
    /// [`ZERO_ENTRY`] in modulus.
    pub fn is_incoherent(&self) -> bool {
        self.kraus.iter().all(|k| {
            (0..self.dim).all(|c| {
                (0..self.dim)
                    .filter(|&r| k[(r, c)].norm() > ZERO_ENTRY)
                    .count()
                    <= 1
            })
        })
    }
}

/// `pρ₁ ⊕ (1−p)ρ₂` as a `(d₁+d₂)`-dimensional block-diagonal state.
pub fn direct_sum(p: f64, rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidProbability(p, "[0,1]"));
    }
    let (d1, d2) = (rho1.dim(), rho2.dim());
    let mut out = CMatrix::zeros(d1 + d2, d1 + d2);
    out.view_mut((0, 0), (d1, d1))
        .copy_from(&(rho1.matrix() * C64::new(p, 0.0)));
    out.view_mut((d1, d1), (d2, d2))
        .copy_from(&(rho2.matrix() * C64::new(1.0 - p, 0.0)));
    Ok(DensityMatrix::from_trusted(out))
}

/// Von Neumann entropy in bits. Eigenvalues are clamped to `[0, 1]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.spectrum()
        .into_iter()
        .map(|l| linalg::xlog2x_neg(l.clamp(0.0, 1.0)))
        .sum()
}

/// Shannon entropy (bits) of a probability vector, `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().map(|&x| linalg::xlog2x_neg(x.clamp(0.0, 1.0))).sum()
}

/// `H₂(p) + p S(ρ₁) + (1−p) S(ρ₂)`, the entropy of a direct sum.
pub fn direct_sum_entropy(p: f64, rho1: &DensityMatrix, rho2: &DensityMatrix) -> f64 {
    binary_entropy(p) + p * von_neumann_entropy(rho1) + (1.0 - p) * von_neumann_entropy(rho2)
}

/// Uhlmann fidelity `tr √(√ρ σ √ρ)`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let sqrt_rho = HermitianEigen::new(rho.matrix()).map(|l| l.max(0.0).sqrt());
    let inner = &sqrt_rho * sigma.matrix() * &sqrt_rho;
    let f: f64 = hermitian_eigenvalues(&inner)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .sum();
    Ok(f.min(1.0))
}

pub fn trace_norm(a: &CMatrix) -> f64 {
    linalg::trace_norm(a)
}
