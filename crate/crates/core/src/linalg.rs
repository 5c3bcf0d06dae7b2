//! Small dense linear-algebra helpers shared by the state, measure and
//! Gaussian modules. Everything here works on `nalgebra` dynamic matrices.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

pub(crate) const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = Complex { re: 1.0, im: 0.0 };

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, in the same order as `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Self {
        let n = m.nrows();
        let eig = SymmetricEigen::new(hermitian_part(m));
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        HermitianEigen { values, vectors }
    }

    /// Rebuilds `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut out = CMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            let v = self.vectors.column(k);
            for r in 0..n {
                let vr = v[r] * w;
                for c in 0..n {
                    out[(r, c)] += vr * v[c].conj();
                }
            }
        }
        out
    }
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    vals.sort_by(f64::total_cmp);
    vals
}

pub fn lambda_min(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)
        .first()
        .copied()
        .unwrap_or(f64::INFINITY)
}

/// `(m + m†) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

pub fn max_hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Log-determinant of a Hermitian positive definite matrix via an explicit
/// Cholesky sweep; `None` if any pivot is not strictly positive.
///
/// `nalgebra`'s complex Cholesky takes complex square roots of negative
/// pivots, so it cannot be used as a definiteness test on its own.
pub fn hermitian_log_det(m: &CMatrix) -> Option<f64> {
    let n = m.nrows();
    let mut l = CMatrix::zeros(n, n);
    let mut acc = 0.0;
    for j in 0..n {
        let mut pivot = m[(j, j)].re;
        for k in 0..j {
            pivot -= l[(j, k)].norm_sqr();
        }
        if !(pivot > 0.0 && pivot.is_finite()) {
            return None;
        }
        let root = pivot.sqrt();
        l[(j, j)] = C64::new(root, 0.0);
        acc += root.ln();
        for i in j + 1..n {
            let mut v = m[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / root;
        }
    }
    Some(2.0 * acc)
}

/// Sum of singular values.
pub fn trace_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().iter().sum()
}

/// Trace norm of a Hermitian matrix, via its eigenvalues.
pub fn hermitian_trace_norm(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a).iter().map(|v| v.abs()).sum()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn conj_matrix(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

pub fn real_to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn diag_complex(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| C64::new(v, 0.0)),
    ))
}

pub fn is_finite_complex(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Real symmetric eigenvalues, ascending.
pub fn symmetric_eigenvalues(m: &RMatrix) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let mut vals: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Principal square root of a real symmetric positive semidefinite matrix.
pub fn symmetric_sqrt(m: &RMatrix) -> RMatrix {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let n = m.nrows();
    let mut out = RMatrix::zeros(n, n);
    for k in 0..n {
        let w = eig.eigenvalues[k].max(0.0).sqrt();
        let v = eig.eigenvectors.column(k);
        out += v * v.transpose() * w;
    }
    out
}

/// Real matrix with its largest absolute entry.
pub fn max_abs(m: &RMatrix) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Binary entropy in bits, `H2(0) = H2(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    xlog2x_neg(p) + xlog2x_neg(1.0 - p)
}

/// `-x log2 x` with `0 log 0 = 0`.
pub fn xlog2x_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}
