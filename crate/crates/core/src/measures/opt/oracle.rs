//! Brute-force grid oracles for the optimization-defined measures at
//! `d ≤ 3`, used to validate the solvers.
//!
//! Each oracle scans `d − 1` coordinates on a grid and handles the last one
//! exactly (Schur complement) or by golden-section search, so the reported
//! `error_bound` is a rigorous bound for robustness, weight and trace norm.
//! For geometric coherence the bound is the a-posteriori Frank–Wolfe gap at
//! the best grid point; it is only indicative when that point lies on a face
//! of the simplex, where the gradient is computed with a pseudo-inverse.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianEigen, C64};
use crate::measures::MeasureId;
use crate::qstate::DensityMatrix;

pub const MAX_DIM: usize = 3;
pub const MAX_STEP: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub step: f64,
    pub error_bound: f64,
}

type M3 = [[C64; 3]; 3];

fn to_array(rho: &DensityMatrix) -> M3 {
    let d = rho.dim();
    let mut a = [[C64::new(0.0, 0.0); 3]; 3];
    for (r, row) in a.iter_mut().enumerate().take(d) {
        for (c, v) in row.iter_mut().enumerate().take(d) {
            *v = rho.entry(r, c);
        }
    }
    a
}

/// Eigenvalues of a Hermitian 2x2 or 3x3 matrix (closed form).
pub(crate) fn small_eigenvalues(m: &M3, d: usize) -> [f64; 3] {
    if d == 1 {
        return [m[0][0].re, 0.0, 0.0];
    }
    if d == 2 {
        let (a, b) = (m[0][0].re, m[1][1].re);
        let mean = 0.5 * (a + b);
        let rad = (0.5 * (a - b)).hypot(m[0][1].norm());
        return [mean - rad, mean + rad, 0.0];
    }
    let p1 = m[0][1].norm_sqr() + m[0][2].norm_sqr() + m[1][2].norm_sqr();
    let (a, b, c) = (m[0][0].re, m[1][1].re, m[2][2].re);
    let q = (a + b + c) / 3.0;
    let p2 = (a - q).powi(2) + (b - q).powi(2) + (c - q).powi(2) + 2.0 * p1;
    if p2 <= 1e-300 {
        return [q, q, q];
    }
    let p = (p2 / 6.0).sqrt();
    let (ba, bb, bc) = ((a - q) / p, (b - q) / p, (c - q) / p);
    let (x, y, z) = (m[0][1] / p, m[0][2] / p, m[1][2] / p);
    // det of the Hermitian matrix [[ba,x,y],[x*,bb,z],[y*,z*,bc]].
    let det = ba * bb * bc + 2.0 * (x * z * y.conj()).re
        - ba * z.norm_sqr()
        - bb * y.norm_sqr()
        - bc * x.norm_sqr();
    let r = (0.5 * det).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e_hi = q + 2.0 * p * phi.cos();
    let e_lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos();
    let e_mid = 3.0 * q - e_hi - e_lo;
    [e_lo, e_mid, e_hi]
}

/// `ρ − diag(c)` on the leading `d x d` block.
fn minus_diag(m: &M3, d: usize, c: &[f64; 3]) -> M3 {
    let mut out = *m;
    for j in 0..d {
        out[j][j] = C64::new(m[j][j].re - c[j], 0.0);
    }
    out
}

fn lambda_min(m: &M3, d: usize) -> f64 {
    small_eigenvalues(m, d)[0]
}

fn grid(lo: f64, hi: f64, step: f64) -> impl Iterator<Item = f64> {
    let k0 = (lo / step).floor().max(0.0) as i64;
    let k1 = (hi / step).ceil() as i64 + 1;
    (k0..=k1).map(move |k| k as f64 * step)
}

fn l1(m: &M3, d: usize) -> f64 {
    let mut s = 0.0;
    for r in 0..d {
        for c in 0..d {
            if r != c {
                s += m[r][c].norm();
            }
        }
    }
    s
}

/// `min Σc − 1` over `diag(c) ⪰ ρ`. Coordinates `c_1..c_{d−1}` are
/// scanned on `[ρ_jj, ρ_jj + C_l1]` (where every optimum lies), `c_d` is the
/// exact Schur-complement minimum.
fn robustness(m: &M3, d: usize, step: f64) -> f64 {
    let span = l1(m, d);
    let rd = |j: usize| m[j][j].re;
    let last = d - 1;
    let mut best = f64::INFINITY;
    if d == 2 {
        for c1 in grid(rd(0), rd(0) + span, step) {
            let b = c1 - rd(0);
            if b <= 0.0 {
                continue;
            }
            let c2 = rd(1) + m[0][1].norm_sqr() / b;
            best = best.min(c1 + c2 - 1.0);
        }
        return best;
    }
    for c1 in grid(rd(0), rd(0) + span, step) {
        let b11 = c1 - rd(0);
        if b11 <= 0.0 {
            continue;
        }
        for c2 in grid(rd(1), rd(1) + span, step) {
            if c1 + c2 + rd(last) - 1.0 >= best {
                break;
            }
            let b22 = c2 - rd(1);
            let b12 = -m[0][1];
            let det = b11 * b22 - b12.norm_sqr();
            if b22 <= 0.0 || det <= 0.0 {
                continue;
            }
            let (v1, v2) = (-m[0][2], -m[1][2]);
            let quad = (b22 * v1.norm_sqr() + b11 * v2.norm_sqr()
                - 2.0 * (v1.conj() * b12 * v2).re)
                / det;
            best = best.min(c1 + c2 + rd(2) + quad - 1.0);
        }
    }
    best
}

/// `1 − max Σc` over `ρ ⪰ diag(c)`, `c ≥ 0`. Grid rounds down from any
/// optimum, which keeps the Schur complement feasible.
fn weight(m: &M3, d: usize, step: f64) -> f64 {
    let rd = |j: usize| m[j][j].re;
    let mut best = 0.0f64;
    let last_max = |c: &[f64; 3]| -> f64 {
        // Largest c_d with ρ − diag(c) ⪰ 0, by bisection on λ_min.
        let feasible = |cd: f64| {
            let mut cc = *c;
            cc[d - 1] = cd;
            lambda_min(&minus_diag(m, d, &cc), d) >= -1e-15
        };
        if !feasible(0.0) {
            return f64::NAN;
        }
        let (mut lo, mut hi) = (0.0, rd(d - 1));
        if feasible(hi) {
            return hi;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    if d == 2 {
        for c1 in grid(0.0, rd(0), step) {
            let b = rd(0) - c1;
            let c2 = if b > 1e-14 {
                rd(1) - m[0][1].norm_sqr() / b
            } else {
                last_max(&[c1, 0.0, 0.0])
            };
            if c2.is_finite() && c2 >= 0.0 {
                best = best.max(c1 + c2);
            }
        }
        return 1.0 - best;
    }
    for c1 in grid(0.0, rd(0), step) {
        if c1 > rd(0) {
            break;
        }
        for c2 in grid(0.0, rd(1), step) {
            if c2 > rd(1) {
                break;
            }
            let b11 = rd(0) - c1;
            let b22 = rd(1) - c2;
            let b12 = m[0][1];
            let det = b11 * b22 - b12.norm_sqr();
            let c3 = if b11 > 1e-14 && det > 1e-14 {
                let (v1, v2) = (m[0][2], m[1][2]);
                let quad = (b22 * v1.norm_sqr() + b11 * v2.norm_sqr()
                    - 2.0 * (v1.conj() * b12 * v2).re)
                    / det;
                rd(2) - quad
            } else if det >= -1e-14 && b11 >= -1e-14 && b22 >= -1e-14 {
                last_max(&[c1, c2, 0.0])
            } else {
                f64::NAN
            };
            if c3.is_finite() && c3 >= 0.0 {
                best = best.max(c1 + c2 + c3);
            }
        }
    }
    1.0 - best
}

fn trace_norm_at(m: &M3, d: usize, c: &[f64; 3]) -> f64 {
    small_eigenvalues(&minus_diag(m, d, c), d)[..d]
        .iter()
        .map(|v| v.abs())
        .sum()
}

fn golden(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..48 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    f(lo).min(f(hi)).min(f1).min(f2)
}

/// `min_{c ≥ 0} ‖ρ − diag(c)‖_tr`. Pinching is trace-norm contractive, so
/// any optimum satisfies `Σ_j |c_j − ρ_jj| ≤ v₀ = ‖ρ − ρ_diag‖_tr`.
fn trace_norm(m: &M3, d: usize, step: f64) -> f64 {
    let rd = |j: usize| m[j][j].re;
    let v0 = trace_norm_at(m, d, &[rd(0), rd(1), rd(2)]);
    let mut best = v0;
    let inner = |c1: f64, c2: f64, radius: f64| {
        let j = d - 1;
        let lo = (rd(j) - radius).max(0.0);
        let hi = rd(j) + radius;
        golden(lo, hi, |x| {
            let mut c = [c1, c2, 0.0];
            c[j] = x;
            trace_norm_at(m, d, &c)
        })
    };
    if d == 2 {
        for c1 in grid((rd(0) - v0).max(0.0), rd(0) + v0, step) {
            let r = v0 - (c1 - rd(0)).abs();
            if r < -step {
                continue;
            }
            best = best.min(inner(c1, 0.0, r.max(0.0)));
        }
        return best;
    }
    for c1 in grid((rd(0) - v0).max(0.0), rd(0) + v0, step) {
        let r1 = v0 - (c1 - rd(0)).abs();
        if r1 < -step {
            continue;
        }
        for c2 in grid((rd(1) - v0).max(0.0), rd(1) + v0, step) {
            let r2 = r1 - (c2 - rd(1)).abs();
            if r2 < -2.0 * step {
                continue;
            }
            best = best.min(inner(c1, c2, r2.max(0.0)));
        }
    }
    best
}

fn fidelity_diag(m: &M3, d: usize, q: &[f64; 3]) -> f64 {
    let mut s = [[C64::new(0.0, 0.0); 3]; 3];
    for r in 0..d {
        for c in 0..d {
            s[r][c] = m[r][c] * (q[r] * q[c]).sqrt();
        }
    }
    if d == 2 {
        // (√λ₁ + √λ₂)² = tr + 2√det avoids the square root of a tiny eigenvalue.
        let tr = s[0][0].re + s[1][1].re;
        let det_rho = (m[0][0].re * m[1][1].re - m[0][1].norm_sqr()).max(0.0);
        let det = q[0] * q[1] * det_rho;
        return (tr + 2.0 * det.sqrt()).max(0.0).sqrt();
    }
    small_eigenvalues(&s, d)[..d]
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .sum()
}

/// `1 − max F(ρ, diag q)²` over a simplex grid. Returns value and the best
/// maximizer.
fn geometric(m: &M3, d: usize, step: f64) -> (f64, [f64; 3]) {
    let n = (1.0 / step).round() as i64;
    let mut best = (f64::NEG_INFINITY, [0.0; 3]);
    for i in 0..=n {
        let q1 = i as f64 / n as f64;
        if d == 2 {
            let q = [q1, 1.0 - q1, 0.0];
            let f = fidelity_diag(m, d, &q);
            if f > best.0 {
                best = (f, q);
            }
            continue;
        }
        for j in 0..=(n - i) {
            let q2 = j as f64 / n as f64;
            let q = [q1, q2, (1.0 - q1 - q2).max(0.0)];
            let f = fidelity_diag(m, d, &q);
            if f > best.0 {
                best = (f, q);
            }
        }
    }
    (1.0 - best.0 * best.0, best.1)
}

/// `X_jj` for every `j`, with `X = √ρ K^{+1/2} √ρ`, `K = √ρ D √ρ`. At an
/// optimum `X_jj = F` on the support of `q` and `X_jj ≤ F` off it.
fn gradient_diag(sqrt_rho: &CMatrix, q: &[f64]) -> Vec<f64> {
    let d = q.len();
    let dq = CMatrix::from_fn(d, d, |r, c| {
        if r == c {
            C64::new(q[r], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let k = sqrt_rho * dq * sqrt_rho;
    let eig = HermitianEigen::new(&k);
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let cut = 1e-14 * top.max(1e-300);
    let inv_sqrt = eig.map(|l| if l > cut { 1.0 / l.sqrt() } else { 0.0 });
    let x = sqrt_rho * inv_sqrt * sqrt_rho;
    (0..d).map(|j| x[(j, j)].re).collect()
}

fn max_gradient(sqrt_rho: &CMatrix, q: &[f64]) -> f64 {
    gradient_diag(sqrt_rho, q).into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Frank–Wolfe upper bound `½ (F + max_j X_jj)` on `max_q F(ρ, diag q)`.
pub fn frank_wolfe_upper(rho: &DensityMatrix, q: &[f64], f: f64) -> f64 {
    let sqrt_rho = HermitianEigen::new(rho.matrix()).map(|l| l.max(0.0).sqrt());
    0.5 * (f + max_gradient(&sqrt_rho, q))
}

/// Exhaustive grid value of `which` on `ρ` with the given step.
pub fn oracle_grid(rho: &DensityMatrix, which: MeasureId, step: f64) -> Result<OracleResult> {
    let d = rho.dim();
    if d > MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: d,
            cap: MAX_DIM,
            what: "grid oracle",
        });
    }
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(Error::InvalidArgument(format!(
            "oracle step {step} must lie in (0, {MAX_STEP}]"
        )));
    }
    if d == 1 {
        return Ok(OracleResult {
            value: 0.0,
            step,
            error_bound: 0.0,
        });
    }
    let m = to_array(rho);
    let slack = (d - 1) as f64 * step;
    let (value, error_bound) = match which {
        MeasureId::Robustness => (robustness(&m, d, step).max(0.0), slack),
        MeasureId::Weight => (weight(&m, d, step).clamp(0.0, 1.0), slack),
        MeasureId::TraceNorm => (trace_norm(&m, d, step), 0.5 * slack + 1e-9),
        MeasureId::Geometric => {
            let (v, q) = geometric(&m, d, step);
            let q_full: Vec<f64> = q[..d].to_vec();
            let f = (1.0 - v).max(0.0).sqrt();
            let upper = frank_wolfe_upper(rho, &q_full, f);
            (v.clamp(0.0, 1.0), (upper * upper - f * f).max(0.0))
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "no grid oracle for measure {other}"
            )))
        }
    };
    Ok(OracleResult {
        value,
        step,
        error_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use crate::qstate::random::random_density;
    use crate::qstate::PureState;
    use crate::seed::rng_from;
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_form_eigenvalues_match_library() {
        let mut rng = rng_from(3);
        for d in 2..=3 {
            for _ in 0..50 {
                let rho = random_density(d, d, &mut rng).unwrap();
                let got = small_eigenvalues(&to_array(&rho), d);
                let want = hermitian_eigenvalues(rho.matrix());
                for k in 0..d {
                    assert_abs_diff_eq!(got[k], want[k], epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn plus_state_oracles() {
        let plus = PureState::uniform(2).unwrap().to_density();
        let r = oracle_grid(&plus, MeasureId::Robustness, 1e-3).unwrap();
        assert!((r.value - 1.0).abs() <= 2e-3);
        let w = oracle_grid(&plus, MeasureId::Weight, 1e-3).unwrap();
        assert!((w.value - 1.0).abs() <= 2e-3);
        let g = oracle_grid(&plus, MeasureId::Geometric, 1e-3).unwrap();
        assert_abs_diff_eq!(g.value, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn diagonal_oracles_vanish() {
        let diag = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        for id in [MeasureId::Robustness, MeasureId::Weight, MeasureId::TraceNorm] {
            let r = oracle_grid(&diag, id, 1e-3).unwrap();
            assert!(r.value.abs() <= r.error_bound + 1e-12, "{id}: {}", r.value);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let big = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(oracle_grid(&big, MeasureId::Robustness, 1e-3).is_err());
        let q = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(oracle_grid(&q, MeasureId::Robustness, 0.1).is_err());
        assert!(oracle_grid(&q, MeasureId::L1, 1e-3).is_err());
    }
}
