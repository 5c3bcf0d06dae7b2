//! Checks on finite-dimensional states.

use rand::Rng as _;
use rand_distr::{Distribution, Exp1};
use serde_json::{json, Value};

use super::{Check, Trial, TOL_OPT};
use crate::error::Result;
use crate::io::{density_to_json, kraus_to_json};
use crate::measures::opt::oracle_grid;
use crate::measures::{self, Functional, MeasureId, RoofFn, SolverConfig};
use crate::qstate::random::{random_density, random_diag_unitary, random_incoherent_channel, random_pure, random_real_density};
use crate::qstate::{direct_sum, DensityMatrix};
use crate::seed::Rng;

/// Dimensions for closed-form measures.
const CLOSED_DIMS: [usize; 4] = [2, 3, 4, 6];
/// Dimensions for optimization-defined measures.
const OPT_DIMS: [usize; 2] = [2, 3];
/// Coherent states in the faithfulness check have this off-diagonal modulus.
const FAITHFUL_ENTRY: f64 = 1e-3;
/// Trials per solver-vs-oracle check; each one runs a grid search.
const ORACLE_TRIALS: usize = 200;
/// Value a measure must exceed on those states.
const FAITHFUL_FLOOR: f64 = 1e-8;

fn dims_for(id: MeasureId) -> &'static [usize] {
    if id.is_closed_form() {
        &CLOSED_DIMS
    } else {
        &OPT_DIMS
    }
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

/// Random state of random rank; one trial in ten is real.
pub(crate) fn sample_state(d: usize, rng: &mut Rng) -> Result<DensityMatrix> {
    if rng.random_range(0..10) == 0 {
        return random_real_density(d, rng);
    }
    let rank = rng.random_range(1..=d);
    random_density(d, rank, rng)
}

fn probability_vector(k: usize, rng: &mut Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

fn state_instance(rho: &DensityMatrix) -> Value {
    json!({ "rho": density_to_json(rho) })
}

fn eval(f: Functional, rho: &DensityMatrix) -> Result<f64> {
    f.eval(rho, &cfg())
}

fn tol_of(f: Functional) -> f64 {
    f.id.tolerance()
}

fn theorem1(id: MeasureId, d: usize) -> Check {
    Check::new(format!("theorem1.{id}.d{d}"), id.tolerance(), move |rng, _| {
        let rho = sample_state(d, rng)?;
        let gap = measures::real_gap(id, &rho, &cfg())?;
        Ok(Trial::new(gap, state_instance(&rho)))
    })
}

fn conjugation(prefix: &str, f: Functional, d: usize, tol: f64) -> Check {
    Check::new(format!("{prefix}.{}.d{d}", f.name()), tol, move |rng, _| {
        let rho = sample_state(d, rng)?;
        let a = eval(f, &rho)?;
        let b = eval(f, &rho.conjugate())?;
        Ok(Trial::new(-(a - b).abs(), state_instance(&rho)))
    })
}

fn pure_conjugation(id: MeasureId) -> Check {
    Check::new(format!("example1.{id}"), id.tolerance(), move |rng, i| {
        let d = 2 + i % 5;
        let psi = random_pure(d, rng)?;
        let rho = psi.to_density();
        let a = measures::value(id, &rho, &cfg())?;
        let b = measures::value(id, &psi.conjugate().to_density(), &cfg())?;
        Ok(Trial::new(-(a - b).abs(), state_instance(&rho)))
    })
}

fn faithful_diagonal(prefix: &str, f: Functional, dims: &'static [usize]) -> Check {
    Check::new(format!("{prefix}.c1.{}.diagonal", f.name()), tol_of(f), move |rng, i| {
        let d = dims[i % dims.len()];
        let rho = sample_state(d, rng)?.dephase();
        Ok(Trial::new(-eval(f, &rho)?, state_instance(&rho)))
    })
}

/// Mixes a random state with its dephased version so that the largest
/// off-diagonal modulus is exactly [`FAITHFUL_ENTRY`].
fn faintly_coherent(d: usize, rng: &mut Rng) -> Result<DensityMatrix> {
    loop {
        let rho = random_density(d, d, rng)?;
        let mut top: f64 = 0.0;
        for r in 0..d {
            for c in 0..d {
                if r != c {
                    top = top.max(rho.entry(r, c).norm());
                }
            }
        }
        if top < FAITHFUL_ENTRY {
            continue;
        }
        let s = FAITHFUL_ENTRY / top;
        let diag = rho.dephase();
        let m = rho.matrix() * crate::linalg::C64::new(s, 0.0)
            + diag.matrix() * crate::linalg::C64::new(1.0 - s, 0.0);
        return DensityMatrix::new(m);
    }
}

fn faithful_coherent(prefix: &str, f: Functional, dims: &'static [usize]) -> Check {
    Check::new(format!("{prefix}.c1.{}.coherent", f.name()), 0.0, move |rng, i| {
        let d = dims[i % dims.len()];
        let rho = faintly_coherent(d, rng)?;
        Ok(Trial::new(eval(f, &rho)? - FAITHFUL_FLOOR, state_instance(&rho)))
    })
}

fn monotone(prefix: &str, f: Functional, d: usize) -> Check {
    Check::new(format!("{prefix}.c2.{}.d{d}", f.name()), tol_of(f), move |rng, _| {
        let rho = sample_state(d, rng)?;
        let branches = rng.random_range(1..=3);
        let ch = random_incoherent_channel(d, branches, rng)?;
        let out = ch.apply(&rho)?;
        let slack = eval(f, &rho)? - eval(f, &out)?;
        Ok(Trial::new(
            slack,
            json!({ "rho": density_to_json(&rho), "channel": kraus_to_json(&ch) }),
        ))
    })
}

fn probabilistic_monotone(prefix: &str, f: Functional, d: usize) -> Check {
    Check::new(format!("{prefix}.c3.{}.d{d}", f.name()), tol_of(f), move |rng, _| {
        let rho = sample_state(d, rng)?;
        let branches = rng.random_range(1..=3);
        let ch = random_incoherent_channel(d, branches, rng)?;
        let mut avg = 0.0;
        for (p, sigma) in ch.branches(&rho)? {
            avg += p * eval(f, &sigma)?;
        }
        Ok(Trial::new(
            eval(f, &rho)? - avg,
            json!({ "rho": density_to_json(&rho), "channel": kraus_to_json(&ch) }),
        ))
    })
}

fn convex(prefix: &str, f: Functional, d: usize) -> Check {
    Check::new(format!("{prefix}.c4.{}.d{d}", f.name()), tol_of(f), move |rng, _| {
        let k = rng.random_range(2..=4);
        let p = probability_vector(k, rng);
        let states = (0..k).map(|_| sample_state(d, rng)).collect::<Result<Vec<_>>>()?;
        let mut mix = crate::linalg::CMatrix::zeros(d, d);
        let mut avg = 0.0;
        for (w, s) in p.iter().zip(&states) {
            mix += s.matrix() * crate::linalg::C64::new(*w, 0.0);
            avg += w * eval(f, s)?;
        }
        let mixed = DensityMatrix::new(mix)?;
        let parts: Vec<Value> = states.iter().map(|s| json!(density_to_json(s))).collect();
        Ok(Trial::new(avg - eval(f, &mixed)?, json!({ "weights": p, "states": parts })))
    })
}

fn direct_sum_check(prefix: &str, f: Functional) -> Check {
    Check::new(format!("{prefix}.c5.{}", f.name()), tol_of(f), move |rng, _| {
        let d1 = rng.random_range(1..=3);
        let d2 = rng.random_range(1..=3);
        let r1 = sample_state(d1, rng)?;
        let r2 = sample_state(d2, rng)?;
        let p: f64 = rng.random_range(0.0..=1.0);
        let sum = direct_sum(p, &r1, &r2)?;
        let expect = p * eval(f, &r1)? + (1.0 - p) * eval(f, &r2)?;
        Ok(Trial::new(
            -(eval(f, &sum)? - expect).abs(),
            json!({ "p": p, "rho1": density_to_json(&r1), "rho2": density_to_json(&r2) }),
        ))
    })
}

fn diagonal_unitary(prefix: &str, f: Functional, d: usize) -> Check {
    Check::new(format!("{prefix}.dunitary.{}.d{d}", f.name()), tol_of(f), move |rng, _| {
        let rho = sample_state(d, rng)?;
        let u = random_diag_unitary(d, rng)?;
        let out = u.apply(&rho)?;
        let slack = -(eval(f, &out)? - eval(f, &rho)?).abs();
        Ok(Trial::new(
            slack,
            json!({ "rho": density_to_json(&rho), "channel": kraus_to_json(&u) }),
        ))
    })
}

/// `(C1)`–`(C5)` and diagonal-unitary invariance for `f`.
fn axiom_checks(prefix: &str, f: Functional) -> Vec<Check> {
    let dims = dims_for(f.id);
    let mut out = vec![faithful_diagonal(prefix, f, dims), faithful_coherent(prefix, f, dims)];
    for &d in dims {
        out.push(monotone(prefix, f, d));
        if f.id.is_closed_form() {
            out.push(probabilistic_monotone(prefix, f, d));
            out.push(convex(prefix, f, d));
        }
        out.push(diagonal_unitary(prefix, f, d));
    }
    if matches!(f.id, MeasureId::L1 | MeasureId::RelEnt) {
        out.push(direct_sum_check(prefix, f));
    }
    out
}

/// The symmetrized functional agrees with the plain one on real states.
fn symmetrized_on_real(f: Functional, d: usize) -> Check {
    Check::new(format!("theorem2.real.{}.d{d}", f.name()), 0.0, move |rng, _| {
        let rho = random_real_density(d, rng)?;
        let plain = measures::value(f.id, &rho, &cfg())?;
        Ok(Trial::new(-(eval(f, &rho)? - plain).abs(), state_instance(&rho)))
    })
}

fn oracle_step(id: MeasureId, d: usize) -> f64 {
    match (d, id) {
        (2, _) => 1e-4,
        (_, MeasureId::TraceNorm) => 1e-2,
        _ => 2e-3,
    }
}

/// Solver against the grid oracle: `|solver − oracle| ≤ max(1e-4, 3·step)`.
pub(crate) fn oracle_check(id: MeasureId, d: usize, trials: usize) -> Check {
    let step = oracle_step(id, d);
    Check::new(format!("oracle.{id}.d{d}"), TOL_OPT.max(3.0 * step), move |rng, _| {
        let rho = sample_state(d, rng)?;
        let v = measures::value(id, &rho, &cfg())?;
        let o = oracle_grid(&rho, id, step)?;
        Ok(Trial::new(-(v - o.value).abs(), state_instance(&rho)))
    })
    .with_trials(trials)
}

pub(crate) fn checks() -> Vec<Check> {
    let mut out = Vec::new();
    let catalog = MeasureId::catalog();
    for &id in &catalog {
        for &d in dims_for(id) {
            out.push(theorem1(id, d));
        }
    }
    for &id in &catalog {
        for &d in dims_for(id) {
            out.push(conjugation("theorem3", Functional::plain(id), d, id.tolerance()));
        }
    }
    let roofs = [
        MeasureId::ConvexRoof(RoofFn::Shannon),
        MeasureId::ConvexRoof(RoofFn::OneMinusMax),
    ];
    for &id in catalog.iter().chain(&roofs) {
        out.push(pure_conjugation(id));
    }
    for &id in &catalog {
        out.push(conjugation("example2", Functional::plain(id), 2, id.tolerance()));
    }
    for &id in &catalog {
        out.extend(axiom_checks("axiom", Functional::plain(id)));
    }
    for &id in &catalog {
        let f = Functional::symmetrize(id);
        for &d in dims_for(id) {
            out.push(conjugation("theorem2.conj", f, d, 0.0));
            out.push(symmetrized_on_real(f, d));
        }
        out.extend(axiom_checks("theorem2", f));
    }
    for id in [MeasureId::Robustness, MeasureId::Weight, MeasureId::TraceNorm, MeasureId::Geometric] {
        for d in OPT_DIMS {
            out.push(oracle_check(id, d, ORACLE_TRIALS));
        }
    }
    out
}
