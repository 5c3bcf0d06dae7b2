use approx::assert_abs_diff_eq;
use coherekit::linalg::{lambda_min, CMatrix, C64};
use coherekit::measures::opt::{
    c_convex_roof_upper, c_geometric, c_robustness, c_trace_norm, c_weight, oracle_grid, solve_with_growth,
    DiagonalProgram, Sense,
};
use coherekit::measures::{self, c_l1, MeasureId, RoofFn, SolverConfig};
use coherekit::qstate::random::{random_density, random_pure};
use coherekit::seed::rng_from;
use coherekit::{DensityMatrix, PureState};

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn plus() -> DensityMatrix {
    PureState::uniform(2).unwrap().to_density()
}

fn diag_minus(c: &[f64], rho: &DensityMatrix) -> CMatrix {
    let d = rho.dim();
    CMatrix::from_fn(d, d, |r, k| {
        let diag = if r == k { C64::new(c[r], 0.0) } else { C64::new(0.0, 0.0) };
        diag - rho.matrix()[(r, k)]
    })
}

#[test]
fn plus_state_reference_values() {
    let rho = plus();
    assert_abs_diff_eq!(c_robustness(&rho, &cfg()).unwrap().value, 1.0, epsilon = 1e-6);
    assert_abs_diff_eq!(c_weight(&rho, &cfg()).unwrap().value, 1.0, epsilon = 1e-6);
    assert_abs_diff_eq!(c_trace_norm(&rho, &cfg()).unwrap().value, 1.0, epsilon = 1e-6);
    assert_abs_diff_eq!(c_geometric(&rho, &cfg()).unwrap().value, 0.5, epsilon = 1e-6);
    for id in [MeasureId::Robustness, MeasureId::Weight] {
        let o = oracle_grid(&rho, id, 1e-4).unwrap();
        assert_abs_diff_eq!(o.value, 1.0, epsilon = 2e-3);
    }
}

#[test]
fn qubit_closed_forms() {
    // For qubits robustness and trace-norm coherence equal 2|ρ01| and the
    // geometric coherence is (1 − √(1 − 4|ρ01|²)) / 2.
    let mut rng = rng_from(3);
    for _ in 0..25 {
        let rho = random_density(2, 2, &mut rng).unwrap();
        let c = c_l1(&rho);
        assert_abs_diff_eq!(c_robustness(&rho, &cfg()).unwrap().value, c, epsilon = 1e-6);
        assert_abs_diff_eq!(c_trace_norm(&rho, &cfg()).unwrap().value, c, epsilon = 1e-6);
        let geo = (1.0 - (1.0 - c * c).sqrt()) / 2.0;
        assert_abs_diff_eq!(c_geometric(&rho, &cfg()).unwrap().value, geo, epsilon = 1e-6);
    }
}

#[test]
fn robustness_of_pure_states_is_l1() {
    let mut rng = rng_from(8);
    for d in 2..=5 {
        let rho = random_pure(d, &mut rng).unwrap().to_density();
        assert_abs_diff_eq!(c_robustness(&rho, &cfg()).unwrap().value, c_l1(&rho), epsilon = 1e-6);
    }
}

#[test]
fn maximally_coherent_qutrit() {
    let rho = PureState::uniform(3).unwrap().to_density();
    assert_abs_diff_eq!(c_robustness(&rho, &cfg()).unwrap().value, 2.0, epsilon = 1e-6);
    assert_abs_diff_eq!(c_weight(&rho, &cfg()).unwrap().value, 1.0, epsilon = 1e-6);
    assert_abs_diff_eq!(c_geometric(&rho, &cfg()).unwrap().value, 2.0 / 3.0, epsilon = 1e-6);
}

#[test]
fn certificates_are_feasible() {
    let mut rng = rng_from(12);
    for i in 0..40 {
        let d = 2 + i % 4;
        let rho = random_density(d, 1 + i % d, &mut rng).unwrap();
        let r = c_robustness(&rho, &cfg()).unwrap();
        let c = r.certificate.unwrap();
        assert!(lambda_min(&diag_minus(&c, &rho)) >= -1e-8);
        assert_abs_diff_eq!(c.iter().sum::<f64>() - 1.0, r.value, epsilon = 1e-6);

        let w = c_weight(&rho, &cfg()).unwrap();
        let c = w.certificate.unwrap();
        assert!(c.iter().all(|&x| x >= -1e-8));
        let slack = -diag_minus(&c, &rho);
        assert!(lambda_min(&slack) >= -1e-8);
        // The dual value is exact; the certificate can only be slightly worse.
        assert!(1.0 - c.iter().sum::<f64>() >= w.value - 1e-6);
    }
}

#[test]
fn results_are_stable_across_barrier_growth() {
    let mut rng = rng_from(44);
    for d in [2, 3, 4] {
        let rho = random_density(d, d, &mut rng).unwrap();
        for sense in [Sense::MinTraceDominating, Sense::MaxTraceDominated] {
            let prog = DiagonalProgram {
                target: rho.clone(),
                sense,
            };
            let values: Vec<f64> = [4.0, 10.0, 50.0]
                .iter()
                .map(|&g| solve_with_growth(&prog, &cfg(), g).unwrap().value)
                .collect();
            for v in &values[1..] {
                assert_abs_diff_eq!(*v, values[0], epsilon = 1e-6);
            }
        }
    }
}

#[test]
fn solver_matches_oracle_on_fixed_states() {
    let mut rng = rng_from(77);
    for id in [MeasureId::Robustness, MeasureId::Weight, MeasureId::TraceNorm, MeasureId::Geometric] {
        for _ in 0..5 {
            let rho = random_density(2, 2, &mut rng).unwrap();
            let v = measures::value(id, &rho, &cfg()).unwrap();
            let o = oracle_grid(&rho, id, 1e-4).unwrap();
            assert!((v - o.value).abs() <= 3e-4, "{id}: {v} vs {}", o.value);
        }
    }
}

#[test]
fn geometric_faithfulness_is_quadratic() {
    // Off-diagonal modulus ε gives a value near ε² for qubits.
    for eps in [1e-2, 1e-3] {
        let rho = DensityMatrix::bloch(2.0 * eps, 0.0, 0.0).unwrap();
        let v = c_geometric(&rho, &cfg()).unwrap().value;
        assert!(v > 0.0);
        assert_abs_diff_eq!(v, eps * eps, epsilon = eps * eps * 1e-2);
    }
}

#[test]
fn convex_roof_is_exact_on_pure_states_and_improves_with_restarts() {
    let mut rng = rng_from(91);
    let psi = random_pure(4, &mut rng).unwrap();
    let rho = psi.to_density();
    for f in [RoofFn::Shannon, RoofFn::OneMinusMax] {
        let s = c_convex_roof_upper(&rho, f, &cfg()).unwrap();
        assert_abs_diff_eq!(s.value, f.eval(&psi.probabilities()), epsilon = 1e-12);
    }
    let mixed = random_density(3, 3, &mut rng).unwrap();
    let mut last = f64::INFINITY;
    for restarts in [1, 2, 4, 8] {
        let c = SolverConfig { restarts, ..cfg() };
        let v = c_convex_roof_upper(&mixed, RoofFn::Shannon, &c).unwrap().value;
        assert!(v <= last + 1e-12, "restarts {restarts}: {v} > {last}");
        assert!(v >= measures::c_rel_ent(&mixed) - 1e-9);
        last = v;
    }
    let e = measures::evaluate(MeasureId::ConvexRoof(RoofFn::Shannon), &mixed, &cfg()).unwrap();
    assert!(e.flagged_upper_bound);
}

#[test]
fn dimension_caps_are_enforced() {
    let rho = DensityMatrix::maximally_mixed(4).unwrap();
    assert!(oracle_grid(&rho, MeasureId::Robustness, 1e-2).is_err());
    assert!(oracle_grid(&plus(), MeasureId::Robustness, 0.5).is_err());
}
