use approx::assert_abs_diff_eq;
use coherekit::gaussian::random::{random_gaussian_state, random_incoherent_gaussian_channel, random_state_with_spectrum};
use coherekit::gaussian::{
    boxplus, c_gr, coherent_state, default_probes, g_function, gap_coherent_closed_form, gap_squeezed_closed_form,
    gap_squeezed_paper_formula, gr_real_gap, probe_incoherent_gaussian, squeezed_state, symplectic_eigenvalues,
    GaussianChannel, GaussianState,
};
use coherekit::linalg::RMatrix;
use coherekit::seed::rng_from;
use nalgebra::{Complex, DVector};

/// `g` written out independently, in bits.
fn g(x: f64) -> f64 {
    let up = (x + 1.0) / 2.0;
    let down = (x - 1.0) / 2.0;
    let t = |v: f64| if v <= 0.0 { 0.0 } else { v * v.log2() };
    t(up) - t(down)
}

#[test]
fn g_function_values() {
    assert_eq!(g_function(1.0).unwrap(), 0.0);
    assert_abs_diff_eq!(g_function(3.0).unwrap(), 2.0, epsilon = 1e-15);
    for x in [1.5, 2.0, 7.25, 40.0] {
        assert_abs_diff_eq!(g_function(x).unwrap(), g(x), epsilon = 1e-12);
    }
    assert!(g_function(0.5).is_err());
}

#[test]
fn coherent_state_at_i() {
    let alpha = Complex::new(0.0, 1.0);
    let gap = gr_real_gap(&coherent_state(alpha)).unwrap();
    assert_abs_diff_eq!(gap.gap, 2.0, epsilon = 1e-9);
    assert_abs_diff_eq!(gap_coherent_closed_form(alpha), g(3.0) - g(1.0), epsilon = 1e-12);
    // Real amplitudes give real states.
    assert_eq!(gr_real_gap(&coherent_state(Complex::new(1.3, 0.0))).unwrap().gap, 0.0);
}

#[test]
fn coherent_closed_form_on_a_few_points() {
    for (re, im) in [(0.3, -0.7), (-1.2, 0.4), (2.0, 2.0)] {
        let alpha = Complex::new(re, im);
        let expect = g(1.0 + 2.0 * (re * re + im * im)) - g(1.0 + 2.0 * re * re);
        assert_abs_diff_eq!(gr_real_gap(&coherent_state(alpha)).unwrap().gap, expect, epsilon = 1e-9);
    }
}

#[test]
fn squeezed_pipeline_against_both_formulas() {
    let zeta = Complex::new(0.0, 0.5);
    let sh = 1f64.sinh();
    let pipeline = gr_real_gap(&squeezed_state(zeta)).unwrap().gap;
    assert_abs_diff_eq!(pipeline, g((1.0 + sh * sh).sqrt()), epsilon = 1e-9);
    assert_abs_diff_eq!(gap_squeezed_closed_form(zeta), pipeline, epsilon = 1e-9);
    assert_abs_diff_eq!(gap_squeezed_paper_formula(zeta), g(1.0 + sh * sh), epsilon = 1e-12);
    assert!(gap_squeezed_paper_formula(zeta) - pipeline > 0.1);
    assert_eq!(gr_real_gap(&squeezed_state(Complex::new(0.8, 0.0))).unwrap().gap, 0.0);
}

#[test]
fn single_mode_symplectic_eigenvalue_is_root_det() {
    let mut rng = rng_from(4);
    for _ in 0..20 {
        let s = random_gaussian_state(1, &mut rng);
        let nu = symplectic_eigenvalues(s.cov()).unwrap();
        assert_abs_diff_eq!(nu[0], s.cov().determinant().sqrt(), epsilon = 1e-9);
    }
}

#[test]
fn prescribed_spectra_are_recovered() {
    let mut rng = rng_from(6);
    let nu = [1.0, 1.7, 4.2];
    let s = random_state_with_spectrum(&nu, &mut rng);
    let mut got = s.symplectic_eigenvalues().unwrap();
    got.sort_by(f64::total_cmp);
    for (a, b) in got.iter().zip(nu) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-9);
    }
    let entropy: f64 = nu.iter().map(|&v| g(v)).sum();
    assert_abs_diff_eq!(s.entropy().unwrap(), entropy, epsilon = 1e-9);
}

#[test]
fn thermal_states_are_incoherent() {
    let t = GaussianState::thermal(&[1.0, 2.5, 6.0]).unwrap();
    assert!(t.is_thermal());
    assert_eq!(c_gr(&t).unwrap(), 0.0);
    assert_eq!(gr_real_gap(&t).unwrap().gap, 0.0);
    assert!(GaussianState::thermal(&[0.9]).is_err());
}

#[test]
fn vacuum_displaced_is_coherent() {
    let alpha = Complex::new(0.6, -0.8);
    let s = coherent_state(alpha);
    // Pure state, so C_Gr is the entropy of the thermal state with the same
    // mean photon number |α|².
    let n = alpha.norm_sqr();
    assert_abs_diff_eq!(c_gr(&s).unwrap(), g(1.0 + 2.0 * n), epsilon = 1e-9);
}

#[test]
fn mixing_raises_entropy() {
    let mut rng = rng_from(10);
    for _ in 0..50 {
        let a = random_gaussian_state(2, &mut rng);
        let b = random_gaussian_state(2, &mut rng);
        let m = boxplus(0.3, &a, &b).unwrap();
        let avg = 0.3 * a.entropy().unwrap() + 0.7 * b.entropy().unwrap();
        assert!(m.entropy().unwrap() >= avg - 1e-9);
    }
    let a = GaussianState::vacuum(1).unwrap();
    assert!(boxplus(1.5, &a, &a).is_err());
}

#[test]
fn channel_validation_and_action() {
    let id = GaussianChannel::identity(2);
    let mut rng = rng_from(13);
    let s = random_gaussian_state(2, &mut rng);
    let out = id.apply(&s).unwrap();
    assert!((out.cov() - s.cov()).amax() < 1e-15);
    // Amplification with too little noise breaks complete positivity.
    let t = RMatrix::identity(2, 2) * 2.0;
    assert!(GaussianChannel::new(DVector::zeros(2), t.clone(), RMatrix::identity(2, 2)).is_err());
    assert!(GaussianChannel::new(DVector::zeros(2), t, RMatrix::identity(2, 2) * 3.0).is_ok());
}

#[test]
fn incoherent_channels_pass_the_probes() {
    let mut rng = rng_from(21);
    for n in 1..=3 {
        let probes = default_probes(n).unwrap();
        assert!(probes.len() <= 16);
        for _ in 0..10 {
            let ch = random_incoherent_gaussian_channel(n, &mut rng);
            assert!(probe_incoherent_gaussian(&ch, &probes).unwrap().passed());
        }
    }
    // A squeezer maps the vacuum to a non-thermal state.
    let squeeze = RMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.5]));
    let ch = GaussianChannel::new(DVector::zeros(2), squeeze, RMatrix::zeros(2, 2)).unwrap();
    let outcome = probe_incoherent_gaussian(&ch, &default_probes(1).unwrap()).unwrap();
    assert!(!outcome.passed());
}
