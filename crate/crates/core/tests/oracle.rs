//! Phase-space simulator and Q-form algebra against independent references:
//! truncated Fock-space simulation and brute-force quadrature.

mod common;

use common::*;
use gqpt::channel::fock::{coherent_vector, fock_reference, moments, q_function, trace};
use gqpt::channel::{apply_channel, probe_coherent, ChannelSpec, PrimitiveElement};
use gqpt::forms::{GaussianState, QForm};
use gqpt::linalg::CMatrix;
use num_complex::Complex64;
use rand::Rng;

#[test]
fn q_function_matches_fock_for_random_channels() {
    let mut rng = rng(11);
    for trial in 0..20 {
        let spec = random_spec(&mut rng, 1, 4, true);
        let alpha = random_complex(&mut rng, 1.5);
        let input = GaussianState::coherent(&[alpha]);
        let f = probe_coherent(&spec, &[alpha]).unwrap().to_qform().unwrap();
        let rho = fock_reference(&spec, &input, 70).unwrap();
        for _ in 0..10 {
            let z = random_complex(&mut rng, 2.5);
            let (want, got) = (q_function(&rho, z), f.eval(&[z]));
            assert!((want - got).abs() < 1e-6, "trial {trial} {spec:?} at {z}: fock {want} vs form {got}");
        }
    }
}

#[test]
fn squeezed_vacuum_q_function() {
    let spec = ChannelSpec::new(1, vec![PrimitiveElement::Squeeze { mode: 0, r: 0.5, phi: 0.0 }]).unwrap();
    let rho = fock_reference(&spec, &GaussianState::vacuum(1), 60).unwrap();
    let f = apply_channel(&spec, &GaussianState::vacuum(1)).unwrap().to_qform().unwrap();
    let mut rng = rng(3);
    for _ in 0..10 {
        let z = random_complex(&mut rng, 2.0);
        assert!((q_function(&rho, z) - f.eval(&[z])).abs() < 1e-8);
    }
}

#[test]
fn squeezed_state_amplitudes_match_matrix_exponential() {
    // an independent construction of the pure state: compare its Q-function
    let (r, phi, z) = (0.6, 0.9, c(0.4, -0.3));
    let v = squeezed_coherent_vector(r, phi, z, 60);
    let rho = CMatrix::from_fn(60, 60, |i, j| v[i] * v[j].conj());
    let spec = ChannelSpec::new(
        1,
        vec![PrimitiveElement::Displace { mode: 0, beta: z }, PrimitiveElement::Squeeze { mode: 0, r, phi }],
    )
    .unwrap();
    let f = apply_channel(&spec, &GaussianState::vacuum(1)).unwrap().to_qform().unwrap();
    for w in [c(0.0, 0.0), c(1.0, 0.5), c(-0.7, 1.2)] {
        assert!((q_function(&rho, w) - f.eval(&[w])).abs() < 1e-10);
    }
}

#[test]
fn squeeze_then_loss_moments() {
    let spec = ChannelSpec::new(
        1,
        vec![
            PrimitiveElement::Squeeze { mode: 0, r: 0.5, phi: 0.0 },
            PrimitiveElement::LossBs { mode: 0, theta: std::f64::consts::FRAC_PI_6 },
        ],
    )
    .unwrap();
    let out = probe_coherent(&spec, &[c(0.0, 0.0)]).unwrap();
    let reference = moments(&fock_reference(&spec, &GaussianState::vacuum(1), 60).unwrap());
    assert!(out.max_deviation(&reference) < 1e-8);
}

#[test]
fn trace_decay_trace() {
    let spec = ChannelSpec::new(1, vec![PrimitiveElement::TraceDecay { mode: 0, kappa: 0.3 }]).unwrap();
    let rho = fock_reference(&spec, &GaussianState::coherent(&[c(1.0, 0.0)]), 40).unwrap();
    let want = (-(1.0 - (-0.6f64).exp())).exp();
    assert!((trace(&rho) - want).abs() < 1e-8);
    let out = probe_coherent(&spec, &[c(1.0, 0.0)]).unwrap();
    assert!((out.log_weight + 1.0 - (-0.6f64).exp()).abs() < 1e-14);
}

#[test]
fn loss_output_is_coherent() {
    let theta = 0.8;
    let spec = ChannelSpec::new(1, vec![PrimitiveElement::LossBs { mode: 0, theta }]).unwrap();
    let rho = fock_reference(&spec, &GaussianState::coherent(&[c(1.0, 0.0)]), 40).unwrap();
    let v = coherent_vector(c(theta.cos(), 0.0), 41);
    let want = CMatrix::from_fn(41, 41, |i, j| v[i] * v[j].conj());
    // trace norm bounded by sqrt(rank) times the Frobenius norm, rank <= 2
    assert!((rho - want).norm() * 2f64.sqrt() < 1e-8);
}

#[test]
fn composition_is_associative_and_physical() {
    let mut rng = rng(5);
    for _ in 0..100 {
        let k = rng.random_range(1..=3);
        let (s1, s2) = (random_spec(&mut rng, k, 4, true), random_spec(&mut rng, k, 4, true));
        let input = random_state(&mut rng, k);
        let joined = apply_channel(&s1.then(&s2).unwrap(), &input).unwrap();
        let stepwise = apply_channel(&s2, &apply_channel(&s1, &input).unwrap()).unwrap();
        assert_eq!(joined, stepwise);
        assert!(joined.is_physical());
        if s1.is_trace_preserving() {
            assert_eq!(apply_channel(&s1, &input).unwrap().log_weight, input.log_weight);
        }
    }
}

/// Trapezoid rule over a box in real coordinates, `d^2 z / pi` per mode.
fn quadrature(f: &QForm) -> f64 {
    let k = f.modes();
    let (half, h) = (7.0, if k == 1 { 0.1 } else { 0.35 });
    let n = (2.0 * half / h) as usize + 1;
    let axis: Vec<f64> = (0..n).map(|i| -half + i as f64 * h).collect();
    let mut total = 0.0;
    let mut idx = vec![0usize; 2 * k];
    loop {
        let z: Vec<Complex64> = (0..k).map(|j| c(axis[idx[2 * j]], axis[idx[2 * j + 1]])).collect();
        total += f.eval(&z);
        let mut d = 0;
        loop {
            if d == idx.len() {
                return total * h.powi(2 * k as i32) / std::f64::consts::PI.powi(k as i32);
            }
            idx[d] += 1;
            if idx[d] < n {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

#[test]
fn normalization_matches_quadrature() {
    let mut rng = rng(17);
    for i in 0..50 {
        let k = if i < 25 { 1 } else { 2 };
        let f = random_form(&mut rng, k);
        let exact = f.normalization_integral().unwrap();
        let numeric = quadrature(&f);
        assert!(((exact - numeric) / exact).abs() < 1e-6, "form {i}: {exact} vs {numeric}");
    }
}

#[test]
fn spec_normalization_examples() {
    assert_eq!(QForm::vacuum(1).eval(&[c(0.0, 0.0)]), 1.0);
    assert!((QForm::vacuum(1).eval(&[c(1.0, 0.0)]) - (-1.0f64).exp()).abs() < 1e-15);
    let mut f = QForm::vacuum(1);
    f.c = 2f64.ln();
    assert!((f.normalization_integral().unwrap() - 2.0).abs() < 1e-14);
    let mut g = QForm::vacuum(1);
    g.y = gqpt::forms::HermitianMatrix::scalar_identity(1, -2.0);
    assert!((g.normalization_integral().unwrap() - 0.5).abs() < 1e-15);
    assert!((quadrature(&g) - 0.5).abs() < 1e-9);
}
