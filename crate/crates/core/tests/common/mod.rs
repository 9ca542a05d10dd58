#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use gqpt::channel::{probe_coherent, ChannelSpec, PrimitiveElement};
use gqpt::forms::{GaussianState, HermitianMatrix, QForm, SymmetricMatrix};
use gqpt::linalg::{CMatrix, RMatrix, RVector};
use gqpt::qst::{extract_exact, ProbeRecord};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex(rng: &mut impl Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.random::<f64>().sqrt(), rng.random_range(-PI..PI))
}

pub fn random_probe(rng: &mut impl Rng, k: usize, radius: f64) -> Vec<Complex64> {
    (0..k).map(|_| random_complex(rng, radius)).collect()
}

/// Primitive with moderate parameters: |beta| <= 1, r <= 0.8, kappa <= 0.5.
pub fn random_element(rng: &mut impl Rng, modes: usize, allow_decay: bool) -> PrimitiveElement {
    let mode = rng.random_range(0..modes);
    let choices = if allow_decay { 8 } else { 7 };
    let pick = loop {
        let p = rng.random_range(0..choices);
        if p != 4 || modes > 1 {
            break p;
        }
    };
    match pick {
        0 => PrimitiveElement::Displace { mode, beta: random_complex(rng, 1.0) },
        1 => PrimitiveElement::Phase { mode, phi: rng.random_range(-PI..PI) },
        2 => PrimitiveElement::Squeeze { mode, r: rng.random_range(0.0..0.8), phi: rng.random_range(-PI..PI) },
        3 => PrimitiveElement::LossBs { mode, theta: rng.random_range(0.0..FRAC_PI_2) },
        4 => {
            let other = (mode + rng.random_range(1..modes)) % modes;
            PrimitiveElement::TwoModeBs { mode_a: mode, mode_b: other, theta: rng.random_range(-PI..PI) }
        }
        5 => PrimitiveElement::Amplify { mode, gain: rng.random_range(1.0..1.8) },
        6 => PrimitiveElement::ThermalNoise { mode, nbar: rng.random_range(0.0..0.5) },
        _ => PrimitiveElement::TraceDecay { mode, kappa: rng.random_range(0.0..0.5) },
    }
}

/// Composition of 1 to `max_len` random primitives.
pub fn random_spec(rng: &mut impl Rng, modes: usize, max_len: usize, allow_decay: bool) -> ChannelSpec {
    let len = rng.random_range(1..=max_len);
    let elements = (0..len).map(|_| random_element(rng, modes, allow_decay)).collect();
    ChannelSpec::new(modes, elements).unwrap()
}

pub fn exact_records(spec: &ChannelSpec, probes: &[Vec<Complex64>]) -> Vec<ProbeRecord> {
    probes
        .iter()
        .map(|p| extract_exact(&probe_coherent(spec, p).unwrap(), p).unwrap())
        .collect()
}

/// Physical state: vacuum noise plus a random positive semidefinite excess.
pub fn random_state(rng: &mut impl Rng, k: usize) -> GaussianState {
    let n = 2 * k;
    let a = RMatrix::from_fn(n, n, |_, _| rng.random_range(-0.6..0.6));
    let cov = RMatrix::identity(n, n) * 0.5 + &a * a.transpose();
    let mean = RVector::from_fn(n, |_, _| rng.random_range(-1.5..1.5));
    GaussianState::new(mean, cov, rng.random_range(-1.0..1.0)).unwrap()
}

/// Normalizable form with quadratic eigenvalues in roughly [-2, -0.5].
pub fn random_form(rng: &mut impl Rng, k: usize) -> QForm {
    loop {
        let gamma: Vec<Complex64> = (0..k).map(|_| random_complex(rng, 1.0)).collect();
        let mut x = SymmetricMatrix::zeros(k);
        let mut y = HermitianMatrix::zeros(k);
        for i in 0..k {
            y.set(i, i, c(-rng.random_range(0.8..1.6), 0.0));
            for j in i..k {
                x.set(i, j, random_complex(rng, 0.3 / k as f64));
                if j > i {
                    y.set(j, i, random_complex(rng, 0.3 / k as f64));
                }
            }
        }
        let f = QForm { c: rng.random_range(-1.0..1.0), gamma, x, y };
        let lam = f.max_quadratic_eigenvalue();
        if lam < -0.5 && symmetric_min_eig(&f) > -2.0 {
            return f;
        }
    }
}

fn symmetric_min_eig(f: &QForm) -> f64 {
    f.to_real().a.symmetric_eigenvalues().min()
}

/// Fock amplitudes of `S(r, phi) D(z) |0>` from a matrix exponential of the
/// truncated squeeze generator on a padded space.
pub fn squeezed_coherent_vector(r: f64, phi: f64, z: Complex64, dim: usize) -> Vec<Complex64> {
    let big = dim + 80;
    let mut a = CMatrix::zeros(big, big);
    for n in 1..big {
        a[(n - 1, n)] = c((n as f64).sqrt(), 0.0);
    }
    let ad = a.adjoint();
    let xi = Complex64::from_polar(r, phi);
    let gen = (&a * &a * xi.conj() - &ad * &ad * xi) * c(0.5, 0.0);
    let s = gen.exp();
    let coh = CMatrix::from_vec(big, 1, gqpt::channel::fock::coherent_vector(z, big));
    let v = s * coh;
    (0..dim).map(|n| v[n]).collect()
}
