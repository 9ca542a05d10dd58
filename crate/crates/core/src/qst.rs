//! Per-probe output data: the Q-function parameters `(c, d, x_bb, y_bb)` of
//! each channel output, read off exactly or estimated from simulated
//! heterodyne (Q-function) samples.

use nalgebra::Cholesky;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::forms::{qform_from_moments, GaussianState, HermitianMatrix, QForm, SymmetricMatrix};
use crate::linalg::{self, RMatrix, RVector};

/// Detected output data for one coherent probe.
///
/// `d` is the coefficient of `Z` in the output exponent (the Q-form's
/// `gamma`), `c` the constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRecord {
    pub probe: Vec<Complex64>,
    pub c: f64,
    pub d: Vec<Complex64>,
    pub x_bb: SymmetricMatrix,
    pub y_bb: HermitianMatrix,
    /// `None` for exact records.
    pub sample_count: Option<usize>,
    /// Seed used to draw the samples, when sampled.
    pub seed: Option<u64>,
    /// Estimated covariance of `(Re d1, Im d1, ..., Re dk, Im dk)`.
    pub d_cov: Option<RMatrix>,
}

impl ProbeRecord {
    pub fn modes(&self) -> usize {
        self.probe.len()
    }

    pub fn is_exact(&self) -> bool {
        self.sample_count.is_none()
    }

    pub fn output_qform(&self) -> QForm {
        QForm {
            c: self.c,
            gamma: self.d.clone(),
            x: self.x_bb.clone(),
            y: self.y_bb.clone(),
        }
    }

    /// Exact record from an output Q-form.
    pub fn from_qform(probe: Vec<Complex64>, f: QForm) -> Result<Self> {
        if f.modes() != probe.len() {
            return Err(Error::ModeMismatch { expected: probe.len(), found: f.modes() });
        }
        if !f.normalizable() {
            return Err(Error::NotNormalizable { max_eigenvalue: f.max_quadratic_eigenvalue() });
        }
        Ok(ProbeRecord {
            probe,
            c: f.c,
            d: f.gamma,
            x_bb: f.x,
            y_bb: f.y,
            sample_count: None,
            seed: None,
            d_cov: None,
        })
    }

    /// Rough one-sigma uncertainty of the quadratic coefficients; zero for
    /// exact records.
    pub fn quadratic_std_err(&self) -> f64 {
        match self.sample_count {
            None => 0.0,
            Some(n) => {
                let k = self.modes();
                let mut scale: f64 = 0.0;
                for i in 0..k {
                    for j in 0..k {
                        scale = scale.max(self.x_bb.get(i, j).norm()).max(self.y_bb.get(i, j).norm());
                    }
                }
                scale * (2.0 / n as f64).sqrt()
            }
        }
    }
}

/// Reads the record off the exact oracle output.
pub fn extract_exact(out: &GaussianState, probe: &[Complex64]) -> Result<ProbeRecord> {
    if out.modes() != probe.len() {
        return Err(Error::ModeMismatch { expected: probe.len(), found: out.modes() });
    }
    ProbeRecord::from_qform(probe.to_vec(), out.to_qform()?)
}

/// Draws `n` heterodyne outcomes, i.e. points with density `Q(z) / pi^k`.
/// Deterministic for a given seed.
pub fn sample_heterodyne(out: &GaussianState, n: usize, seed: u64) -> Result<Vec<Vec<Complex64>>> {
    if out.log_weight.abs() > 1e-12 {
        return Err(Error::UnnormalizedState { log_weight: out.log_weight });
    }
    if !out.is_physical() {
        return Err(Error::InvalidParameter("cannot sample a non-physical state".into()));
    }
    // (Re z, Im z) ~ N(mean / sqrt 2, sigma_q / 2)
    let cov = out.q_covariance() * 0.5;
    let chol = Cholesky::new(cov).ok_or(Error::SingularCovariance { min_eigenvalue: 0.0 })?;
    let l = chol.l();
    let centre = &out.mean / std::f64::consts::SQRT_2;
    let dim = centre.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|_| {
            let g = RVector::from_fn(dim, |_, _| StandardNormal.sample(&mut rng));
            linalg::real_to_complex(&(&centre + &l * g))
        })
        .collect();
    Ok(samples)
}

/// Minimum sample count for moment estimation over `k` modes.
pub fn min_samples(k: usize) -> usize {
    50 * (2 * k) * (2 * k)
}

/// Method-of-moments estimate of the output record. `trace_hint` supplies
/// the measured output trace for non-trace-preserving channels; without it
/// the form is normalized to unit integral.
pub fn estimate_record(samples: &[Vec<Complex64>], probe: &[Complex64], trace_hint: Option<f64>) -> Result<ProbeRecord> {
    let k = probe.len();
    let n = samples.len();
    let need = min_samples(k);
    if n < need {
        return Err(Error::TooFewSamples { have: n, need });
    }
    if let Some(bad) = samples.iter().find(|s| s.len() != k) {
        return Err(Error::ModeMismatch { expected: k, found: bad.len() });
    }
    let log_weight = match trace_hint {
        None => 0.0,
        Some(t) if t.is_finite() && t > 0.0 => t.ln(),
        Some(t) => return Err(Error::InvalidParameter(format!("trace hint must be positive, got {t}"))),
    };
    let dim = 2 * k;
    let points: Vec<RVector> = samples.iter().map(|s| linalg::complex_to_real(s)).collect();
    let mean = points.iter().fold(RVector::zeros(dim), |acc, p| acc + p) / n as f64;
    let mut cov = RMatrix::zeros(dim, dim);
    for p in &points {
        let dev = p - &mean;
        cov += &dev * dev.transpose();
    }
    cov /= (n - 1) as f64;

    let min_eig = linalg::symmetric_eigenvalues(&cov).min();
    if !(min_eig > 1e-12 * (1.0 + cov.amax())) {
        return Err(Error::DegenerateCovariance);
    }
    let sigma_q = &cov * 2.0;
    let f = qform_from_moments(&mean, &sigma_q, log_weight);

    // Delta-method covariance of g = C^-1 m / 2 (so d_j = g_2j - i g_2j+1):
    // Cov(g) = [(1 + m^T C^-1 m) C^-1 + a a^T] / (4 n), a = C^-1 m.
    let cinv = cov.clone().try_inverse().ok_or(Error::DegenerateCovariance)?;
    let a = &cinv * &mean;
    let cov_g = (&cinv * (1.0 + mean.dot(&a)) + &a * a.transpose()) / (4.0 * n as f64);
    let flip = RMatrix::from_diagonal(&RVector::from_fn(dim, |i, _| if i % 2 == 0 { 1.0 } else { -1.0 }));
    let d_cov = &flip * cov_g * &flip;

    let mut record = ProbeRecord::from_qform(probe.to_vec(), f)?;
    record.sample_count = Some(n);
    record.d_cov = Some(d_cov);
    Ok(record)
}
