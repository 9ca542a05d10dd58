use num_complex::Complex64;

use super::qform::{QForm, RealQuadratic, NORMALIZABLE_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, RMatrix, RVector};

/// Tolerance on the uncertainty relation `cov + i/2 Omega >= 0`.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Tolerance below which the Q-function covariance counts as singular.
pub const SINGULAR_COV_TOL: f64 = 1e-12;

/// A `k`-mode Gaussian state in quadrature form `(x1, p1, ..., xk, pk)` with
/// `a = (x + i p) / sqrt 2`, so the vacuum has covariance `I / 2`.
/// `log_weight` is the log of the trace; zero for normalized states.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub mean: RVector,
    pub cov: RMatrix,
    pub log_weight: f64,
}

impl GaussianState {
    /// Validating constructor: shapes, symmetry, finiteness and the
    /// uncertainty relation.
    pub fn new(mean: RVector, cov: RMatrix, log_weight: f64) -> Result<Self> {
        let state = Self::from_parts(mean, cov, log_weight)?;
        let min_eig = state.uncertainty_min_eigenvalue();
        if min_eig < -PHYSICALITY_TOL {
            return Err(Error::NonPhysical {
                state: Box::new(state),
                min_eigenvalue: min_eig,
            });
        }
        Ok(state)
    }

    /// Structural checks only; physicality is not enforced.
    pub fn from_parts(mean: RVector, cov: RMatrix, log_weight: f64) -> Result<Self> {
        let n = mean.len();
        if n == 0 || n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "mean vector must have even positive length, got {n}"
            )));
        }
        if cov.nrows() != n || cov.ncols() != n {
            return Err(Error::ModeMismatch { expected: n, found: cov.nrows() });
        }
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) || !log_weight.is_finite() {
            return Err(Error::InvalidParameter("non-finite state parameter".into()));
        }
        let asym = (&cov - cov.transpose()).amax();
        if asym > 1e-12 * (1.0 + cov.amax()) {
            return Err(Error::InvalidParameter(format!(
                "covariance not symmetric (deviation {asym:e})"
            )));
        }
        Ok(GaussianState {
            mean,
            cov: linalg::symmetrize(&cov),
            log_weight,
        })
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn vacuum(k: usize) -> Self {
        GaussianState {
            mean: RVector::zeros(2 * k),
            cov: RMatrix::identity(2 * k, 2 * k) * 0.5,
            log_weight: 0.0,
        }
    }

    pub fn coherent(alpha: &[Complex64]) -> Self {
        GaussianState {
            mean: linalg::complex_to_real(alpha) * std::f64::consts::SQRT_2,
            cov: RMatrix::identity(2 * alpha.len(), 2 * alpha.len()) * 0.5,
            log_weight: 0.0,
        }
    }

    /// Mean field amplitudes `<a_j>`.
    pub fn amplitudes(&self) -> Vec<Complex64> {
        linalg::real_to_complex(&(&self.mean / std::f64::consts::SQRT_2))
    }

    pub fn trace(&self) -> f64 {
        self.log_weight.exp()
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + i/2 Omega`.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let omega = linalg::symplectic_form(self.modes());
        let m = CMatrix::from_fn(self.cov.nrows(), self.cov.ncols(), |i, j| {
            Complex64::new(self.cov[(i, j)], 0.5 * omega[(i, j)])
        });
        linalg::min_hermitian_eigenvalue(&m)
    }

    pub fn is_physical(&self) -> bool {
        self.uncertainty_min_eigenvalue() >= -PHYSICALITY_TOL
    }

    /// Covariance of the heterodyne outcome `sqrt 2 (Re z, Im z)`.
    pub fn q_covariance(&self) -> RMatrix {
        let n = self.cov.nrows();
        &self.cov + RMatrix::identity(n, n) * 0.5
    }

    /// Q-function parameters of this state: `qform.eval(z) == <z|rho|z>`.
    pub fn to_qform(&self) -> Result<QForm> {
        let sigma_q = self.q_covariance();
        let min_eig = linalg::symmetric_eigenvalues(&sigma_q).min();
        if min_eig < SINGULAR_COV_TOL {
            return Err(Error::SingularCovariance { min_eigenvalue: min_eig });
        }
        let m = &self.mean / std::f64::consts::SQRT_2;
        Ok(qform_from_moments(&m, &sigma_q, self.log_weight))
    }

    /// Largest absolute difference over mean, covariance and log weight.
    pub fn max_deviation(&self, other: &GaussianState) -> f64 {
        (&self.mean - &other.mean)
            .amax()
            .max((&self.cov - &other.cov).amax())
            .max((self.log_weight - other.log_weight).abs())
    }
}

/// Builds the Q-form with Gaussian profile of mean `m` (real coordinates of
/// `z`) and covariance `sigma_q / 2` in those coordinates, scaled so that it
/// integrates to `exp(log_weight)`. `sigma_q` must be positive definite.
pub(crate) fn qform_from_moments(m: &RVector, sigma_q: &RMatrix, log_weight: f64) -> QForm {
    let chol = sigma_q
        .clone()
        .cholesky()
        .expect("Q covariance must be positive definite");
    let log_det: f64 = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
    let s = linalg::symmetrize(&chol.inverse());
    let sm = &s * m;
    QForm::from_real(&RealQuadratic {
        c: log_weight - 0.5 * log_det - m.dot(&sm),
        v: sm * 2.0,
        a: -s,
    })
}

impl QForm {
    /// Gaussian state whose Q-function is this form. Fails with
    /// [`Error::NonPhysical`] (carrying the state) when the recovered
    /// covariance violates the uncertainty relation.
    pub fn to_state(&self) -> Result<GaussianState> {
        let real = self.to_real();
        let s = -&real.a;
        let min_eig = linalg::symmetric_eigenvalues(&s).min();
        if min_eig <= NORMALIZABLE_TOL {
            return Err(Error::NotNormalizable { max_eigenvalue: -min_eig });
        }
        let chol = s.cholesky().ok_or(Error::NotNormalizable { max_eigenvalue: -min_eig })?;
        let sigma_q = linalg::symmetrize(&chol.inverse());
        let m = &sigma_q * &real.v * 0.5;
        let log_det_s: f64 = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        let sm = &real.v * 0.5;
        let log_weight = real.c - 0.5 * log_det_s + m.dot(&sm);
        let n = sigma_q.nrows();
        let cov = &sigma_q - RMatrix::identity(n, n) * 0.5;
        GaussianState::new(m * std::f64::consts::SQRT_2, cov, log_weight)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_conversion() {
        let f = GaussianState::vacuum(1).to_qform().unwrap();
        assert!(f.max_deviation(&QForm::vacuum(1)) < 1e-15);
        let s = QForm::vacuum(1).to_state().unwrap();
        assert!(s.max_deviation(&GaussianState::vacuum(1)) < 1e-15);
    }

    #[test]
    fn coherent_conversion() {
        let beta = Complex64::new(1.0, 1.0);
        let f = GaussianState::coherent(&[beta]).to_qform().unwrap();
        assert!(f.max_deviation(&QForm::coherent(&[beta])) < 1e-14);
        let s = QForm::coherent(&[beta]).to_state().unwrap();
        let sq2 = std::f64::consts::SQRT_2;
        assert!((s.mean[0] - sq2).abs() < 1e-14 && (s.mean[1] - sq2).abs() < 1e-14);
        assert!((&s.cov - RMatrix::identity(2, 2) * 0.5).amax() < 1e-14);
        assert!(s.log_weight.abs() < 1e-14);
    }

    #[test]
    fn log_weight_sets_normalization() {
        let mut s = GaussianState::coherent(&[Complex64::new(0.3, -0.4)]);
        s.log_weight = -0.7;
        let f = s.to_qform().unwrap();
        assert!((f.log_normalization_integral().unwrap() + 0.7).abs() < 1e-13);
    }

    #[test]
    fn detects_unphysical_covariance() {
        let cov = RMatrix::identity(2, 2) * 0.3;
        let err = GaussianState::new(RVector::zeros(2), cov, 0.0).unwrap_err();
        match err {
            Error::NonPhysical { min_eigenvalue, state } => {
                assert!((min_eigenvalue + 0.2).abs() < 1e-12);
                assert_eq!(state.modes(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn singular_q_covariance() {
        let cov = RMatrix::identity(2, 2) * -0.5;
        let s = GaussianState::from_parts(RVector::zeros(2), cov, 0.0).unwrap();
        assert!(matches!(s.to_qform(), Err(Error::SingularCovariance { .. })));
    }
}
