use num_complex::Complex64;

use super::matrix::{HermitianMatrix, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, RMatrix, RVector};

/// Eigenvalue threshold separating a genuinely convergent form from noise.
pub const NORMALIZABLE_TOL: f64 = 1e-10;

/// Parameters of a Gaussian Husimi function over `k` modes,
///
/// `Q(z) = exp(c + 2 Re(gamma . z) + Re(z^T x z) + z^H y z)`.
///
/// The anti-holomorphic coefficients are never stored, so `Q` is real by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct QForm {
    pub c: f64,
    pub gamma: Vec<Complex64>,
    pub x: SymmetricMatrix,
    pub y: HermitianMatrix,
}

/// The same exponent expressed over interleaved real coordinates
/// `u = (Re z1, Im z1, ...)`: `c + v^T u + u^T a u`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealQuadratic {
    pub c: f64,
    pub v: RVector,
    pub a: RMatrix,
}

impl QForm {
    pub fn new(c: f64, gamma: Vec<Complex64>, x: SymmetricMatrix, y: HermitianMatrix) -> Result<Self> {
        let k = gamma.len();
        if k == 0 {
            return Err(Error::InvalidParameter("a Q-form needs at least one mode".into()));
        }
        if x.dim() != k {
            return Err(Error::ModeMismatch { expected: k, found: x.dim() });
        }
        if y.dim() != k {
            return Err(Error::ModeMismatch { expected: k, found: y.dim() });
        }
        if !c.is_finite() || gamma.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidParameter("non-finite Q-form coefficient".into()));
        }
        Ok(QForm { c, gamma, x, y })
    }

    pub fn modes(&self) -> usize {
        self.gamma.len()
    }

    pub fn vacuum(k: usize) -> Self {
        QForm {
            c: 0.0,
            gamma: vec![Complex64::new(0.0, 0.0); k],
            x: SymmetricMatrix::zeros(k),
            y: HermitianMatrix::scalar_identity(k, -1.0),
        }
    }

    /// `|<z|beta>|^2 = exp(-|z - beta|^2)`.
    pub fn coherent(beta: &[Complex64]) -> Self {
        QForm {
            c: -beta.iter().map(|b| b.norm_sqr()).sum::<f64>(),
            gamma: beta.iter().map(|b| b.conj()).collect(),
            x: SymmetricMatrix::zeros(beta.len()),
            y: HermitianMatrix::scalar_identity(beta.len(), -1.0),
        }
    }

    pub fn log_eval(&self, z: &[Complex64]) -> f64 {
        let k = self.modes();
        assert_eq!(z.len(), k, "evaluation point has wrong length");
        let mut linear = Complex64::new(0.0, 0.0);
        let mut hol = Complex64::new(0.0, 0.0);
        let mut mixed = Complex64::new(0.0, 0.0);
        for i in 0..k {
            linear += self.gamma[i] * z[i];
            for j in 0..k {
                hol += z[i] * self.x.get(i, j) * z[j];
                mixed += z[i].conj() * self.y.get(i, j) * z[j];
            }
        }
        self.c + 2.0 * linear.re + hol.re + mixed.re
    }

    pub fn eval(&self, z: &[Complex64]) -> f64 {
        self.log_eval(z).exp()
    }

    pub fn to_real(&self) -> RealQuadratic {
        let k = self.modes();
        let mut a = RMatrix::zeros(2 * k, 2 * k);
        let mut v = RVector::zeros(2 * k);
        for j in 0..k {
            v[2 * j] = 2.0 * self.gamma[j].re;
            v[2 * j + 1] = -2.0 * self.gamma[j].im;
            for l in 0..k {
                let s = self.x.get(j, l).re;
                let t = self.x.get(j, l).im;
                let p = self.y.get(j, l).re;
                let q = self.y.get(j, l).im;
                a[(2 * j, 2 * l)] = s + p;
                a[(2 * j + 1, 2 * l + 1)] = p - s;
                a[(2 * j, 2 * l + 1)] = -t - q;
                a[(2 * j + 1, 2 * l)] = q - t;
            }
        }
        RealQuadratic { c: self.c, v, a }
    }

    /// Inverse of [`QForm::to_real`]; the symmetric part of `a` is used.
    pub fn from_real(real: &RealQuadratic) -> Self {
        let n = real.v.len();
        let k = n / 2;
        let a = linalg::symmetrize(&real.a);
        let mut x = SymmetricMatrix::zeros(k);
        let mut y = HermitianMatrix::zeros(k);
        let mut gamma = Vec::with_capacity(k);
        for j in 0..k {
            gamma.push(Complex64::new(real.v[2 * j], -real.v[2 * j + 1]) * 0.5);
            for l in 0..k {
                let b11 = a[(2 * j, 2 * l)];
                let b12 = a[(2 * j, 2 * l + 1)];
                let b21 = a[(2 * j + 1, 2 * l)];
                let b22 = a[(2 * j + 1, 2 * l + 1)];
                if l >= j {
                    x.set(j, l, Complex64::new(0.5 * (b11 - b22), -0.5 * (b12 + b21)));
                }
                if l <= j {
                    y.set(j, l, Complex64::new(0.5 * (b11 + b22), 0.5 * (b21 - b12)));
                }
            }
        }
        QForm { c: real.c, gamma, x, y }
    }

    /// Largest eigenvalue of the real quadratic-form matrix.
    pub fn max_quadratic_eigenvalue(&self) -> f64 {
        linalg::symmetric_eigenvalues(&self.to_real().a).max()
    }

    pub fn normalizable(&self) -> bool {
        self.max_quadratic_eigenvalue() < -NORMALIZABLE_TOL
    }

    /// `ln` of `int prod_j d^2 z_j / pi  Q(z)`.
    pub fn log_normalization_integral(&self) -> Result<f64> {
        let real = self.to_real();
        let max_eig = linalg::symmetric_eigenvalues(&real.a).max();
        if max_eig >= -NORMALIZABLE_TOL {
            return Err(Error::NotNormalizable { max_eigenvalue: max_eig });
        }
        let k = self.modes() as f64;
        // exponent -1/2 u^T M u + v^T u + c with M = -2a
        let m = &real.a * -2.0;
        let chol = m.cholesky().ok_or(Error::NotNormalizable { max_eigenvalue: max_eig })?;
        let log_det: f64 = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        let minv_v = chol.solve(&real.v);
        Ok(real.c + k * std::f64::consts::LN_2 - 0.5 * log_det + 0.5 * real.v.dot(&minv_v))
    }

    pub fn normalization_integral(&self) -> Result<f64> {
        Ok(self.log_normalization_integral()?.exp())
    }

    /// Largest absolute difference over all parameters.
    pub fn max_deviation(&self, other: &QForm) -> f64 {
        assert_eq!(self.modes(), other.modes());
        let k = self.modes();
        let mut dev = (self.c - other.c).abs();
        for i in 0..k {
            dev = dev.max((self.gamma[i] - other.gamma[i]).norm());
            for j in 0..k {
                dev = dev.max((self.x.get(i, j) - other.x.get(i, j)).norm());
                dev = dev.max((self.y.get(i, j) - other.y.get(i, j)).norm());
            }
        }
        dev
    }
}
