//! Closed-form integration of complex Gaussian exponentials over a subset of
//! complex variables, with measure `d^2 z / pi` per variable.
//!
//! An exponent over `n` complex variables is held in interleaved real
//! coordinates `u = (Re z1, Im z1, ...)` as `c + v^T u + 1/2 u^T H u`, with
//! complex `c`, `v` and complex symmetric `H`. Integrating out a block `I`
//! with `M = -H_II` (real part positive definite) gives
//!
//! ```text
//! c' = c + m ln 2 - ln sqrt(det M) + 1/2 v_I^T M^-1 v_I
//! v' = v_R + H_RI M^-1 v_I
//! H' = H_RR + H_RI M^-1 H_IR
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forms::{QForm, RealQuadratic};
use crate::linalg::{self, CMatrix, CVector, RVector};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianExponent {
    pub c: Complex64,
    pub v: CVector,
    pub h: CMatrix,
}

impl GaussianExponent {
    pub fn vars(&self) -> usize {
        self.v.len() / 2
    }

    pub fn value(&self, u: &RVector) -> Complex64 {
        let uc = u.map(|x| Complex64::new(x, 0.0));
        self.c + self.v.dot(&uc) + (uc.transpose() * &self.h * &uc)[(0, 0)] * 0.5
    }

    pub fn from_qform(f: &QForm) -> Self {
        let real = f.to_real();
        GaussianExponent {
            c: Complex64::new(real.c, 0.0),
            v: real.v.map(|x| Complex64::new(x, 0.0)),
            h: real.a.map(|x| Complex64::new(2.0 * x, 0.0)),
        }
    }

    /// Converts back to a Q-form, which requires all coefficients to be real
    /// up to `tol` relative to their magnitude.
    pub fn to_qform(&self, tol: f64) -> Result<QForm> {
        let scale = 1.0
            + self.c.norm()
            + self.v.iter().fold(0.0_f64, |a, z| a.max(z.norm()))
            + linalg::max_abs(&self.h);
        let imag = self
            .v
            .iter()
            .chain(self.h.iter())
            .chain(std::iter::once(&self.c))
            .fold(0.0_f64, |a, z| a.max(z.im.abs()));
        if imag > tol * scale {
            return Err(Error::InvalidParameter(format!(
                "exponent is not real (imaginary part {imag:e})"
            )));
        }
        Ok(QForm::from_real(&RealQuadratic {
            c: self.c.re,
            v: self.v.map(|z| z.re),
            a: self.h.map(|z| 0.5 * z.re),
        }))
    }

    /// Integrates out the complex variables listed in `vars`; the remaining
    /// variables keep their relative order.
    pub fn integrate(&self, vars: &[usize]) -> Result<GaussianExponent> {
        let n = self.vars();
        let mut integrated = vec![false; n];
        for &j in vars {
            if j >= n {
                return Err(Error::InvalidParameter(format!(
                    "variable {j} out of range for {n} variables"
                )));
            }
            integrated[j] = true;
        }
        let idx_i: Vec<usize> = (0..n)
            .filter(|&j| integrated[j])
            .flat_map(|j| [2 * j, 2 * j + 1])
            .collect();
        let idx_r: Vec<usize> = (0..n)
            .filter(|&j| !integrated[j])
            .flat_map(|j| [2 * j, 2 * j + 1])
            .collect();
        if idx_i.is_empty() {
            return Ok(self.clone());
        }
        let m = CMatrix::from_fn(idx_i.len(), idx_i.len(), |a, b| -self.h[(idx_i[a], idx_i[b])]);
        let h_ri = CMatrix::from_fn(idx_r.len(), idx_i.len(), |a, b| self.h[(idx_r[a], idx_i[b])]);
        let h_rr = CMatrix::from_fn(idx_r.len(), idx_r.len(), |a, b| self.h[(idx_r[a], idx_r[b])]);
        let v_i = CVector::from_fn(idx_i.len(), |a, _| self.v[idx_i[a]]);
        let v_r = CVector::from_fn(idx_r.len(), |a, _| self.v[idx_r[a]]);

        let log_sqrt_det = linalg::log_sqrt_det_positive(&m).ok_or(Error::DivergentIntegral)?;
        let lu = m.lu();
        let minv_v = lu.solve(&v_i).ok_or(Error::DivergentIntegral)?;
        let minv_h_ir = lu.solve(&h_ri.transpose()).ok_or(Error::DivergentIntegral)?;

        let pairs = (idx_i.len() / 2) as f64;
        let c = self.c + pairs * std::f64::consts::LN_2 - log_sqrt_det + v_i.dot(&minv_v) * 0.5;
        let v = v_r + &h_ri * &minv_v;
        let h = h_rr + &h_ri * &minv_h_ir;
        let h = (&h + h.transpose()) * Complex64::new(0.5, 0.0);
        Ok(GaussianExponent { c, v, h })
    }
}

/// Integrates `exp(exponent)` over the listed complex variables.
pub fn gaussian_integral_reduce(exponent: &GaussianExponent, vars: &[usize]) -> Result<GaussianExponent> {
    exponent.integrate(vars)
}

/// Exponent written in complex variables and their conjugates,
///
/// `c + p.z + q.z* + 1/2 z^T hol z + 1/2 z*^T anti z* + z*^T mixed z`,
///
/// where `z` and `z*` enter independently (the coefficients need not make the
/// exponent real).
#[derive(Debug, Clone)]
pub struct ComplexQuadratic {
    pub c: Complex64,
    pub p: CVector,
    pub q: CVector,
    pub hol: CMatrix,
    pub anti: CMatrix,
    pub mixed: CMatrix,
}

impl ComplexQuadratic {
    pub fn zeros(n: usize) -> Self {
        ComplexQuadratic {
            c: Complex64::new(0.0, 0.0),
            p: CVector::zeros(n),
            q: CVector::zeros(n),
            hol: CMatrix::zeros(n, n),
            anti: CMatrix::zeros(n, n),
            mixed: CMatrix::zeros(n, n),
        }
    }

    pub fn to_exponent(&self) -> GaussianExponent {
        let n = self.p.len();
        let e = linalg::embedding(n);
        let ebar = e.conjugate();
        let half = Complex64::new(0.5, 0.0);
        let hol = (&self.hol + self.hol.transpose()) * half;
        let anti = (&self.anti + self.anti.transpose()) * half;
        let v = e.transpose() * &self.p + ebar.transpose() * &self.q;
        let h = e.transpose() * hol * &e
            + ebar.transpose() * anti * &ebar
            + ebar.transpose() * &self.mixed * &e
            + e.transpose() * self.mixed.transpose() * &ebar;
        GaussianExponent { c: self.c, v, h }
    }
}
