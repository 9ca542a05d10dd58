use num_complex::Complex64;

use super::matrix::{HermitianMatrix, SymmetricMatrix};
use super::qform::QForm;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Gaussian Q-function parameters of the process operator `rho_eps`, split
/// into reference (`a`) and output (`b`) mode blocks of `k` modes each.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessState {
    pub c0: f64,
    pub gamma_a: Vec<Complex64>,
    pub gamma_b: Vec<Complex64>,
    pub x_aa: SymmetricMatrix,
    pub x_ab: CMatrix,
    pub x_bb: SymmetricMatrix,
    pub y_aa: HermitianMatrix,
    pub y_ab: CMatrix,
    pub y_bb: HermitianMatrix,
}

impl ProcessState {
    pub fn modes(&self) -> usize {
        self.gamma_a.len()
    }

    /// Checks that all blocks agree on the mode count.
    pub fn validate(&self) -> Result<()> {
        let k = self.modes();
        let dims = [
            self.gamma_b.len(),
            self.x_aa.dim(),
            self.x_bb.dim(),
            self.y_aa.dim(),
            self.y_bb.dim(),
            self.x_ab.nrows(),
            self.x_ab.ncols(),
            self.y_ab.nrows(),
            self.y_ab.ncols(),
        ];
        if k == 0 {
            return Err(Error::InvalidParameter("process needs at least one mode".into()));
        }
        if let Some(&bad) = dims.iter().find(|&&d| d != k) {
            return Err(Error::ModeMismatch { expected: k, found: bad });
        }
        Ok(())
    }

    /// The `2k`-mode Q-form over `(Z_a, Z_b)`.
    pub fn to_qform(&self) -> QForm {
        let k = self.modes();
        let mut x = SymmetricMatrix::zeros(2 * k);
        let mut y = HermitianMatrix::zeros(2 * k);
        for i in 0..k {
            for j in 0..k {
                if j >= i {
                    x.set(i, j, self.x_aa.get(i, j));
                    x.set(k + i, k + j, self.x_bb.get(i, j));
                }
                if j <= i {
                    y.set(i, j, self.y_aa.get(i, j));
                    y.set(k + i, k + j, self.y_bb.get(i, j));
                }
                x.set(i, k + j, self.x_ab[(i, j)]);
                y.set(i, k + j, self.y_ab[(i, j)]);
            }
        }
        let gamma = self.gamma_a.iter().chain(&self.gamma_b).copied().collect();
        QForm { c: self.c0, gamma, x, y }
    }

    pub fn from_qform(f: &QForm) -> Result<Self> {
        let n = f.modes();
        if n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "process Q-form needs an even number of modes, got {n}"
            )));
        }
        let k = n / 2;
        let mut out = ProcessState::zeros(k);
        out.c0 = f.c;
        out.gamma_a = f.gamma[..k].to_vec();
        out.gamma_b = f.gamma[k..].to_vec();
        for i in 0..k {
            for j in 0..k {
                if j >= i {
                    out.x_aa.set(i, j, f.x.get(i, j));
                    out.x_bb.set(i, j, f.x.get(k + i, k + j));
                }
                if j <= i {
                    out.y_aa.set(i, j, f.y.get(i, j));
                    out.y_bb.set(i, j, f.y.get(k + i, k + j));
                }
                out.x_ab[(i, j)] = f.x.get(i, k + j);
                out.y_ab[(i, j)] = f.y.get(i, k + j);
            }
        }
        Ok(out)
    }

    pub fn zeros(k: usize) -> Self {
        ProcessState {
            c0: 0.0,
            gamma_a: vec![Complex64::new(0.0, 0.0); k],
            gamma_b: vec![Complex64::new(0.0, 0.0); k],
            x_aa: SymmetricMatrix::zeros(k),
            x_ab: CMatrix::zeros(k, k),
            x_bb: SymmetricMatrix::zeros(k),
            y_aa: HermitianMatrix::zeros(k),
            y_ab: CMatrix::zeros(k, k),
            y_bb: HermitianMatrix::zeros(k),
        }
    }

    /// Largest absolute parameter difference.
    pub fn max_deviation(&self, other: &ProcessState) -> f64 {
        self.to_qform().max_deviation(&other.to_qform())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qform_roundtrip_is_exact() {
        let k = 2;
        let mut p = ProcessState::zeros(k);
        p.c0 = -0.25;
        p.gamma_a = vec![Complex64::new(0.1, 0.2), Complex64::new(-0.3, 0.0)];
        p.gamma_b = vec![Complex64::new(0.0, 0.4), Complex64::new(0.5, -0.6)];
        p.x_ab = CMatrix::from_fn(k, k, |i, j| Complex64::new(i as f64 + 0.5, j as f64 - 0.25));
        p.y_ab = CMatrix::from_fn(k, k, |i, j| Complex64::new(j as f64, -(i as f64)));
        p.x_aa.set(0, 1, Complex64::new(0.7, 0.1));
        p.y_bb.set(1, 0, Complex64::new(0.2, 0.3));
        p.y_aa.set(0, 0, Complex64::new(-1.0, 0.0));
        let back = ProcessState::from_qform(&p.to_qform()).unwrap();
        assert_eq!(back, p);
    }
}
