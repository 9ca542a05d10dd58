//! Packed symmetric and Hermitian matrices. Only one triangle is stored, so
//! symmetry is a property of the representation rather than a runtime check.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Complex symmetric `n x n` matrix, upper triangle stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * (n + 1) / 2],
        }
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[self.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        let idx = self.index(i, j);
        self.data[idx] = value;
    }

    /// Takes the symmetric part `(m + m^T) / 2` of a square matrix.
    pub fn from_full_symmetrized(m: &CMatrix) -> Self {
        let n = m.nrows();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                out.set(i, j, (m[(i, j)] + m[(j, i)]) * 0.5);
            }
        }
        out
    }

    /// Accepts a square matrix only if it is symmetric to within `tol`.
    pub fn from_full(m: &CMatrix, tol: f64) -> Result<Self> {
        check_square(m)?;
        let dev = (m - m.transpose()).iter().fold(0.0_f64, |a, z| a.max(z.norm()));
        if dev > tol {
            return Err(Error::Format(format!(
                "matrix is not symmetric (deviation {dev:e})"
            )));
        }
        Ok(Self::from_full_symmetrized(m))
    }

    pub fn to_full(&self) -> CMatrix {
        CMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        SymmetricMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }
}

/// Complex Hermitian `n x n` matrix: real diagonal plus strict lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    diag: Vec<f64>,
    lower: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix {
            diag: vec![0.0; n],
            lower: vec![Complex64::new(0.0, 0.0); n * n.saturating_sub(1) / 2],
        }
    }

    pub fn scalar_identity(n: usize, value: f64) -> Self {
        let mut out = Self::zeros(n);
        out.diag.iter_mut().for_each(|d| *d = value);
        out
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Complex64::new(self.diag[i], 0.0),
            std::cmp::Ordering::Greater => self.lower[i * (i - 1) / 2 + j],
            std::cmp::Ordering::Less => self.lower[j * (j - 1) / 2 + i].conj(),
        }
    }

    /// Sets entry `(i, j)` and implicitly `(j, i)` to the conjugate. Diagonal
    /// entries keep only the real part.
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => self.diag[i] = value.re,
            std::cmp::Ordering::Greater => self.lower[i * (i - 1) / 2 + j] = value,
            std::cmp::Ordering::Less => self.lower[j * (j - 1) / 2 + i] = value.conj(),
        }
    }

    pub fn from_full_hermitized(m: &CMatrix) -> Self {
        let n = m.nrows();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                out.set(i, j, (m[(i, j)] + m[(j, i)].conj()) * 0.5);
            }
        }
        out
    }

    pub fn from_full(m: &CMatrix, tol: f64) -> Result<Self> {
        check_square(m)?;
        let dev = (m - m.adjoint()).iter().fold(0.0_f64, |a, z| a.max(z.norm()));
        if dev > tol {
            return Err(Error::Format(format!(
                "matrix is not Hermitian (deviation {dev:e})"
            )));
        }
        Ok(Self::from_full_hermitized(m))
    }

    pub fn to_full(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, n, |i, j| self.get(i, j))
    }

    pub fn scale(&self, factor: f64) -> Self {
        HermitianMatrix {
            diag: self.diag.iter().map(|d| d * factor).collect(),
            lower: self.lower.iter().map(|z| z * factor).collect(),
        }
    }
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Format(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_mirrors_on_read() {
        let mut s = SymmetricMatrix::zeros(3);
        s.set(2, 0, Complex64::new(1.0, 2.0));
        assert_eq!(s.get(0, 2), Complex64::new(1.0, 2.0));
        let full = s.to_full();
        assert_eq!(full, full.transpose());
    }

    #[test]
    fn hermitian_conjugates_on_read() {
        let mut h = HermitianMatrix::zeros(3);
        h.set(0, 2, Complex64::new(1.0, 2.0));
        h.set(1, 1, Complex64::new(-3.0, 7.0));
        assert_eq!(h.get(2, 0), Complex64::new(1.0, -2.0));
        assert_eq!(h.get(1, 1), Complex64::new(-3.0, 0.0));
        let full = h.to_full();
        assert_eq!(full, full.adjoint());
    }

    #[test]
    fn from_full_rejects_asymmetric() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        assert!(SymmetricMatrix::from_full(&m, 1e-12).is_err());
        assert!(HermitianMatrix::from_full(&m, 1e-12).is_err());
    }
}
