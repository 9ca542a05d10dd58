//! Small dense linear-algebra helpers shared by the modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Solves `a * x = b` for square complex `a`. Returns `None` when LU fails.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    a.clone().lu().solve(b)
}

/// 2-norm condition number from singular values; infinite for singular input.
pub fn condition_number(a: &CMatrix) -> f64 {
    if a.nrows() == 0 {
        return 1.0;
    }
    let sv = a.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn symmetric_eigenvalues(m: &RMatrix) -> RVector {
    m.clone().symmetric_eigen().eigenvalues
}

/// Smallest eigenvalue of a Hermitian complex matrix.
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    let n = m.nrows();
    // Real embedding [[Re, -Im], [Im, Re]] has the same spectrum, doubled.
    let mut emb = RMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            emb[(i, j)] = z.re;
            emb[(i + n, j + n)] = z.re;
            emb[(i, j + n)] = -z.im;
            emb[(i + n, j)] = z.im;
        }
    }
    symmetric_eigenvalues(&emb).min()
}

pub fn symmetrize(m: &RMatrix) -> RMatrix {
    (m + m.transpose()) * 0.5
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Maps complex amplitudes to interleaved real coordinates `(Re z1, Im z1, ...)`.
pub fn complex_to_real(z: &[Complex64]) -> RVector {
    RVector::from_iterator(2 * z.len(), z.iter().flat_map(|z| [z.re, z.im]))
}

pub fn real_to_complex(u: &RVector) -> Vec<Complex64> {
    (0..u.len() / 2)
        .map(|j| Complex64::new(u[2 * j], u[2 * j + 1]))
        .collect()
}

/// The `k x 2k` matrix `P` with `z = P u` for interleaved real coordinates `u`.
pub fn embedding(k: usize) -> CMatrix {
    let mut p = CMatrix::zeros(k, 2 * k);
    for j in 0..k {
        p[(j, 2 * j)] = Complex64::new(1.0, 0.0);
        p[(j, 2 * j + 1)] = I;
    }
    p
}

/// Standard symplectic form for interleaved `(x1, p1, ..., xk, pk)` ordering.
pub fn symplectic_form(k: usize) -> RMatrix {
    let mut omega = RMatrix::zeros(2 * k, 2 * k);
    for j in 0..k {
        omega[(2 * j, 2 * j + 1)] = 1.0;
        omega[(2 * j + 1, 2 * j)] = -1.0;
    }
    omega
}

/// `log sqrt(det m)` for complex symmetric `m` whose real part is positive
/// definite, on the branch continuous from the real part. Returns `None` when
/// the real part is not positive definite.
pub fn log_sqrt_det_positive(m: &CMatrix) -> Option<Complex64> {
    let n = m.nrows();
    let re = symmetrize(&m.map(|z| z.re));
    let im = symmetrize(&m.map(|z| z.im));
    let chol = re.cholesky()?;
    let l = chol.l();
    // C = L^-1 Im L^-T, real symmetric; det m = det(Re) * prod(1 + i mu)
    let linv_im = l.solve_lower_triangular(&im)?;
    let c = l.solve_lower_triangular(&linv_im.transpose())?;
    let mu = symmetric_eigenvalues(&symmetrize(&c));
    let log_det_re: f64 = (0..n).map(|i| l[(i, i)].ln()).sum::<f64>() * 2.0;
    let phase: Complex64 = mu.iter().map(|&x| Complex64::new(1.0, x).ln()).sum();
    Some(Complex64::new(0.5 * log_det_re, 0.0) + phase * 0.5)
}
