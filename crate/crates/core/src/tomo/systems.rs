//! K and J design matrices and the packing of their unknowns.
//!
//! K rows are `(1, a*^T, a^T)`; the unknown `U` is `(2k+1) x k` with rows
//! `Gamma_b`, then `X_ab`, then `Y_ab`.
//!
//! J columns, in order: `1`, `a*_m`, `a_m`, `a*_m a*_n / 2` for `m <= n`
//! (row-major upper triangle), `a_m a_n / 2` for `m <= n`, `a_m a*_n` for all
//! `(m, n)` with `m` outer. The matching unknowns are `c0`, `Gamma_a`,
//! `Gamma_a*`, packed `X_aa`, packed `X_aa*`, `Y_aa`; packed entries hold
//! `X_mm` on the diagonal and `2 X_mn` off it.

use num_complex::Complex64;

use crate::linalg::CMatrix;

/// Size of the K system for `k` modes.
pub fn k_size(k: usize) -> usize {
    2 * k + 1
}

/// Size of the J system for `k` modes.
pub fn j_size(k: usize) -> usize {
    (k + 1) * (2 * k + 1)
}

/// Upper-triangle index pairs `(m, n)`, `m <= n`, in packing order.
pub fn upper_pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|m| (m..k).map(move |n| (m, n))).collect()
}

pub fn build_k(probes: &[Vec<Complex64>]) -> CMatrix {
    let k = probes.first().map_or(0, Vec::len);
    CMatrix::from_fn(probes.len(), k_size(k), |i, col| match col {
        0 => Complex64::new(1.0, 0.0),
        c if c <= k => probes[i][c - 1].conj(),
        c => probes[i][c - 1 - k],
    })
}

pub fn j_row(a: &[Complex64]) -> Vec<Complex64> {
    let k = a.len();
    let mut row = Vec::with_capacity(j_size(k));
    row.push(Complex64::new(1.0, 0.0));
    row.extend(a.iter().map(|z| z.conj()));
    row.extend_from_slice(a);
    let pairs = upper_pairs(k);
    row.extend(pairs.iter().map(|&(m, n)| 0.5 * a[m].conj() * a[n].conj()));
    row.extend(pairs.iter().map(|&(m, n)| 0.5 * a[m] * a[n]));
    for m in 0..k {
        for n in 0..k {
            row.push(a[m] * a[n].conj());
        }
    }
    row
}

pub fn build_j(probes: &[Vec<Complex64>]) -> CMatrix {
    let rows: Vec<Vec<Complex64>> = probes.iter().map(|a| j_row(a)).collect();
    let cols = rows.first().map_or(0, Vec::len);
    CMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j])
}
