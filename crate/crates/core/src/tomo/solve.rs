//! Linear solves for the two blocks of the process operator.

use num_complex::Complex64;

use super::probes::SINGULAR_COND;
use super::systems::{build_j, build_k, j_size, k_size, upper_pairs};
use crate::error::{Error, Result};
use crate::forms::{HermitianMatrix, SymmetricMatrix};
use crate::linalg::{self, CMatrix};
use crate::qst::ProbeRecord;

/// Relative tolerance on the redundantly recovered conjugate pairs.
pub const CONJUGATE_TOL: f64 = 1e-8;

/// The block fixed by the output linear terms.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPart {
    pub gamma_b: Vec<Complex64>,
    pub x_ab: CMatrix,
    pub y_ab: CMatrix,
}

/// The block fixed by the output constants.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticPart {
    pub c0: f64,
    pub gamma_a: Vec<Complex64>,
    pub x_aa: SymmetricMatrix,
    pub y_aa: HermitianMatrix,
}

fn common_modes(records: &[ProbeRecord]) -> Result<usize> {
    let k = records
        .first()
        .ok_or(Error::ProbeCount { expected: 1, found: 0 })?
        .modes();
    for r in records {
        for len in [r.modes(), r.d.len(), r.x_bb.dim(), r.y_bb.dim()] {
            if len != k {
                return Err(Error::ModeMismatch { expected: k, found: len });
            }
        }
    }
    Ok(k)
}

fn solve_checked(a: &CMatrix, b: &CMatrix, singular: impl Fn(f64) -> Error) -> Result<CMatrix> {
    let cond = linalg::condition_number(a);
    if !(cond <= SINGULAR_COND) {
        return Err(singular(cond));
    }
    linalg::solve(a, b).ok_or_else(|| singular(f64::INFINITY))
}

/// Solves `K U = D` from exactly `2k+1` records.
pub fn solve_linear_part(records: &[ProbeRecord]) -> Result<LinearPart> {
    let k = common_modes(records)?;
    if records.len() != k_size(k) {
        return Err(Error::ProbeCount { expected: k_size(k), found: records.len() });
    }
    let probes: Vec<Vec<Complex64>> = records.iter().map(|r| r.probe.clone()).collect();
    let d = CMatrix::from_fn(records.len(), k, |i, n| records[i].d[n]);
    let u = solve_checked(&build_k(&probes), &d, |cond| Error::SingularK { cond })?;
    Ok(LinearPart {
        gamma_b: u.row(0).iter().copied().collect(),
        x_ab: u.rows(1, k).into_owned(),
        y_ab: u.rows(1 + k, k).into_owned(),
    })
}

/// Solves the J system from exactly `(k+1)(2k+1)` records.
pub fn solve_quadratic_part(records: &[ProbeRecord]) -> Result<QuadraticPart> {
    common_modes(records)?;
    let probes: Vec<Vec<Complex64>> = records.iter().map(|r| r.probe.clone()).collect();
    let c: Vec<f64> = records.iter().map(|r| r.c).collect();
    solve_quadratic_from_values(&probes, &c)
}

/// J solve for given probe points and output constants, followed by the
/// conjugate-consistency check.
pub fn solve_quadratic_from_values(probes: &[Vec<Complex64>], c: &[f64]) -> Result<QuadraticPart> {
    let k = probes.first().map_or(0, Vec::len);
    let n = j_size(k);
    if probes.len() != n || c.len() != n {
        return Err(Error::ProbeCount { expected: n, found: probes.len().min(c.len()) });
    }
    let rhs = CMatrix::from_fn(n, 1, |i, _| Complex64::new(c[i], 0.0));
    let s = solve_checked(&build_j(probes), &rhs, |cond| Error::SingularJ { cond })?;
    let s: Vec<Complex64> = s.iter().copied().collect();
    let tol = CONJUGATE_TOL * (1.0 + s.iter().fold(0.0_f64, |a, z| a.max(z.norm())));
    let mut deviation = s[0].im.abs();

    let gamma_a: Vec<Complex64> = (0..k)
        .map(|m| {
            let (a, b) = (s[1 + m], s[1 + k + m]);
            deviation = deviation.max((a - b.conj()).norm());
            0.5 * (a + b.conj())
        })
        .collect();

    let pairs = upper_pairs(k);
    let x_off = 1 + 2 * k;
    let xc_off = x_off + pairs.len();
    let mut x_aa = SymmetricMatrix::zeros(k);
    for (idx, &(m, l)) in pairs.iter().enumerate() {
        let (a, b) = (s[x_off + idx], s[xc_off + idx]);
        deviation = deviation.max((a - b.conj()).norm());
        let packed = 0.5 * (a + b.conj());
        x_aa.set(m, l, if m == l { packed } else { 0.5 * packed });
    }

    let y_off = xc_off + pairs.len();
    let y = CMatrix::from_fn(k, k, |m, l| s[y_off + m * k + l]);
    deviation = deviation.max(linalg::max_abs(&(&y - y.adjoint())));

    if deviation > tol {
        return Err(Error::ConjugateInconsistency { deviation });
    }
    Ok(QuadraticPart {
        c0: s[0].re,
        gamma_a,
        x_aa,
        y_aa: HermitianMatrix::from_full_hermitized(&y),
    })
}
