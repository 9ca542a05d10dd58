//! Reconstruction of the process operator from probe records.

mod closed_form;
mod probes;
mod solve;
mod systems;

pub use closed_form::canonical_closed_form;
pub use probes::{
    canonical_probes, required_probes, validate_probe_set, Conditioning, ProbeSet, CANONICAL_COND_J, SINGULAR_COND,
};
pub use solve::{solve_linear_part, solve_quadratic_from_values, solve_quadratic_part, LinearPart, QuadraticPart, CONJUGATE_TOL};
pub use systems::{build_j, build_k, j_row, j_size, k_size, upper_pairs};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forms::{HermitianMatrix, ProcessState, SymmetricMatrix};
use crate::linalg::{self, CMatrix};
use crate::predict::predict_coherent;
use crate::qst::ProbeRecord;

/// Cross-record agreement required of `x_bb`, `y_bb` for exact records.
pub const EXACT_QUADRATIC_TOL: f64 = 1e-6;

/// Sampled records must agree within this many combined standard errors.
pub const SAMPLED_QUADRATIC_SIGMAS: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub process: ProcessState,
    pub cond_k: f64,
    pub cond_j: Option<f64>,
    /// Max over the input records of `|L_i - D_i| + |c_i(predicted) - c_i|`.
    pub residual: f64,
    /// Standard errors of the linear block as `(re, im)` pairs, when every
    /// record used for it carries a `d` covariance.
    pub linear_std_err: Option<LinearPart>,
    pub warnings: Vec<String>,
}

/// Reconstructs the process. The full path needs `(k+1)(2k+1)` records; the
/// trace-preserving path needs `2k+1` and fixes the output constants by
/// normalization. Surplus records are not used in the solve but count toward
/// the residual.
pub fn reconstruct(records: &[ProbeRecord], trace_preserving: bool) -> Result<Reconstruction> {
    let first = records.first().ok_or(Error::ProbeCount { expected: 1, found: 0 })?;
    let k = first.modes();
    let need = required_probes(k, trace_preserving);
    if records.len() < need {
        return Err(Error::ProbeCount { expected: need, found: records.len() });
    }
    let mut warnings = Vec::new();
    if records.len() > need {
        warnings.push(format!("using the first {need} of {} records", records.len()));
    }
    let used = &records[..need];
    let set = ProbeSet::new(k, used.iter().map(|r| r.probe.clone()).collect(), trace_preserving)?;
    let conditioning = validate_probe_set(&set)?;

    let (x_bb, y_bb) = average_quadratic(used)?;
    let linear = solve_linear_part(&used[..k_size(k)])?;

    let (quadratic, cond_j) = if trace_preserving {
        let virtual_probes = canonical_probes(k, false, 1.0)?;
        let partial = assemble(k, &linear, None, &x_bb, &y_bb);
        let c = virtual_probes
            .probes
            .iter()
            .map(|u| Ok(-predict_coherent(&partial, u)?.log_normalization_integral()?))
            .collect::<Result<Vec<f64>>>()?;
        let cond = linalg::condition_number(&build_j(&virtual_probes.probes));
        (solve_quadratic_from_values(&virtual_probes.probes, &c)?, Some(cond))
    } else {
        (solve_quadratic_part(used)?, conditioning.cond_j)
    };

    let process = assemble(k, &linear, Some(&quadratic), &x_bb, &y_bb);
    let residual = records
        .iter()
        .map(|r| self_consistency_defect(&process, r))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let linear_std_err = linear_std_err(&used[..k_size(k)])?;
    Ok(Reconstruction {
        process,
        cond_k: conditioning.cond_k,
        cond_j,
        residual,
        linear_std_err,
        warnings,
    })
}

fn assemble(
    k: usize,
    linear: &LinearPart,
    quadratic: Option<&QuadraticPart>,
    x_bb: &SymmetricMatrix,
    y_bb: &HermitianMatrix,
) -> ProcessState {
    let mut p = ProcessState::zeros(k);
    p.gamma_b = linear.gamma_b.clone();
    p.x_ab = linear.x_ab.clone();
    p.y_ab = linear.y_ab.clone();
    p.x_bb = x_bb.clone();
    p.y_bb = y_bb.clone();
    if let Some(q) = quadratic {
        p.c0 = q.c0;
        p.gamma_a = q.gamma_a.clone();
        p.x_aa = q.x_aa.clone();
        p.y_aa = q.y_aa.clone();
    }
    p
}

/// Checks that every record saw the same output quadratic part and returns
/// its average.
fn average_quadratic(records: &[ProbeRecord]) -> Result<(SymmetricMatrix, HermitianMatrix)> {
    let k = records[0].modes();
    let n = records.len() as f64;
    let mut x = CMatrix::zeros(k, k);
    let mut y = CMatrix::zeros(k, k);
    for r in records {
        if r.x_bb.dim() != k || r.y_bb.dim() != k {
            return Err(Error::ModeMismatch { expected: k, found: r.x_bb.dim().min(r.y_bb.dim()) });
        }
        x += r.x_bb.to_full() / Complex64::new(n, 0.0);
        y += r.y_bb.to_full() / Complex64::new(n, 0.0);
    }
    let mut deviation: f64 = 0.0;
    for r in records {
        deviation = deviation
            .max(linalg::max_abs(&(r.x_bb.to_full() - &x)))
            .max(linalg::max_abs(&(r.y_bb.to_full() - &y)));
    }
    let max_se = records.iter().map(ProbeRecord::quadratic_std_err).fold(0.0, f64::max);
    let tolerance = if max_se > 0.0 {
        SAMPLED_QUADRATIC_SIGMAS * std::f64::consts::SQRT_2 * max_se
    } else {
        EXACT_QUADRATIC_TOL
    };
    if deviation > tolerance {
        return Err(Error::InconsistentQuadraticPart { deviation, tolerance });
    }
    Ok((SymmetricMatrix::from_full_symmetrized(&x), HermitianMatrix::from_full_hermitized(&y)))
}

/// `|L_i - D_i| + |c_predicted - c_i|` for one record.
pub fn self_consistency_defect(process: &ProcessState, record: &ProbeRecord) -> Result<f64> {
    let out = predict_coherent(process, &record.probe)?;
    let linear = out.gamma.iter().zip(&record.d).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(linear + (out.c - record.c).abs())
}

/// Propagates per-record `d` covariances through `K^-1`.
fn linear_std_err(records: &[ProbeRecord]) -> Result<Option<LinearPart>> {
    let covs: Option<Vec<_>> = records.iter().map(|r| r.d_cov.as_ref()).collect();
    let Some(covs) = covs else { return Ok(None) };
    let k = records[0].modes();
    let probes: Vec<Vec<Complex64>> = records.iter().map(|r| r.probe.clone()).collect();
    let size = k_size(k);
    let w = linalg::solve(&build_k(&probes), &CMatrix::identity(size, size))
        .ok_or(Error::SingularK { cond: f64::INFINITY })?;
    let se = CMatrix::from_fn(size, k, |row, n| {
        let (mut var_re, mut var_im) = (0.0, 0.0);
        for (i, cov) in covs.iter().enumerate() {
            let (a, b) = (w[(row, i)].re, w[(row, i)].im);
            let (vrr, vii, vri) = (cov[(2 * n, 2 * n)], cov[(2 * n + 1, 2 * n + 1)], cov[(2 * n, 2 * n + 1)]);
            var_re += a * a * vrr + b * b * vii - 2.0 * a * b * vri;
            var_im += b * b * vrr + a * a * vii + 2.0 * a * b * vri;
        }
        Complex64::new(var_re.max(0.0).sqrt(), var_im.max(0.0).sqrt())
    });
    Ok(Some(LinearPart {
        gamma_b: se.row(0).iter().copied().collect(),
        x_ab: se.rows(1, k).into_owned(),
        y_ab: se.rows(1 + k, k).into_owned(),
    }))
}
