//! Serialized shapes of each file kind and their conversions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{GaussianState, HermitianMatrix, ProcessState, QForm, SymmetricMatrix};
use crate::linalg::{CMatrix, RMatrix, RVector};
use crate::predict::PureGaussianInput;
use crate::qst::ProbeRecord;
use crate::tomo::ProbeSet;

/// Read-time tolerance on the symmetry of stored matrices.
pub const MATRIX_SYMMETRY_TOL: f64 = 1e-12;

pub type ComplexRows = Vec<Vec<Complex64>>;

pub fn complex_rows(m: &CMatrix) -> ComplexRows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn real_rows(m: &RMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn square<T: Copy>(rows: &[Vec<T>], n: usize, what: &str) -> Result<Vec<T>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Format(format!("{what} must be {n}x{n}")));
    }
    Ok(rows.iter().flatten().copied().collect())
}

pub fn complex_matrix(rows: &[Vec<Complex64>], n: usize, what: &str) -> Result<CMatrix> {
    Ok(CMatrix::from_row_slice(n, n, &square(rows, n, what)?))
}

fn real_matrix(rows: &[Vec<f64>], n: usize, what: &str) -> Result<RMatrix> {
    Ok(RMatrix::from_row_slice(n, n, &square(rows, n, what)?))
}

fn symmetric(rows: &[Vec<Complex64>], n: usize, what: &str) -> Result<SymmetricMatrix> {
    SymmetricMatrix::from_full(&complex_matrix(rows, n, what)?, MATRIX_SYMMETRY_TOL)
        .map_err(|_| Error::Format(format!("{what} is not symmetric")))
}

fn hermitian(rows: &[Vec<Complex64>], n: usize, what: &str) -> Result<HermitianMatrix> {
    HermitianMatrix::from_full(&complex_matrix(rows, n, what)?, MATRIX_SYMMETRY_TOL)
        .map_err(|_| Error::Format(format!("{what} is not Hermitian")))
}

fn check_len(len: usize, n: usize, what: &str) -> Result<()> {
    if len != n {
        return Err(Error::Format(format!("{what} has length {len}, expected {n}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbesPayload {
    pub modes: usize,
    pub trace_preserving: bool,
    pub probes: ComplexRows,
}

impl From<&ProbeSet> for ProbesPayload {
    fn from(p: &ProbeSet) -> Self {
        ProbesPayload { modes: p.modes, trace_preserving: p.trace_preserving, probes: p.probes.clone() }
    }
}

impl TryFrom<ProbesPayload> for ProbeSet {
    type Error = Error;
    fn try_from(p: ProbesPayload) -> Result<Self> {
        ProbeSet::new(p.modes, p.probes, p.trace_preserving)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactTag {
    #[serde(rename = "exact")]
    Exact,
}

/// `"exact"` or a sample count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SampleCount {
    Sampled(usize),
    Exact(ExactTag),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordPayload {
    pub probe: Vec<Complex64>,
    pub c: f64,
    pub d: Vec<Complex64>,
    pub x_bb: ComplexRows,
    pub y_bb: ComplexRows,
    pub sample_count: SampleCount,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_cov: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeDataPayload {
    pub modes: usize,
    pub records: Vec<RecordPayload>,
}

impl From<&ProbeRecord> for RecordPayload {
    fn from(r: &ProbeRecord) -> Self {
        RecordPayload {
            probe: r.probe.clone(),
            c: r.c,
            d: r.d.clone(),
            x_bb: complex_rows(&r.x_bb.to_full()),
            y_bb: complex_rows(&r.y_bb.to_full()),
            sample_count: r.sample_count.map_or(SampleCount::Exact(ExactTag::Exact), SampleCount::Sampled),
            seed: r.seed,
            d_cov: r.d_cov.as_ref().map(real_rows),
        }
    }
}

impl RecordPayload {
    fn into_record(self, k: usize) -> Result<ProbeRecord> {
        check_len(self.probe.len(), k, "probe")?;
        check_len(self.d.len(), k, "d")?;
        let d_cov = match &self.d_cov {
            Some(rows) => Some(real_matrix(rows, 2 * k, "d_cov")?),
            None => None,
        };
        Ok(ProbeRecord {
            probe: self.probe,
            c: self.c,
            d: self.d,
            x_bb: symmetric(&self.x_bb, k, "x_bb")?,
            y_bb: hermitian(&self.y_bb, k, "y_bb")?,
            sample_count: match self.sample_count {
                SampleCount::Sampled(n) => Some(n),
                SampleCount::Exact(_) => None,
            },
            seed: self.seed,
            d_cov,
        })
    }
}

impl ProbeDataPayload {
    pub fn new(modes: usize, records: &[ProbeRecord]) -> Self {
        ProbeDataPayload { modes, records: records.iter().map(RecordPayload::from).collect() }
    }

    pub fn into_records(self) -> Result<Vec<ProbeRecord>> {
        let k = self.modes;
        self.records.into_iter().map(|r| r.into_record(k)).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QFormPayload {
    pub modes: usize,
    pub c: f64,
    pub gamma: Vec<Complex64>,
    pub x: ComplexRows,
    pub y: ComplexRows,
}

impl From<&QForm> for QFormPayload {
    fn from(f: &QForm) -> Self {
        QFormPayload {
            modes: f.modes(),
            c: f.c,
            gamma: f.gamma.clone(),
            x: complex_rows(&f.x.to_full()),
            y: complex_rows(&f.y.to_full()),
        }
    }
}

impl TryFrom<QFormPayload> for QForm {
    type Error = Error;
    fn try_from(p: QFormPayload) -> Result<Self> {
        let k = p.modes;
        check_len(p.gamma.len(), k, "gamma")?;
        QForm::new(p.c, p.gamma, symmetric(&p.x, k, "x")?, hermitian(&p.y, k, "y")?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatePayload {
    pub modes: usize,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
    pub log_weight: f64,
}

impl From<&GaussianState> for StatePayload {
    fn from(s: &GaussianState) -> Self {
        StatePayload {
            modes: s.modes(),
            mean: s.mean.iter().copied().collect(),
            cov: real_rows(&s.cov),
            log_weight: s.log_weight,
        }
    }
}

impl TryFrom<StatePayload> for GaussianState {
    type Error = Error;
    fn try_from(p: StatePayload) -> Result<Self> {
        let n = 2 * p.modes;
        check_len(p.mean.len(), n, "mean")?;
        let cov = real_matrix(&p.cov, n, "cov")?;
        if (&cov - cov.transpose()).amax() > MATRIX_SYMMETRY_TOL {
            return Err(Error::Format("cov is not symmetric".into()));
        }
        GaussianState::new(RVector::from_vec(p.mean), cov, p.log_weight)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessPayload {
    pub modes: usize,
    pub c0: f64,
    pub gamma_a: Vec<Complex64>,
    pub gamma_b: Vec<Complex64>,
    pub x_aa: ComplexRows,
    pub x_ab: ComplexRows,
    pub x_bb: ComplexRows,
    pub y_aa: ComplexRows,
    pub y_ab: ComplexRows,
    pub y_bb: ComplexRows,
}

impl From<&ProcessState> for ProcessPayload {
    fn from(p: &ProcessState) -> Self {
        ProcessPayload {
            modes: p.modes(),
            c0: p.c0,
            gamma_a: p.gamma_a.clone(),
            gamma_b: p.gamma_b.clone(),
            x_aa: complex_rows(&p.x_aa.to_full()),
            x_ab: complex_rows(&p.x_ab),
            x_bb: complex_rows(&p.x_bb.to_full()),
            y_aa: complex_rows(&p.y_aa.to_full()),
            y_ab: complex_rows(&p.y_ab),
            y_bb: complex_rows(&p.y_bb.to_full()),
        }
    }
}

impl TryFrom<ProcessPayload> for ProcessState {
    type Error = Error;
    fn try_from(p: ProcessPayload) -> Result<Self> {
        let k = p.modes;
        check_len(p.gamma_a.len(), k, "gamma_a")?;
        check_len(p.gamma_b.len(), k, "gamma_b")?;
        let process = ProcessState {
            c0: p.c0,
            gamma_a: p.gamma_a,
            gamma_b: p.gamma_b,
            x_aa: symmetric(&p.x_aa, k, "x_aa")?,
            x_ab: complex_matrix(&p.x_ab, k, "x_ab")?,
            x_bb: symmetric(&p.x_bb, k, "x_bb")?,
            y_aa: hermitian(&p.y_aa, k, "y_aa")?,
            y_ab: complex_matrix(&p.y_ab, k, "y_ab")?,
            y_bb: hermitian(&p.y_bb, k, "y_bb")?,
        };
        process.validate()?;
        Ok(process)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputPayload {
    pub modes: usize,
    pub displacement: Vec<Complex64>,
    pub squeeze_r: Vec<f64>,
    pub squeeze_phase: Vec<f64>,
}

impl From<&PureGaussianInput> for InputPayload {
    fn from(i: &PureGaussianInput) -> Self {
        InputPayload {
            modes: i.modes(),
            displacement: i.displacement.clone(),
            squeeze_r: i.squeeze_r.clone(),
            squeeze_phase: i.squeeze_phase.clone(),
        }
    }
}

impl TryFrom<InputPayload> for PureGaussianInput {
    type Error = Error;
    fn try_from(p: InputPayload) -> Result<Self> {
        check_len(p.displacement.len(), p.modes, "displacement")?;
        PureGaussianInput::new(p.squeeze_r, p.squeeze_phase, p.displacement)
    }
}
