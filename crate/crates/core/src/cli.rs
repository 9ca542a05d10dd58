//! The `gqpt` command-line tool.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::channel::{probe_coherent, ChannelSpec};
use crate::error::{Error, Result};
use crate::forms::{GaussianState, ProcessState, QForm};
use crate::io::{self, complex_rows, Kind, Payload, ProbeData, Report};
use crate::predict::{predict_coherent, predict_gaussian, PureGaussianInput};
use crate::qst::{estimate_record, extract_exact, sample_heterodyne};
use crate::tomo::{canonical_probes, reconstruct, validate_probe_set, ProbeSet, Reconstruction};
use crate::FORMAT_VERSION;

#[derive(Debug, Parser)]
#[command(name = "gqpt", about = "Coherent-state tomography of Gaussian processes", disable_version_flag = true)]
pub struct Cli {
    /// Print the file format version and exit.
    #[arg(short = 'V', long)]
    pub version: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the canonical probe set.
    GenProbes(GenProbesArgs),
    /// Run the probes through a simulated channel and record the outputs.
    Simulate(SimulateArgs),
    /// Reconstruct the process from probe data.
    Reconstruct(ReconstructArgs),
    /// Predict the output for a coherent or squeezed-coherent input.
    Predict(PredictArgs),
    /// Compare predictions with the simulated channel on test probes.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GenProbesArgs {
    #[arg(long)]
    pub modes: usize,
    #[arg(long)]
    pub trace_preserving: bool,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long)]
    pub probes: PathBuf,
    /// Heterodyne samples per probe; exact records when absent.
    #[arg(long, requires = "seed")]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub probe_data: PathBuf,
    #[arg(long)]
    pub trace_preserving: bool,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub process: PathBuf,
    /// An `input` file, or a `state` file holding a coherent state.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub process: PathBuf,
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long)]
    pub test_probes: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Runs the parsed command, printing a short summary to stdout.
pub fn run(cli: Cli) -> Result<()> {
    if cli.version {
        println!("{FORMAT_VERSION}");
        return Ok(());
    }
    match cli.command {
        None => Err(Error::InvalidParameter("no subcommand given (see --help)".into())),
        Some(Command::GenProbes(a)) => gen_probes(a),
        Some(Command::Simulate(a)) => simulate(a),
        Some(Command::Reconstruct(a)) => cmd_reconstruct(a),
        Some(Command::Predict(a)) => predict(a),
        Some(Command::Verify(a)) => verify(a),
    }
}

fn gen_probes(a: GenProbesArgs) -> Result<()> {
    let set = canonical_probes(a.modes, a.trace_preserving, a.scale)?;
    let cond = validate_probe_set(&set)?;
    io::write_file(&a.out, &set)?;
    print!("wrote {} probes to {} (cond K = {:.3e}", set.probes.len(), a.out.display(), cond.cond_k);
    match cond.cond_j {
        Some(c) => println!(", cond J = {c:.3e})"),
        None => println!(")"),
    }
    Ok(())
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let spec: ChannelSpec = io::read_file(&a.channel)?;
    let set: ProbeSet = io::read_file(&a.probes)?;
    if set.modes != spec.modes {
        return Err(Error::ModeMismatch { expected: spec.modes, found: set.modes });
    }
    // Per-probe seeds come from one stream so records are independent of order.
    let mut seeds = a.seed.map(ChaCha8Rng::seed_from_u64);
    let mut records = Vec::with_capacity(set.probes.len());
    for probe in &set.probes {
        let out = probe_coherent(&spec, probe)?;
        let record = match (a.samples, seeds.as_mut()) {
            (Some(n), Some(stream)) => {
                let seed = stream.next_u64();
                let trace = out.trace();
                let normalized = GaussianState { log_weight: 0.0, ..out };
                let samples = sample_heterodyne(&normalized, n, seed)?;
                let hint = (!spec.is_trace_preserving()).then_some(trace);
                let mut r = estimate_record(&samples, probe, hint)?;
                r.seed = Some(seed);
                r
            }
            _ => extract_exact(&out, probe)?,
        };
        records.push(record);
    }
    let data = ProbeData { modes: spec.modes, records };
    io::write_file(&a.out, &data)?;
    let mode = a.samples.map_or("exact".to_string(), |n| format!("{n} samples each"));
    println!("wrote {} records ({mode}) to {}", data.records.len(), a.out.display());
    Ok(())
}

fn reconstruction_report(rec: &Reconstruction, total: usize, trace_preserving: bool) -> Value {
    let mut report = json!({
        "command": "reconstruct",
        "cond_k": rec.cond_k,
        "cond_j": rec.cond_j,
        "residual": rec.residual,
        "records": total,
        "trace_preserving": trace_preserving,
        "warnings": rec.warnings,
    });
    if let Some(se) = &rec.linear_std_err {
        report["linear_std_err"] = json!({
            "gamma_b": se.gamma_b,
            "x_ab": complex_rows(&se.x_ab),
            "y_ab": complex_rows(&se.y_ab),
        });
    }
    report
}

fn cmd_reconstruct(a: ReconstructArgs) -> Result<()> {
    let data: ProbeData = io::read_file(&a.probe_data)?;
    let rec = reconstruct(&data.records, a.trace_preserving)?;
    for w in &rec.warnings {
        eprintln!("warning: {w}");
    }
    io::write_file(&a.out, &rec.process)?;
    if let Some(path) = &a.report {
        io::write_file(path, &Report(reconstruction_report(&rec, data.records.len(), a.trace_preserving)))?;
    }
    print!("cond K = {:.3e}", rec.cond_k);
    if let Some(c) = rec.cond_j {
        print!(", cond J = {c:.3e}");
    }
    println!(", residual = {:.3e}", rec.residual);
    println!("wrote process to {}", a.out.display());
    Ok(())
}

/// Coherent amplitudes of a state file, if it holds a normalized coherent state.
fn coherent_amplitudes(state: &GaussianState) -> Result<Vec<num_complex::Complex64>> {
    let n = state.cov.nrows();
    let excess = (&state.cov - crate::linalg::RMatrix::identity(n, n) * 0.5).amax();
    if excess > 1e-9 || state.log_weight.abs() > 1e-12 {
        return Err(Error::InvalidParameter(
            "state inputs must be normalized coherent states; use an input file for squeezed inputs".into(),
        ));
    }
    Ok(state.amplitudes())
}

fn read_input(path: &Path) -> Result<PureGaussianInput> {
    let (kind, payload) = io::decode_value(&std::fs::read_to_string(path)?)?;
    match kind {
        Kind::Input => PureGaussianInput::from_value(payload),
        Kind::State => Ok(PureGaussianInput::coherent(&coherent_amplitudes(&GaussianState::from_value(payload)?)?)),
        other => Err(Error::Format(format!("expected an input or state file, found {other}"))),
    }
}

fn predict(a: PredictArgs) -> Result<()> {
    let process: ProcessState = io::read_file(&a.process)?;
    let input = read_input(&a.input)?;
    let out = predict_gaussian(&process, &input)?;
    io::write_file(&a.out, &out)?;
    println!("wrote predicted output to {}", a.out.display());
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<()> {
    let process: ProcessState = io::read_file(&a.process)?;
    let spec: ChannelSpec = io::read_file(&a.channel)?;
    let set: ProbeSet = io::read_file(&a.test_probes)?;
    if process.modes() != spec.modes {
        return Err(Error::ModeMismatch { expected: spec.modes, found: process.modes() });
    }
    let deviations = set
        .probes
        .iter()
        .map(|u| {
            let predicted: QForm = predict_coherent(&process, u)?;
            Ok(predicted.max_deviation(&probe_coherent(&spec, u)?.to_qform()?))
        })
        .collect::<Result<Vec<f64>>>()?;
    let max = deviations.iter().copied().fold(0.0, f64::max);
    if let Some(path) = &a.report {
        let report = json!({
            "command": "verify",
            "probes": set.probes.len(),
            "deviations": deviations,
            "max_deviation": max,
        });
        io::write_file(path, &Report(report))?;
    }
    println!("max deviation over {} probes: {max:.3e}", set.probes.len());
    Ok(())
}
