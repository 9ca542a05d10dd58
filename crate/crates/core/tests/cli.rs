//! The `gqpt` binary end to end.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gqpt::forms::{ProcessState, QForm};
use gqpt::io::{self, ProbeData};
use gqpt::predict::bs_squeezed_closed_form;
use gqpt::tomo::ProbeSet;
use num_complex::Complex64;
use tempfile::TempDir;

fn gqpt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqpt")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = gqpt(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn p(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }

    fn write(&self, name: &str, text: &str) -> String {
        std::fs::write(self.path(name), text).unwrap();
        self.p(name)
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).unwrap()
    }
}

const BS_CHANNEL: &str = r#"{"format_version": "gqpt/1", "kind": "channel", "payload": {"modes": 1,
  "elements": [{"type": "loss_bs", "mode": 0, "theta": 1.0471975511965976}]}}"#;

fn read<T: io::Payload>(path: &Path) -> T {
    io::read_file(path).unwrap()
}

#[test]
fn version_flag() {
    let out = ok(&["--version"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "gqpt/1");
}

#[test]
fn gen_probes_counts() {
    let ws = Workspace::new();
    for (args, n) in [
        (vec!["--modes", "1"], 6),
        (vec!["--modes", "1", "--trace-preserving"], 3),
        (vec!["--modes", "2", "--trace-preserving"], 5),
        (vec!["--modes", "2"], 15),
    ] {
        let out = ws.p("probes.json");
        let mut all = vec!["gen-probes", "--out", &out];
        all.extend(args);
        ok(&all);
        assert_eq!(read::<ProbeSet>(&ws.path("probes.json")).probes.len(), n);
    }
    let set: ProbeSet = {
        ok(&["gen-probes", "--modes", "1", "--out", &ws.p("p.json")]);
        read(&ws.path("p.json"))
    };
    let want = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (1.0, 1.0)];
    for (p, (re, im)) in set.probes.iter().zip(want) {
        assert_eq!(p[0], Complex64::new(re, im));
    }
}

#[test]
fn beam_splitter_pipeline() {
    let ws = Workspace::new();
    let channel = ws.write("bs.json", BS_CHANNEL);
    ok(&["gen-probes", "--modes", "1", "--out", &ws.p("probes.json")]);
    ok(&["simulate", "--channel", &channel, "--probes", &ws.p("probes.json"), "--out", &ws.p("data.json")]);
    let data: ProbeData = read(&ws.path("data.json"));
    for r in &data.records {
        assert!((r.d[0] - r.probe[0].conj() * 0.5).norm() < 1e-15);
    }
    ok(&[
        "reconstruct",
        "--probe-data",
        &ws.p("data.json"),
        "--out",
        &ws.p("process.json"),
        "--report",
        &ws.p("report.json"),
    ]);
    let p: ProcessState = read(&ws.path("process.json"));
    assert!((p.x_ab[(0, 0)] - 0.5).norm() < 1e-10);
    assert!((p.y_aa.get(0, 0) + 0.25).norm() < 1e-10);
    assert!((p.y_bb.get(0, 0) + 1.0).norm() < 1e-10);
    assert!(ws.read("report.json").contains("\"residual\""));

    // squeezed input gives the known closed form
    let input = ws.write(
        "input.json",
        r#"{"format_version": "gqpt/1", "kind": "input", "payload": {"modes": 1,
            "displacement": [[1, 0.5]], "squeeze_r": [0.5], "squeeze_phase": [0]}}"#,
    );
    ok(&["predict", "--process", &ws.p("process.json"), "--input", &input, "--out", &ws.p("q.json")]);
    let q: QForm = read(&ws.path("q.json"));
    let want = bs_squeezed_closed_form(std::f64::consts::FRAC_PI_3, 0.5, Complex64::new(1.0, 0.5));
    assert!(q.max_deviation(&want) < 1e-10);

    let out = ok(&[
        "verify",
        "--process",
        &ws.p("process.json"),
        "--channel",
        &channel,
        "--test-probes",
        &ws.p("probes.json"),
        "--report",
        &ws.p("verify.json"),
    ]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("max deviation"));
    let report: io::Report = read(&ws.path("verify.json"));
    assert!(report.0["max_deviation"].as_f64().unwrap() < 1e-10);
}

#[test]
fn coherent_state_file_as_predict_input() {
    let ws = Workspace::new();
    let channel = ws.write("bs.json", BS_CHANNEL);
    ok(&["gen-probes", "--modes", "1", "--trace-preserving", "--out", &ws.p("probes.json")]);
    ok(&["simulate", "--channel", &channel, "--probes", &ws.p("probes.json"), "--out", &ws.p("data.json")]);
    ok(&["reconstruct", "--probe-data", &ws.p("data.json"), "--trace-preserving", "--out", &ws.p("process.json")]);
    let state = gqpt::forms::GaussianState::coherent(&[Complex64::new(0.8, 0.0)]);
    io::write_file(&ws.path("state.json"), &state).unwrap();
    ok(&["predict", "--process", &ws.p("process.json"), "--input", &ws.p("state.json"), "--out", &ws.p("q.json")]);
    let q: QForm = read(&ws.path("q.json"));
    assert!(q.max_deviation(&QForm::coherent(&[Complex64::new(0.4, 0.0)])) < 1e-12);
}

#[test]
fn sampled_simulation_is_deterministic() {
    let ws = Workspace::new();
    let channel = ws.write("bs.json", BS_CHANNEL);
    ok(&["gen-probes", "--modes", "1", "--out", &ws.p("probes.json")]);
    for name in ["a.json", "b.json"] {
        ok(&[
            "simulate", "--channel", &channel, "--probes", &ws.p("probes.json"),
            "--samples", "100000", "--seed", "7", "--out", &ws.p(name),
        ]);
    }
    assert_eq!(ws.read("a.json"), ws.read("b.json"));
    let data: ProbeData = read(&ws.path("a.json"));
    assert!(data.records.iter().all(|r| r.sample_count == Some(100_000) && r.seed.is_some()));
    let seeds: std::collections::HashSet<_> = data.records.iter().map(|r| r.seed).collect();
    assert_eq!(seeds.len(), data.records.len());
}

#[test]
fn truncation_warning_for_trace_preserving_flag() {
    let ws = Workspace::new();
    let channel = ws.write("bs.json", BS_CHANNEL);
    ok(&["gen-probes", "--modes", "1", "--out", &ws.p("probes.json")]);
    ok(&["simulate", "--channel", &channel, "--probes", &ws.p("probes.json"), "--out", &ws.p("data.json")]);
    let out = ok(&["reconstruct", "--probe-data", &ws.p("data.json"), "--trace-preserving", "--out", &ws.p("p.json")]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("using the first 3 of 6 records"));
}

#[test]
fn exit_codes() {
    let ws = Workspace::new();
    // inconsistent quadratic parts: data error
    let channel = ws.write("bs.json", BS_CHANNEL);
    ok(&["gen-probes", "--modes", "1", "--out", &ws.p("probes.json")]);
    ok(&["simulate", "--channel", &channel, "--probes", &ws.p("probes.json"), "--out", &ws.p("data.json")]);
    let mut data: ProbeData = read(&ws.path("data.json"));
    data.records[2].y_bb = gqpt::forms::HermitianMatrix::scalar_identity(1, -0.8);
    io::write_file(&ws.path("bad.json"), &data).unwrap();
    let out = gqpt(&["reconstruct", "--probe-data", &ws.p("bad.json"), "--out", &ws.p("p.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("differ across records"));

    // all-real probes: numerical error
    let real_probes = ws.write(
        "real.json",
        r#"{"format_version": "gqpt/1", "kind": "probes", "payload": {"modes": 1,
            "probes": [[[0, 0]], [[1, 0]], [[2, 0]]], "trace_preserving": true}}"#,
    );
    ok(&["simulate", "--channel", &channel, "--probes", &real_probes, "--out", &ws.p("real_data.json")]);
    let out = gqpt(&["reconstruct", "--probe-data", &ws.p("real_data.json"), "--trace-preserving", "--out", &ws.p("p.json")]);
    assert_eq!(out.status.code(), Some(3));

    // wrong version, missing file, wrong kind
    let bad = ws.write("v2.json", &BS_CHANNEL.replace("gqpt/1", "gqpt/2"));
    assert_eq!(gqpt(&["simulate", "--channel", &bad, "--probes", &ws.p("probes.json"), "--out", &ws.p("x")]).status.code(), Some(2));
    assert_eq!(gqpt(&["simulate", "--channel", &ws.p("missing"), "--probes", &ws.p("probes.json"), "--out", &ws.p("x")]).status.code(), Some(2));
    assert_eq!(gqpt(&["simulate", "--channel", &ws.p("probes.json"), "--probes", &ws.p("probes.json"), "--out", &ws.p("x")]).status.code(), Some(2));

    // too few samples
    let out = gqpt(&[
        "simulate", "--channel", &channel, "--probes", &ws.p("probes.json"), "--samples", "10", "--seed", "1", "--out", &ws.p("x"),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // mode mismatch between channel and probes
    ok(&["gen-probes", "--modes", "2", "--out", &ws.p("p2.json")]);
    let out = gqpt(&["simulate", "--channel", &channel, "--probes", &ws.p("p2.json"), "--out", &ws.p("x")]);
    assert_eq!(out.status.code(), Some(2));
}
