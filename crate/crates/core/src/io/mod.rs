//! File envelopes: `{"format_version": "gqpt/1", "kind": ..., "payload": ...}`
//! written canonically so that re-serializing a parsed file is byte-identical.

mod canonical;
mod payload;

pub use canonical::{format_number, to_canonical_string};
pub use payload::{
    complex_rows, real_rows, ExactTag, InputPayload, ProbeDataPayload, ProbesPayload, ProcessPayload, QFormPayload,
    RecordPayload, SampleCount, StatePayload, MATRIX_SYMMETRY_TOL,
};

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::channel::ChannelSpec;
use crate::error::{Error, Result};
use crate::forms::{GaussianState, ProcessState, QForm};
use crate::predict::PureGaussianInput;
use crate::qst::ProbeRecord;
use crate::tomo::ProbeSet;
use crate::FORMAT_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Channel,
    Probes,
    ProbeData,
    Process,
    State,
    QForm,
    Input,
    Report,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Channel,
        Kind::Probes,
        Kind::ProbeData,
        Kind::Process,
        Kind::State,
        Kind::QForm,
        Kind::Input,
        Kind::Report,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Channel => "channel",
            Kind::Probes => "probes",
            Kind::ProbeData => "probe-data",
            Kind::Process => "process",
            Kind::State => "state",
            Kind::QForm => "qform",
            Kind::Input => "input",
            Kind::Report => "report",
        }
    }

    pub fn parse(s: &str) -> Result<Kind> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Format(format!("unknown kind {s:?}")))
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Wraps a payload in the versioned envelope and renders it canonically.
pub fn encode_value(kind: Kind, payload: Value) -> Result<String> {
    to_canonical_string(&json!({
        "format_version": FORMAT_VERSION,
        "kind": kind.as_str(),
        "payload": payload,
    }))
}

/// Parses an envelope, checking the version and kind names.
pub fn decode_value(text: &str) -> Result<(Kind, Value)> {
    let v: Value = serde_json::from_str(text)?;
    let Value::Object(mut map) = v else {
        return Err(Error::Format("envelope must be a JSON object".into()));
    };
    match map.get("format_version").and_then(Value::as_str) {
        Some(FORMAT_VERSION) => {}
        Some(other) => return Err(Error::Format(format!("unsupported format_version {other:?}"))),
        None => return Err(Error::Format("missing format_version".into())),
    }
    let kind = Kind::parse(map.get("kind").and_then(Value::as_str).ok_or(Error::Format("missing kind".into()))?)?;
    let payload = map.remove("payload").ok_or(Error::Format("missing payload".into()))?;
    if map.len() != 2 {
        return Err(Error::Format("unexpected envelope fields".into()));
    }
    Ok((kind, payload))
}

/// A domain object stored as one file kind.
pub trait Payload: Sized {
    const KIND: Kind;
    fn to_value(&self) -> Result<Value>;
    fn from_value(v: Value) -> Result<Self>;
}

fn ser<T: Serialize>(t: T) -> Result<Value> {
    Ok(serde_json::to_value(t)?)
}

fn de<T: DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Format(e.to_string()))
}

impl Payload for ChannelSpec {
    const KIND: Kind = Kind::Channel;
    fn to_value(&self) -> Result<Value> {
        ser(self)
    }
    fn from_value(v: Value) -> Result<Self> {
        let spec: ChannelSpec = de(v)?;
        spec.validate()?;
        Ok(spec)
    }
}

impl Payload for ProbeSet {
    const KIND: Kind = Kind::Probes;
    fn to_value(&self) -> Result<Value> {
        ser(ProbesPayload::from(self))
    }
    fn from_value(v: Value) -> Result<Self> {
        de::<ProbesPayload>(v)?.try_into()
    }
}

/// Records of one simulation or measurement run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeData {
    pub modes: usize,
    pub records: Vec<ProbeRecord>,
}

impl Payload for ProbeData {
    const KIND: Kind = Kind::ProbeData;
    fn to_value(&self) -> Result<Value> {
        ser(ProbeDataPayload::new(self.modes, &self.records))
    }
    fn from_value(v: Value) -> Result<Self> {
        let p: ProbeDataPayload = de(v)?;
        let modes = p.modes;
        Ok(ProbeData { modes, records: p.into_records()? })
    }
}

impl Payload for ProcessState {
    const KIND: Kind = Kind::Process;
    fn to_value(&self) -> Result<Value> {
        ser(ProcessPayload::from(self))
    }
    fn from_value(v: Value) -> Result<Self> {
        de::<ProcessPayload>(v)?.try_into()
    }
}

impl Payload for GaussianState {
    const KIND: Kind = Kind::State;
    fn to_value(&self) -> Result<Value> {
        ser(StatePayload::from(self))
    }
    fn from_value(v: Value) -> Result<Self> {
        de::<StatePayload>(v)?.try_into()
    }
}

impl Payload for QForm {
    const KIND: Kind = Kind::QForm;
    fn to_value(&self) -> Result<Value> {
        ser(QFormPayload::from(self))
    }
    fn from_value(v: Value) -> Result<Self> {
        de::<QFormPayload>(v)?.try_into()
    }
}

impl Payload for PureGaussianInput {
    const KIND: Kind = Kind::Input;
    fn to_value(&self) -> Result<Value> {
        ser(InputPayload::from(self))
    }
    fn from_value(v: Value) -> Result<Self> {
        de::<InputPayload>(v)?.try_into()
    }
}

/// Free-form report object.
#[derive(Debug, Clone, PartialEq)]
pub struct Report(pub Value);

impl Payload for Report {
    const KIND: Kind = Kind::Report;
    fn to_value(&self) -> Result<Value> {
        Ok(self.0.clone())
    }
    fn from_value(v: Value) -> Result<Self> {
        Ok(Report(v))
    }
}

pub fn encode<T: Payload>(x: &T) -> Result<String> {
    encode_value(T::KIND, x.to_value()?)
}

pub fn decode<T: Payload>(text: &str) -> Result<T> {
    let (kind, payload) = decode_value(text)?;
    if kind != T::KIND {
        return Err(Error::Format(format!("expected a {} file, found {kind}", T::KIND)));
    }
    T::from_value(payload)
}

pub fn read_file<T: Payload>(path: &Path) -> Result<T> {
    decode(&std::fs::read_to_string(path)?)
}

pub fn write_file<T: Payload>(path: &Path, x: &T) -> Result<()> {
    std::fs::write(path, encode(x)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{probe_coherent, PrimitiveElement};
    use crate::predict::beam_splitter_process;
    use crate::qst::extract_exact;
    use crate::tomo::canonical_probes;
    use num_complex::Complex64;

    fn roundtrip<T: Payload + PartialEq + fmt::Debug>(x: &T) {
        let text = encode(x).unwrap();
        let back: T = decode(&text).unwrap();
        assert_eq!(&back, x);
        assert_eq!(encode(&back).unwrap(), text);
    }

    #[test]
    fn every_kind_roundtrips() {
        let spec = ChannelSpec::new(
            1,
            vec![
                PrimitiveElement::LossBs { mode: 0, theta: 1.0 / 3.0 },
                PrimitiveElement::Displace { mode: 0, beta: Complex64::new(0.1, -0.7) },
            ],
        )
        .unwrap();
        roundtrip(&spec);
        let probes = canonical_probes(2, false, 0.7).unwrap();
        roundtrip(&probes);
        let records = probes
            .probes
            .iter()
            .map(|p| extract_exact(&probe_coherent(&ChannelSpec::identity(2), p).unwrap(), p).unwrap())
            .collect();
        roundtrip(&ProbeData { modes: 2, records });
        roundtrip(&beam_splitter_process(0.3));
        let state = probe_coherent(&spec, &[Complex64::new(0.4, 0.2)]).unwrap();
        roundtrip(&state);
        roundtrip(&state.to_qform().unwrap());
        roundtrip(&PureGaussianInput::new(vec![0.5], vec![0.0], vec![Complex64::new(1.0, 0.5)]).unwrap());
        roundtrip(&Report(json!({"residual": 1e-17, "warnings": []})));
    }

    #[test]
    fn envelope_checks() {
        let good = encode(&beam_splitter_process(0.3)).unwrap();
        assert!(decode::<ProcessState>(&good.replace("gqpt/1", "gqpt/2")).is_err());
        assert!(decode::<ProcessState>(&good.replace("\"process\"", "\"widget\"")).is_err());
        assert!(matches!(decode::<QForm>(&good), Err(Error::Format(_))));
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let text = encode(&QForm::vacuum(2)).unwrap();
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v["payload"]["y"][0][1] = json!([0.1, 0.0]);
        assert!(matches!(decode::<QForm>(&v.to_string()), Err(Error::Format(_))));
    }
}
