//! The committed example files parse with their declared kind and
//! re-encode byte for byte.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use gqpt::channel::ChannelSpec;
use gqpt::forms::{GaussianState, ProcessState, QForm};
use gqpt::io::{self, Kind, Payload, ProbeData, Report};
use gqpt::predict::PureGaussianInput;
use gqpt::tomo::ProbeSet;

fn reencode<T: Payload>(text: &str) -> String {
    io::encode(&io::decode::<T>(text).unwrap()).unwrap()
}

#[test]
fn examples_are_canonical() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples");
    let mut kinds = BTreeSet::new();
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let (kind, _) = io::decode_value(&text).unwrap();
        let again = match kind {
            Kind::Channel => reencode::<ChannelSpec>(&text),
            Kind::Probes => reencode::<ProbeSet>(&text),
            Kind::ProbeData => reencode::<ProbeData>(&text),
            Kind::Process => reencode::<ProcessState>(&text),
            Kind::State => reencode::<GaussianState>(&text),
            Kind::QForm => reencode::<QForm>(&text),
            Kind::Input => reencode::<PureGaussianInput>(&text),
            Kind::Report => reencode::<Report>(&text),
        };
        assert_eq!(again, text, "{}", path.display());
        kinds.insert(kind.as_str());
    }
    assert_eq!(kinds.len(), Kind::ALL.len(), "one example per kind: {kinds:?}");
}
