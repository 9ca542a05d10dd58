//! Ground-truth simulator of composed Gaussian channels, standing in for the
//! laboratory black box.

pub mod fock;
mod gaussian;
mod spec;

pub use fock::fock_reference;
pub use gaussian::{apply_channel, probe_coherent};
pub use spec::{ChannelSpec, PrimitiveElement};
