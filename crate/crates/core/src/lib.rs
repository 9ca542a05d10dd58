//! Coherent-state process tomography for Gaussian quantum-optical channels.
//!
//! A Gaussian process is fully described by the Gaussian Husimi function of
//! its process operator. Probing the channel with a handful of coherent
//! states and reading off the Q-function parameters of each output gives two
//! small linear systems (K for the linear block, J for the quadratic block)
//! whose solution reconstructs the process exactly. The reconstruction then
//! predicts the output of any coherent or squeezed-coherent input.
//!
//! Modules:
//! - [`forms`]: Q-forms, Gaussian states, process operator parameters.
//! - [`integral`]: closed-form complex Gaussian integrals.
//! - [`channel`]: ground-truth simulator of composed Gaussian channels, plus a
//!   truncated-Fock reference used as a test oracle.
//! - [`qst`]: per-probe output records, exact or from simulated heterodyne data.
//! - [`tomo`]: K/J assembly and reconstruction.
//! - [`predict`]: output prediction from a reconstructed process.
//! - [`io`]: canonical JSON envelopes.
//! - [`cli`]: the `gqpt` command-line tool.

pub mod channel;
pub mod cli;
pub mod error;
pub mod forms;
pub mod integral;
pub mod io;
pub mod linalg;
pub mod predict;
pub mod qst;
pub mod tomo;

pub use error::{Error, Result};

/// Version tag written into every file envelope.
pub const FORMAT_VERSION: &str = "gqpt/1";
