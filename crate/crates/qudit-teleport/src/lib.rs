//! Simulation of qudit teleportation over a register of two-level EPR pairs.
//!
//! An S-level pure state held by a sender is teleported through L = ⌈log₂ S⌉
//! shared EPR pairs. The sender applies one joint unitary across the qudit
//! and their half of the pairs, measures everything on their side, and sends
//! the classical outcome (j, n). The receiver applies an XOR permutation and
//! a diagonal phase keyed to that message and recovers the input exactly.
//!
//! The crate is organized around making that claim checkable:
//!
//! - [`hilbert`]: index layout, register shapes, and pure-state vectors.
//! - [`gates`]: the joint transformation (one-pass and as a product of
//!   two-body gates), the qudit Fourier transform, XOR gates, and the
//!   receiver's correction.
//! - [`protocol`]: the four-step pipeline producing per-outcome transcripts,
//!   with exhaustive, forced, or seeded-sampling measurement.
//! - [`oracle`]: independent dense-matrix reconstructions of every gate and
//!   a battery of verification checks with explicit tolerances.
//! - [`report`]: canonical JSON reports with deterministic byte output.
//! - [`cli`]: the `run` / `verify` / `sweep` command-line interface.

pub mod cli;
pub mod error;
pub mod gates;
pub mod hilbert;
pub mod oracle;
pub mod protocol;
pub mod report;

pub use error::{Error, Result};
pub use gates::{apply_gate, bob_correction, f_index, GateSpec};
pub use hilbert::{make_shape, minimal_qubit_count, PureState, Register, SystemShape};
pub use protocol::{
    run_teleportation, MeasurementRecord, Mode, OutcomeSelection, ProtocolTranscript,
};
