//! Simulator and analysis toolkit for agent qubits that walk a ring of
//! environment qubits under a discrete unitary map.
//!
//! * [`statevec`] holds the dense register and gate kernels.
//! * [`network`] schedules the per-agent gate streams.
//! * [`analysis`] extracts Bloch vectors, cluster sums and periodicity.
//! * [`primitives`] computes the same head dynamics by sign-pattern
//!   decomposition and by closed recursion.
//! * [`cli`] runs experiments and writes CSV, SVG and JSON artifacts.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod network;
pub mod primitives;
pub mod statevec;

pub use error::{Error, Result};
