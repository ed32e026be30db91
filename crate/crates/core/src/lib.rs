//! Time-slotted measurement scheduling for measurement-based quantum
//! networks on 1D cluster states.
//!
//! * [`stabilizer`]: exact stabilizer oracle used to check every graph rule.
//! * [`graph_state`]: local complementation, Pauli measurement rules,
//!   correction operations and Pauli-frame tracking.
//! * [`temporal`]: slot model with the feedforward and adjacency constraints.
//! * [`scheduler`]: sequential and parallel schedules, bounds, and an
//!   exhaustive optimum for small instances.
//! * [`sweep`]: `(D, t_q)` sweeps emitted as CSV rows.
//! * [`simulator`]: discrete-event execution of schedules with exact
//!   rational time, streaming correction and end-to-end verification.

pub mod error;
pub mod graph_state;
pub mod rational;
pub mod scheduler;
pub mod simulator;
pub mod stabilizer;
pub mod sweep;
pub mod temporal;

pub type NodeId = usize;

pub use error::{Error, Result};
pub use rational::Rational;
