//! Stabilizer simulation of the Steane [[7,1,3]] code with standard, Shor
//! cat-state and Steane encoded-ancilla syndrome extraction.
//!
//! The crate is layered bottom-up:
//!
//! - [`pauli`] and [`tableau`]: Pauli algebra and a destabilizer tableau
//!   simulator for Clifford circuits with Z measurement.
//! - [`gf2`] and [`css`]: binary linear algebra, CSS code construction and
//!   lookup decoding.
//! - [`circuit`]: circuit IR, text format, builders for each extraction
//!   strategy and the multi-round scheduler.
//! - [`noise`]: stochastic Pauli channels bound to circuit locations.
//! - [`temporal`]: majority, Viterbi and Bayesian decoding of syndrome
//!   time series.
//! - [`bench`]: Monte-Carlo memory and workload experiments, method
//!   comparison and threshold sweeps.

pub mod circuit;
pub mod bench;
pub mod css;
pub mod error;
pub mod gf2;
pub mod noise;
pub mod pauli;
pub mod rng;
pub mod tableau;
pub mod temporal;

pub use error::{Error, Result};
pub use pauli::{Pauli, PauliString};
pub use tableau::{CliffordGate, StabilizerTableau};
