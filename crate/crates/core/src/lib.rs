//! Crossmatch-based evaluation of neuromorphic Gibbs samplers for binary RBMs.
//!
//! The crate is organised bottom-up:
//!
//! * [`rbm`]: model representation, exact enumeration oracles, the ideal block
//!   Gibbs sampler and a CD-1 trainer.
//! * [`neuro`]: simulated hardware samplers (digital stochastic-threshold
//!   integrate-and-fire neurons with shared leak, analog leaky I&F neurons with
//!   shared noise) and crossbar resource accounting.
//! * [`crossmatch`]: the Crossmatch two-sample test on Hamming distances, with
//!   an exact minimum-weight perfect matching and its closed-form null.
//! * [`harness`]: repeated trials, p-value statistics, the energy model and the
//!   parameter / leak-density sweeps.
//! * [`io`]: model and sample files, IDX ingestion, synthetic datasets, run
//!   configuration and CSV/JSON/SVG reports.

pub mod bits;
pub mod crossmatch;
pub mod error;
pub mod harness;
pub mod io;
pub mod neuro;
pub mod rbm;
pub mod rng;

pub use error::{Error, Result};
