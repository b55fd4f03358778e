//! Parity compilation, Pegasus embeddings and spectral-gap analysis for
//! Ising optimization problems.

pub mod anneal;
pub mod cli;
pub mod error;
pub mod gf2;
pub mod ising;
pub mod manifest;
pub mod paintshop;
pub mod parity;
pub mod pegasus;
pub mod sampler;

pub use error::{Error, Result};
pub use ising::{IsingHamiltonian, SpinAssignment};
