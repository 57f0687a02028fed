//! Random walks on dynamical Erdős–Rényi percolation.
//!
//! Edges of the complete graph `K_n` refresh at rate `mu`, each refresh
//! resampling the edge open with probability `p = lambda / n`. Walkers ring at
//! rate 1, pick a uniform other vertex and cross iff that edge is open.

pub mod anatomy;
pub mod coupling;
pub mod error;
pub mod estimators;
pub mod graph;
pub mod oracle;
pub mod params;
pub mod rng;
pub mod sim;
pub mod stats;
pub mod structure;

pub use error::{Error, Result};
pub use graph::Graph;
pub use params::Params;
