//! Topological quantum error correction toolkit: Pauli algebra, a stabilizer
//! tableau engine, Z₂ chain complexes, surface codes with defect qubits,
//! noise models, matching/ML/BP decoders, distillation analytics and a
//! Monte Carlo threshold harness.

pub mod chain;
pub mod decoders;
pub mod distill;
pub mod error;
pub mod gf2;
pub mod harness;
pub mod noise;
pub mod pauli;
pub mod rng;
pub mod stabilizer;
pub mod surface;

pub use error::{Error, Result};
