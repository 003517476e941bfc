//! Hypersoft configuration model (HSCM) of sparse power-law random graphs.
//!
//! Nodes get i.i.d. latent coordinates from an exponential measure `μ_n`
//! truncated at `R_n`, and each pair is joined independently with the
//! Fermi-Dirac probability `1/(e^{x+y}+1)`. The crate provides the samplers,
//! the mixed-Poisson degree theory, graphon/Gibbs entropy numerics, a soft
//! configuration model solver and the degree statistics used to compare them.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod entropy;
pub mod error;
pub mod exec;
pub mod graphon;
pub mod io;
pub mod params;
pub mod quad;
pub mod rng;
pub mod sampler;
pub mod scm;
pub mod special;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use exec::Exec;
pub use graphon::KernelKind;
pub use params::{EnsembleParams, Representation};
pub use sampler::{CoordinateSample, Graph};
