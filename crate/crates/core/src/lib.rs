//! Simulation and verification of information limits for DNA shotgun
//! sequencing.
//!
//! The crate generates random circular genomes, samples (optionally noisy or
//! paired) reads, reconstructs genomes with several assemblers, and compares
//! the empirical read counts needed for success against closed-form limits.

pub mod assembly;
pub mod diagnostics;
pub mod dist;
pub mod error;
pub mod experiment;
pub mod overlap;
pub mod reads;
pub mod rng;
pub mod sequence;
pub mod theory;

pub use assembly::{AssemblyOutcome, Contig, FailureReason, OutcomeKind, Placement};
pub use dist::Distribution;
pub use error::{Error, Result};
pub use reads::{BlindMatePairs, BlindReads, DmcChannel, MatePairSet, Read, ReadSet};
pub use sequence::{DnaSequence, MarkovModel, Matrix4, Nucleotide, SourceModel};
