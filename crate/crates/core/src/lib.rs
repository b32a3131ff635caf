//! Real-valued evolutionary optimizers and the metamorphic relations used to test them.
//!
//! The crate is `no_std` (with `alloc`) and free of I/O. It provides:
//!
//! - [`fitness`]: the Ackley, Quartic and Rosenbrock objectives with an adaptive
//!   observed maximum and scaled fitness,
//! - [`ga`]: a generational genetic algorithm with inverse-fitness roulette
//!   selection, uniform crossover, bounded per-gene mutation and worst-member
//!   replacement,
//! - [`de`]: differential evolution (DE/rand/1/bin) with greedy survivor selection,
//! - [`stats`]: Welch's two-sample t-test for statistical metamorphic testing,
//! - [`relations`]: the executable relation catalog plus deterministic checks,
//! - [`fault`]: a registry of injectable faults used to measure how well the
//!   relations detect defects.
//!
//! All randomness flows through [`RandomSource`], a seedable ChaCha stream that can
//! derive independent substreams, so every experiment replays bit-identically.
#![no_std]

extern crate alloc;

pub mod chromosome;
pub mod config;
pub mod de;
mod error;
pub mod fault;
pub mod fitness;
pub mod ga;
pub mod relations;
pub mod rng;
pub mod stats;

pub use chromosome::Chromosome;
pub use config::{DeConfig, GaConfig};
pub use de::{DifferentialEvolution, TrialVector};
pub use error::{Error, Result};
pub use fault::{ExecutionContext, Fault};
pub use fitness::{FitnessFunction, FitnessKind};
pub use ga::{GeneticAlgorithm, Population, RunResult};
pub use relations::{Algorithm, RelationId, RelationOutcome};
pub use rng::RandomSource;
pub use stats::{Alternative, Sample, TestVerdict};
