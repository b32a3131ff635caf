//! Injectable faults.
//!
//! Each fault reproduces one class of source mutation (negated conditional, replaced
//! operator, removed call, changed boundary) in a specific operator. A fault is never
//! global state: it travels inside an [`ExecutionContext`], and the operators built
//! from that context behave faultily. At most one fault is active per context.

use core::fmt;
use core::str::FromStr;

use alloc::string::ToString;

use crate::config::{DeConfig, GaConfig};
use crate::de::DifferentialEvolution;
use crate::error::{Error, Result};
use crate::fitness::{FitnessFunction, FitnessKind};
use crate::ga::GeneticAlgorithm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fault {
    /// Roulette weights proportional to raw fitness, so worse members are favoured.
    SelectionMaximizes,
    /// Crossover always copies the first parent.
    CrossoverFirstParent,
    /// Mutation returns its input unchanged.
    MutationNoop,
    /// Replacement discards the best members instead of the worst.
    ReplaceBest,
    /// Trial vector built as `x_i - beta * (x2 - x3)`.
    DeSignFlip,
    /// Quartic drops its random term.
    QuarticNoNoise,
}

impl Fault {
    pub const ALL: [Fault; 6] = [
        Self::SelectionMaximizes,
        Self::CrossoverFirstParent,
        Self::MutationNoop,
        Self::ReplaceBest,
        Self::DeSignFlip,
        Self::QuarticNoNoise,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::SelectionMaximizes => "FAULT-SEL-MAX",
            Self::CrossoverFirstParent => "FAULT-XOVER-P1",
            Self::MutationNoop => "FAULT-MUT-NOOP",
            Self::ReplaceBest => "FAULT-REPL-BEST",
            Self::DeSignFlip => "FAULT-DE-SIGN",
            Self::QuarticNoNoise => "FAULT-QUARTIC-NONOISE",
        }
    }

    /// The `module.operation` the fault lives in.
    pub fn target(self) -> &'static str {
        match self {
            Self::SelectionMaximizes => "ga.select",
            Self::CrossoverFirstParent => "ga.crossover",
            Self::MutationNoop => "ga.mutate",
            Self::ReplaceBest => "ga.replace",
            Self::DeSignFlip => "de.makeTrialVector",
            Self::QuarticNoNoise => "fitness.evaluate",
        }
    }

    /// Mutation-operator category the fault stands in for.
    pub fn category(self) -> &'static str {
        match self {
            Self::SelectionMaximizes => "negated conditional",
            Self::CrossoverFirstParent => "negated conditional",
            Self::MutationNoop => "removed call",
            Self::ReplaceBest => "changed conditional boundary",
            Self::DeSignFlip => "replaced operator",
            Self::QuarticNoNoise => "removed call",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::SelectionMaximizes => {
                "selection weights proportional to raw fitness (prefers worse solutions)"
            }
            Self::CrossoverFirstParent => "crossover always returns the first parent's gene",
            Self::MutationNoop => "mutation returns its input unchanged",
            Self::ReplaceBest => "replacement removes the best members instead of the worst",
            Self::DeSignFlip => "trial vector uses x_i - beta * (x2 - x3)",
            Self::QuarticNoNoise => "quartic omits its random term",
        }
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.id())
    }
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|fault| fault.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownFault(s.to_string()))
    }
}

/// Builds operators, optionally with one fault switched on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExecutionContext {
    fault: Option<Fault>,
}

impl ExecutionContext {
    /// No fault.
    pub fn clean() -> Self {
        Self::default()
    }

    pub fn with_fault(fault: Option<Fault>) -> Self {
        Self { fault }
    }

    /// Look up `id` in the registry and return a context with it active.
    pub fn activate(id: &str) -> Result<Self> {
        Ok(Self::with_fault(Some(id.parse()?)))
    }

    pub fn fault(&self) -> Option<Fault> {
        self.fault
    }

    pub fn fitness(&self, kind: FitnessKind, dimension: usize) -> Result<FitnessFunction> {
        Ok(FitnessFunction::new(kind, dimension)?.with_fault(self.fault))
    }

    pub fn ga(&self, config: GaConfig) -> Result<GeneticAlgorithm> {
        Ok(GeneticAlgorithm::new(config)?.with_fault(self.fault))
    }

    pub fn de(&self, config: DeConfig) -> Result<DifferentialEvolution> {
        Ok(DifferentialEvolution::new(config)?.with_fault(self.fault))
    }
}
