//! The metamorphic relation catalog.
//!
//! Each relation builds an initial and a follow-up case (or sample), runs them, and
//! applies its verdict rule. Function-level relations exercise the fitness functions
//! and single operators; system-level relations compare whole optimization runs.
//! The `DET` entry bundles the deterministic known-value checks.
//!
//! Every execution is a pure function of `(relation, fitness, algorithm, fault, rng)`.

use core::fmt;
use core::str::FromStr;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fault::ExecutionContext;
use crate::fitness::FitnessKind;
use crate::rng::RandomSource;
use crate::stats::{Sample, TestVerdict};

mod deterministic;
mod function;
mod operator;
mod system;

pub use system::SystemDefaults;

/// Optimizer a relation is executed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Algorithm {
    Ga,
    De,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Self::Ga, Self::De];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ga => "ga",
            Self::De => "de",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ga" => Ok(Self::Ga),
            "de" => Ok(Self::De),
            _ => Err(Error::UnknownAlgorithm(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Function,
    System,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    Exact,
    Statistical,
}

/// Stable relation identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationId {
    Mr1_1,
    Mr1_2,
    Mr1_3,
    Mr1_4,
    Mr1_5,
    Mr2_1,
    Mr2_2,
    Mr2_3,
    Mr3_1,
    Mr3_2,
    Mr3_3,
    Mr3_4,
    Mr3_5,
    Mr3_6,
    Mr3_7,
    Mr3_8,
    Mr3_9,
    Det,
}

impl RelationId {
    pub const ALL: [RelationId; 18] = [
        Self::Mr1_1,
        Self::Mr1_2,
        Self::Mr1_3,
        Self::Mr1_4,
        Self::Mr1_5,
        Self::Mr2_1,
        Self::Mr2_2,
        Self::Mr2_3,
        Self::Mr3_1,
        Self::Mr3_2,
        Self::Mr3_3,
        Self::Mr3_4,
        Self::Mr3_5,
        Self::Mr3_6,
        Self::Mr3_7,
        Self::Mr3_8,
        Self::Mr3_9,
        Self::Det,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Mr1_1 => "MR-1.1",
            Self::Mr1_2 => "MR-1.2",
            Self::Mr1_3 => "MR-1.3",
            Self::Mr1_4 => "MR-1.4",
            Self::Mr1_5 => "MR-1.5",
            Self::Mr2_1 => "MR-2.1",
            Self::Mr2_2 => "MR-2.2",
            Self::Mr2_3 => "MR-2.3",
            Self::Mr3_1 => "MR-3.1",
            Self::Mr3_2 => "MR-3.2",
            Self::Mr3_3 => "MR-3.3",
            Self::Mr3_4 => "MR-3.4",
            Self::Mr3_5 => "MR-3.5",
            Self::Mr3_6 => "MR-3.6",
            Self::Mr3_7 => "MR-3.7",
            Self::Mr3_8 => "MR-3.8",
            Self::Mr3_9 => "MR-3.9",
            Self::Det => "DET",
        }
    }

    /// Position in the catalog; also the substream index a suite uses for it.
    pub fn ordinal(self) -> usize {
        Self::ALL.iter().position(|&r| r == self).expect("listed")
    }

    pub fn relation(self) -> &'static Relation {
        &CATALOG[self.ordinal()]
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for RelationId {
    type Err = Error;

    /// Accepts `MR-3.1`, `mr-3.1`, `3.1` and `DET`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        Self::ALL
            .into_iter()
            .find(|id| {
                let full = id.as_str();
                full.eq_ignore_ascii_case(trimmed)
                    || full.strip_prefix("MR-").is_some_and(|short| short == trimmed)
            })
            .ok_or_else(|| Error::UnknownRelation(s.to_string()))
    }
}

/// Catalog entry.
#[derive(Debug)]
pub struct Relation {
    pub id: RelationId,
    pub level: Level,
    pub kind: RelationKind,
    pub fitness: &'static [FitnessKind],
    pub algorithms: &'static [Algorithm],
    /// Fitness used when a suite asks for catalog defaults.
    pub default_fitness: FitnessKind,
    pub default_in_suite: bool,
    pub description: &'static str,
}

impl Relation {
    pub fn applies_to(&self, fitness: FitnessKind, algorithm: Algorithm) -> bool {
        self.fitness.contains(&fitness) && self.algorithms.contains(&algorithm)
    }
}

use Algorithm::{De, Ga};
use FitnessKind::{Ackley, Quartic, Rosenbrock};

const ANY_FITNESS: &[FitnessKind] = &[Ackley, Quartic, Rosenbrock];
const BOTH: &[Algorithm] = &[Ga, De];
const GA_ONLY: &[Algorithm] = &[Ga];

#[allow(clippy::too_many_arguments)]
const fn entry(
    id: RelationId,
    level: Level,
    kind: RelationKind,
    fitness: &'static [FitnessKind],
    algorithms: &'static [Algorithm],
    default_fitness: FitnessKind,
    default_in_suite: bool,
    description: &'static str,
) -> Relation {
    Relation {
        id,
        level,
        kind,
        fitness,
        algorithms,
        default_fitness,
        default_in_suite,
        description,
    }
}

use Level::{Function as Fun, System as Sys};
use RelationKind::{Exact, Statistical as Stat};

static CATALOG: [Relation; 18] = [
    entry(RelationId::Mr1_1, Fun, Exact, &[Quartic], BOTH, Quartic, true,
        "quartic at the origin is below D and below quartic at (0,...,0,1)"),
    entry(RelationId::Mr1_2, Fun, Stat, &[Quartic], BOTH, Quartic, true,
        "two samples at the (1.28,...,1.28) corner have equal means"),
    entry(RelationId::Mr1_3, Fun, Exact, &[Ackley], BOTH, Ackley, true,
        "permuting the genes leaves Ackley unchanged"),
    entry(RelationId::Mr1_4, Fun, Stat, &[Quartic, Rosenbrock], BOTH, Rosenbrock, true,
        "an out-of-range evaluation raises the maximum, lowering later scaled fitness"),
    entry(RelationId::Mr1_5, Fun, Exact, ANY_FITNESS, BOTH, Rosenbrock, true,
        "the optimum has the same scaled fitness in 2 and 4 dimensions"),
    entry(RelationId::Mr2_1, Fun, Stat, ANY_FITNESS, GA_ONLY, Rosenbrock, true,
        "mean per-gene mutation change grows from mutRate 0.1 to 0.9"),
    entry(RelationId::Mr2_2, Fun, Stat, ANY_FITNESS, BOTH, Rosenbrock, true,
        "first-parent gene share drops from crossoverRate 0.5 to 1.0"),
    entry(RelationId::Mr2_3, Fun, Stat, &[Rosenbrock], GA_ONLY, Rosenbrock, true,
        "selection from a population holding ideal copies picks relatively fitter members"),
    entry(RelationId::Mr3_1, Sys, Stat, ANY_FITNESS, BOTH, Rosenbrock, true,
        "5000 generations beat 50 generations"),
    entry(RelationId::Mr3_2, Sys, Stat, ANY_FITNESS, BOTH, Rosenbrock, true,
        "GA: popSize 500 beats 5; DE: popSize 5 beats 500 over few generations"),
    entry(RelationId::Mr3_3, Sys, Stat, ANY_FITNESS, GA_ONLY, Quartic, true,
        "delta 0.5 ends worse but sooner than delta 0.05"),
    entry(RelationId::Mr3_4, Sys, Stat, ANY_FITNESS, BOTH, Rosenbrock, true,
        "GA: (mutRate, killRate) (0.5, 0.5) beats (0, 0); DE: (crossoverRate, beta) (0.5, 0.5) beats (0, 0)"),
    entry(RelationId::Mr3_5, Sys, Stat, ANY_FITNESS, GA_ONLY, Rosenbrock, false,
        "(mutRate, killRate) (1, 1) beats (0.5, 0.5); known to fail often"),
    entry(RelationId::Mr3_6, Sys, Stat, ANY_FITNESS, GA_ONLY, Rosenbrock, true,
        "with mutRate 0, killRate 0.5 beats killRate 0"),
    entry(RelationId::Mr3_7, Sys, Stat, ANY_FITNESS, GA_ONLY, Rosenbrock, true,
        "with killRate 0.1, mutRate 0.5 beats mutRate 0"),
    entry(RelationId::Mr3_8, Sys, Stat, ANY_FITNESS, GA_ONLY, Rosenbrock, false,
        "(mutRate, killRate) (0.1, 0.8) beats the swapped (0.8, 0.1); known to fail often"),
    entry(RelationId::Mr3_9, Sys, Stat, ANY_FITNESS, GA_ONLY, Rosenbrock, true,
        "with killRate 0, mutRate 0.5 is no different from (0, 0)"),
    entry(RelationId::Det, Fun, Exact, ANY_FITNESS, BOTH, Rosenbrock, true,
        "deterministic known-value and bookkeeping checks"),
];

/// The full catalog in id order.
pub fn catalog() -> &'static [Relation] {
    &CATALOG
}

/// Relations run by default: every entry flagged `default_in_suite`.
pub fn default_suite() -> Vec<RelationId> {
    CATALOG.iter().filter(|r| r.default_in_suite).map(|r| r.id).collect()
}

/// A parameter recorded in an outcome.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum ParamValue {
    Int(u64),
    Real(f64),
    Text(String),
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        Self::Int(v as u64)
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        Self::Real(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        Self::Text(v.to_string())
    }
}

/// Parameter snapshot keyed by `initial.<name>`, `followUp.<name>` or a bare name.
pub type Params = BTreeMap<String, ParamValue>;

/// Record of an exact (non-statistical) relation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct ExactRecord {
    pub checks: u32,
    pub violations: u32,
    /// One line per violated check.
    pub failures: Vec<String>,
}

impl ExactRecord {
    pub fn new() -> Self {
        Self {
            checks: 0,
            violations: 0,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            self.failures.push(describe());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl Default for ExactRecord {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "camelCase"))]
pub enum Verdict {
    Statistical(TestVerdict),
    Exact(ExactRecord),
}

/// A second statistical test a relation must also satisfy (MR-3.3's iteration counts).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct SecondaryCheck {
    pub name: String,
    pub verdict: TestVerdict,
    pub initial: Vec<f64>,
    pub follow_up: Vec<f64>,
}

/// Result of executing one relation once.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationOutcome {
    pub relation: RelationId,
    pub fitness: FitnessKind,
    pub algorithm: Algorithm,
    pub pass: bool,
    pub verdict: Verdict,
    pub initial: Sample,
    pub follow_up: Sample,
    pub secondary: Option<SecondaryCheck>,
    /// Seed and stream of the source the relation was executed with.
    pub seed: u64,
    pub stream: u64,
    pub params: Params,
}

/// What a statistical relation needs from its main test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Expect {
    /// Pass iff H0 is rejected.
    Reject,
    /// Pass iff H0 is retained.
    Retain,
}

impl Expect {
    pub(crate) fn passes(self, verdict: &TestVerdict) -> bool {
        match self {
            Self::Reject => verdict.reject,
            Self::Retain => !verdict.reject,
        }
    }
}

/// Everything a relation body produces; wrapped into a [`RelationOutcome`].
pub(crate) struct Evidence {
    pub pass: bool,
    pub verdict: Verdict,
    pub initial: Sample,
    pub follow_up: Sample,
    pub secondary: Option<SecondaryCheck>,
    pub params: Params,
}

/// Execute relation `id` against `fitness` and `algorithm`.
///
/// Fails with [`Error::NotApplicable`] when the pairing is outside the relation's
/// applicability.
pub fn execute_relation(
    id: RelationId,
    fitness: FitnessKind,
    algorithm: Algorithm,
    ctx: &ExecutionContext,
    rng: &RandomSource,
) -> Result<RelationOutcome> {
    execute_relation_with(id, fitness, algorithm, &SystemDefaults::default(), ctx, rng)
}

/// [`execute_relation`] with explicit system-level base settings.
pub fn execute_relation_with(
    id: RelationId,
    fitness: FitnessKind,
    algorithm: Algorithm,
    defaults: &SystemDefaults,
    ctx: &ExecutionContext,
    rng: &RandomSource,
) -> Result<RelationOutcome> {
    let relation = id.relation();
    if !relation.applies_to(fitness, algorithm) {
        return Err(Error::NotApplicable {
            relation: id.as_str(),
            fitness: fitness.name(),
            algorithm: algorithm.name(),
        });
    }
    let evidence = match id {
        RelationId::Mr1_1 => function::quartic_minimum_ordering(ctx, rng)?,
        RelationId::Mr1_2 => function::quartic_maximum_samples(ctx, rng)?,
        RelationId::Mr1_3 => function::ackley_permutation(ctx, rng)?,
        RelationId::Mr1_4 => function::adaptive_maximum(fitness, ctx, rng)?,
        RelationId::Mr1_5 => function::dimension_scaling(fitness, ctx, rng)?,
        RelationId::Mr2_1 => operator::mutation_magnitude(fitness, ctx, rng)?,
        RelationId::Mr2_2 => operator::crossover_share(algorithm, ctx, rng)?,
        RelationId::Mr2_3 => operator::selection_pressure(ctx, rng)?,
        RelationId::Det => deterministic::known_values(algorithm, ctx, rng)?,
        _ => system::execute(id, fitness, algorithm, defaults, ctx, rng)?,
    };
    Ok(RelationOutcome {
        relation: id,
        fitness,
        algorithm,
        pass: evidence.pass,
        verdict: evidence.verdict,
        initial: evidence.initial,
        follow_up: evidence.follow_up,
        secondary: evidence.secondary,
        seed: rng.seed(),
        stream: rng.stream(),
        params: evidence.params,
    })
}
