//! Generational genetic algorithm for minimization.
//!
//! One generation breeds `ceil(killRate * popSize)` children. Each child comes from
//! `parents` roulette-selected members via uniform crossover, then per-gene mutation,
//! and the children displace the same number of worst members.

use alloc::vec::Vec;

use crate::chromosome::Chromosome;
use crate::config::GaConfig;
use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::fitness::FitnessFunction;
use crate::rng::RandomSource;

/// Guards the inverse-fitness weight of a zero-fitness member.
pub const SELECTION_EPSILON: f64 = 1e-12;
/// Mutation moves a gene by a magnitude drawn from `[0, MUTATION_STEP)`.
pub const MUTATION_STEP: f64 = 0.1;

/// A fixed-size set of chromosomes of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Chromosome>,
    generation: usize,
}

impl Population {
    pub fn new(members: Vec<Chromosome>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidConfig("population cannot be empty".into()));
        }
        let dimension = members[0].dimension();
        if let Some(bad) = members.iter().find(|c| c.dimension() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                actual: bad.dimension(),
            });
        }
        Ok(Self { members, generation: 0 })
    }

    /// `size` chromosomes with genes uniform in the box of `f`, all evaluated.
    pub fn random(size: usize, f: &mut FitnessFunction, rng: &mut RandomSource) -> Result<Self> {
        let (low, high) = (f.lower_bound(), f.upper_bound());
        let mut members = Vec::with_capacity(size);
        for _ in 0..size {
            let genes = (0..f.dimension()).map(|_| rng.uniform_in(low, high)).collect();
            let mut c = Chromosome::new(genes);
            c.update_fitness(f, rng)?;
            members.push(c);
        }
        Self::new(members)
    }

    pub fn members(&self) -> &[Chromosome] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Chromosome> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.members[0].dimension()
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub(crate) fn set_generation(&mut self, generation: usize) {
        self.generation = generation;
    }

    /// Fitness of every member, or an error naming the first unevaluated one.
    pub fn fitnesses(&self) -> Result<Vec<f64>> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, c)| c.fitness().ok_or(Error::MissingFitness(i)))
            .collect()
    }

    /// Lowest-fitness evaluated member; the earliest wins ties.
    pub fn best(&self) -> Option<&Chromosome> {
        let mut best: Option<&Chromosome> = None;
        for c in &self.members {
            if let Some(fit) = c.fitness() {
                if best.is_none_or(|b| fit < b.fitness().unwrap_or(f64::INFINITY)) {
                    best = Some(c);
                }
            }
        }
        best
    }
}

/// Outcome of one optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Best chromosome evaluated at any point of the run.
    pub best: Chromosome,
    pub best_fitness: f64,
    pub generations_run: usize,
    /// Best-ever raw fitness after each generation.
    pub fitness_trace: Vec<f64>,
}

/// Cumulative roulette wheel.
struct Roulette {
    cumulative: Vec<f64>,
}

impl Roulette {
    fn new(weights: &[f64]) -> Self {
        let mut total = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                total += w;
                total
            })
            .collect();
        Self { cumulative }
    }

    fn spin(&self, rng: &mut RandomSource) -> usize {
        let total = *self.cumulative.last().expect("non-empty wheel");
        let target = rng.uniform() * total;
        let idx = self.cumulative.partition_point(|&c| c <= target);
        idx.min(self.cumulative.len() - 1)
    }
}

/// The genetic algorithm, optionally carrying an injected fault.
#[derive(Debug, Clone)]
pub struct GeneticAlgorithm {
    config: GaConfig,
    fault: Option<Fault>,
}

impl GeneticAlgorithm {
    pub fn new(config: GaConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config, fault: None })
    }

    pub fn with_fault(mut self, fault: Option<Fault>) -> Self {
        self.fault = fault;
        self
    }

    pub fn config(&self) -> &GaConfig {
        &self.config
    }

    fn has(&self, fault: Fault) -> bool {
        self.fault == Some(fault)
    }

    pub fn initialize(&self, f: &mut FitnessFunction, rng: &mut RandomSource) -> Result<Population> {
        Population::random(self.config.pop_size, f, rng)
    }

    /// Normalized roulette weights, `(1 / (fit_i + eps)) / sum_j (1 / (fit_j + eps))`.
    ///
    /// Negative raw values (floating-point noise around a zero optimum) count as 0.
    pub fn selection_weights(&self, pop: &Population) -> Result<Vec<f64>> {
        let raw = pop.fitnesses()?;
        let maximizing = self.has(Fault::SelectionMaximizes);
        let weights: Vec<f64> = raw
            .iter()
            .map(|&fit| {
                let shifted = fit.max(0.0) + SELECTION_EPSILON;
                if maximizing {
                    shifted
                } else {
                    1.0 / shifted
                }
            })
            .collect();
        let total: f64 = weights.iter().sum();
        Ok(weights.into_iter().map(|w| w / total).collect())
    }

    /// Roulette-wheel sampling of `count` members, with replacement.
    pub fn select(
        &self,
        pop: &Population,
        count: usize,
        rng: &mut RandomSource,
    ) -> Result<Vec<Chromosome>> {
        let wheel = Roulette::new(&self.selection_weights(pop)?);
        Ok((0..count)
            .map(|_| pop.members[wheel.spin(rng)].clone())
            .collect())
    }

    /// Uniform crossover. With two parents, gene `i` comes from the second parent with
    /// probability `crossoverRate`; with more, the donor is uniform among them.
    pub fn crossover(&self, parents: &[Chromosome], rng: &mut RandomSource) -> Result<Chromosome> {
        if parents.len() < 2 {
            return Err(Error::InvalidConfig("crossover needs at least two parents".into()));
        }
        let dimension = parents[0].dimension();
        if let Some(bad) = parents.iter().find(|p| p.dimension() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                actual: bad.dimension(),
            });
        }
        let genes = (0..dimension)
            .map(|i| {
                let donor = if parents.len() == 2 {
                    usize::from(rng.chance(self.config.crossover_rate))
                } else {
                    rng.index(parents.len())
                };
                if self.has(Fault::CrossoverFirstParent) {
                    parents[0].genes()[i]
                } else {
                    parents[donor].genes()[i]
                }
            })
            .collect();
        Ok(Chromosome::new(genes))
    }

    /// Per-gene mutation. A mutated gene moves by a magnitude uniform in `[0, 0.1)` in
    /// a random direction; a move that would leave the box of `f` is reflected to the
    /// other direction so the magnitude is kept.
    pub fn mutate(&self, c: &Chromosome, f: &FitnessFunction, rng: &mut RandomSource) -> Chromosome {
        if self.has(Fault::MutationNoop) {
            return c.clone();
        }
        let (low, high) = (f.lower_bound(), f.upper_bound());
        let genes = c
            .genes()
            .iter()
            .map(|&g| {
                if !rng.chance(self.config.mut_rate) {
                    return g;
                }
                let step = rng.uniform() * MUTATION_STEP;
                let up = rng.chance(0.5);
                let forward = if up { g + step } else { g - step };
                if (low..=high).contains(&forward) {
                    forward
                } else {
                    let back = if up { g - step } else { g + step };
                    if (low..=high).contains(&back) {
                        back
                    } else {
                        forward
                    }
                }
            })
            .collect();
        Chromosome::new(genes)
    }

    /// Remove the `children.len()` worst members and append the children.
    ///
    /// Among equal fitness values the later member is removed first.
    pub fn replace(&self, pop: Population, children: Vec<Chromosome>) -> Result<Population> {
        let expected = self.config.children_per_generation();
        if children.len() != expected {
            return Err(Error::ChildCount {
                expected,
                actual: children.len(),
            });
        }
        if let Some(i) = children.iter().position(|c| !c.is_evaluated()) {
            return Err(Error::MissingFitness(i));
        }
        if let Some(bad) = children.iter().find(|c| c.dimension() != pop.dimension()) {
            return Err(Error::DimensionMismatch {
                expected: pop.dimension(),
                actual: bad.dimension(),
            });
        }
        let fitness = pop.fitnesses()?;
        let generation = pop.generation;
        // stable order: best first, earlier index first among ties
        let mut order: Vec<usize> = (0..pop.len()).collect();
        order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]));
        let keep = pop.len() - expected;
        let mut survives = alloc::vec![false; pop.len()];
        let kept = if self.has(Fault::ReplaceBest) {
            &order[expected..]
        } else {
            &order[..keep]
        };
        for &i in kept {
            survives[i] = true;
        }
        let mut members: Vec<Chromosome> = pop
            .into_members()
            .into_iter()
            .zip(survives)
            .filter_map(|(c, keep)| keep.then_some(c))
            .collect();
        members.extend(children);
        Ok(Population {
            members,
            generation: generation + 1,
        })
    }

    /// Run until `maxGen` generations have passed or the best-ever raw fitness is at
    /// or below `delta`.
    pub fn run(&self, f: &mut FitnessFunction, rng: &mut RandomSource) -> Result<RunResult> {
        let mut pop = self.initialize(f, rng)?;
        let mut best = pop.best().expect("initialized population is evaluated").clone();
        let mut best_fitness = best.fitness().expect("evaluated");
        let children_count = self.config.children_per_generation();
        let mut trace = Vec::new();
        let mut generation = 0;
        while generation < self.config.max_gen && best_fitness > self.config.delta {
            let mut children = Vec::with_capacity(children_count);
            if children_count > 0 {
                let wheel = Roulette::new(&self.selection_weights(&pop)?);
                for _ in 0..children_count {
                    let parents: Vec<Chromosome> = (0..self.config.parents)
                        .map(|_| pop.members[wheel.spin(rng)].clone())
                        .collect();
                    let child = self.crossover(&parents, rng)?;
                    let mut child = self.mutate(&child, f, rng);
                    let fit = child.update_fitness(f, rng)?;
                    if fit < best_fitness {
                        best_fitness = fit;
                        best = child.clone();
                    }
                    children.push(child);
                }
            }
            pop = self.replace(pop, children)?;
            generation += 1;
            trace.push(best_fitness);
        }
        pop.set_generation(generation);
        Ok(RunResult {
            best,
            best_fitness,
            generations_run: generation,
            fitness_trace: trace,
        })
    }
}
