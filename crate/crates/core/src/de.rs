//! Differential evolution, DE/rand/1/bin.
//!
//! For every member `x_i` two other members `x2 != x3` are drawn without replacement,
//! the trial vector `u_i = x_i + beta * (x2 - x3)` is mixed with `x_i` by binomial
//! crossover, and the offspring replaces `x_i` when it is no worse. Trial vectors are
//! not clipped to the box.

use alloc::vec::Vec;

use crate::chromosome::Chromosome;
use crate::config::DeConfig;
use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::fitness::FitnessFunction;
use crate::ga::{Population, RunResult};
use crate::rng::RandomSource;

/// A trial vector together with the indices it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialVector {
    pub values: Vec<f64>,
    pub target_index: usize,
    /// Indices of `x2` and `x3`.
    pub donors: [usize; 2],
}

/// `target + beta * (plus - minus)`, component-wise.
pub fn difference_step(target: &[f64], plus: &[f64], minus: &[f64], beta: f64) -> Vec<f64> {
    target
        .iter()
        .zip(plus.iter().zip(minus))
        .map(|(t, (p, m))| t + beta * (p - m))
        .collect()
}

#[derive(Debug, Clone)]
pub struct DifferentialEvolution {
    config: DeConfig,
    fault: Option<Fault>,
}

impl DifferentialEvolution {
    pub fn new(config: DeConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config, fault: None })
    }

    /// Like [`DifferentialEvolution::new`] but accepts `beta == 0`, which freezes the
    /// population when `crossoverRate` is also 0.
    pub(crate) fn with_zero_beta_allowed(config: DeConfig) -> Result<Self> {
        config.validate_allowing_zero_beta()?;
        Ok(Self { config, fault: None })
    }

    pub fn with_fault(mut self, fault: Option<Fault>) -> Self {
        self.fault = fault;
        self
    }

    pub fn config(&self) -> &DeConfig {
        &self.config
    }

    pub fn initialize(&self, f: &mut FitnessFunction, rng: &mut RandomSource) -> Result<Population> {
        Population::random(self.config.pop_size, f, rng)
    }

    /// The trial-vector formula with this instance's `beta` (and fault, if any).
    pub fn trial_formula(&self, target: &[f64], x2: &[f64], x3: &[f64]) -> Vec<f64> {
        if self.fault == Some(Fault::DeSignFlip) {
            difference_step(target, x2, x3, -self.config.beta)
        } else {
            difference_step(target, x2, x3, self.config.beta)
        }
    }

    /// Build `u_i` from member `i` and two distinct random others.
    pub fn trial_vector(&self, pop: &Population, i: usize, rng: &mut RandomSource) -> Result<TrialVector> {
        let n = pop.len();
        if n < 4 {
            return Err(Error::InvalidConfig(alloc::format!(
                "differential evolution needs popSize >= 4, got {n}"
            )));
        }
        if i >= n {
            return Err(Error::InvalidConfig(alloc::format!(
                "target index {i} out of range for population of {n}"
            )));
        }
        let mut x2 = rng.index(n - 1);
        if x2 >= i {
            x2 += 1;
        }
        let (lo, hi) = if i < x2 { (i, x2) } else { (x2, i) };
        let mut x3 = rng.index(n - 2);
        if x3 >= lo {
            x3 += 1;
        }
        if x3 >= hi {
            x3 += 1;
        }
        let members = pop.members();
        Ok(TrialVector {
            values: self.trial_formula(members[i].genes(), members[x2].genes(), members[x3].genes()),
            target_index: i,
            donors: [x2, x3],
        })
    }

    /// Gene `j` comes from the trial with probability `crossoverRate`; one uniformly
    /// chosen gene always does.
    pub fn binomial_crossover(
        &self,
        target: &Chromosome,
        trial: &TrialVector,
        rng: &mut RandomSource,
    ) -> Result<Chromosome> {
        let dimension = target.dimension();
        if trial.values.len() != dimension {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                actual: trial.values.len(),
            });
        }
        let forced = rng.index(dimension);
        let genes = (0..dimension)
            .map(|j| {
                if rng.chance(self.config.crossover_rate) || j == forced {
                    trial.values[j]
                } else {
                    target.genes()[j]
                }
            })
            .collect();
        Ok(Chromosome::new(genes))
    }

    /// Synchronous generations of trial, crossover and greedy survivor selection until
    /// `maxGen` or best-ever fitness `<= delta`.
    pub fn run(&self, f: &mut FitnessFunction, rng: &mut RandomSource) -> Result<RunResult> {
        let mut pop = self.initialize(f, rng)?;
        let mut best = pop.best().expect("initialized population is evaluated").clone();
        let mut best_fitness = best.fitness().expect("evaluated");
        let mut trace = Vec::new();
        while pop.generation() < self.config.max_gen && best_fitness > self.config.delta {
            pop = self.advance(&pop, f, rng, |offspring, fit| {
                if fit < best_fitness {
                    best_fitness = fit;
                    best = offspring.clone();
                }
            })?;
            trace.push(best_fitness);
        }
        Ok(RunResult {
            best,
            best_fitness,
            generations_run: pop.generation(),
            fitness_trace: trace,
        })
    }

    /// One generation.
    pub fn step(&self, pop: &Population, f: &mut FitnessFunction, rng: &mut RandomSource) -> Result<Population> {
        self.advance(pop, f, rng, |_, _| {})
    }

    fn advance(
        &self,
        pop: &Population,
        f: &mut FitnessFunction,
        rng: &mut RandomSource,
        mut on_offspring: impl FnMut(&Chromosome, f64),
    ) -> Result<Population> {
        let mut next = Vec::with_capacity(pop.len());
        for (i, current) in pop.members().iter().enumerate() {
            let trial = self.trial_vector(pop, i, rng)?;
            let mut offspring = self.binomial_crossover(current, &trial, rng)?;
            let fit = offspring.update_fitness(f, rng)?;
            on_offspring(&offspring, fit);
            let incumbent = current.fitness().ok_or(Error::MissingFitness(i))?;
            next.push(if fit <= incumbent { offspring } else { current.clone() });
        }
        let mut out = Population::new(next)?;
        out.set_generation(pop.generation() + 1);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::FitnessKind;
    use alloc::vec;
    use proptest::prelude::*;

    fn de(config: DeConfig) -> DifferentialEvolution {
        DifferentialEvolution::new(config).unwrap()
    }

    fn line_population(n: usize) -> Population {
        Population::new(
            (0..n)
                .map(|i| Chromosome::with_fitness(vec![i as f64, 10.0 * i as f64], i as f64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn formula_by_hand() {
        let u = difference_step(&[1.0, 2.0], &[3.0, 4.0], &[0.0, 1.0], 0.5);
        assert_eq!(u, vec![2.5, 3.5]);
        assert_eq!(difference_step(&[1.0, 2.0], &[3.0, 4.0], &[3.0, 4.0], 0.5), vec![1.0, 2.0]);
        assert_eq!(difference_step(&[1.0, 2.0], &[3.0, 4.0], &[0.0, 1.0], 0.0), vec![1.0, 2.0]);

        let op = de(DeConfig::default());
        assert_eq!(op.trial_formula(&[1.0, 2.0], &[3.0, 4.0], &[0.0, 1.0]), vec![2.5, 3.5]);
        let faulty = op.with_fault(Some(Fault::DeSignFlip));
        assert_eq!(faulty.trial_formula(&[1.0, 2.0], &[3.0, 4.0], &[0.0, 1.0]), vec![-0.5, 0.5]);
    }

    #[test]
    fn small_population_is_a_config_error() {
        assert!(DifferentialEvolution::new(DeConfig { pop_size: 3, ..Default::default() }).is_err());
        let op = de(DeConfig::default());
        let pop = line_population(3);
        assert!(matches!(
            op.trial_vector(&pop, 0, &mut RandomSource::new(0)),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn trial_vector_matches_its_donors() {
        let op = de(DeConfig::default());
        let pop = line_population(6);
        let mut rng = RandomSource::new(5);
        for i in 0..6 {
            let t = op.trial_vector(&pop, i, &mut rng).unwrap();
            let [a, b] = t.donors;
            let m = pop.members();
            assert_eq!(t.values, difference_step(m[i].genes(), m[a].genes(), m[b].genes(), 0.5));
        }
    }

    #[test]
    fn crossover_rate_one_takes_the_trial() {
        let op = de(DeConfig { crossover_rate: 1.0, ..Default::default() });
        let target = Chromosome::new(vec![1.0, 2.0, 3.0, 4.0]);
        let trial = TrialVector { values: vec![5.0, 6.0, 7.0, 8.0], target_index: 0, donors: [1, 2] };
        let child = op.binomial_crossover(&target, &trial, &mut RandomSource::new(0)).unwrap();
        assert_eq!(child.genes(), &trial.values[..]);
    }

    #[test]
    fn crossover_rate_zero_takes_exactly_one_trial_gene() {
        let op = de(DeConfig { crossover_rate: 0.0, ..Default::default() });
        let target = Chromosome::new(vec![1.0, 2.0, 3.0, 4.0]);
        let trial = TrialVector { values: vec![5.0, 6.0, 7.0, 8.0], target_index: 0, donors: [1, 2] };
        let mut rng = RandomSource::new(1);
        for _ in 0..100 {
            let child = op.binomial_crossover(&target, &trial, &mut rng).unwrap();
            let differing = child.genes().iter().zip(target.genes()).filter(|(a, b)| a != b).count();
            assert_eq!(differing, 1);
        }
    }

    #[test]
    fn half_rate_trial_share_is_lifted_by_the_forced_gene() {
        // expected share at D = 10 is 0.5 + 0.5 / 10 = 0.55
        let op = de(DeConfig { crossover_rate: 0.5, ..Default::default() });
        let target = Chromosome::new((0..10).map(|i| i as f64).collect());
        let trial = TrialVector {
            values: (0..10).map(|i| 100.0 + i as f64).collect(),
            target_index: 0,
            donors: [1, 2],
        };
        let mut rng = RandomSource::new(77);
        let n = 20_000;
        let mut taken = 0;
        for _ in 0..n {
            let child = op.binomial_crossover(&target, &trial, &mut rng).unwrap();
            taken += child.genes().iter().filter(|g| **g >= 100.0).count();
        }
        let share = taken as f64 / (10 * n) as f64;
        assert!(share > 0.5 && share < 0.56, "{share}");
        assert!((share - 0.55).abs() < 0.01);
    }

    #[test]
    fn one_generation_costs_pop_size_evaluations() {
        let mut f = FitnessFunction::new(FitnessKind::Rosenbrock, 2).unwrap();
        let op = de(DeConfig { max_gen: 1, pop_size: 10, ..Default::default() });
        let r = op.run(&mut f, &mut RandomSource::new(3)).unwrap();
        assert_eq!(r.generations_run, 1);
        assert_eq!(r.fitness_trace.len(), 1);
    }

    #[test]
    fn frozen_when_beta_and_rate_are_zero() {
        let op = DifferentialEvolution::with_zero_beta_allowed(DeConfig {
            beta: 0.0,
            crossover_rate: 0.0,
            ..Default::default()
        })
        .unwrap();
        let mut f = FitnessFunction::new(FitnessKind::Ackley, 3).unwrap();
        let mut rng = RandomSource::new(8);
        let pop = op.initialize(&mut f, &mut rng).unwrap();
        let next = op.step(&pop, &mut f, &mut rng).unwrap();
        assert_eq!(next.members(), pop.members());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn donors_are_distinct(n in 4usize..30, seed in any::<u64>()) {
            let op = de(DeConfig::default());
            let pop = line_population(n);
            let mut rng = RandomSource::new(seed);
            for i in 0..n {
                let t = op.trial_vector(&pop, i, &mut rng).unwrap();
                let [a, b] = t.donors;
                prop_assert!(a != b && a != i && b != i && a < n && b < n);
            }
        }

        #[test]
        fn per_slot_fitness_never_worsens(seed in any::<u64>(), kind in 0usize..3) {
            let mut f = FitnessFunction::new(FitnessKind::ALL[kind], 3).unwrap();
            let op = de(DeConfig { pop_size: 12, ..Default::default() });
            let mut rng = RandomSource::new(seed);
            let mut pop = op.initialize(&mut f, &mut rng).unwrap();
            for _ in 0..10 {
                let next = op.step(&pop, &mut f, &mut rng).unwrap();
                for (a, b) in pop.fitnesses().unwrap().iter().zip(next.fitnesses().unwrap()) {
                    prop_assert!(b <= *a);
                }
                pop = next;
            }
        }
    }
}
