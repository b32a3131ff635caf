//! Relations over single GA and DE operators.

use alloc::vec::Vec;

use super::function::statistical;
use super::{Algorithm, Evidence, Expect, Params};
use crate::chromosome::Chromosome;
use crate::config::{DeConfig, GaConfig};
use crate::de::TrialVector;
use crate::error::Result;
use crate::fault::ExecutionContext;
use crate::fitness::FitnessKind;
use crate::ga::Population;
use crate::rng::RandomSource;
use crate::stats::{self, Alternative, SampleLabel, SAMPLE_SIZE};

/// Dimension of the random solutions fed to mutation.
pub const MUTATION_DIM: usize = 10;
pub const MUTATION_RATES: (f64, f64) = (0.1, 0.9);
pub const CROSSOVER_RATES: (f64, f64) = (0.5, 1.0);
pub const CROSSOVER_PARENTS: [[f64; 4]; 2] = [[1.0, 2.0, 3.0, 4.0], [5.0, 6.0, 7.0, 8.0]];

/// Population without the ideal solution.
pub const SELECTION_INITIAL: [[f64; 2]; 5] = [[2.0, 3.0], [5.0, 10.0], [27.0, 8.0], [17.0, 11.0], [29.0, 2.0]];
/// The same population with two members swapped for copies of the optimum.
pub const SELECTION_FOLLOW_UP: [[f64; 2]; 5] = [[3.0, 4.0], [5.0, 10.0], [17.0, 11.0], [1.0, 1.0], [1.0, 1.0]];
/// Selections averaged into one observation: a mating pool the size of the default population.
pub const SELECTIONS_PER_OBSERVATION: usize = 50;

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    values.sum::<f64>() / n as f64
}

/// Mean per-gene mutation change grows with the mutation rate.
pub(super) fn mutation_magnitude(kind: FitnessKind, ctx: &ExecutionContext, rng: &RandomSource) -> Result<Evidence> {
    let f = ctx.fitness(kind, MUTATION_DIM)?;
    let (low, high) = kind.bounds();
    let sample = |label, rate, stream| -> Result<_> {
        let ga = ctx.ga(GaConfig {
            mut_rate: rate,
            ..GaConfig::default()
        })?;
        Ok(stats::collect_sample(label, SAMPLE_SIZE, &rng.derive(stream), |r| {
            let genes: Vec<f64> = (0..MUTATION_DIM).map(|_| r.uniform_in(low, high)).collect();
            let original = Chromosome::new(genes);
            let mutated = ga.mutate(&original, &f, r);
            mean(original.genes().iter().zip(mutated.genes()).map(|(a, b)| (a - b).abs()))
        }))
    };
    let initial = sample(SampleLabel::Initial, MUTATION_RATES.0, 0)?;
    let follow_up = sample(SampleLabel::FollowUp, MUTATION_RATES.1, 1)?;
    let params = Params::from([
        ("dimension".into(), MUTATION_DIM.into()),
        ("initial.mutRate".into(), MUTATION_RATES.0.into()),
        ("followUp.mutRate".into(), MUTATION_RATES.1.into()),
    ]);
    statistical(initial, follow_up, Alternative::Less, Expect::Reject, params)
}

fn first_parent_share(child: &[f64], first: &[f64]) -> f64 {
    mean(child.iter().zip(first).map(|(c, p)| if c == p { 1.0 } else { 0.0 }))
}

/// Share of child genes from the first parent drops as the crossover rate rises.
///
/// For DE the "first parent" is the target vector and the second the trial vector.
pub(super) fn crossover_share(algorithm: Algorithm, ctx: &ExecutionContext, rng: &RandomSource) -> Result<Evidence> {
    let [first, second] = CROSSOVER_PARENTS;
    let sample = |label, rate, stream| -> Result<_> {
        let source = rng.derive(stream);
        match algorithm {
            Algorithm::Ga => {
                let ga = ctx.ga(GaConfig {
                    crossover_rate: rate,
                    ..GaConfig::default()
                })?;
                let parents = [Chromosome::new(first.to_vec()), Chromosome::new(second.to_vec())];
                stats::try_collect_sample(label, SAMPLE_SIZE, &source, |r| {
                    Ok(first_parent_share(ga.crossover(&parents, r)?.genes(), &first))
                })
            }
            Algorithm::De => {
                let de = ctx.de(DeConfig {
                    crossover_rate: rate,
                    ..DeConfig::default()
                })?;
                let target = Chromosome::new(first.to_vec());
                let trial = TrialVector {
                    values: second.to_vec(),
                    target_index: 0,
                    donors: [1, 2],
                };
                stats::try_collect_sample(label, SAMPLE_SIZE, &source, |r| {
                    Ok(first_parent_share(de.binomial_crossover(&target, &trial, r)?.genes(), &first))
                })
            }
        }
    };
    let initial = sample(SampleLabel::Initial, CROSSOVER_RATES.0, 0)?;
    let follow_up = sample(SampleLabel::FollowUp, CROSSOVER_RATES.1, 1)?;
    let params = Params::from([
        ("initial.crossoverRate".into(), CROSSOVER_RATES.0.into()),
        ("followUp.crossoverRate".into(), CROSSOVER_RATES.1.into()),
    ]);
    statistical(initial, follow_up, Alternative::Greater, Expect::Reject, params)
}

fn evaluated_population(points: &[[f64; 2]], ctx: &ExecutionContext, rng: &mut RandomSource) -> Result<Population> {
    let mut f = ctx.fitness(FitnessKind::Rosenbrock, 2)?;
    let members = points
        .iter()
        .map(|p| {
            let mut c = Chromosome::new(p.to_vec());
            c.update_fitness(&mut f, rng)?;
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    Population::new(members)
}

/// Selection picks relatively fitter members from the population holding ideal copies.
///
/// One observation is the mean, over a mating pool of selections, of the selected
/// member's raw fitness divided by its population's mean raw fitness. Dividing by
/// the population mean isolates the operator from the difference between the two
/// populations; pooling keeps rare picks of the second-best member from dominating
/// the variance.
pub(super) fn selection_pressure(ctx: &ExecutionContext, rng: &RandomSource) -> Result<Evidence> {
    let ga = ctx.ga(GaConfig::default())?;
    let sample = |label, points: &[[f64; 2]], stream: u64| -> Result<_> {
        let source = rng.derive(stream);
        let pop = evaluated_population(points, ctx, &mut source.derive(u64::MAX))?;
        let fitnesses = pop.fitnesses()?;
        let population_mean = mean(fitnesses.iter().copied());
        stats::try_collect_sample(label, SAMPLE_SIZE, &source, |r| {
            let picked = ga.select(&pop, SELECTIONS_PER_OBSERVATION, r)?;
            let fits = picked
                .iter()
                .map(|c| c.fitness().expect("members are evaluated") / population_mean);
            Ok(mean(fits))
        })
    };
    let initial = sample(SampleLabel::Initial, &SELECTION_INITIAL, 0)?;
    let follow_up = sample(SampleLabel::FollowUp, &SELECTION_FOLLOW_UP, 1)?;
    let params = Params::from([
        ("dimension".into(), 2usize.into()),
        ("selectionsPerObservation".into(), SELECTIONS_PER_OBSERVATION.into()),
    ]);
    statistical(initial, follow_up, Alternative::Greater, Expect::Reject, params)
}
