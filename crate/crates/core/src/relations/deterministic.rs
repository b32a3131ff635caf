//! Known-value and bookkeeping checks bundled as the `DET` entry.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Algorithm, Evidence, ExactRecord, Params, Verdict};
use crate::chromosome::Chromosome;
use crate::config::{DeConfig, GaConfig};
use crate::error::Result;
use crate::fault::ExecutionContext;
use crate::fitness::{FitnessKind, ACKLEY_NOMINAL_MAX};
use crate::ga::Population;
use crate::rng::RandomSource;
use crate::stats::{Sample, SAMPLE_SIZE};

pub const ACKLEY_MAX_POINT: [f64; 2] = [-21.6, 31.5];
pub const ACKLEY_MAX_TOLERANCE: f64 = 0.2;
pub const ACKLEY_REFERENCE_POINT: [f64; 3] = [6.4, 2.5, 1.25];
pub const ACKLEY_REFERENCE_VALUE: f64 = 13.241_973_84;
pub const ROSENBROCK_MAX_POINT: [f64; 2] = [-30.0, -30.0];
pub const ROSENBROCK_MAX_VALUE: f64 = 8.649_096_1e7;

pub(super) fn known_values(algorithm: Algorithm, ctx: &ExecutionContext, rng: &RandomSource) -> Result<Evidence> {
    let mut record = ExactRecord::new();
    let mut r = rng.derive(0);

    let mut ackley2 = ctx.fitness(FitnessKind::Ackley, 2)?;
    let at_zero = ackley2.evaluate(&[0.0, 0.0], &mut r)?;
    record.check(at_zero.abs() <= 1e-9, || format!("ackley(0,0) = {at_zero}"));
    let near_max = ackley2.evaluate(&ACKLEY_MAX_POINT, &mut r)?;
    record.check((near_max - ACKLEY_NOMINAL_MAX).abs() <= ACKLEY_MAX_TOLERANCE, || {
        format!("ackley{ACKLEY_MAX_POINT:?} = {near_max}, expected about {ACKLEY_NOMINAL_MAX}")
    });
    let mut ackley3 = ctx.fitness(FitnessKind::Ackley, 3)?;
    let reference = ackley3.evaluate(&ACKLEY_REFERENCE_POINT, &mut r)?;
    record.check((reference - ACKLEY_REFERENCE_VALUE).abs() <= 1e-6, || {
        format!("ackley{ACKLEY_REFERENCE_POINT:?} = {reference}")
    });

    let mut rosen4 = ctx.fitness(FitnessKind::Rosenbrock, 4)?;
    let at_ones = rosen4.evaluate(&[1.0; 4], &mut r)?;
    record.check(at_ones == 0.0, || format!("rosenbrock(1,1,1,1) = {at_ones}"));
    let mut rosen2 = ctx.fitness(FitnessKind::Rosenbrock, 2)?;
    let corner = rosen2.evaluate(&ROSENBROCK_MAX_POINT, &mut r)?;
    record.check(((corner - ROSENBROCK_MAX_VALUE) / ROSENBROCK_MAX_VALUE).abs() <= 1e-3, || {
        format!("rosenbrock(-30,-30) = {corner}")
    });

    // Initialization shape.
    let dimension = 3;
    let mut f = ctx.fitness(FitnessKind::Rosenbrock, dimension)?;
    let (pop, expected_size) = match algorithm {
        Algorithm::Ga => {
            let config = GaConfig::default();
            (ctx.ga(config)?.initialize(&mut f, &mut r)?, config.pop_size)
        }
        Algorithm::De => {
            let config = DeConfig::default();
            (ctx.de(config)?.initialize(&mut f, &mut r)?, config.pop_size)
        }
    };
    record.check(pop.len() == expected_size, || format!("initialized {} members, expected {expected_size}", pop.len()));
    record.check(pop.generation() == 0, || format!("initial generation {}", pop.generation()));
    let (low, high) = FitnessKind::Rosenbrock.bounds();
    let shaped = pop.members().iter().all(|c| {
        c.dimension() == dimension && c.is_evaluated() && c.genes().iter().all(|g| (low..=high).contains(g))
    });
    record.check(shaped, || "initialized member with wrong dimension, bounds or fitness".into());

    // Best-member extraction.
    let known = Population::new(vec![
        Chromosome::with_fitness(vec![5.0, 5.0], 16.0),
        Chromosome::with_fitness(vec![1.0, 1.0], 0.5),
        Chromosome::with_fitness(vec![2.0, 2.0], 3.0),
        Chromosome::with_fitness(vec![3.0, 3.0], 0.5),
    ])?;
    let best = known.best().map(|c| c.genes().to_vec());
    record.check(best.as_deref() == Some(&[1.0, 1.0][..]), || format!("best member {best:?}"));

    // Fitness refresh after the genes' fitness is stale.
    let mut stale = Chromosome::with_fitness(vec![1.0, 1.0], 42.0);
    let refreshed = stale.update_fitness(&mut rosen2, &mut r)?;
    record.check(refreshed == 0.0 && stale.fitness() == Some(0.0), || {
        format!("updateFitness left {:?}", stale.fitness())
    });

    // The quartic noise term must actually vary.
    let mut quartic = ctx.fitness(FitnessKind::Quartic, 2)?;
    let draws = (0..SAMPLE_SIZE)
        .map(|_| quartic.evaluate(&[0.5, -0.5], &mut r))
        .collect::<Result<Vec<_>>>()?;
    let variance = Sample::initial(draws.clone()).variance();
    record.check(variance > 0.0, || "quartic returned identical values at a fixed input".into());

    if algorithm == Algorithm::De {
        let de = ctx.de(DeConfig::default())?;
        let trial = de.trial_formula(&[1.0, 2.0], &[3.0, 4.0], &[0.0, 1.0]);
        record.check(trial == [2.5, 3.5], || format!("trial vector {trial:?}, expected [2.5, 3.5]"));
    }

    Ok(Evidence {
        pass: record.passed(),
        verdict: Verdict::Exact(record),
        initial: Sample::initial(draws),
        follow_up: Sample::follow_up(Vec::new()),
        secondary: None,
        params: Params::new(),
    })
}
