//! Relations comparing whole optimization runs.
//!
//! An observation is the best-ever raw fitness of one independent run; a sample is
//! `SAMPLE_SIZE` runs on consecutive substreams.

use alloc::string::ToString;
use alloc::vec::Vec;

use super::{Algorithm, Evidence, Expect, Params, RelationId, SecondaryCheck, Verdict};
use crate::config::{DeConfig, GaConfig};
use crate::de::DifferentialEvolution;
use crate::error::Result;
use crate::fault::ExecutionContext;
use crate::fitness::FitnessKind;
use crate::ga::RunResult;
use crate::rng::RandomSource;
use crate::stats::{self, Alternative, Sample, SampleLabel, SAMPLE_SIZE};

pub const GENERATIONS: (usize, usize) = (50, 5000);
pub const POP_SIZES: (usize, usize) = (5, 500);
pub const DELTAS: (f64, f64) = (0.5, 0.05);

/// Base settings every system relation starts from before varying its parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDefaults {
    pub dimension: usize,
    pub ga: GaConfig,
    pub de: DeConfig,
    /// Dimension for the threshold relation, whose deltas must be reachable.
    pub threshold_dimension: usize,
    /// Generation budget for the threshold relation.
    pub threshold_max_gen: usize,
    /// Generation budget for the DE population-size relation.
    pub de_pop_size_max_gen: usize,
}

impl Default for SystemDefaults {
    fn default() -> Self {
        Self {
            dimension: 10,
            ga: GaConfig {
                max_gen: 1000,
                ..GaConfig::default()
            },
            de: DeConfig {
                max_gen: 1000,
                ..DeConfig::default()
            },
            threshold_dimension: 2,
            threshold_max_gen: 1000,
            de_pop_size_max_gen: 50,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Plan {
    Ga(GaConfig),
    /// `zero_beta` admits `beta = 0`, which ordinary validation forbids.
    De { config: DeConfig, zero_beta: bool },
}

impl Plan {
    fn de(config: DeConfig) -> Self {
        Self::De { config, zero_beta: false }
    }

    fn record(&self, prefix: &str, params: &mut Params) {
        let mut put = |name: &str, value: super::ParamValue| {
            params.insert([prefix, ".", name].concat(), value);
        };
        match self {
            Plan::Ga(c) => {
                put("popSize", c.pop_size.into());
                put("mutRate", c.mut_rate.into());
                put("killRate", c.kill_rate.into());
                put("crossoverRate", c.crossover_rate.into());
                put("delta", c.delta.into());
                put("maxGen", c.max_gen.into());
            }
            Plan::De { config: c, .. } => {
                put("popSize", c.pop_size.into());
                put("beta", c.beta.into());
                put("crossoverRate", c.crossover_rate.into());
                put("delta", c.delta.into());
                put("maxGen", c.max_gen.into());
            }
        }
    }

    fn run(&self, kind: FitnessKind, dimension: usize, ctx: &ExecutionContext, rng: &mut RandomSource) -> Result<RunResult> {
        let mut f = ctx.fitness(kind, dimension)?;
        match *self {
            Plan::Ga(config) => ctx.ga(config)?.run(&mut f, rng),
            Plan::De { config, zero_beta: true } => DifferentialEvolution::with_zero_beta_allowed(config)?
                .with_fault(ctx.fault())
                .run(&mut f, rng),
            Plan::De { config, zero_beta: false } => ctx.de(config)?.run(&mut f, rng),
        }
    }
}

/// One relation's two configurations and decision rule.
struct Design {
    initial: Plan,
    follow_up: Plan,
    alternative: Alternative,
    expect: Expect,
    /// Also require fewer generations in the initial runs.
    compare_generations: bool,
    /// Run both configurations on the same substreams.
    common_random_numbers: bool,
}

impl Design {
    fn new(initial: Plan, follow_up: Plan, alternative: Alternative) -> Self {
        Self {
            initial,
            follow_up,
            alternative,
            expect: Expect::Reject,
            compare_generations: false,
            common_random_numbers: false,
        }
    }
}

fn ga_with(base: &GaConfig, mut_rate: f64, kill_rate: f64) -> Plan {
    Plan::Ga(GaConfig {
        mut_rate,
        kill_rate,
        ..*base
    })
}

fn design(id: RelationId, algorithm: Algorithm, d: &SystemDefaults) -> Design {
    use Alternative::{Greater, Less, TwoSided};
    let ga = d.ga;
    let de = d.de;
    match (id, algorithm) {
        (RelationId::Mr3_1, Algorithm::Ga) => Design::new(
            Plan::Ga(GaConfig { max_gen: GENERATIONS.0, ..ga }),
            Plan::Ga(GaConfig { max_gen: GENERATIONS.1, ..ga }),
            Greater,
        ),
        (RelationId::Mr3_1, Algorithm::De) => Design::new(
            Plan::de(DeConfig { max_gen: GENERATIONS.0, ..de }),
            Plan::de(DeConfig { max_gen: GENERATIONS.1, ..de }),
            Greater,
        ),
        (RelationId::Mr3_2, Algorithm::Ga) => Design::new(
            Plan::Ga(GaConfig { pop_size: POP_SIZES.0, ..ga }),
            Plan::Ga(GaConfig { pop_size: POP_SIZES.1, ..ga }),
            Greater,
        ),
        (RelationId::Mr3_2, Algorithm::De) => {
            let short = DeConfig { max_gen: d.de_pop_size_max_gen, ..de };
            Design::new(
                Plan::de(DeConfig { pop_size: POP_SIZES.0, ..short }),
                Plan::de(DeConfig { pop_size: POP_SIZES.1, ..short }),
                Less,
            )
        }
        (RelationId::Mr3_3, _) => {
            let long = GaConfig { max_gen: d.threshold_max_gen, ..ga };
            Design {
                compare_generations: true,
                ..Design::new(
                    Plan::Ga(GaConfig { delta: DELTAS.0, ..long }),
                    Plan::Ga(GaConfig { delta: DELTAS.1, ..long }),
                    Greater,
                )
            }
        }
        (RelationId::Mr3_4, Algorithm::Ga) => Design::new(ga_with(&ga, 0.0, 0.0), ga_with(&ga, 0.5, 0.5), Greater),
        (RelationId::Mr3_4, Algorithm::De) => Design::new(
            Plan::De {
                config: DeConfig { crossover_rate: 0.0, beta: 0.0, ..de },
                zero_beta: true,
            },
            Plan::de(DeConfig { crossover_rate: 0.5, beta: 0.5, ..de }),
            Greater,
        ),
        (RelationId::Mr3_5, _) => Design::new(ga_with(&ga, 0.5, 0.5), ga_with(&ga, 1.0, 1.0), Greater),
        (RelationId::Mr3_6, _) => Design::new(ga_with(&ga, 0.0, 0.0), ga_with(&ga, 0.0, 0.5), Greater),
        (RelationId::Mr3_7, _) => Design::new(ga_with(&ga, 0.0, 0.1), ga_with(&ga, 0.5, 0.1), Greater),
        (RelationId::Mr3_8, _) => Design::new(ga_with(&ga, 0.1, 0.8), ga_with(&ga, 0.8, 0.1), Less),
        (RelationId::Mr3_9, _) => Design {
            expect: Expect::Retain,
            common_random_numbers: true,
            ..Design::new(ga_with(&ga, 0.0, 0.0), ga_with(&ga, 0.5, 0.0), TwoSided)
        },
        _ => unreachable!("{id} is not a system relation"),
    }
}

fn run_sample(
    label: SampleLabel,
    plan: &Plan,
    kind: FitnessKind,
    dimension: usize,
    ctx: &ExecutionContext,
    source: &RandomSource,
) -> Result<(Sample, Sample)> {
    let mut generations = Vec::with_capacity(SAMPLE_SIZE);
    let fitness = stats::try_collect_sample(label, SAMPLE_SIZE, source, |r| {
        let result = plan.run(kind, dimension, ctx, r)?;
        generations.push(result.generations_run as f64);
        Ok(result.best_fitness)
    })?;
    Ok((fitness, Sample::new(label, generations)))
}

pub(super) fn execute(
    id: RelationId,
    kind: FitnessKind,
    algorithm: Algorithm,
    defaults: &SystemDefaults,
    ctx: &ExecutionContext,
    rng: &RandomSource,
) -> Result<Evidence> {
    let design = design(id, algorithm, defaults);
    let dimension = if id == RelationId::Mr3_3 {
        defaults.threshold_dimension
    } else {
        defaults.dimension
    };
    let initial_source = rng.derive(0);
    let follow_up_source = if design.common_random_numbers {
        initial_source.clone()
    } else {
        rng.derive(1)
    };
    let (initial, initial_gens) = run_sample(SampleLabel::Initial, &design.initial, kind, dimension, ctx, &initial_source)?;
    let (follow_up, follow_up_gens) =
        run_sample(SampleLabel::FollowUp, &design.follow_up, kind, dimension, ctx, &follow_up_source)?;

    let verdict = stats::welch_test(&initial, &follow_up, design.alternative)?;
    let mut pass = design.expect.passes(&verdict);
    let secondary = if design.compare_generations {
        let gens = stats::welch_test(&initial_gens, &follow_up_gens, Alternative::Less)?;
        pass &= gens.reject;
        Some(SecondaryCheck {
            name: "generations".to_string(),
            verdict: gens,
            initial: initial_gens.observations,
            follow_up: follow_up_gens.observations,
        })
    } else {
        None
    };

    let mut params = Params::new();
    params.insert("dimension".into(), dimension.into());
    design.initial.record("initial", &mut params);
    design.follow_up.record("followUp", &mut params);
    if design.common_random_numbers {
        params.insert("commonRandomNumbers".into(), "true".into());
    }
    Ok(Evidence {
        pass,
        verdict: Verdict::Statistical(verdict),
        initial,
        follow_up,
        secondary,
        params,
    })
}
