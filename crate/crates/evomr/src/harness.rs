//! Suite orchestration: repetitions, skip records, the failure-rate matrix and
//! fault coverage.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use evomr_core::relations::{self, execute_relation};
use evomr_core::{Algorithm, ExecutionContext, Fault, FitnessKind, RandomSource, RelationId};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::report::{FaultRecord, OutcomeRecord, Samples, Status, SuiteConfigRecord, SuiteReport, Tally};

/// Repetitions per relation when none are given.
pub const DEFAULT_REPETITIONS: u32 = 10;
/// Share of repetitions a relation must fail for a fault to count as caught.
pub const DETECTION_SHARE: f64 = 0.9;
/// Relations of the failure-rate experiment, in table column order.
pub const TABLE_RELATIONS: [RelationId; 6] = [
    RelationId::Mr3_1,
    RelationId::Mr3_2,
    RelationId::Mr3_3,
    RelationId::Mr3_4,
    RelationId::Mr3_5,
    RelationId::Mr3_8,
];

/// Which fitness function each relation runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitnessChoice {
    CatalogDefault,
    Fixed(FitnessKind),
}

impl FitnessChoice {
    fn resolve(self, id: RelationId) -> FitnessKind {
        match self {
            Self::CatalogDefault => id.relation().default_fitness,
            Self::Fixed(kind) => kind,
        }
    }
}

impl fmt::Display for FitnessChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CatalogDefault => f.write_str("default"),
            Self::Fixed(kind) => kind.fmt(f),
        }
    }
}

impl FromStr for FitnessChoice {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("default") {
            Ok(Self::CatalogDefault)
        } else {
            Ok(Self::Fixed(s.parse()?))
        }
    }
}

/// Parse `default`, `all`, or a comma-separated list of relation ids.
pub fn parse_relation_set(list: &str) -> Result<Vec<RelationId>> {
    match list.trim().to_ascii_lowercase().as_str() {
        "default" => Ok(relations::default_suite()),
        "all" => Ok(RelationId::ALL.to_vec()),
        "" | "none" => Ok(Vec::new()),
        _ => list
            .split(',')
            .map(|s| s.trim().parse().map_err(HarnessError::from))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub relations: Vec<RelationId>,
    pub fitness: FitnessChoice,
    pub algorithm: Algorithm,
    pub repetitions: u32,
    pub seed: u64,
    pub fault: Option<Fault>,
    /// Worker threads; 0 lets the pool pick. Never affects results.
    pub jobs: usize,
}

impl SuiteConfig {
    pub fn new(relations: Vec<RelationId>, algorithm: Algorithm, seed: u64) -> Self {
        Self {
            relations,
            fitness: FitnessChoice::CatalogDefault,
            algorithm,
            repetitions: DEFAULT_REPETITIONS,
            seed,
            fault: None,
            jobs: 0,
        }
    }
}

/// Substream for `relation` in repetition `repetition` of a suite seeded with `seed`.
pub fn relation_stream(seed: u64, repetition: u32, relation: RelationId) -> RandomSource {
    RandomSource::new(seed)
        .derive(u64::from(repetition))
        .derive(relation.ordinal() as u64)
}

fn fault_record(fault: Fault) -> FaultRecord {
    FaultRecord {
        id: fault.id().to_string(),
        target: fault.target().to_string(),
        description: fault.description().to_string(),
    }
}

fn execute_one(config: &SuiteConfig, repetition: u32, id: RelationId) -> Result<OutcomeRecord> {
    let fitness = config.fitness.resolve(id);
    let rng = relation_stream(config.seed, repetition, id);
    let base = OutcomeRecord {
        relation_id: id.to_string(),
        repetition,
        fitness,
        algorithm: config.algorithm,
        status: Status::Skip,
        pass: false,
        seed: rng.seed(),
        stream: rng.stream(),
        verdict: None,
        samples: None,
        secondary: None,
        params: Default::default(),
        skip_reason: None,
    };
    if !id.relation().applies_to(fitness, config.algorithm) {
        return Ok(OutcomeRecord {
            skip_reason: Some(format!("{id} does not apply to {fitness} with {}", config.algorithm)),
            ..base
        });
    }
    let ctx = ExecutionContext::with_fault(config.fault);
    let outcome = execute_relation(id, fitness, config.algorithm, &ctx, &rng)?;
    Ok(OutcomeRecord {
        status: if outcome.pass { Status::Pass } else { Status::Fail },
        pass: outcome.pass,
        verdict: Some(outcome.verdict),
        samples: Some(Samples {
            initial: outcome.initial.observations,
            follow_up: outcome.follow_up.observations,
        }),
        secondary: outcome.secondary,
        params: outcome.params,
        ..base
    })
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

/// Run every relation `repetitions` times.
///
/// Outcomes are ordered by repetition, then by the order relations were given,
/// whatever the number of workers.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    if config.repetitions == 0 {
        return Err(HarnessError::Usage("repetitions must be positive".into()));
    }
    let tasks: Vec<(u32, RelationId)> = (0..config.repetitions)
        .flat_map(|rep| config.relations.iter().map(move |&id| (rep, id)))
        .collect();
    let outcomes = pool(config.jobs)?.install(|| {
        tasks
            .par_iter()
            .map(|&(rep, id)| execute_one(config, rep, id))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut summary: BTreeMap<String, Tally> = config
        .relations
        .iter()
        .map(|id| (id.to_string(), Tally::default()))
        .collect();
    for o in &outcomes {
        summary.entry(o.relation_id.clone()).or_default().add(o.status);
    }
    Ok(SuiteReport {
        suite_config: SuiteConfigRecord {
            relation_ids: config.relations.iter().map(|id| id.to_string()).collect(),
            fitness: config.fitness.to_string(),
            algorithm: config.algorithm,
            repetitions: config.repetitions,
            seed: config.seed,
        },
        active_fault: config.fault.map(fault_record),
        outcomes,
        summary,
    })
}

/// Failure counts per fitness function (rows) and relation (columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FailureTable {
    pub relations: Vec<String>,
    pub repetitions: u32,
    pub seed: u64,
    pub rows: Vec<FailureRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FailureRow {
    pub fitness: FitnessKind,
    /// `None` where the relation does not apply to this fitness function.
    pub failures: Vec<Option<u32>>,
}

impl FailureTable {
    pub fn failures(&self, fitness: FitnessKind, relation: RelationId) -> Option<u32> {
        let column = self.relations.iter().position(|r| *r == relation.as_str())?;
        let row = self.rows.iter().find(|r| r.fitness == fitness)?;
        row.failures[column]
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["fitness".to_string()];
        header.extend(self.relations.iter().cloned());
        w.write_record(&header)?;
        for row in &self.rows {
            let mut record = vec![row.fitness.to_string()];
            record.extend(row.failures.iter().map(|f| f.map_or_else(|| "n/a".to_string(), |n| n.to_string())));
            w.write_record(&record)?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv of UTF-8 fields"))
    }
}

/// Run each relation `repetitions` times with every fitness function on the GA and
/// count failures.
pub fn failure_rate_experiment(relations: &[RelationId], repetitions: u32, seed: u64, jobs: usize) -> Result<FailureTable> {
    let rows = FitnessKind::ALL
        .into_iter()
        .map(|kind| {
            let config = SuiteConfig {
                relations: relations.to_vec(),
                fitness: FitnessChoice::Fixed(kind),
                algorithm: Algorithm::Ga,
                repetitions,
                seed,
                fault: None,
                jobs,
            };
            let report = run_suite(&config)?;
            let failures = relations
                .iter()
                .map(|id| {
                    let tally = report.summary[id.as_str()];
                    (tally.skip == 0).then_some(tally.fail)
                })
                .collect();
            Ok(FailureRow { fitness: kind, failures })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FailureTable {
        relations: relations.iter().map(|id| id.to_string()).collect(),
        repetitions,
        seed,
        rows,
    })
}

/// Algorithm a fault's target lives in.
pub fn algorithm_for(fault: Fault) -> Algorithm {
    if fault.target().starts_with("de.") {
        Algorithm::De
    } else {
        Algorithm::Ga
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FaultDetection {
    pub fault: String,
    pub algorithm: Algorithm,
    /// Failures per relation over the repetitions.
    pub failures: BTreeMap<String, u32>,
    /// Relations failing in at least `threshold` repetitions.
    pub caught_by: Vec<String>,
    pub caught: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FaultCoverage {
    pub relations: Vec<String>,
    pub repetitions: u32,
    pub threshold: u32,
    pub seed: u64,
    pub detections: Vec<FaultDetection>,
}

impl FaultCoverage {
    pub fn all_caught(&self) -> bool {
        self.detections.iter().all(|d| d.caught)
    }

    pub fn detection(&self, fault: Fault) -> Option<&FaultDetection> {
        self.detections.iter().find(|d| d.fault == fault.id())
    }
}

/// Minimum failing repetitions for detection: `ceil(0.9 * repetitions)`.
pub fn detection_threshold(repetitions: u32) -> u32 {
    (DETECTION_SHARE * f64::from(repetitions) - 1e-9).ceil() as u32
}

/// Run `relations` with each listed fault active and record which relations catch it.
pub fn fault_coverage(
    relations: &[RelationId],
    faults: &[Fault],
    repetitions: u32,
    seed: u64,
    jobs: usize,
) -> Result<FaultCoverage> {
    let threshold = detection_threshold(repetitions);
    let detections = faults
        .iter()
        .map(|&fault| {
            let algorithm = algorithm_for(fault);
            let config = SuiteConfig {
                relations: relations.to_vec(),
                fitness: FitnessChoice::CatalogDefault,
                algorithm,
                repetitions,
                seed,
                fault: Some(fault),
                jobs,
            };
            let report = run_suite(&config)?;
            let failures: BTreeMap<String, u32> = report
                .summary
                .iter()
                .filter(|(_, t)| t.skip == 0)
                .map(|(id, t)| (id.clone(), t.fail))
                .collect();
            let caught_by: Vec<String> = relations
                .iter()
                .map(|id| id.to_string())
                .filter(|id| failures.get(id).is_some_and(|&n| n >= threshold))
                .collect();
            Ok(FaultDetection {
                fault: fault.id().to_string(),
                algorithm,
                failures,
                caught: !caught_by.is_empty(),
                caught_by,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FaultCoverage {
        relations: relations.iter().map(|id| id.to_string()).collect(),
        repetitions,
        threshold,
        seed,
        detections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_sets_parse() {
        assert_eq!(parse_relation_set("default").unwrap(), relations::default_suite());
        assert_eq!(parse_relation_set("all").unwrap().len(), 18);
        assert_eq!(
            parse_relation_set("MR-1.1, 3.4,DET").unwrap(),
            [RelationId::Mr1_1, RelationId::Mr3_4, RelationId::Det]
        );
        assert!(parse_relation_set("MR-9.9").is_err());
    }

    #[test]
    fn threshold_is_ninety_percent_rounded_up() {
        assert_eq!(detection_threshold(10), 9);
        assert_eq!(detection_threshold(20), 18);
        assert_eq!(detection_threshold(3), 3);
        assert_eq!(detection_threshold(1), 1);
    }

    #[test]
    fn faults_map_to_their_algorithm() {
        assert_eq!(algorithm_for(Fault::DeSignFlip), Algorithm::De);
        assert_eq!(algorithm_for(Fault::ReplaceBest), Algorithm::Ga);
        assert_eq!(algorithm_for(Fault::QuarticNoNoise), Algorithm::Ga);
    }

    #[test]
    fn streams_differ_by_repetition_and_relation() {
        let a = relation_stream(1, 0, RelationId::Mr1_1);
        let b = relation_stream(1, 1, RelationId::Mr1_1);
        let c = relation_stream(1, 0, RelationId::Mr1_2);
        assert_ne!(a.seed(), b.seed());
        assert_ne!((a.seed(), a.stream()), (c.seed(), c.stream()));
    }
}
