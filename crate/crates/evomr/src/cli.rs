use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use evomr_core::relations::{self, Level, RelationKind};
use evomr_core::{
    Algorithm, DeConfig, ExecutionContext, Fault, FitnessKind, GaConfig, RandomSource, RunResult,
};

use crate::error::{ExitStatus, HarnessError, Result};
use crate::harness::{self, FitnessChoice, SuiteConfig, DEFAULT_REPETITIONS, TABLE_RELATIONS};
use crate::report::{self, Format, SuiteReport};

#[derive(Debug, Parser)]
#[command(name = "evomr", version, about = "Metamorphic testing of a genetic algorithm and differential evolution")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one optimization and print the best solution.
    Optimize(OptimizeArgs),
    #[command(subcommand)]
    Relations(RelationsCommand),
    #[command(subcommand)]
    Faults(FaultsCommand),
}

#[derive(Debug, Subcommand)]
enum RelationsCommand {
    /// Execute a relation suite and write a report.
    Run(RunArgs),
    /// Failure counts of system relations for every fitness function.
    Table4(Table4Args),
    /// Check that every registry fault is caught by some relation.
    FaultCoverage(CoverageArgs),
    /// Print the relation catalog.
    List,
}

#[derive(Debug, Subcommand)]
enum FaultsCommand {
    /// Print the fault registry.
    List,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long, default_value = "ga")]
    algo: Algorithm,
    #[arg(long, default_value = "rosenbrock")]
    fitness: FitnessKind,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    pop_size: Option<usize>,
    #[arg(long)]
    mut_rate: Option<f64>,
    #[arg(long)]
    kill_rate: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    max_gen: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    crossover_rate: Option<f64>,
    /// Activate a registry fault for this run.
    #[arg(long)]
    fault: Option<Fault>,
    /// Write the per-generation best fitness as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// `default`, `all`, or a comma-separated list such as `MR-1.1,3.4,DET`.
    #[arg(long, default_value = "default")]
    ids: String,
    /// A fitness function, or `default` for each relation's catalog default.
    #[arg(long, default_value = "default")]
    fitness: FitnessChoice,
    #[arg(long, default_value = "ga")]
    algo: Algorithm,
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    reps: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    fault: Option<Fault>,
    /// Report path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads (0: one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct Table4Args {
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    reps: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Relations to tabulate; defaults to 3.1, 3.2, 3.3, 3.4, 3.5 and 3.8.
    #[arg(long)]
    ids: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct CoverageArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    reps: u32,
    #[arg(long, default_value = "default")]
    ids: String,
    /// JSON summary path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

/// Parse arguments, run, and map the result to a process exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(ExitStatus::RelationFailure as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_status() as u8)
        }
    }
}

/// Returns whether everything that ran passed.
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Optimize(args) => optimize(args).map(|()| true),
        Command::Relations(RelationsCommand::Run(args)) => run_relations(args),
        Command::Relations(RelationsCommand::Table4(args)) => table4(args).map(|()| true),
        Command::Relations(RelationsCommand::FaultCoverage(args)) => coverage(args),
        Command::Relations(RelationsCommand::List) => {
            list_relations();
            Ok(true)
        }
        Command::Faults(FaultsCommand::List) => {
            list_faults();
            Ok(true)
        }
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => report::write_file(path, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| HarnessError::Write {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn optimize(args: OptimizeArgs) -> Result<()> {
    let ctx = ExecutionContext::with_fault(args.fault);
    let mut f = ctx.fitness(args.fitness, args.dim)?;
    let mut rng = RandomSource::new(args.seed);
    let result: RunResult = match args.algo {
        Algorithm::Ga => {
            let d = GaConfig::default();
            let config = GaConfig {
                pop_size: args.pop_size.unwrap_or(d.pop_size),
                mut_rate: args.mut_rate.unwrap_or(d.mut_rate),
                kill_rate: args.kill_rate.unwrap_or(d.kill_rate),
                delta: args.delta.unwrap_or(d.delta),
                max_gen: args.max_gen.unwrap_or(d.max_gen),
                crossover_rate: args.crossover_rate.unwrap_or(d.crossover_rate),
                ..d
            };
            ctx.ga(config)?.run(&mut f, &mut rng)?
        }
        Algorithm::De => {
            let d = DeConfig::default();
            let config = DeConfig {
                pop_size: args.pop_size.unwrap_or(d.pop_size),
                beta: args.beta.unwrap_or(d.beta),
                crossover_rate: args.crossover_rate.unwrap_or(d.crossover_rate),
                delta: args.delta.unwrap_or(d.delta),
                max_gen: args.max_gen.unwrap_or(d.max_gen),
            };
            ctx.de(config)?.run(&mut f, &mut rng)?
        }
    };
    let genes: Vec<String> = result.best.genes().iter().map(|g| report::format_float(*g)).collect();
    println!("best        [{}]", genes.join(", "));
    println!("fitness     {}", report::format_float(result.best_fitness));
    println!("generations {}", result.generations_run);
    if let Some(path) = args.trace {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["generation", "bestFitness"])?;
        for (g, best) in result.fitness_trace.iter().enumerate() {
            w.write_record([(g + 1).to_string(), report::format_float(*best)])?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        report::write_file(&path, &bytes)?;
    }
    Ok(())
}

fn print_summary(report: &SuiteReport) {
    for (id, t) in &report.summary {
        eprintln!("{id:<7} pass {:>3}  fail {:>3}  skip {:>3}", t.pass, t.fail, t.skip);
    }
}

fn run_relations(args: RunArgs) -> Result<bool> {
    let config = SuiteConfig {
        relations: harness::parse_relation_set(&args.ids)?,
        fitness: args.fitness,
        algorithm: args.algo,
        repetitions: args.reps,
        seed: args.seed,
        fault: args.fault,
        jobs: args.jobs,
    };
    let report = harness::run_suite(&config)?;
    print_summary(&report);
    let text = match args.format {
        Format::Json => report::to_json(&report)?,
        Format::Csv => report::to_csv(&report)?,
    };
    write_or_print(args.out.as_deref(), &text)?;
    Ok(report.all_passed())
}

fn table4(args: Table4Args) -> Result<()> {
    let relations = match &args.ids {
        Some(ids) => harness::parse_relation_set(ids)?,
        None => TABLE_RELATIONS.to_vec(),
    };
    let table = harness::failure_rate_experiment(&relations, args.reps, args.seed, args.jobs)?;
    write_or_print(args.out.as_deref(), &table.to_csv()?)
}

fn coverage(args: CoverageArgs) -> Result<bool> {
    let relations = harness::parse_relation_set(&args.ids)?;
    let result = harness::fault_coverage(&relations, &Fault::ALL, args.reps, args.seed, args.jobs)?;
    for d in &result.detections {
        let verdict = if d.caught { "caught" } else { "MISSED" };
        eprintln!("{:<22} {:<2} {verdict:<6} {}", d.fault, d.algorithm, d.caught_by.join(","));
    }
    if let Some(path) = &args.out {
        report::write_file(path, report::to_json(&result)?.as_bytes())?;
    }
    Ok(result.all_caught())
}

fn list_relations() {
    println!("{:<7} {:<8} {:<11} {:<10} {:<5} {:<5} description", "id", "level", "kind", "default", "algos", "suite");
    for r in relations::catalog() {
        let level = match r.level {
            Level::Function => "function",
            Level::System => "system",
        };
        let kind = match r.kind {
            RelationKind::Exact => "exact",
            RelationKind::Statistical => "statistical",
        };
        let algos: Vec<&str> = r.algorithms.iter().map(|a| a.name()).collect();
        let suite = if r.default_in_suite { "yes" } else { "no" };
        println!(
            "{:<7} {level:<8} {kind:<11} {:<10} {:<5} {suite:<5} {}",
            r.id,
            r.default_fitness,
            algos.join(","),
            r.description
        );
    }
}

fn list_faults() {
    println!("{:<22} {:<20} {:<34} description", "id", "target", "category");
    for f in Fault::ALL {
        println!("{:<22} {:<20} {:<34} {}", f.id(), f.target(), f.category(), f.description());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bad_values_are_rejected_by_the_parser() {
        for argv in [
            &["evomr", "optimize", "--fitness", "sphere"][..],
            &["evomr", "relations", "run", "--algo", "pso"],
            &["evomr", "relations", "run", "--fault", "FAULT-NOPE"],
            &["evomr", "relations", "run", "--fitness", "griewank"],
        ] {
            assert!(Cli::try_parse_from(argv).is_err(), "{argv:?}");
        }
    }
}
