use std::path::Path;
use std::process::{Command, Output};

use evomr::report::Status;
use evomr::{parse_report, ExitStatus};

// Cheap relations: no full optimization runs.
const QUICK: &str = "MR-1.1,MR-1.3,MR-2.2,DET";

fn evomr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evomr")).args(args).output().expect("spawn evomr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn run_to(path: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["relations", "run", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    evomr(&args)
}

#[test]
fn clean_quick_suite_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run_to(&path, &["--ids", QUICK, "--reps", "3", "--seed", "4"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = evomr::report::read_report(&path).unwrap();
    assert_eq!(report.outcomes.len(), 12);
    assert!(report.all_passed());
    assert_eq!(report.summary["DET"].pass, 3);
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = dir.path().join("c.json");
    let args = ["--ids", "MR-1.2,MR-2.3,MR-1.4", "--reps", "4", "--seed", "11"];
    run_to(&a, &[&args[..], &["--jobs", "1"]].concat());
    run_to(&b, &[&args[..], &["--jobs", "1"]].concat());
    run_to(&c, &[&args[..], &["--jobs", "3"]].concat());
    let bytes = std::fs::read(&a).unwrap();
    assert!(!bytes.is_empty());
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_eq!(bytes, std::fs::read(&c).unwrap());
}

#[test]
fn csv_has_one_row_per_execution() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = run_to(&path, &["--ids", QUICK, "--reps", "2", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap().len(), 20);
    assert_eq!(reader.records().count(), 8);
}

#[test]
fn json_round_trips_through_the_parser() {
    let out = evomr(&["relations", "run", "--ids", "MR-1.2,MR-1.3", "--reps", "2", "--fitness", "ackley"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let report = parse_report(&text).unwrap();
    assert_eq!(evomr::report::to_json(&report).unwrap(), text);
    // MR-1.2 is quartic-only, so the ackley run records skips.
    let skipped: Vec<_> = report.outcomes.iter().filter(|o| o.status == Status::Skip).collect();
    assert_eq!(skipped.len(), 2);
    assert!(skipped.iter().all(|o| o.relation_id == "MR-1.2" && o.skip_reason.is_some()));
}

#[test]
fn empty_suite_is_a_valid_report() {
    let out = evomr(&["relations", "run", "--ids", "none"]);
    assert_eq!(code(&out), 0);
    let report = parse_report(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(report.outcomes.is_empty() && report.summary.is_empty());
}

#[test]
fn active_fault_fails_the_run() {
    let out = evomr(&["relations", "run", "--ids", "MR-2.1", "--reps", "2", "--fault", "FAULT-MUT-NOOP"]);
    assert_eq!(code(&out), ExitStatus::RelationFailure as i32);
    let report = parse_report(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(report.active_fault.unwrap().id, "FAULT-MUT-NOOP");
    assert_eq!(report.summary["MR-2.1"].fail, 2);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["relations", "run", "--ids", "MR-9.9"][..],
        &["relations", "run", "--reps", "0"],
        &["relations", "run", "--algo", "pso"],
        &["optimize", "--dim", "0"],
        &["optimize", "--mut-rate", "1.5"],
    ] {
        let out = evomr(args);
        assert_eq!(code(&out), ExitStatus::Usage as i32, "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("r.json");
    let out = run_to(&path, &["--ids", "MR-1.1", "--reps", "1"]);
    assert_eq!(code(&out), ExitStatus::Io as i32);
}

#[test]
fn optimize_writes_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    let out = evomr(&[
        "optimize", "--fitness", "quartic", "--max-gen", "30", "--seed", "2", "--trace", trace.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("generations 30"), "{stdout}");
    let rows: Vec<f64> = csv::Reader::from_path(&trace)
        .unwrap()
        .records()
        .map(|r| r.unwrap()[1].parse().unwrap())
        .collect();
    assert_eq!(rows.len(), 30);
}

#[test]
fn listings_cover_the_registries() {
    let relations = String::from_utf8(evomr(&["relations", "list"]).stdout).unwrap();
    assert_eq!(relations.lines().count(), 19);
    let faults = String::from_utf8(evomr(&["faults", "list"]).stdout).unwrap();
    assert!(faults.contains("FAULT-SEL-MAX") && faults.contains("FAULT-DE-SIGN"));
}
