use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/corpus")
}

fn optima() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/optima.txt")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tourbound")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn file(name: &str) -> String {
    corpus().join(name).to_string_lossy().into_owned()
}

#[test]
fn solve_writes_json() {
    let o = run(&["solve", &file("rand10.tsp"), "--iterations", "3", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["instance"], "rand10");
    assert_eq!(v["iteration_lengths"].as_array().unwrap().len(), 3);
    assert_eq!(v["lower"]["source"], "oracle");
    assert_eq!(v["config"]["seed"], 4);
}

#[test]
fn solve_writes_csv_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = run(&[
        "solve",
        &file("grid30.tsp"),
        "--iterations",
        "2",
        "--k",
        "3",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "instance,iteration,best_length,bound_mu,closed_form_ratio");
    assert!(lines[2].starts_with("grid30,2,"));
}

#[test]
fn solve_is_deterministic_apart_from_timings() {
    let args = ["solve", &file("grid30.tsp"), "--iterations", "4", "--seed", "9", "--rounding", "exact"];
    let strip = |o: Output| {
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    assert_eq!(strip(run(&args)), strip(run(&args)));
}

#[test]
fn solve_target_ratio() {
    let o = run(&["solve", &file("grid30.tsp"), "--target-ratio", "1.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["iterations"]["target_ratio"], 1.1);
    let k = v["bound"]["required_k"].as_u64().unwrap() as usize;
    assert_eq!(v["iteration_lengths"].as_array().unwrap().len(), k);
}

#[test]
fn target_ratio_without_a_fit_exits_3() {
    // NINT unit square: every sample has the same length.
    let o = run(&["solve", &file("square.tsp"), "--target-ratio", "1.1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("bound unavailable"));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["iteration_lengths"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(run(&["solve", &file("broken.tsp")]).status.code(), Some(2));
    let missing = run(&["solve", &file("nope.tsp")]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("nope.tsp"));
    assert_eq!(run(&["solve", &file("square.tsp"), "--k", "4"]).status.code(), Some(2));
    assert_eq!(
        run(&["solve", &file("square.tsp"), "--iterations", "2", "--target-ratio", "1.1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["solve", &file("square.tsp"), "--samples", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn bound_subcommand() {
    let o = run(&["bound", "--alpha", "2", "--beta", "2", "--lower", "1", "--upper", "5", "--iterations", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let states = v["states"].as_array().unwrap();
    assert_eq!(states.len(), 3);
    assert_eq!(states[1]["b_hat"], 0.125);
    assert!((states[1]["mu"].as_f64().unwrap() - 1.3295).abs() < 1e-4);
    assert_eq!(v["closed_form"][2], 1.28125);

    let t = run(&[
        "bound",
        "--alpha",
        "2",
        "--beta",
        "3",
        "--lower",
        "1",
        "--upper",
        "4",
        "--target-ratio",
        "1.0045662100456621",
    ]);
    let v: Value = serde_json::from_str(&stdout(&t)).unwrap();
    assert_eq!(v["required_k"], 18);

    let low = run(&["bound", "--alpha", "0.8", "--beta", "2", "--lower", "1", "--upper", "4"]);
    assert_eq!(low.status.code(), Some(0));
    assert!(stderr(&low).contains("alpha > 1"));

    let bad = run(&["bound", "--alpha", "-1", "--beta", "2", "--lower", "1", "--upper", "4"]);
    assert_eq!(bad.status.code(), Some(2));
    let unreachable =
        run(&["bound", "--alpha", "2", "--beta", "2", "--lower", "1", "--upper", "4", "--target-ratio", "1"]);
    assert_eq!(unreachable.status.code(), Some(2));
}

#[test]
fn maxtsp_subcommand() {
    let o = run(&["maxtsp", &file("rand10.tsp")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["length"]["source"], "oracle");
    assert_eq!(v["tour"].as_array().unwrap().len(), 10);
}

#[test]
fn bench_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["square.tsp", "grid30.tsp", "broken.tsp"] {
        std::fs::copy(corpus().join(f), dir.path().join(f)).unwrap();
    }
    let json = dir.path().join("bench.json");
    let registry = optima();
    let args = [
        "bench",
        dir.path().to_str().unwrap(),
        "--optima",
        registry.to_str().unwrap(),
        "--no-timings",
        "--out",
        json.to_str().unwrap(),
    ];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = stdout(&o);
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows[0], "name\tn\tbest_length\toptimum\tratio");
    assert!(rows[1].starts_with("grid30\t30\t") && rows[1].ends_with("n/a (A proxy = best-found)"));
    assert!(rows[2].starts_with("square\t4\t4\t4\t1.000000"));
    assert!(stderr(&o).contains("skipped broken.tsp"));
    let first = std::fs::read_to_string(&json).unwrap();

    let again = run(&args);
    assert_eq!(stdout(&again), table);
    assert_eq!(std::fs::read_to_string(&json).unwrap(), first);

    let empty = tempfile::tempdir().unwrap();
    assert_eq!(run(&["bench", empty.path().to_str().unwrap()]).status.code(), Some(2));
}
