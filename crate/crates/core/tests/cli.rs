mod common;

use common::*;
use promotion::cli::{
    execute, BoundsJson, ExploreJson, ExtensionsJson, GraphJson, MatrixJson, Outcome,
    SimulationJson, SpectrumJson, StationaryJson, VerifyJson,
};
use promotion::poset::Poset;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::{Path, PathBuf};
use tempfile::TempDir;

fn write(dir: &Path, name: &str, p: &Poset) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, p.to_text()).unwrap();
    path
}

fn run(args: &[&str]) -> Outcome {
    execute(std::iter::once("promotion").chain(args.iter().copied()))
}

fn round_trip<T: Serialize + DeserializeOwned>(out: &Outcome) -> T {
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: T = serde_json::from_str(&out.stdout).unwrap();
    let again = serde_json::to_string_pretty(&doc).unwrap() + "\n";
    assert_eq!(again, out.stdout);
    doc
}

struct Files {
    _dir: TempDir,
    forest_plus_ladder: String,
    forest: String,
    ladder_2x2: String,
}

fn files() -> Files {
    let dir = TempDir::new().unwrap();
    let forest_plus_ladder = write(dir.path(), "forest_plus_ladder.txt", &forest_plus_ladder());
    let forest = dir.path().join("forest.json");
    std::fs::write(&forest, completed_forest().to_json()).unwrap();
    let ladder_2x2 = write(dir.path(), "ladder_2x2.txt", &ladder_2x2());
    let s = |p: PathBuf| p.to_str().unwrap().to_owned();
    Files {
        forest_plus_ladder: s(forest_plus_ladder),
        forest: s(forest),
        ladder_2x2: s(ladder_2x2),
        _dir: dir,
    }
}

#[test]
fn spectrum_lines() {
    let f = files();
    let out = run(&["spectrum", "--engine", "pipeline", &f.forest_plus_ladder]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines.len(), 6);
    let total: usize = lines
        .iter()
        .map(|l| l.split('\t').nth(1).unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 6);
    assert!(out.stdout.contains("-x1-x2-x3-x4\t1\n"));
}

#[test]
fn verify_passes_and_fails() {
    let f = files();
    let out = run(&[
        "verify",
        "--engine",
        "forest",
        "--samples",
        "3",
        "--seed",
        "7",
        &f.forest,
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("PASS"));
    let out = run(&["verify", "--engine", "forest", &f.forest_plus_ladder]);
    assert_eq!(out.code, 2);
    let out = run(&["verify", "--engine", "a_k_a2", "--k", "3"]);
    assert_eq!(out.code, 0, "{}", out.stderr);

    let dir = TempDir::new().unwrap();
    let wrong = dir.path().join("wrong.tsv");
    std::fs::write(&wrong, "x1+x2+x3+x4\t1\n0\t1\nx3+x4\t1\n-x1\t1\n").unwrap();
    let out = run(&[
        "verify",
        "--spectrum",
        wrong.to_str().unwrap(),
        &f.ladder_2x2,
    ]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.starts_with("FAIL at x = ("), "{}", out.stdout);
    let right = dir.path().join("right.tsv");
    std::fs::write(&right, run(&["spectrum", &f.ladder_2x2]).stdout).unwrap();
    let out = run(&[
        "verify",
        "--spectrum",
        right.to_str().unwrap(),
        &f.ladder_2x2,
    ]);
    assert_eq!(out.code, 0);
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let cyc = dir.path().join("cycle.txt");
    std::fs::write(&cyc, "n 3\ncover 1 2\ncover 2 3\ncover 3 1\n").unwrap();
    let out = run(&["extensions", cyc.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("cycle"));
    assert!(out.stdout.is_empty());

    let f = files();
    for args in [
        vec![
            "stationary",
            "--x",
            "1/2,1/2",
            f.forest_plus_ladder.as_str(),
        ],
        vec![
            "stationary",
            "--x",
            "0,1,1,1,1,1",
            "--normalize",
            f.forest_plus_ladder.as_str(),
        ],
        vec![
            "stationary",
            "--x",
            "-1,2,1,1,1,1",
            "--normalize",
            f.forest_plus_ladder.as_str(),
        ],
        vec![
            "stationary",
            "--x",
            "1,1,1,1,1,1",
            f.forest_plus_ladder.as_str(),
        ],
        vec!["bounds", "--c", "-1", f.forest_plus_ladder.as_str()],
        vec![
            "spectrum",
            "--engine",
            "ladder",
            f.forest_plus_ladder.as_str(),
        ],
        vec!["frobnicate"],
        vec!["extensions", "/no/such/file"],
    ] {
        let out = run(&args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn text_outputs() {
    let f = files();
    let ext = run(&["extensions", &f.forest_plus_ladder]);
    assert_eq!(
        ext.stdout,
        "123456\n123465\n132456\n132465\n312456\n312465\n"
    );
    let graph = run(&["graph", &f.forest_plus_ladder]);
    assert_eq!(graph.stdout.lines().count(), 36);
    assert!(graph.stdout.contains("312465\t312456\t2\n"));
    let m = run(&["matrix", &f.forest_plus_ladder]);
    assert!(m.stdout.starts_with("x6\tx3+x4+x5\t0\tx1+x2\t0\t0\n"));
    let m = run(&[
        "matrix",
        "--eval",
        "1,1,1,1,1,1",
        "--normalize",
        &f.forest_plus_ladder,
    ]);
    assert!(
        m.stdout.starts_with("1/6\t1/2\t0/1\t1/3\t0/1\t0/1\n"),
        "{}",
        m.stdout
    );
    let s = run(&[
        "stationary",
        "--x",
        "1/6,1/6,1/6,1/6,1/6,1/6",
        &f.forest_plus_ladder,
    ]);
    assert_eq!(s.stdout.lines().count(), 7);
    assert!(s.stdout.lines().last().unwrap().starts_with("Z_P = "));
    let b = run(&["bounds", "--c", "3", &f.forest_plus_ladder]);
    assert!(b.stdout.starts_with("mixing_time\t96\n"), "{}", b.stdout);
    let l = run(&["spectrum", "--engine", "ladder", &f.ladder_2x2]);
    assert_eq!(l.stdout.lines().count(), 4);
}

#[test]
fn deterministic_output() {
    let f = files();
    for args in [
        vec![
            "simulate",
            "--steps",
            "20",
            "--trials",
            "500",
            "--seed",
            "3",
            f.forest_plus_ladder.as_str(),
        ],
        vec![
            "verify",
            "--samples",
            "2",
            "--seed",
            "1",
            f.forest_plus_ladder.as_str(),
        ],
        vec!["explore", f.ladder_2x2.as_str()],
        vec!["graph", "--format", "json", f.forest_plus_ladder.as_str()],
    ] {
        assert_eq!(run(&args), run(&args));
    }
}

#[test]
fn json_documents_round_trip() {
    let f = files();
    let e: ExtensionsJson = round_trip(&run(&[
        "extensions",
        "--format",
        "json",
        &f.forest_plus_ladder,
    ]));
    assert_eq!(e.count, 6);
    let g: GraphJson = round_trip(&run(&["graph", "--format", "json", &f.forest_plus_ladder]));
    assert_eq!(g.edges.len(), 36);
    let m: MatrixJson = round_trip(&run(&["matrix", "--format", "json", &f.forest_plus_ladder]));
    assert_eq!(m.entries[0][1], "x3+x4+x5");
    let m: MatrixJson = round_trip(&run(&[
        "matrix",
        "--format",
        "json",
        "--eval",
        "1/6,1/6,1/6,1/6,1/6,1/6",
        &f.forest_plus_ladder,
    ]));
    assert_eq!(m.entries[0][1], "1/2");
    let s: SpectrumJson = round_trip(&run(&[
        "spectrum",
        "--format",
        "json",
        &f.forest_plus_ladder,
    ]));
    assert_eq!(s.total, 6);
    let s: StationaryJson = round_trip(&run(&[
        "stationary",
        "--format",
        "json",
        &f.forest_plus_ladder,
    ]));
    assert!(s.closed_form);
    let b: BoundsJson = round_trip(&run(&[
        "bounds",
        "--format",
        "json",
        "--c",
        "3",
        &f.forest_plus_ladder,
    ]));
    assert_eq!(b.k, 96);
    let sim: SimulationJson = round_trip(&run(&[
        "simulate",
        "--steps",
        "96",
        "--trials",
        "2000",
        "--seed",
        "5",
        &f.forest_plus_ladder,
    ]));
    assert_eq!(sim.distribution.iter().map(|e| e.count).sum::<u64>(), 2000);
    let v: VerifyJson = round_trip(&run(&["verify", "--format", "json", &f.forest]));
    assert_eq!(v.verdict, "PASS");
    let x: ExploreJson = round_trip(&run(&["explore", "--format", "json", &f.ladder_2x2]));
    assert_eq!(x.candidate.unwrap().total, 4);
}
