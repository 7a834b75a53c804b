//! End-to-end CLI checks, including the paper-grid determinism acceptance
//! criterion (two invocations must produce byte-identical output trees).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

fn mabsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mabsim"))
}

/// Relative path -> file bytes for every file under `root`.
fn snapshot_tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_path_buf();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

#[test]
fn c10_paper_grid_is_byte_identical_across_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("grid-a");
    let out_b = dir.path().join("grid-b");
    for out in [&out_a, &out_b] {
        let status = mabsim()
            .args(["paper-grid", "--runs", "2", "--out"])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success(), "paper-grid failed");
    }
    let tree_a = snapshot_tree(&out_a);
    let tree_b = snapshot_tree(&out_b);
    assert!(!tree_a.is_empty());
    assert_eq!(
        tree_a.keys().collect::<Vec<_>>(),
        tree_b.keys().collect::<Vec<_>>(),
        "output trees hold different files"
    );
    for (path, bytes) in &tree_a {
        assert_eq!(
            bytes,
            &tree_b[path],
            "{} differs between invocations",
            path.display()
        );
    }
    // the grid covers three complete-graph and three sparse entries
    for entry in [
        "complete_n10_k100",
        "complete_n20_k100",
        "complete_n10_k200",
        "sparse_n100_k250",
        "sparse_n150_k250",
        "sparse_n100_k500",
    ] {
        assert!(out_a.join(entry).join("plot.svg").exists(), "{entry}");
    }
    println!("[acceptance] 10 paper-grid determinism: PASS");
}

#[test]
fn run_subcommand_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("exp");
    let status = mabsim()
        .args([
            "run",
            "--algo",
            "no-comm",
            "--agents",
            "1",
            "--arms",
            "2",
            "--horizon",
            "1000",
            "--seed",
            "7",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for file in ["aggregate.csv", "runs.csv", "meta.json"] {
        assert!(out.join(file).exists(), "{file} missing");
    }
}

#[test]
fn plot_requires_inputs_and_renders_svg() {
    let no_inputs = mabsim().args(["plot", "--out", "x.svg"]).output().unwrap();
    assert!(!no_inputs.status.success());

    let dir = tempfile::tempdir().unwrap();
    let exp = dir.path().join("exp");
    assert!(mabsim()
        .args([
            "run",
            "--algo",
            "lcc-ucb",
            "--agents",
            "3",
            "--arms",
            "9",
            "--horizon",
            "2000",
            "--runs",
            "3",
            "--out",
        ])
        .arg(&exp)
        .status()
        .unwrap()
        .success());
    let svg = dir.path().join("plot.svg");
    assert!(mabsim()
        .args(["plot", "--log-x", "--inputs"])
        .arg(&exp)
        .arg("--out")
        .arg(&svg)
        .status()
        .unwrap()
        .success());
    let contents = std::fs::read_to_string(&svg).unwrap();
    assert!(contents.starts_with("<svg"));
    assert!(contents.contains("lcc-ucb (N=3, K=9)"));
}

#[test]
fn graph_algorithm_without_topology_is_a_usage_error() {
    let output = mabsim()
        .args([
            "run",
            "--algo",
            "lcc-ucb-graph",
            "--agents",
            "4",
            "--arms",
            "8",
        ])
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("topology"), "stderr: {stderr}");
}

#[test]
fn unknown_flags_and_bad_algos_fail() {
    assert!(!mabsim()
        .args(["run", "--algo", "warp-drive"])
        .status()
        .unwrap()
        .success());
    assert!(!mabsim()
        .args(["run", "--bogus"])
        .status()
        .unwrap()
        .success());
}

#[test]
fn config_file_overrides_flags_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("exp.json");
    std::fs::write(
        &config_path,
        r#"{"algo": "no-comm", "agents": 2, "arms": 3, "horizon": 500, "runs": 2}"#,
    )
    .unwrap();
    let out = dir.path().join("exp");
    // --agents 50 is overridden by the config file
    assert!(mabsim()
        .args(["run", "--agents", "50", "--config"])
        .arg(&config_path)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let meta = std::fs::read_to_string(out.join("meta.json")).unwrap();
    assert!(meta.contains("\"agents\": 2"), "{meta}");

    std::fs::write(&config_path, r#"{"algo": "no-comm", "horizonn": 10}"#).unwrap();
    assert!(!mabsim()
        .args(["run", "--config"])
        .arg(&config_path)
        .status()
        .unwrap()
        .success());
}

#[test]
fn thread_cap_does_not_change_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_serial = dir.path().join("serial");
    let out_parallel = dir.path().join("parallel");
    let args = |out: &Path| {
        vec![
            "run".into(),
            "--algo".into(),
            "lcc-ucb".into(),
            "--agents".into(),
            "4".into(),
            "--arms".into(),
            "16".into(),
            "--horizon".into(),
            "4000".into(),
            "--runs".into(),
            "6".into(),
            "--seed".into(),
            "3".into(),
            "--out".into(),
            out.to_string_lossy().into_owned(),
        ]
    };
    assert!(mabsim()
        .args(args(&out_serial))
        .env("MABSIM_THREADS", "1")
        .status()
        .unwrap()
        .success());
    assert!(mabsim()
        .args(args(&out_parallel))
        .env("MABSIM_THREADS", "0")
        .status()
        .unwrap()
        .success());
    for file in ["aggregate.csv", "runs.csv", "meta.json"] {
        assert_eq!(
            std::fs::read(out_serial.join(file)).unwrap(),
            std::fs::read(out_parallel.join(file)).unwrap(),
            "{file} depends on thread count"
        );
    }
}

#[test]
fn compare_orders_algorithms_by_recomputed_medians() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cmp");
    let status = mabsim()
        .args([
            "compare",
            "--algos",
            "lcc-ucb,no-comm",
            "--agents",
            "3",
            "--arms",
            "12",
            "--horizon",
            "3000",
            "--runs",
            "4",
            "--seed",
            "5",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.join("compare.svg").exists());

    // oracle: recompute each algorithm's median final regret from its
    // emitted runs.csv and check the report is sorted accordingly
    let mut finals: Vec<(String, f64)> = ["lcc-ucb", "no-comm"]
        .iter()
        .map(|algo| {
            let stats =
                mabsim_core::experiment::aggregate_from_runs_csv(&out.join(algo).join("runs.csv"))
                    .unwrap();
            (algo.to_string(), stats.final_median())
        })
        .collect();
    finals.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());

    let report = std::fs::read_to_string(out.join("ordering.txt")).unwrap();
    let reported: Vec<&str> = report
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(1).unwrap())
        .collect();
    let expected: Vec<&str> = finals.iter().map(|(a, _)| a.as_str()).collect();
    assert_eq!(reported, expected, "report:\n{report}");
}
