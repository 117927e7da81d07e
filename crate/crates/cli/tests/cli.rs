use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn gframe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gframe")).args(args).output().expect("binary runs")
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

/// `T_k = e_k e_k^*` on `C^3`, as a frame file.
fn onb_frame_json() -> String {
    let ops: Vec<Vec<Vec<[f64; 2]>>> = (0..3)
        .map(|k| (0..3).map(|i| (0..3).map(|j| [if i == k && j == k { 1.0 } else { 0.0 }, 0.0]).collect()).collect())
        .collect();
    serde_json::json!({ "points": [[0.0], [1.0], [2.0]], "operators": ops }).to_string()
}

fn explicit_scenario(dir: &Path, tasks: &str) -> std::path::PathBuf {
    write(&dir.join("onb.json"), &onb_frame_json());
    let cfg = dir.join("onb.toml");
    write(
        &cfg,
        &format!(
            r#"name = "onb"
tasks = [{tasks}]
samples = 10

[model]
kind = "explicit"
file = "onb.json"

[algebra]
kind = "jaffard"
s = 2.0

[[weights]]
p = 2
weight = {{ kind = "unit" }}
"#
        ),
    );
    cfg
}

#[test]
fn onb_bounds_golden() {
    let tmp = TempDir::new().unwrap();
    let cfg = explicit_scenario(tmp.path(), "\"bounds\", \"dual\"");
    let out = tmp.path().join("out");
    let o = gframe(&["run", cfg.to_str().unwrap(), "--output-dir", out.to_str().unwrap(), "--quiet"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let golden = include_str!("golden/onb_bounds.csv");
    assert_eq!(fs::read_to_string(out.join("bounds.csv")).unwrap(), golden);
    let dual = fs::read_to_string(out.join("dual.csv")).unwrap();
    assert!(dual.ends_with(",true\n"), "{dual}");
}

#[test]
fn csv_schemas() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("s.toml");
    write(
        &cfg,
        r#"name = "schemas"
seed = 3
samples = 5
tasks = ["bounds", "dual", "gram_factorization", "localization", "decay", "coorbit", "equivalence", "pairing"]

[model]
kind = "synthetic"
generator = "localized"
decay = 1.5
len = 10
n = 4
seed = 11

[algebra]
kind = "schur"
weight = { kind = "polynomial", s = 1.0 }

[[weights]]
p = 1
weight = { kind = "polynomial", s = 2.0 }

[[weights]]
p = 0.5
weight = { kind = "unit" }
"#,
    );
    let out = tmp.path().join("out");
    let o = gframe(&["run", cfg.to_str().unwrap(), "--output-dir", out.to_str().unwrap(), "--quiet"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let golden = include_str!("golden/headers.txt");
    for line in golden.lines() {
        let (task, header) = line.split_once(' ').unwrap();
        let csv = fs::read_to_string(out.join(format!("{task}.csv"))).unwrap();
        assert_eq!(csv.lines().next().unwrap(), header, "{task}");
    }
    // p < 1 has no Hölder check, so pairing keeps only the p = 1 row.
    assert_eq!(fs::read_to_string(out.join("pairing.csv")).unwrap().lines().count(), 2);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["version"], gframe_cli::VERSION);
    assert_eq!(summary["tasks"]["equivalence"]["rows"][0]["holds"], true);
}

#[test]
fn gabor_gram_factorization_residuals_are_small() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("g.toml");
    write(
        &cfg,
        r#"name = "gabor16"
tasks = ["gram_factorization"]
[model]
kind = "gabor"
L = 16
grid = [2, 4]
[algebra]
kind = "jaffard"
s = 3.0
"#,
    );
    let out = tmp.path().join("out");
    let o = gframe(&["run", cfg.to_str().unwrap(), "--output-dir", out.to_str().unwrap(), "--quiet"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("gram_factorization.csv")).unwrap();
    let values: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(values.len(), 3);
    assert!(values.iter().all(|&v| v <= 1e-8), "{csv}");
}

#[test]
fn task_filter_and_seed_override() {
    let tmp = TempDir::new().unwrap();
    let cfg = explicit_scenario(tmp.path(), "\"bounds\", \"coorbit\"");
    let run = |dir: &str, seed: &str| {
        let out = tmp.path().join(dir);
        let o = gframe(&[
            "run",
            cfg.to_str().unwrap(),
            "--output-dir",
            out.to_str().unwrap(),
            "--tasks",
            "coorbit",
            "--seed-override",
            seed,
            "--quiet",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let a = run("a", "5");
    assert!(!a.join("bounds.csv").exists());
    let b = run("b", "5");
    assert_eq!(fs::read(a.join("coorbit.csv")).unwrap(), fs::read(b.join("coorbit.csv")).unwrap());
    let summary = fs::read_to_string(a.join("summary.json")).unwrap();
    assert!(summary.contains("\"seed\": 5"));
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.toml");
    write(&bad, "name = \"x\"\ntasks = [\"bounds\"]\n[model]\nkind = \"gabor\"\nL = 1024\ngrid = [4, 4]\n[algebra]\nkind = \"jaffard\"\ns = 3.0\n");
    let o = gframe(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("desk-scale guard"));

    // A single operator on C^3 of rank one is not a frame: the dual task must fail.
    let frame = serde_json::json!({
        "points": [[0.0]],
        "operators": [[[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]]],
    });
    write(&tmp.path().join("deficient.json"), &frame.to_string());
    let cfg = tmp.path().join("deficient.toml");
    write(&cfg, "name = \"deficient\"\ntasks = [\"bounds\", \"dual\"]\n[model]\nkind = \"explicit\"\nfile = \"deficient.json\"\n[algebra]\nkind = \"jaffard\"\ns = 3.0\n");
    let out = tmp.path().join("out");
    let o = gframe(&["run", cfg.to_str().unwrap(), "--output-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("task dual failed"));

    let o = gframe(&["run", cfg.to_str().unwrap(), "--tasks", "plot"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn list_tasks_and_version() {
    let o = gframe(&["list-tasks"]);
    let names: Vec<String> = String::from_utf8(o.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(names, gframe_cli::scenario::task_names());
    assert_eq!(names.len(), 8);
    let o = gframe(&["version"]);
    let v = String::from_utf8(o.stdout).unwrap();
    let parts: Vec<&str> = v.trim().split('.').collect();
    assert_eq!(parts.len(), 3);
    assert!(parts.iter().all(|p| p.parse::<u64>().is_ok()));
}
