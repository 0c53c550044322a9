use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn explorable(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_explorable"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = explorable(args, dir);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn gen_then_run_every_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        &[
            "--seed",
            "7",
            "gen",
            "--family",
            "orientation",
            "--n",
            "8",
            "--edges",
            "4",
            "--corruption",
            "flip:0.5",
            "--out",
            "o.json",
        ],
        d,
    );
    ok(
        &[
            "--seed", "7", "gen", "--family", "sorting", "--n", "6", "--out", "s.json",
        ],
        d,
    );
    for alg in ["offline", "witness", "alg1", "alg2"] {
        let out = ok(
            &[
                "run",
                "--instance",
                "o.json",
                "--algorithm",
                alg,
                "--gamma",
                "3",
                "--assert-bounds",
            ],
            d,
        );
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["algorithm"], alg);
        assert!(v["cost"].as_u64().unwrap() >= v["opt_size"].as_u64().unwrap());
    }
    let out = ok(
        &[
            "--seed",
            "3",
            "run",
            "--instance",
            "s.json",
            "--algorithm",
            "alg2r",
            "--gamma",
            "2.5",
        ],
        d,
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(matches!(v["gamma_used"].as_u64(), Some(2 | 3)));
    assert_eq!(v["seed"], 3);
    let sorted = ok(
        &[
            "run",
            "--instance",
            "s.json",
            "--algorithm",
            "sort",
            "--format",
            "csv",
        ],
        d,
    );
    assert!(sorted.starts_with("instance,family,n,algorithm,"));
    assert_eq!(sorted.lines().count(), 2);
}

#[test]
fn same_seed_same_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a = ok(
        &[
            "--seed",
            "11",
            "gen",
            "--family",
            "sorting",
            "--n",
            "9",
            "--corruption",
            "adversarial",
        ],
        d,
    );
    let b = ok(
        &[
            "--seed",
            "11",
            "gen",
            "--family",
            "sorting",
            "--n",
            "9",
            "--corruption",
            "adversarial",
        ],
        d,
    );
    assert_eq!(a, b);
}

#[test]
fn adversary_run_reports_committed_costs() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(
        &["run", "--adversary", "lberror:1", "--algorithm", "witness"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        (v["cost"].as_u64(), v["opt_size"].as_u64()),
        (Some(2), Some(1))
    );
    let bad = explorable(
        &["run", "--adversary", "lb1:2", "--algorithm", "offline"],
        dir.path(),
    );
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn reduce_builds_the_subdivision_instance() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("tri.txt"), "0 1\n1 2\n# closing edge\n2,0\n").unwrap();
    ok(&["reduce", "--edges", "tri.txt", "--out", "tri.json"], d);
    let csv = ok(
        &[
            "run",
            "--instance",
            "tri.json",
            "--algorithm",
            "offline",
            "--format",
            "csv",
        ],
        d,
    );
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "9");
    assert_eq!(row[7], "5");
}

#[test]
fn learn_feeds_algorithm_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        &[
            "gen", "--family", "fixture", "--name", "fig3l", "--out", "f.json",
        ],
        d,
    );
    ok(
        &[
            "--seed",
            "5",
            "gen",
            "--family",
            "fixture",
            "--name",
            "fig3l",
            "--samples",
            "9",
            "--out",
            "samples.json",
        ],
        d,
    );
    ok(
        &["learn", "--samples", "samples.json", "--out", "p.json"],
        d,
    );
    let p: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("p.json")).unwrap()).unwrap();
    assert_eq!(p["samples"], 9);
    assert!(p["predicted"].is_array());
    let out = ok(
        &[
            "run",
            "--instance",
            "f.json",
            "--algorithm",
            "alg2",
            "--predicted-set",
            "p.json",
        ],
        d,
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["errors"]["pred_mandatory"], p["predicted"]);
    let wrong = explorable(
        &[
            "run",
            "--instance",
            "f.json",
            "--algorithm",
            "alg1",
            "--predicted-set",
            "p.json",
        ],
        d,
    );
    assert!(!wrong.status.success());
}

#[test]
fn bench_emits_csv_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("bench.toml"),
        r#"
algorithms = ["alg1:2", "alg2:3", "alg2r:2.5", "sort", "offline"]
seeds = [1, 2]

[[sweep]]
family = "sorting"
n = 6
levels = [0.0, 1.0]
count = 2
adversarial = true

[[sweep]]
family = "fixture"
names = ["fig3l", "fig4"]

[[sweep]]
family = "adversary"
specs = ["lb1:2"]
"#,
    )
    .unwrap();
    ok(
        &[
            "bench",
            "--config",
            "bench.toml",
            "--out",
            "a.csv",
            "--assert-bounds",
        ],
        d,
    );
    ok(&["bench", "--config", "bench.toml", "--out", "b.csv"], d);
    let a = fs::read_to_string(d.join("a.csv")).unwrap();
    assert_eq!(a, fs::read_to_string(d.join("b.csv")).unwrap());
    assert!(a.lines().skip(1).all(|l| l.ends_with(",true")));
    let plot = ok(
        &[
            "--vc",
            "approx",
            "bench",
            "--config",
            "bench.toml",
            "--format",
            "plotdata",
        ],
        d,
    );
    assert!(plot.starts_with("series,level,eta,cost,opt,ratio,bound_rhs,bound_ratio"));
    assert!(plot.contains("alg2r@2.5"));
}

#[test]
fn bad_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        &["gen", "--family", "fixture", "--name", "nope"][..],
        &["gen", "--family", "sorting", "--corruption", "flip:2"],
        &["run", "--instance", "missing.json", "--algorithm", "alg1"],
        &["gen", "--family", "adversary", "--name", "fig5:1:1"],
    ] {
        let out = explorable(args, d);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}
