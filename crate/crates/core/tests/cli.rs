use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maritime-relay"))
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn run_single_with_shipped_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("single.conf");
    let o = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--arch",
        "fpr",
        "--out",
        &out_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["slots.csv", "energy.csv", "summary.json", "cdf.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let slots = std::fs::read_to_string(dir.path().join("slots.csv")).unwrap();
    assert_eq!(slots.lines().count(), 1 + 10);
    assert!(slots
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(2) == Some("fpr")));
}

#[test]
fn compare_is_byte_identical_across_invocations() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&[
            "compare",
            "--scenario",
            "multi",
            "--runs",
            "2",
            "--seed",
            "9",
            "--out",
            &out_arg(d.path()),
        ]);
        assert!(o.status.success());
    }
    for f in ["slots.csv", "energy.csv", "summary.json", "cdf.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn seed_changes_multi_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(run(&[
        "run",
        "--scenario",
        "multi",
        "--seed",
        "1",
        "--out",
        &out_arg(a.path())
    ])
    .status
    .success());
    assert!(run(&[
        "run",
        "--scenario",
        "multi",
        "--seed",
        "2",
        "--out",
        &out_arg(b.path())
    ])
    .status
    .success());
    assert_ne!(
        std::fs::read(a.path().join("slots.csv")).unwrap(),
        std::fs::read(b.path().join("slots.csv")).unwrap()
    );
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "seed = 3\narch = xyz\n").unwrap();
    let o = run(&[
        "run",
        "--config",
        bad.to_str().unwrap(),
        "--out",
        &out_arg(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("nr") && err.contains("lsmr"), "{err}");

    let o = run(&["run", "--arch", "xyz", "--out", &out_arg(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["run", "--scenario", "huge", "--out", &out_arg(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn runtime_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.conf");
    let o = run(&[
        "run",
        "--config",
        missing.to_str().unwrap(),
        "--out",
        &out_arg(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["linkbudget", "--distance", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn linkbudget_prints_the_chain() {
    let o = run(&["linkbudget", "--distance", "500", "--ebn0-db", "10"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let labels: Vec<&str> = text
        .lines()
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(
        labels,
        [
            "distance_m",
            "fspl",
            "fspl_db",
            "eirp_w",
            "rx_power_w",
            "rx_power_dbm",
            "noise_power_w",
            "pr_over_n",
            "pr_over_n_db",
            "pr_over_n0",
            "rate_bps",
            "spectral_efficiency"
        ]
    );
    let value = |label: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(label))
            .and_then(|l| l.split_whitespace().nth(1))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(value("distance_m"), 500.0);
    let at_1000 = run(&["linkbudget", "--distance", "1000"]);
    let text_1000 = String::from_utf8(at_1000.stdout).unwrap();
    let rate_1000: f64 = text_1000
        .lines()
        .find(|l| l.starts_with("rate_bps"))
        .and_then(|l| l.split_whitespace().nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!((rate_1000 * 4.0 / value("rate_bps") - 1.0).abs() < 1e-12);
}
