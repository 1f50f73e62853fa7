use std::fs;
use std::process::{Command, Output};

fn bcseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcseq"))
        .args(args)
        .env_remove("BCSEQ_THREADS")
        .output()
        .expect("spawn bcseq")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn coverage_succeeds_with_json() {
    let o = bcseq(&["coverage", "--sequence", "golden", "--grid", "n_max=10000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["results"][0]["verdict"], "bc-evidence");
    assert!(stderr(&o).contains("coverage: bc-evidence"));
}

#[test]
fn config_errors_exit_with_two() {
    let o = bcseq(&["fa", "--sequence", "sqrt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grids.A"), "{}", stderr(&o));

    let o = bcseq(&["coverage", "--sequence", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));

    let o = bcseq(&["coverage", "--sequence", "golden", "--grid", "n_maxx=10"]);
    assert_eq!(o.status.code(), Some(2));

    let o = bcseq(&["coverage", "--sequence", "golden", "--threads", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"sequence":{"kind":"sqrt"},"criteria":["coverage","bogus"]}"#).unwrap();
    let o = bcseq(&["report", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("criteria[1]"));
}

#[test]
fn runtime_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    fs::write(&a, "{\"schema_version\": 1}").unwrap();
    let o = bcseq(&["compare", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn generate_writes_files_and_text() {
    let o = bcseq(&["generate", "--sequence", "farey", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n0\n0.5\n0.3333333333333333\n0.6666666666666666\n");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("golden.bin");
    let o = bcseq(&["generate", "--sequence", "golden", "--n", "5000", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let spec = format!("file:{}", path.display());
    let direct = bcseq(&["gaps", "--sequence", "golden", "--grid", "n_max=5000"]);
    let imported = bcseq(&["gaps", "--sequence", &spec, "--grid", "n_max=5000"]);
    let values = |o: &Output| serde_json::from_str::<serde_json::Value>(&stdout(o)).unwrap()["results"].clone();
    assert_eq!(values(&direct), values(&imported));
}

#[test]
fn csv_output_parses() {
    let o = bcseq(&["smallsep", "--sequence", "lnln", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let tables = bcseq::report::parse_csv(&text).unwrap();
    assert_eq!(tables[0].criterion, "smallsep");
    let last = tables[0].rows.last().unwrap();
    assert_eq!(last.0, 1e6);
    assert!(last.1 <= 0.08);
    assert!(stderr(&o).contains("smallsep: not-bc-evidence"));
}

#[test]
fn compare_two_saved_reports() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (seq, path) in [("golden", &a), ("sqrt", &b)] {
        let o = bcseq(&["separation", "--sequence", seq, "--grid", "M=10", "--grid", "r_max=4", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let o = bcseq(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("separation.c_hat"));
    let o = bcseq(&["--format", "json", "compare", a.to_str().unwrap(), a.to_str().unwrap()]);
    let cmp: bcseq::report::Comparison = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(cmp.is_identical());
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_bcseq"))
            .args(["pairs", "--sequence", "iid:3", "--grid", "n_max=100000"])
            .env("BCSEQ_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["wall_clock_ms"] = 0.into();
        v
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn report_uses_config_output_settings() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let cfg = dir.path().join("c.json");
    let text = serde_json::json!({
        "sequence": {"kind": "sqrt"},
        "criteria": ["coverage", "gaps"],
        "grids": {"n_max": 10000},
        "output": {"path": out, "format": "csv"},
        "seed": 1
    });
    fs::write(&cfg, text.to_string()).unwrap();
    let o = bcseq(&["report", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let tables = bcseq::report::parse_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(tables.len(), 2);
}

#[test]
fn cantor_subcommand_defaults() {
    let o = bcseq(&["cantor"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"][0]["space"], "cantor");
    assert!(v["baselines"]["coverage.d_hat"].as_f64().unwrap() > 0.0);
}
