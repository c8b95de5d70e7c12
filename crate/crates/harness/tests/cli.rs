use std::path::Path;
use std::process::{Command, Output};

use harness::output::{verify_manifest, MANIFEST_NAME};
use serde_json::Value;

fn gamma_lab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gamma-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("GAMMA_LAB_THREADS", "4")
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn commutation_on_hermite_cubic_holds() {
    let dir = tempfile::tempdir().unwrap();
    let o = gamma_lab(
        &["check", "commutation", "--engine", "gauss", "--f", "h3", "--t", "0.1"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let reports = read_json(&dir.path().join("reports.json"));
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r["verdict"] == "holds"));
    let m = verify_manifest(dir.path()).unwrap();
    assert_eq!(m.exit_status, 0);
    let mut listed: Vec<_> = m.artifacts.iter().map(|a| a.path.clone()).collect();
    let mut on_disk: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != MANIFEST_NAME)
        .collect();
    listed.sort();
    on_disk.sort();
    assert_eq!(listed, on_disk);
}

#[test]
fn deficit_sweep_writes_csv_of_deficit_and_distance() {
    let dir = tempfile::tempdir().unwrap();
    let o = gamma_lab(
        &[
            "deficit",
            "sweep",
            "--n",
            "50",
            "--family",
            "cap-antipodal",
            "--v",
            "0.5",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("family,s,delta,sym_diff,bound"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').skip(1).map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() >= 5);
    for r in &rows {
        assert!(r[1] > 0.0 && r[2] > 0.0 && r[2] <= r[3], "{r:?}");
    }
    let records = std::fs::read_to_string(dir.path().join("records.jsonl")).unwrap();
    assert_eq!(records.lines().count(), rows.len());
}

#[test]
fn same_config_and_seed_give_identical_csv_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    let args = [
        "flow",
        "bobkov",
        "--engine",
        "sphere:10",
        "--f",
        "random",
        "--seed",
        "11",
        "--param",
        "degree=4",
    ];
    for d in [&a, &b] {
        let o = gamma_lab(&args, d.path());
        assert!(o.status.code().is_some());
    }
    let mut other = args.to_vec();
    other[7] = "12";
    gamma_lab(&other, c.path());
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("flow.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));

    let s1 = tempfile::tempdir().unwrap();
    let s2 = tempfile::tempdir().unwrap();
    let sweep = ["deficit", "sweep", "--n", "20", "--family", "all", "--v", "0.4"];
    gamma_lab(&sweep, s1.path());
    gamma_lab(&sweep, s2.path());
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("sweep.csv")).unwrap();
    assert_eq!(read(&s1), read(&s2));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"command": "check", "engine": "gauss", "operation": "commutation", "bogus": 1}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let cfg_arg = cfg.to_str().unwrap();
    assert_eq!(gamma_lab(&["check", "--config", cfg_arg], &out).status.code(), Some(2));
    std::fs::write(&cfg, "{ not json").unwrap();
    assert_eq!(gamma_lab(&["check", "--config", cfg_arg], &out).status.code(), Some(2));
    assert_eq!(gamma_lab(&["check", "no-such-check"], &out).status.code(), Some(2));
    assert_eq!(
        gamma_lab(&["check", "commutation", "--t", "-1"], &out).status.code(),
        Some(2)
    );
    assert_eq!(
        gamma_lab(&["check", "commutation", "--engine", "torus"], &out)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gamma_lab(&["check", "reverse-iso", "--f", "h2"], &out).status.code(),
        Some(2)
    );
    assert_eq!(gamma_lab(&["profile", "gap"], &out).status.code(), Some(2));
    assert!(!out.join(MANIFEST_NAME).exists());
}

#[test]
fn config_file_drives_a_run_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"command": "check", "engine": "sphere:5", "operation": "local-poincare",
            "params": {"t": 0.2}, "options": {"f": "pos"}, "seed": 3}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = gamma_lab(&["check", "--config", cfg.to_str().unwrap(), "--t", "0.4"], &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let used = read_json(&out.join("config.json"));
    assert_eq!(used["engine"], "sphere:5");
    assert_eq!(used["params"]["t"], 0.4);
    assert_eq!(used["options"]["f"], "pos");
}

#[test]
fn violation_exits_one_and_names_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = gamma_lab(&["deficit", "hscan", "--n", "5"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("reports.json"), "{err}");
    assert_eq!(verify_manifest(dir.path()).unwrap().exit_status, 1);
}

#[test]
fn quick_battery_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = gamma_lab(&["battery", "quick"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let s = read_json(&dir.path().join("summary.json"));
    assert_eq!(s["failed"], 0);
    assert!(s["criteria"].as_array().unwrap().len() >= 8);
}

#[test]
fn full_battery_with_broken_c_n_fails_the_bound_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let o = gamma_lab(&["battery", "full", "--param", "c_n_scale=1.01"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let s = read_json(&dir.path().join("summary.json"));
    let criteria = s["criteria"].as_array().unwrap();
    assert!(criteria.len() >= 15);
    let c4 = criteria.iter().find(|c| c["id"] == 4).unwrap();
    assert_eq!(c4["passed"], false);
    let m = verify_manifest(dir.path()).unwrap();
    assert!(m.artifacts.iter().any(|a| a.path == "summary.json"));
    assert!(m.artifacts.iter().any(|a| a.path == "criteria.csv"));
}
