use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn smrlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smrlab")).args(args).arg("--out-dir").arg(out).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stderr_line(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).lines().next().unwrap_or_default().to_string()
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn kappa_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("bad_kappa.json");
    let o = smrlab(&["--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let line = stderr_line(&o);
    assert!(line.starts_with("error: kind=parameter_range field=kappa reason="), "{line}");
    assert!(line.contains("kappa = 0 when p = 2"));
}

#[test]
fn unknown_subcommand_and_malformed_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"subcommand": "frobnicate"}"#);
    let o = smrlab(&["--config", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_line(&o).starts_with("error: kind=unknown_subcommand field=subcommand"));

    let cfg = write_config(dir.path(), r#"{"subcommand": "solve", "lattice": {"d": 1}"#);
    let o = smrlab(&["--config", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_line(&o).starts_with("error: kind=config"));

    let cfg = write_config(dir.path(), r#"{"subcommand": "solve", "lattice": {"d": 1, "K": 8}}"#);
    let o = smrlab(&["--config", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_line(&o), "error: kind=config field=coefficients reason=required by solve");

    let o = smrlab(&["norms", "--config", &configs().join("budget.json").to_string_lossy()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_line(&o).contains("field=subcommand"));

    let o = smrlab(&["--bogus"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
}

#[test]
fn norm_fields_are_mandatory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"subcommand": "smr-experiment", "norm": {"p": 4, "q": 2, "sigma": 0}}"#);
    let o = smrlab(&["--config", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_line(&o).contains("field=kappa"));
}

#[test]
fn blow_up_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"subcommand": "solve", "lattice": {"d": 1, "K": 8}, "form": "divergence",
            "coefficients": {"kind": "constant", "m": 1, "n_noise": 1, "a": [1.0], "b": [40.0]},
            "time": {"s": 0, "T": 1, "M": 2000}, "base_seed": 1,
            "data": {"u0": {"amplitude": 1.0, "decay": 1.0}}}"#,
    );
    let o = smrlab(&["--config", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr_line(&o).starts_with("error: kind=blow_up field=seed="), "{}", stderr_line(&o));
}

#[test]
fn check_parabolicity_identity() {
    let dir = tempfile::tempdir().unwrap();
    let o = smrlab(&["--config", &configs().join("parabolicity_identity.json").to_string_lossy()], dir.path());
    assert!(o.status.success());
    let v = json(dir.path().join("parabolicity.json"));
    assert_eq!(v["schema_version"], 1);
    assert!((v["margin"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["pass"], true);
}

#[test]
fn smoke_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let o = smrlab(&["--config", &configs().join("heat_smoke.json").to_string_lossy()], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(start.elapsed() < Duration::from_secs(10));
    let csv = std::fs::read_to_string(dir.path().join("ratios.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# generated_at="));
    assert_eq!(lines.next().unwrap(), "experiment_id,path_id,p,q,sigma,kappa,K,M,N_noise,margin,J,sol_norm,ratio");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 16);
    for (i, r) in rows.iter().enumerate() {
        let cols: Vec<&str> = r.split(',').collect();
        assert_eq!(cols.len(), 13);
        assert_eq!(cols[0], "heat-smoke");
        assert_eq!(cols[1], i.to_string());
        assert_eq!(&cols[6..8], ["32", "128"]);
        assert!(cols[9..].iter().all(|c| c.parse::<f64>().unwrap().is_finite()));
    }
    let summary = json(dir.path().join("summary.json"));
    assert_eq!(summary["schema_version"], 1);
    assert!(summary["generated_at"].is_string());
    assert_eq!(summary["levels"][0]["n_paths"], 16);
    let svg = std::fs::read_to_string(dir.path().join("ratio.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<path"));
}

#[test]
fn reproducible_with_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("random_stochastic.json");
    let cfg = cfg.to_string_lossy();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(smrlab(&["--config", &cfg, "--reproducible", "--threads", "1"], &a).status.success());
    assert!(smrlab(&["--config", &cfg, "--reproducible", "--threads", "3"], &b).status.success());
    for f in ["ratios.csv", "summary.json", "ratio.svg"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let summary = json(a.join("summary.json"));
    assert!(summary.get("generated_at").is_none());
    assert_eq!(summary["levels"].as_array().unwrap().len(), 2);
    assert_eq!(summary["levels"][1]["K"], 32);
    assert_eq!(summary["levels"][1]["n_paths"], 64);
}

#[test]
fn other_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = smrlab(&["--config", &configs().join(format!("{name}.json")).to_string_lossy(), "--reproducible"], &out);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let budget = json(run("budget").join("budget.json"));
    assert_eq!(budget["pass"], true);
    assert!((budget["eta"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let norms = run("norms_holder");
    let table = json(norms.join("norms.json"));
    assert_eq!(table["rows"].as_array().unwrap().len(), 5);
    assert!(std::fs::read_to_string(norms.join("norms.csv")).unwrap().starts_with("norm,s,q,p,value\n"));

    let mult = json(run("multiplication").join("multiplication.json"));
    assert_eq!(mult["cases"].as_array().unwrap().len(), 2);
    assert!(mult["cases"][0]["max_ratio"].as_f64().unwrap() > 0.0);

    let solve = run("solve_scalar");
    let bytes = std::fs::read(solve.join("trajectory.bin")).unwrap();
    let (header, times, snaps) = smrlab::solver::read_trajectory(&mut bytes.as_slice()).unwrap();
    assert_eq!((header.d, header.k, header.steps), (1, 16, 100));
    assert_eq!(times.len(), 101);
    assert_eq!(snaps.len(), 101);
}

#[test]
fn field_file_norms() {
    let dir = tempfile::tempdir().unwrap();
    let values: Vec<f64> = (0..16).map(|i| (2.0 * std::f64::consts::PI * (i as f64 / 16.0 - 0.5)).sin()).collect();
    let doc = serde_json::json!({"d": 1, "K": 8, "components": 1, "values": [values]});
    std::fs::write(dir.path().join("field.json"), doc.to_string()).unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"subcommand": "norms", "field": {"file": "field.json"}, "norms": {"bessel": [[0, 2]]}}"#,
    );
    let o = smrlab(&["--config", &cfg], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(dir.path().join("norms.json"));
    assert!((v["rows"][0]["value"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
}
