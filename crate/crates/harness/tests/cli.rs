use std::path::Path;
use std::process::Command;

fn geomc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_geomc")).args(args).output().unwrap()
}

fn write_config(dir: &Path, v: serde_json::Value) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

fn gaussian() -> serde_json::Value {
    serde_json::json!({
        "target": {"kind": "gaussian", "mean": [0.0, 0.0], "cov_diag": [1.0, 4.0], "warp": 1.0},
        "kernel": "lmlmc",
        "step_size": 0.5,
        "alpha1": 0.5,
        "k_max": 5,
        "n_steps": 50,
        "n_chains": 8,
        "n_reference": 200
    })
}

#[test]
fn subcommands_write_their_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), gaussian());
    let out = dir.path().join("out");
    let out_s = out.to_str().unwrap();

    let r = geomc(&["run", "--config", &cfg, "--seed", "5", "--out-dir", out_s]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let trace = out.join("trace_000.csv");
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.contains("# base_seed 5\n"));
    assert!(out.join("metrics_007.json").exists());

    let r = geomc(&["mmd-curve", "--config", &cfg, "--out-dir", out_s]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let curve = std::fs::read_to_string(out.join("curve.csv")).unwrap();
    assert!(curve.starts_with("step,mmd_u2_abs\n"));
    assert_eq!(curve.lines().count(), 51);

    let r = geomc(&["reference", "--config", &cfg, "--out-dir", out_s]);
    assert!(r.status.success());
    let reference = out.join("reference.csv");
    assert!(std::fs::read_to_string(&reference).unwrap().starts_with("q0,q1\n"));

    let r = geomc(&[
        "diagnose",
        trace.to_str().unwrap(),
        "--reference",
        reference.to_str().unwrap(),
        "--n-projections",
        "7",
        "--out-dir",
        out_s,
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let d: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("diagnose.json")).unwrap()).unwrap();
    assert_eq!(d[0]["ks"].as_array().unwrap().len(), 7);
    assert!(d[0]["wall_time_sec"].is_null());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = gaussian();
    v["n_steps"] = 0.into();
    let cfg = write_config(dir.path(), v);
    let r = geomc(&["run", "--config", &cfg]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("n_steps must be ≥ 1"));

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let r = geomc(&["diagnose", empty.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("empty.csv"));

    // An initial point outside the support fails at run time.
    let mut v = gaussian();
    v["target"] = serde_json::json!({"kind": "funnel", "n": 2});
    v["initial_point"] = serde_json::json!([1000.0, 1.0, 1.0]);
    v["kernel"] = "rmhmc".into();
    v["alpha1"] = 0.0.into();
    let cfg = write_config(dir.path(), v);
    let r = geomc(&["run", "--config", &cfg, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1), "{}", String::from_utf8_lossy(&r.stderr));

    let r = geomc(&["run", "--config", "/nonexistent/config.json"]);
    assert_eq!(r.status.code(), Some(1));
    let r = geomc(&["bogus"]);
    assert_eq!(r.status.code(), Some(2));
}
