use std::process::{Command, Output};

fn appell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_appell")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn eval_theta11_at_origin_is_zero() {
    let out = appell(&["eval", "theta11", "--tau", "0,1", "--z", "0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let re = v["value"][0].as_f64().unwrap();
    let im = v["value"][1].as_f64().unwrap();
    assert!(re.hypot(im) <= 1e-12);
}

#[test]
fn eval_eta_at_i() {
    // eta(i) = Gamma(1/4) / (2 pi^{3/4})
    let out = appell(&["eval", "eta", "--tau", "0,1"]);
    let v = json(&out);
    assert!((v["value"][0].as_f64().unwrap() - 0.768_225_422_326_056_6).abs() < 1e-14);
}

#[test]
fn usage_errors_exit_2_with_error_object() {
    for args in [
        vec!["frobnicate"],
        vec!["eval", "nosuch", "--tau", "0,1"],
        vec!["eval", "eta", "--tau", "0,-1"],
        vec!["verify", "--ids", "no-such-id"],
        vec!["verify", "--tol", "-1"],
        vec!["expand", "f1", "--order", "1/7"],
    ] {
        let out = appell(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: serde_json::Value = serde_json::from_slice(&out.stderr).expect("error object");
        assert!(err["error"]["message"].is_string(), "{args:?}");
    }
}

#[test]
fn verify_single_identity_json() {
    let out = appell(&["verify", "--ids", "f1", "--seed", "7", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
    assert_eq!(v["identities"][0]["id"], "f1");
    assert!(v["formal"].as_array().is_some_and(|f| !f.is_empty()));
}

#[test]
fn verify_csv_has_header() {
    let out = appell(&["verify", "--ids", "nullwert-10", "--suite", "numeric", "--format", "csv", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,param,sample_index,abs_err,rel_err,pass"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("appell-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.toml");
    std::fs::write(&path, "samples = 3\nseed = 11\nsuite = [\"numeric\"]\nids = [\"nullwert-00\"]\n").unwrap();
    let p = path.to_str().unwrap();
    let v = json(&appell(&["--config", p, "verify"]));
    assert_eq!(v["metadata"]["samples"], 3);
    assert_eq!(v["metadata"]["seed"], 11);
    let v = json(&appell(&["--config", p, "verify", "--seed", "12"]));
    assert_eq!(v["metadata"]["seed"], 12);
    std::fs::write(&path, "sample = 3\n").unwrap();
    assert_eq!(appell(&["--config", p, "verify"]).status.code(), Some(2));
}

#[test]
fn transform_and_expand() {
    let out = appell(&["transform", "--rule", "t-g1", "--tau", "0.1,1.2", "--z", "0.3,0.2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
    let out = appell(&["transform", "--rule", "ss-f3", "--tau", "0.1,1.2", "--z", "0.3,0.2"]);
    assert_eq!(json(&out)["pass"], true);
    let out = appell(&["expand", "eta", "--order", "49/24"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    // eta = q^{1/24}(1 - q - q^2 + ...)
    assert_eq!(text.lines().next().unwrap().split('\t').next(), Some("1/24"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn asymptote_reports_ratio_and_exit_status() {
    let out = appell(&["asymptote", "--function", "theta00", "--a", "0.23"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["points"].as_array().unwrap().len(), 3);
    let out = appell(&["asymptote", "--function", "f1", "--a", "0.5"]);
    assert_ne!(out.status.code(), Some(0));
}
