use appell_core::harness::{
    run_convention_gate, run_cross_engine, run_formal_suite, run_modular_suite, run_numeric_suite, HarnessConfig,
    SamplePlan,
};
use appell_core::registry::Registry;

fn report_failures(r: &appell_core::harness::VerificationReport) {
    for l in r.failure_lines() {
        eprintln!("  {l}");
    }
}

#[test]
fn numeric_suite_full_registry() {
    let reg = Registry::standard();
    let r = run_numeric_suite(&reg, &HarnessConfig::default(), &[]).unwrap();
    report_failures(&r);
    assert_eq!(r.identities.len(), reg.len());
    assert!(r.identities.iter().all(|i| i.samples_used > 0));
    assert!(r.pass);
}

#[test]
fn formal_suite_all_provable() {
    let reg = Registry::standard();
    let r = run_formal_suite(&reg, &HarnessConfig::default(), &[]).unwrap();
    report_failures(&r);
    assert!(!r.formal.is_empty());
    assert!(r.pass);
}

#[test]
fn corrupted_entry_is_caught_formally() {
    let reg = Registry::standard().with_corrupted("f1").unwrap();
    let r = run_formal_suite(&reg, &HarnessConfig::default(), &["f1".to_string()]).unwrap();
    assert!(!r.pass);
    assert!(r.formal.iter().all(|f| !f.pass));
}

#[test]
fn modular_and_gate() {
    let cfg = HarnessConfig::default();
    let m = run_modular_suite(&cfg, 20).unwrap();
    report_failures(&m);
    assert_eq!(m.transforms.len(), 24);
    assert!(m.pass);
    let g = run_convention_gate(&cfg).unwrap();
    for rec in &g.gate {
        eprintln!("  {} {:e}", rec.check, rec.max_err);
    }
    assert!(g.pass);
}

#[test]
fn cross_engine_agrees() {
    let r = run_cross_engine(&Registry::standard(), &HarnessConfig::default(), 20).unwrap();
    for c in r.cross_engine.iter().filter(|c| !c.pass) {
        eprintln!("  {} [{}] {}: {:e} {:?}", c.id, c.param, c.side, c.worst_fraction, c.errors);
    }
    assert!(r.pass);
}

#[test]
fn sampling_is_deterministic_and_in_domain() {
    let plan = SamplePlan::default();
    let a = plan.samples("x");
    assert_eq!(a, plan.samples("x"));
    assert_ne!(a, plan.samples("y"));
    assert_eq!(a.len(), 50);
    for s in &a {
        let t = s.tau.tau();
        assert!((-0.5..=0.5).contains(&t.re) && (0.5..=3.0).contains(&t.im));
    }
}

#[test]
fn aggressive_pole_guard_skips_samples() {
    let reg = Registry::standard();
    let ids = vec!["phi1-sl21-line".to_string()];
    let base = run_numeric_suite(&reg, &HarnessConfig::default(), &ids).unwrap();
    let cfg = HarnessConfig { pole_guard: 0.5, ..HarnessConfig::default() };
    let wide = run_numeric_suite(&reg, &cfg, &ids).unwrap();
    assert!(wide.identities[0].samples_used < base.identities[0].samples_used);
    assert!(wide.identities[0].samples_skipped > 0);
}

#[test]
fn json_and_csv_carry_the_same_numbers() {
    let reg = Registry::standard();
    let r = run_numeric_suite(
        &reg,
        &HarnessConfig::default(),
        &["nullwert-00".to_string(), "f2".to_string(), "phi1-sl21-line".to_string()],
    )
    .unwrap();
    let csv = r.to_csv();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let samples = v["samples"].as_array().unwrap();
    let mut rd = csv::Reader::from_reader(csv.as_bytes());
    assert_eq!(rd.headers().unwrap(), vec!["id", "param", "sample_index", "abs_err", "rel_err", "pass"]);
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), samples.len());
    for (row, s) in rows.iter().zip(samples) {
        assert_eq!(&row[0], s["id"].as_str().unwrap());
        assert_eq!(&row[1], s["param"].as_str().unwrap());
        assert_eq!(row[2].parse::<u64>().unwrap(), s["sample_index"].as_u64().unwrap());
        assert_eq!(row[3].parse::<f64>().unwrap(), s["abs_err"].as_f64().unwrap());
        assert_eq!(row[4].parse::<f64>().unwrap(), s["rel_err"].as_f64().unwrap());
        assert_eq!(row[5].parse::<bool>().unwrap(), s["pass"].as_bool().unwrap());
    }
    assert_eq!(
        r.payload(),
        run_numeric_suite(
            &reg,
            &HarnessConfig::default(),
            &["nullwert-00".to_string(), "f2".to_string(), "phi1-sl21-line".to_string()]
        )
        .unwrap()
        .payload()
    );
}

#[test]
fn asymptotic_deviations_settle_except_f4() {
    use appell_core::harness::{run_asymptotic_suite, ASYMPTOTIC_GRID};
    let r = run_asymptotic_suite(&HarnessConfig::default(), &[0.23, 0.41], &ASYMPTOTIC_GRID, 0.05).unwrap();
    assert_eq!(r.asymptotics.len(), 32);
    let unsettled: Vec<_> = r.asymptotics.iter().filter(|a| !a.settles).map(|a| (a.function.as_str(), a.a)).collect();
    // f4 at a = 0.41 dips first and then rises by more than the 10% slack
    assert_eq!(unsettled, vec![("f4", 0.41)]);
    // theta and h rows are within the ratio target at the last grid point
    for a in &r.asymptotics {
        if a.function.starts_with("theta") || a.function.starts_with('h') {
            assert!(a.pass, "{} at a={}: {}", a.function, a.a, a.final_deviation);
        }
    }
}
