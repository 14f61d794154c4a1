use appell_core::formal::ResidualStatus;
use appell_core::registry::{prove_identity, Params, Registry};
use appell_core::{ModularPoint, QExponent, SeriesTruncation, C64};

fn tr() -> SeriesTruncation {
    SeriesTruncation::new(1e-15, 1_000_000).unwrap()
}

fn points() -> Vec<(ModularPoint, C64)> {
    let mut out = Vec::new();
    for (i, (re, im)) in [(0.13, 0.9), (-0.31, 0.62), (0.44, 2.1), (0.0, 1.3), (-0.07, 0.55)].into_iter().enumerate() {
        let tau = ModularPoint::from_parts(re, im).unwrap();
        let (al, be) = [(0.27, 0.11), (0.61, 0.37), (0.83, 0.71), (0.12, 0.58), (0.44, 0.93)][i];
        out.push((tau, tau.tau() * al + be));
    }
    out
}

#[test]
fn every_entry_agrees_numerically() {
    let reg = Registry::standard();
    let mut worst = Vec::new();
    for d in reg.iter() {
        for p in &d.sweep {
            let (l, r) = d.sides(p).unwrap();
            for (tau, z) in points() {
                let a = l.eval(&tau, z, &tr());
                let b = r.eval(&tau, z, &tr());
                let (a, b) = match (a, b) {
                    (Ok(a), Ok(b)) => (a, b),
                    (x, y) => panic!("{} [{p}] at {tau:?} {z}: {x:?} {y:?}", d.id),
                };
                let abs = (a - b).norm();
                let rel = abs / a.norm().max(b.norm()).max(1e-30);
                let ok = if d.is_vanishing(p) { abs <= 1e-12 } else { rel <= 1e-9 };
                if !ok {
                    worst.push(format!(
                        "{} [{p}] tau={} z={z}: lhs={a} rhs={b} rel={rel:e} abs={abs:e}",
                        d.id,
                        tau.tau()
                    ));
                }
            }
        }
    }
    assert!(worst.is_empty(), "{}", worst.join("\n"));
}

#[test]
fn formal_residuals_vanish_through_q5() {
    let reg = Registry::standard();
    let mut bad = Vec::new();
    for d in reg.iter() {
        for p in d.formal_sweep() {
            match prove_identity(&reg, &d.id, &p, QExponent::from_int(5)) {
                Ok(proof) if proof.status == ResidualStatus::Zero => {}
                // both sides vanish identically: nothing survives below the cutoff
                Ok(proof) if proof.status == ResidualStatus::Trivial && d.is_vanishing(&p) => {}
                Ok(proof) => bad.push(format!("{} [{p}]: {:?}", d.id, proof.status)),
                Err(e) => bad.push(format!("{} [{p}]: {e}", d.id)),
            }
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn registry_shape() {
    let reg = Registry::standard();
    assert_eq!(reg.len(), 44);
    let mut anchors = std::collections::HashSet::new();
    for d in reg.iter() {
        assert!(!d.anchor.is_empty());
        assert!(anchors.insert(d.anchor.clone()), "duplicate anchor for {}", d.id);
        assert!(!d.sweep.is_empty(), "{}", d.id);
    }
    let json = reg.to_json();
    assert_eq!(json.as_array().unwrap().len(), 44);
}

#[test]
fn invalid_line_parameters_are_rejected() {
    let reg = Registry::standard();
    let d = reg.get("osp-combination-integer-a").unwrap();
    let p: Params = "a=1,b=1/2".parse().unwrap();
    assert!(matches!(d.sides(&p), Err(appell_core::Error::Domain(_))));
    let d = reg.get("phi1-osp32-line").unwrap();
    assert!(d.sides(&"a=1,b=0".parse().unwrap()).is_err());
}

/// Both sides of every entry pick up the same constant root of unity under
/// `z -> z + 1`; the table is read off at the first point and then asserted
/// at the others.
#[test]
fn unit_shift_sign_table() {
    let reg = Registry::standard();
    let units = [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)];
    let mut table = Vec::new();
    let mut bad = Vec::new();
    for d in reg.iter() {
        for p in d.sweep.iter().filter(|p| !d.is_vanishing(p)) {
            let (l, r) = d.sides(p).unwrap();
            let mut sign: Option<C64> = None;
            for (tau, z) in points() {
                for (side, e) in [("lhs", &l), ("rhs", &r)] {
                    let ratio = e.eval(&tau, z + 1.0, &tr()).unwrap() / e.eval(&tau, z, &tr()).unwrap();
                    let s = *sign.get_or_insert_with(|| {
                        *units.iter().min_by(|a, b| (ratio - **a).norm().total_cmp(&(ratio - **b).norm())).unwrap()
                    });
                    if (ratio - s).norm() > 1e-9 {
                        bad.push(format!("{} [{p}] {side} at tau={}: ratio {ratio}, table {s}", d.id, tau.tau()));
                    }
                }
            }
            table.push((d.id.clone(), p.to_string(), sign.unwrap()));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
    // Only +-1 occurs: every z-dependence enters through y = e^{pi i z} with integral exponents.
    assert!(table.iter().all(|(_, _, s)| s.im == 0.0), "{table:?}");
    assert!(table.iter().any(|(_, _, s)| s.re < 0.0) && table.iter().any(|(_, _, s)| s.re > 0.0));
}
