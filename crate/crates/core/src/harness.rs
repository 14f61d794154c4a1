//! Seeded sampling, the verification suites and their reports.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::formal::{cutoff_for, expand, ResidualStatus};
use crate::modular::{
    asymptotic_rules, check_asymptotic, check_transform, deviations_settle, transform_rules, AsymptoticPoint,
    TransformKind,
};
use crate::qseries::{theta, theta_km_signed, theta_nullwerte, ThetaChar};
use crate::registry::{prove_identity, Params, Registry};
use crate::{Error, HalfInt, ModularPoint, QExponent, Result, SeriesTruncation, ThetaIndex, C64};

pub const SCHEMA_VERSION: u32 = 1;

/// Settings shared by the suites; every field has a default and can be
/// overridden from a config file or the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    pub seed: u64,
    pub samples: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub pole_guard: f64,
    /// Relative tail target of every series.
    pub series_tolerance: f64,
    pub max_terms: usize,
    /// Proof order as a whole power of `q`.
    pub order: i64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            seed: 7,
            samples: 50,
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            pole_guard: 1e-6,
            series_tolerance: 1e-15,
            max_terms: 1_000_000,
            order: 5,
        }
    }
}

impl HarnessConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |x: f64, what: &str| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{what} must be positive, got {x}")))
            }
        };
        pos(self.rel_tol, "rel_tol")?;
        pos(self.abs_tol, "abs_tol")?;
        pos(self.pole_guard, "pole_guard")?;
        pos(self.series_tolerance, "series_tolerance")?;
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.order < 0 {
            return Err(Error::Config(format!("order must be >= 0, got {}", self.order)));
        }
        Ok(())
    }

    pub fn truncation(&self) -> Result<SeriesTruncation> {
        SeriesTruncation::with_pole_guard(self.series_tolerance, self.max_terms, self.pole_guard)
    }

    pub fn plan(&self) -> SamplePlan {
        SamplePlan { count: self.samples, seed: self.seed, pole_guard: self.pole_guard, ..SamplePlan::default() }
    }
}

/// Where and how many points are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SamplePlan {
    pub count: usize,
    pub seed: u64,
    pub pole_guard: f64,
    pub re_tau: (f64, f64),
    pub im_tau: (f64, f64),
    /// `z = alpha tau + beta`.
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            count: 50,
            seed: 7,
            pole_guard: 1e-6,
            re_tau: (-0.5, 0.5),
            im_tau: (0.5, 3.0),
            alpha: (0.05, 0.95),
            beta: (0.05, 0.95),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub index: usize,
    pub tau: ModularPoint,
    pub z: C64,
}

/// FNV-1a, so that streams do not depend on the standard library's hasher.
fn stream_key(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl SamplePlan {
    /// The points for one labelled stream; depends only on `(seed, label)`.
    pub fn samples(&self, label: &str) -> Vec<Sample> {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_key(self.seed, label));
        (0..self.count)
            .map(|index| {
                let re = rng.gen_range(self.re_tau.0..=self.re_tau.1);
                let im = rng.gen_range(self.im_tau.0..=self.im_tau.1);
                let al = rng.gen_range(self.alpha.0..self.alpha.1);
                let be = rng.gen_range(self.beta.0..self.beta.1);
                let tau = ModularPoint::from_parts(re, im).expect("upper half-plane");
                Sample { index, tau, z: tau.tau() * al + be }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleRecord {
    pub id: String,
    pub param: String,
    pub sample_index: usize,
    pub tau: [f64; 2],
    pub z: [f64; 2],
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub abs_err: f64,
    pub rel_err: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Relative,
    Absolute,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamReport {
    pub param: String,
    pub criterion: Criterion,
    pub samples_used: usize,
    pub samples_skipped: usize,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub errors: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub samples_used: usize,
    pub samples_skipped: usize,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub pass: bool,
    pub params: Vec<ParamReport>,
    pub failures: Vec<SampleRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormalRecord {
    pub id: String,
    pub param: String,
    pub order: QExponent,
    #[serde(flatten)]
    pub status: ResidualStatus,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformRecord {
    pub rule: String,
    pub samples_used: usize,
    pub samples_skipped: usize,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub errors: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticRecord {
    pub function: String,
    pub a: f64,
    pub points: Vec<AsymptoticPoint>,
    /// `|ratio - 1|` at the smallest `T`.
    pub final_deviation: f64,
    pub tolerance: f64,
    pub settles: bool,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateRecord {
    pub check: String,
    pub samples_used: usize,
    pub max_err: f64,
    pub criterion: Criterion,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossEngineRecord {
    pub id: String,
    pub param: String,
    pub side: String,
    pub points: usize,
    /// Largest `|numeric - formal| / allowance` seen; at most 1 on success.
    pub worst_fraction: f64,
    pub errors: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteMetadata {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub pole_guard: f64,
    pub series_tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub metadata: SuiteMetadata,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<IdentityReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<SampleRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub formal: Vec<FormalRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub transforms: Vec<TransformRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub asymptotics: Vec<AsymptoticRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub gate: Vec<GateRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cross_engine: Vec<CrossEngineRecord>,
    /// Seconds; the only field that varies between identical runs.
    pub wall_time_s: f64,
}

impl VerificationReport {
    fn new(suite: &str, cfg: &HarnessConfig) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            metadata: SuiteMetadata {
                suite: suite.to_string(),
                seed: cfg.seed,
                samples: cfg.samples,
                rel_tol: cfg.rel_tol,
                abs_tol: cfg.abs_tol,
                pole_guard: cfg.pole_guard,
                series_tolerance: cfg.series_tolerance,
            },
            pass: true,
            identities: Vec::new(),
            samples: Vec::new(),
            formal: Vec::new(),
            transforms: Vec::new(),
            asymptotics: Vec::new(),
            gate: Vec::new(),
            cross_engine: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    /// Everything but the wall time.
    pub fn payload(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("wall_time_s");
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per evaluated sample: `id,param,sample_index,abs_err,rel_err,pass`.
    /// Numbers are written exactly as in the JSON report.
    pub fn to_csv(&self) -> String {
        let num = |x: f64| serde_json::to_string(&x).expect("number");
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "param", "sample_index", "abs_err", "rel_err", "pass"]).expect("in-memory write");
        for s in &self.samples {
            w.write_record([
                s.id.clone(),
                s.param.clone(),
                s.sample_index.to_string(),
                num(s.abs_err),
                num(s.rel_err),
                s.pass.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn failure_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in self.identities.iter().filter(|i| !i.pass) {
            out.push(format!("{}: max rel {:e}, max abs {:e}", i.id, i.max_rel_err, i.max_abs_err));
        }
        for f in self.formal.iter().filter(|f| !f.pass) {
            out.push(format!("{} [{}]: {:?}", f.id, f.param, f.status));
        }
        for t in self.transforms.iter().filter(|t| !t.pass) {
            out.push(format!("{}: max rel {:e} > {:e}", t.rule, t.max_rel_err, t.tolerance));
        }
        for a in self.asymptotics.iter().filter(|a| !a.pass) {
            out.push(format!("{} a={}: |ratio-1| = {:.4}", a.function, a.a, a.final_deviation));
        }
        out
    }
}

fn pair(c: C64) -> [f64; 2] {
    [c.re, c.im]
}

fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-30)
}

fn select<'a>(registry: &'a Registry, ids: &[String]) -> Result<Vec<&'a crate::registry::IdentityDescriptor>> {
    if ids.is_empty() {
        return Ok(registry.iter().collect());
    }
    ids.iter().map(|id| registry.get(id)).collect()
}

/// Numeric check of each selected identity over its parameter sweep. An
/// empty selection means the whole registry.
pub fn run_numeric_suite(registry: &Registry, cfg: &HarnessConfig, ids: &[String]) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let plan = cfg.plan();
    let trunc = cfg.truncation()?;
    let chosen = select(registry, ids)?;
    let tasks: Vec<_> = chosen.iter().flat_map(|d| d.sweep.iter().map(move |p| (*d, *p))).collect();
    let results: Vec<(ParamReport, Vec<SampleRecord>)> = tasks
        .par_iter()
        .map(|(d, p)| {
            let param = p.to_string();
            let vanishing = d.is_vanishing(p);
            let mut rep = ParamReport {
                param: param.clone(),
                criterion: if vanishing { Criterion::Absolute } else { Criterion::Relative },
                samples_used: 0,
                samples_skipped: 0,
                max_abs_err: 0.0,
                max_rel_err: 0.0,
                errors: Vec::new(),
                pass: true,
            };
            let (lhs, rhs) = match d.sides(p) {
                Ok(s) => s,
                Err(e) => {
                    rep.errors.push(e.to_string());
                    rep.pass = false;
                    return (rep, Vec::new());
                }
            };
            let mut records = Vec::new();
            for s in plan.samples(&format!("{}|{}", d.id, param)) {
                let both = lhs.eval(&s.tau, s.z, &trunc).and_then(|l| Ok((l, rhs.eval(&s.tau, s.z, &trunc)?)));
                let (l, r) = match both {
                    Ok(v) => v,
                    Err(e) if e.is_pole() => {
                        rep.samples_skipped += 1;
                        continue;
                    }
                    Err(e) => {
                        rep.errors.push(format!("sample {}: {e}", s.index));
                        rep.pass = false;
                        continue;
                    }
                };
                let abs = (l - r).norm();
                let rel = rel_err(l, r);
                let pass = if vanishing { abs <= cfg.abs_tol } else { rel <= cfg.rel_tol };
                rep.samples_used += 1;
                rep.max_abs_err = rep.max_abs_err.max(abs);
                rep.max_rel_err = rep.max_rel_err.max(rel);
                rep.pass &= pass;
                records.push(SampleRecord {
                    id: d.id.clone(),
                    param: param.clone(),
                    sample_index: s.index,
                    tau: pair(s.tau.tau()),
                    z: pair(s.z),
                    lhs: pair(l),
                    rhs: pair(r),
                    abs_err: abs,
                    rel_err: rel,
                    pass,
                });
            }
            (rep, records)
        })
        .collect();

    let mut report = VerificationReport::new("numeric", cfg);
    let mut it = results.into_iter();
    for d in &chosen {
        let mut ir = IdentityReport {
            id: d.id.clone(),
            samples_used: 0,
            samples_skipped: 0,
            max_abs_err: 0.0,
            max_rel_err: 0.0,
            pass: true,
            params: Vec::new(),
            failures: Vec::new(),
        };
        for _ in &d.sweep {
            let (pr, recs) = it.next().expect("one result per task");
            ir.samples_used += pr.samples_used;
            ir.samples_skipped += pr.samples_skipped;
            ir.max_abs_err = ir.max_abs_err.max(pr.max_abs_err);
            ir.max_rel_err = ir.max_rel_err.max(pr.max_rel_err);
            ir.pass &= pr.pass;
            ir.failures.extend(recs.iter().filter(|r| !r.pass).cloned());
            ir.params.push(pr);
            report.samples.extend(recs);
        }
        report.pass &= ir.pass;
        report.identities.push(ir);
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Exact residuals through `q^{cfg.order}` for each selected identity at
/// every expandable point of its sweep. An empty selection means every
/// formal-provable entry.
pub fn run_formal_suite(registry: &Registry, cfg: &HarnessConfig, ids: &[String]) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let order = QExponent::from_int(cfg.order);
    let chosen: Vec<_> = if ids.is_empty() {
        registry.iter().filter(|d| d.formal_provable()).collect()
    } else {
        let c = select(registry, ids)?;
        if let Some(d) = c.iter().find(|d| !d.formal_provable()) {
            return Err(Error::UnsupportedFormal(format!("{} has no expandable parameter point", d.id)));
        }
        c
    };
    let tasks: Vec<(String, Params)> =
        chosen.iter().flat_map(|d| d.formal_sweep().into_iter().map(move |p| (d.id.clone(), p))).collect();
    let records: Vec<Result<FormalRecord>> = tasks
        .par_iter()
        .map(|(id, p)| {
            let proof = prove_identity(registry, id, p, order)?;
            Ok(FormalRecord {
                id: id.clone(),
                param: p.to_string(),
                order,
                pass: proof.status.passed(),
                status: proof.status,
                lhs_terms: proof.lhs.len(),
                rhs_terms: proof.rhs.len(),
            })
        })
        .collect();
    let mut report = VerificationReport::new("formal", cfg);
    for r in records {
        let r = r?;
        report.pass &= r.pass;
        report.formal.push(r);
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// All 24 transformation laws at `points` seeded points with
/// `Im tau in [0.8, 2]`; T-rules at `1e-10`, S-rules at `1e-8`.
pub fn run_modular_suite(cfg: &HarnessConfig, points: usize) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let trunc = cfg.truncation()?;
    let plan = SamplePlan {
        count: points,
        seed: cfg.seed,
        pole_guard: cfg.pole_guard,
        im_tau: (0.8, 2.0),
        ..SamplePlan::default()
    };
    let rules = transform_rules();
    let records: Vec<TransformRecord> = rules
        .par_iter()
        .map(|rule| {
            let tolerance = if rule.kind == TransformKind::S { 1e-8 } else { 1e-10 };
            let mut rec = TransformRecord {
                rule: rule.name(),
                samples_used: 0,
                samples_skipped: 0,
                max_rel_err: 0.0,
                tolerance,
                errors: Vec::new(),
                pass: true,
            };
            for s in plan.samples(&format!("transform|{}", rule.name())) {
                match check_transform(rule, &s.tau, s.z, &trunc) {
                    Ok(r) => {
                        rec.samples_used += 1;
                        rec.max_rel_err = rec.max_rel_err.max(r.rel_err);
                    }
                    Err(e) if e.is_pole() => rec.samples_skipped += 1,
                    Err(e) => rec.errors.push(format!("sample {}: {e}", s.index)),
                }
            }
            rec.pass = rec.errors.is_empty() && rec.samples_used > 0 && rec.max_rel_err <= tolerance;
            rec
        })
        .collect();
    let mut report = VerificationReport::new("modular", cfg);
    report.pass = records.iter().all(|r| r.pass);
    report.transforms = records;
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Default asymptotic grid.
pub const ASYMPTOTIC_GRID: [f64; 3] = [0.2, 0.1, 0.05];

/// Ratio tests for all 16 rows at each `a`; a row passes when
/// `|ratio - 1| <= tolerance` at the last grid point.
pub fn run_asymptotic_suite(
    cfg: &HarnessConfig,
    a_values: &[f64],
    grid: &[f64],
    tolerance: f64,
) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let trunc = cfg.truncation()?;
    let rules = asymptotic_rules();
    let tasks: Vec<_> = a_values.iter().flat_map(|&a| rules.iter().map(move |r| (a, r))).collect();
    let records: Vec<AsymptoticRecord> = tasks
        .par_iter()
        .map(|&(a, rule)| match check_asymptotic(rule, C64::new(a, 0.0), grid, &trunc) {
            Ok(points) => {
                let final_deviation = points.last().map(|p| p.deviation).unwrap_or(f64::INFINITY);
                AsymptoticRecord {
                    function: rule.target.name(),
                    a,
                    settles: deviations_settle(&points, 0.1),
                    points,
                    final_deviation,
                    tolerance,
                    error: None,
                    pass: final_deviation <= tolerance,
                }
            }
            Err(e) => AsymptoticRecord {
                function: rule.target.name(),
                a,
                points: Vec::new(),
                final_deviation: f64::INFINITY,
                tolerance,
                settles: false,
                error: Some(e.to_string()),
                pass: false,
            },
        })
        .collect();
    let mut report = VerificationReport::new("asymptotic", cfg);
    report.pass = records.iter().all(|r| r.pass);
    report.asymptotics = records;
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Theta conventions at seeded points: `theta11(tau, 0) = 0`, the two eta
/// quotients for `theta10(tau, 0)` and `theta01(tau, 0)`, and
/// `theta^{(-)}_{1/2,1/2}(tau, 2z) = -i theta11(tau, z)`.
pub fn run_convention_gate(cfg: &HarnessConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let trunc = cfg.truncation()?;
    let plan = cfg.plan();
    let zero = C64::new(0.0, 0.0);
    let idx = ThetaIndex::new(HalfInt::HALF, HalfInt::HALF)?;
    type Check<'a> = (&'a str, Criterion, f64, Box<dyn Fn(&Sample) -> Result<f64> + Sync + 'a>);
    let checks: Vec<Check> = vec![
        (
            "theta11-nullwert-vanishes",
            Criterion::Absolute,
            1e-12,
            Box::new(|s: &Sample| Ok(theta(ThetaChar::T11, &s.tau, zero, &trunc)?.norm())),
        ),
        (
            "theta10-nullwert-eta-quotient",
            Criterion::Relative,
            1e-9,
            Box::new(|s: &Sample| {
                Ok(rel_err(theta(ThetaChar::T10, &s.tau, zero, &trunc)?, theta_nullwerte(&s.tau, &trunc)?[2]))
            }),
        ),
        (
            "theta01-nullwert-eta-quotient",
            Criterion::Relative,
            1e-9,
            Box::new(|s: &Sample| {
                Ok(rel_err(theta(ThetaChar::T01, &s.tau, zero, &trunc)?, theta_nullwerte(&s.tau, &trunc)?[1]))
            }),
        ),
        (
            "signed-theta-half-anchor",
            Criterion::Relative,
            1e-9,
            Box::new(|s: &Sample| {
                let lhs = theta_km_signed(&idx, &s.tau, 2.0 * s.z, &trunc)?;
                let rhs = -C64::i() * theta(ThetaChar::T11, &s.tau, s.z, &trunc)?;
                Ok(rel_err(lhs, rhs))
            }),
        ),
    ];
    let mut report = VerificationReport::new("gate", cfg);
    for (name, criterion, tolerance, f) in &checks {
        let errs: Vec<Result<f64>> = plan.samples(&format!("gate|{name}")).par_iter().map(f).collect();
        let mut max_err = 0.0f64;
        let mut used = 0;
        let mut ok = true;
        for e in errs {
            match e {
                Ok(x) => {
                    used += 1;
                    max_err = max_err.max(x);
                }
                Err(_) => ok = false,
            }
        }
        let pass = ok && used > 0 && max_err <= *tolerance;
        report.pass &= pass;
        report.gate.push(GateRecord {
            check: name.to_string(),
            samples_used: used,
            max_err,
            criterion: criterion.clone(),
            tolerance: *tolerance,
            pass,
        });
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Expanded through `q^{CROSS_ORDER}` for the cross-engine comparison.
pub const CROSS_ORDER: i64 = 10;

/// Substitutes `(tau, z)` into the exact expansion of every expandable side
/// of every entry and compares with the numeric engine at `points` seeded
/// points with `Im tau in [1.2, 2.5]` and `z = alpha tau + beta`,
/// `alpha in (0.05, 0.35)`. Inside that strip every expansion converges
/// geometrically in `q` at fixed `z`; further out the `y`-degree of the
/// coefficients outgrows `|q|` and a truncated expansion says nothing.
///
/// The allowance at a point is
/// `cfg.rel_tol * max(|numeric|, S) + cfg.abs_tol + 10 * B`, where `S` is the
/// sum of the absolute values of the substituted terms and `B` the size of
/// the last two retained units of `q`-order.
pub fn run_cross_engine(registry: &Registry, cfg: &HarnessConfig, points: usize) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let trunc = cfg.truncation()?;
    let plan = SamplePlan {
        count: points,
        seed: cfg.seed,
        pole_guard: cfg.pole_guard,
        im_tau: (1.2, 2.5),
        alpha: (0.05, 0.35),
        ..SamplePlan::default()
    };
    let mut tasks: Vec<(String, String, &'static str, Expr)> = Vec::new();
    for d in registry.iter() {
        for p in d.formal_sweep() {
            let (l, r) = d.sides(&p)?;
            tasks.push((d.id.clone(), p.to_string(), "lhs", l));
            tasks.push((d.id.clone(), p.to_string(), "rhs", r));
        }
    }
    let cut = cutoff_for(QExponent::from_int(CROSS_ORDER));
    let records: Vec<CrossEngineRecord> = tasks
        .par_iter()
        .map(|(id, param, side, e)| {
            let mut rec = CrossEngineRecord {
                id: id.clone(),
                param: param.clone(),
                side: side.to_string(),
                points: 0,
                worst_fraction: 0.0,
                errors: Vec::new(),
                pass: true,
            };
            let series = match expand(e, cut) {
                Ok(s) => s,
                Err(err) => {
                    rec.errors.push(err.to_string());
                    rec.pass = false;
                    return rec;
                }
            };
            for s in plan.samples(&format!("cross|{id}|{param}|{side}")) {
                let numeric = match e.eval(&s.tau, s.z, &trunc) {
                    Ok(v) => v,
                    Err(err) if err.is_pole() => continue,
                    Err(err) => {
                        rec.errors.push(format!("sample {}: {err}", s.index));
                        continue;
                    }
                };
                let y = (C64::new(0.0, std::f64::consts::PI) * s.z).exp();
                let (mut total, mut size, mut last) = (C64::new(0.0, 0.0), 0.0, 0.0);
                for (k, c) in series.terms() {
                    let v =
                        c.eval(y) * (C64::new(0.0, 2.0 * std::f64::consts::PI * k as f64 / 24.0) * s.tau.tau()).exp();
                    total += v;
                    size += v.norm();
                    if k >= cut - 48 {
                        last += v.norm();
                    }
                }
                let allowance = cfg.rel_tol * numeric.norm().max(size) + cfg.abs_tol + 10.0 * last;
                let diff = (numeric - total).norm();
                rec.points += 1;
                let frac = if allowance > 0.0 {
                    diff / allowance
                } else if diff == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                };
                rec.worst_fraction = rec.worst_fraction.max(frac);
            }
            rec.pass = rec.errors.is_empty() && rec.points > 0 && rec.worst_fraction <= 1.0;
            rec
        })
        .collect();
    let mut report = VerificationReport::new("cross-engine", cfg);
    report.pass = records.iter().all(|r| r.pass);
    report.cross_engine = records;
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Names accepted by `eval` and `expand`:
///
/// * `eta`, `theta00` .. `theta11` (in `z`),
/// * `f1` .. `h4` and `lerch-<family>` with `n=<k>`,
/// * `sl21`, `osp32` with `a=..,b=..`,
/// * `<identity-id>:lhs` / `<identity-id>:rhs` with that entry's parameters.
pub fn named_expr(registry: &Registry, name: &str, params: Option<&str>) -> Result<Expr> {
    use crate::appell::{FghName, SpecializedFamily};
    use crate::closed_forms::{osp32_expr, sl21_expr};
    use crate::expr::ThetaArg;
    let params: Params = params.unwrap_or("").parse()?;
    let none = |e: Expr| match params {
        Params::None => Ok(e),
        ref p => Err(Error::Domain(format!("`{name}` takes no parameters, got `{p}`"))),
    };
    if let Some((id, side)) = name.split_once(':') {
        let d = registry.get(id)?;
        return match side {
            "lhs" => d.lhs(&params),
            "rhs" => d.rhs(&params),
            _ => Err(Error::UnknownFunction(name.to_string())),
        };
    }
    if name == "eta" {
        return none(Expr::eta(1.into(), 1));
    }
    if name.starts_with("theta") {
        if let Ok(ch) = name.parse::<ThetaChar>() {
            return none(Expr::theta(ch, ThetaArg::z_times(1)));
        }
    }
    if let Ok(f) = name.parse::<FghName>() {
        return none(Expr::Lerch(f.series()));
    }
    if let Some(fam) = name.strip_prefix("lerch-") {
        let fam: SpecializedFamily = fam.parse()?;
        return match params {
            Params::Shift(n) => Ok(Expr::Lerch(fam.series(n))),
            ref p => Err(Error::Domain(format!("`{name}` needs n=<k>, got `{p}`"))),
        };
    }
    if name == "sl21" || name == "osp32" {
        return match params {
            Params::Line { a, b } => Ok(if name == "sl21" { sl21_expr(a, b) } else { osp32_expr(a, b) }),
            ref p => Err(Error::Domain(format!("`{name}` needs a=..,b=.., got `{p}`"))),
        };
    }
    Err(Error::UnknownFunction(name.to_string()))
}

impl VerificationReport {
    /// Concatenates the sections of two reports of the same run.
    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        self.metadata.suite = format!("{}+{}", self.metadata.suite, other.metadata.suite);
        self.pass &= other.pass;
        self.identities.extend(other.identities);
        self.samples.extend(other.samples);
        self.formal.extend(other.formal);
        self.transforms.extend(other.transforms);
        self.asymptotics.extend(other.asymptotics);
        self.gate.extend(other.gate);
        self.cross_engine.extend(other.cross_engine);
        self.wall_time_s += other.wall_time_s;
        self
    }
}
