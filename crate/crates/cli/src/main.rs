//! `appell`: evaluate, expand and verify from the command line.
//!
//! Exit status is 0 when everything checked passes, 1 on a verification or
//! evaluation failure and 2 on a usage or configuration error. Errors are
//! printed to stderr as `{"error": {"kind": .., "message": ..}}`.

use std::path::PathBuf;
use std::process::ExitCode;

use appell_core::formal::{cutoff_for, expand};
use appell_core::harness::{
    named_expr, run_asymptotic_suite, run_convention_gate, run_cross_engine, run_formal_suite, run_modular_suite,
    run_numeric_suite, HarnessConfig, VerificationReport, ASYMPTOTIC_GRID,
};
use appell_core::modular::{check_s_squared, check_transform, transform_rule, TransformKind};
use appell_core::registry::Registry;
use appell_core::{Error, ModularPoint, QExponent, C64};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "appell", version, about = "Appell functions, theta functions and their identities")]
struct Cli {
    /// TOML file with defaults for `verify`; flags win over the file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a function at one point.
    Eval {
        function: String,
        /// `re,im`
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
        z: String,
        /// e.g. `n=1` or `a=3/2,b=1/2`.
        #[arg(long)]
        params: Option<String>,
    },
    /// Run verification suites and print a report.
    Verify {
        /// Comma-separated identity ids; default is the whole registry.
        #[arg(long, value_delimiter = ',')]
        ids: Option<Vec<String>>,
        #[arg(long)]
        seed: Option<u64>,
        /// Relative tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Absolute tolerance for vanishing identities.
        #[arg(long)]
        abs_tol: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        pole_guard: Option<f64>,
        /// Formal order as a whole power of q.
        #[arg(long)]
        order: Option<i64>,
        #[arg(long, value_delimiter = ',')]
        suite: Option<Vec<Suite>>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact q-expansion of a series.
    Expand {
        series: String,
        /// Highest retained power of q, `P/24` or an integer.
        #[arg(long)]
        order: String,
        #[arg(long)]
        params: Option<String>,
        /// Write the term dump to a file and print a summary instead.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Check one transformation law at a point (`s-f1`, `t-g2`, `ss-h3` for S twice).
    Transform {
        #[arg(long)]
        rule: String,
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Ratio test of a leading asymptotic as tau = iT, T -> 0.
    Asymptote {
        #[arg(long)]
        function: String,
        #[arg(long)]
        a: f64,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
    /// Print the identity registry as JSON.
    Registry,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Numeric,
    Formal,
    Modular,
    Asymptotic,
    Gate,
    Cross,
    All,
}

/// Keys of the config file; the same names as the `verify` flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    ids: Option<Vec<String>>,
    seed: Option<u64>,
    tol: Option<f64>,
    abs_tol: Option<f64>,
    samples: Option<usize>,
    pole_guard: Option<f64>,
    order: Option<i64>,
    series_tolerance: Option<f64>,
    max_terms: Option<usize>,
    suite: Option<Vec<Suite>>,
    format: Option<Format>,
}

enum Failure {
    Usage(String, String),
    Run(String, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::Truncation { .. } => "truncation",
            Error::PoleProximity { .. } => "pole-proximity",
            Error::TrigSingularity(_) => "trig-singularity",
            Error::Domain(_) => "domain",
            Error::UnknownIdentity(_) => "unknown-identity",
            Error::UnknownFunction(_) => "unknown-function",
            Error::UnsupportedFormal(_) => "unsupported-formal",
            Error::NotInvertible(_) => "not-invertible",
            Error::Config(_) => "config",
        };
        let usage = matches!(
            e,
            Error::Domain(_)
                | Error::UnknownIdentity(_)
                | Error::UnknownFunction(_)
                | Error::UnsupportedFormal(_)
                | Error::Config(_)
        );
        if usage {
            Failure::Usage(kind.into(), e.to_string())
        } else {
            Failure::Run(kind.into(), e.to_string())
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage("usage".into(), msg.into())
}

fn parse_complex(s: &str, what: &str) -> Result<C64, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| usage(format!("--{what}: `{t}` is not a number")));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(usage(format!("--{what} expects `re,im`, got `{s}`"))),
    }
}

fn c(v: C64) -> serde_json::Value {
    json!([v.re, v.im])
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, Failure> {
    let Some(path) = path else { return Ok(FileConfig::default()) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage("config".into(), format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::Usage("config".into(), format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let file = load_config(&cli.config)?;
    let registry = Registry::standard();
    match cli.cmd {
        Cmd::Eval { function, tau, z, params } => {
            let t = parse_complex(&tau, "tau")?;
            let tau = ModularPoint::new(t)?;
            let z = parse_complex(&z, "z")?;
            let e = named_expr(&registry, &function, params.as_deref())?;
            let trunc = HarnessConfig::default().truncation()?;
            let v = e.eval(&tau, z, &trunc)?;
            print_json(&json!({ "function": function, "tau": c(t), "z": c(z), "value": c(v) }));
            Ok(true)
        }
        Cmd::Verify { ids, seed, tol, abs_tol, samples, pole_guard, order, suite, format, out } => {
            let d = HarnessConfig::default();
            let cfg = HarnessConfig {
                seed: seed.or(file.seed).unwrap_or(d.seed),
                samples: samples.or(file.samples).unwrap_or(d.samples),
                rel_tol: tol.or(file.tol).unwrap_or(d.rel_tol),
                abs_tol: abs_tol.or(file.abs_tol).unwrap_or(d.abs_tol),
                pole_guard: pole_guard.or(file.pole_guard).unwrap_or(d.pole_guard),
                series_tolerance: file.series_tolerance.unwrap_or(d.series_tolerance),
                max_terms: file.max_terms.unwrap_or(d.max_terms),
                order: order.or(file.order).unwrap_or(d.order),
            };
            cfg.validate()?;
            let ids = ids.or(file.ids).unwrap_or_default();
            let format = format.or(file.format).unwrap_or(Format::Json);
            let mut suites = suite.or(file.suite).unwrap_or_else(|| vec![Suite::Numeric, Suite::Formal]);
            if suites.contains(&Suite::All) {
                suites =
                    vec![Suite::Gate, Suite::Numeric, Suite::Formal, Suite::Modular, Suite::Asymptotic, Suite::Cross];
            }
            let explicit_formal = suites == [Suite::Formal];
            let mut report: Option<VerificationReport> = None;
            for s in suites {
                let r = match s {
                    Suite::Numeric => run_numeric_suite(&registry, &cfg, &ids)?,
                    Suite::Formal => {
                        // Combined runs prove whatever part of the selection is expandable.
                        let formal_ids: Vec<String> = if explicit_formal || ids.is_empty() {
                            ids.clone()
                        } else {
                            let mut keep = Vec::new();
                            for id in &ids {
                                if registry.get(id)?.formal_provable() {
                                    keep.push(id.clone());
                                }
                            }
                            if keep.is_empty() {
                                continue;
                            }
                            keep
                        };
                        run_formal_suite(&registry, &cfg, &formal_ids)?
                    }
                    Suite::Modular => run_modular_suite(&cfg, 20)?,
                    Suite::Asymptotic => run_asymptotic_suite(&cfg, &[0.23, 0.41], &ASYMPTOTIC_GRID, 0.05)?,
                    Suite::Gate => run_convention_gate(&cfg)?,
                    Suite::Cross => run_cross_engine(&registry, &cfg, 20)?,
                    Suite::All => unreachable!("expanded above"),
                };
                report = Some(match report {
                    None => r,
                    Some(acc) => acc.merge(r),
                });
            }
            let report = report.ok_or_else(|| usage("nothing selected"))?;
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
            };
            match out {
                Some(p) => std::fs::write(&p, text)
                    .map_err(|e| Failure::Usage("io".into(), format!("{}: {e}", p.display())))?,
                None => print!("{text}"),
            }
            for l in report.failure_lines() {
                eprintln!("FAIL {l}");
            }
            Ok(report.pass)
        }
        Cmd::Expand { series, order, params, dump } => {
            let order: QExponent = order.parse()?;
            let e = named_expr(&registry, &series, params.as_deref())?;
            let f = expand(&e, cutoff_for(order))?;
            match dump {
                Some(p) => {
                    std::fs::write(&p, f.dump())
                        .map_err(|e| Failure::Usage("io".into(), format!("{}: {e}", p.display())))?;
                    print_json(&json!({
                        "series": series, "order": order.to_string(), "terms": f.len(), "dump": p.display().to_string()
                    }));
                }
                None => print!("{}", f.dump()),
            }
            Ok(true)
        }
        Cmd::Transform { rule, tau, z, tol } => {
            let tau = ModularPoint::new(parse_complex(&tau, "tau")?)?;
            let z = parse_complex(&z, "z")?;
            let trunc = HarnessConfig::default().truncation()?;
            let (res, default_tol) = match rule.strip_prefix("ss-") {
                Some(name) => (check_s_squared(name.parse()?, &tau, z, &trunc)?, 1e-8),
                None => {
                    let r = transform_rule(&rule)?;
                    let t = if r.kind == TransformKind::S { 1e-8 } else { 1e-10 };
                    (check_transform(&r, &tau, z, &trunc)?, t)
                }
            };
            let tol = tol.unwrap_or(default_tol);
            let pass = res.rel_err <= tol;
            let mut v = serde_json::to_value(res).expect("json");
            v["rule"] = json!(rule);
            v["tolerance"] = json!(tol);
            v["pass"] = json!(pass);
            print_json(&v);
            Ok(pass)
        }
        Cmd::Asymptote { function, a, grid, tol } => {
            let grid = grid.unwrap_or_else(|| ASYMPTOTIC_GRID.to_vec());
            let cfg = HarnessConfig::default();
            let rule = appell_core::modular::asymptotic_rule(&function)?;
            let points = appell_core::modular::check_asymptotic(&rule, C64::new(a, 0.0), &grid, &cfg.truncation()?)?;
            let last = points.last().map(|p| p.deviation).ok_or_else(|| usage("empty --grid"))?;
            let pass = last <= tol;
            print_json(&json!({
                "function": function,
                "a": a,
                "points": points,
                "final_deviation": last,
                "tolerance": tol,
                "pass": pass,
            }));
            Ok(pass)
        }
        Cmd::Registry => {
            print_json(&registry.to_json());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                // --help and --version
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.render().to_string();
            eprintln!("{}", json!({ "error": { "kind": "usage", "message": msg.trim_end() } }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(kind, message)) => {
            eprintln!("{}", json!({ "error": { "kind": kind, "message": message } }));
            ExitCode::from(2)
        }
        Err(Failure::Run(kind, message)) => {
            eprintln!("{}", json!({ "error": { "kind": kind, "message": message } }));
            ExitCode::from(1)
        }
    }
}
