//! The registered identities. Each entry pairs two [`Expr`] builders with a
//! parameter schema, a formula anchor and a pole description; the harness,
//! the exact prover and the command-line tool all iterate this one table.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use serde::Serialize;

use crate::appell::{AppellSignature, FghName, Sign, SpecializedFamily};
use crate::closed_forms::{
    appell_line, family_rhs, fgh_closed_form, nullwert, osp32_expr, phi1_sl21_line_rhs, phi1_sl21_line_series,
    phi1_sl21_shift_rhs, sl21_expr, CorrectionKind, CorrectionSum,
};
use crate::expr::{AppellPart, Expr, LineShift, ThetaArg};
use crate::formal::{prove_exprs, Proof};
use crate::qseries::{Duplication, ThetaChar};
use crate::{Error, HalfInt, ModularPoint, QExponent, Result, SeriesTruncation, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamSchema {
    /// No parameters.
    None,
    /// A shift `n >= 0`.
    Shift,
    /// A line `(a, b)` with `a, b` half-integers.
    Line,
    /// A real or complex line coefficient `a`.
    Real,
}

/// One concrete parameter choice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Params {
    None,
    Shift(u32),
    Line { a: HalfInt, b: HalfInt },
    Real(C64),
}

impl Params {
    pub fn schema(&self) -> ParamSchema {
        match self {
            Params::None => ParamSchema::None,
            Params::Shift(_) => ParamSchema::Shift,
            Params::Line { .. } => ParamSchema::Line,
            Params::Real(_) => ParamSchema::Real,
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Params::None => Ok(()),
            Params::Shift(n) => write!(f, "n={n}"),
            Params::Line { a, b } => write!(f, "a={a},b={b}"),
            Params::Real(a) if a.im == 0.0 => write!(f, "a={}", a.re),
            Params::Real(a) => write!(f, "a={}{:+}i", a.re, a.im),
        }
    }
}

impl Serialize for Params {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `""`, `n=1`, `a=3/2,b=1/2`, `a=0.3` and `a=0.3+0.2i`.
impl FromStr for Params {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Params::None);
        }
        let bad = || Error::Config(format!("cannot parse parameters {s:?}"));
        let mut kv = std::collections::BTreeMap::new();
        for part in s.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        match (kv.get("n"), kv.get("a"), kv.get("b")) {
            (Some(n), None, None) => Ok(Params::Shift(n.parse().map_err(|_| bad())?)),
            (None, Some(a), Some(b)) => Ok(Params::Line { a: a.parse()?, b: b.parse()? }),
            (None, Some(a), None) => parse_complex(a).map(Params::Real).ok_or_else(bad),
            _ => Err(bad()),
        }
    }
}

fn parse_complex(s: &str) -> Option<C64> {
    if let Ok(x) = s.parse::<f64>() {
        return Some(C64::new(x, 0.0));
    }
    let body = s.strip_suffix('i')?;
    let split = body.rfind(['+', '-']).filter(|&p| p > 0)?;
    let re = body[..split].parse().ok()?;
    let im = match &body[split..] {
        "+" => 1.0,
        "-" => -1.0,
        t => t.parse().ok()?,
    };
    Some(C64::new(re, im))
}

type Builder = Arc<dyn Fn(&Params) -> Result<(Expr, Expr)> + Send + Sync>;

#[derive(Clone)]
pub struct IdentityDescriptor {
    pub id: String,
    /// The identity written out as a formula.
    pub anchor: String,
    pub schema: ParamSchema,
    /// Parameter values checked by default.
    pub sweep: Vec<Params>,
    /// Where either side has poles.
    pub poles: String,
    build: Builder,
    vanishing: fn(&Params) -> bool,
}

impl fmt::Debug for IdentityDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityDescriptor").field("id", &self.id).field("schema", &self.schema).finish()
    }
}

impl IdentityDescriptor {
    /// Both sides at `params`; rejects parameters outside the validity domain.
    pub fn sides(&self, params: &Params) -> Result<(Expr, Expr)> {
        if params.schema() != self.schema {
            return Err(Error::Domain(format!("{} expects {:?} parameters, got {params:?}", self.id, self.schema)));
        }
        (self.build)(params)
    }

    pub fn lhs(&self, params: &Params) -> Result<Expr> {
        self.sides(params).map(|s| s.0)
    }

    pub fn rhs(&self, params: &Params) -> Result<Expr> {
        self.sides(params).map(|s| s.1)
    }

    /// Both sides vanish identically at these parameters.
    pub fn is_vanishing(&self, params: &Params) -> bool {
        (self.vanishing)(params)
    }

    /// Sweep points whose two sides are both expandable.
    pub fn formal_sweep(&self) -> Vec<Params> {
        self.sweep
            .iter()
            .filter(|p| self.sides(p).map(|(l, r)| l.is_expandable() && r.is_expandable()).unwrap_or(false))
            .copied()
            .collect()
    }

    pub fn formal_provable(&self) -> bool {
        !self.formal_sweep().is_empty()
    }

    pub fn eval_lhs(&self, params: &Params, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<C64> {
        self.lhs(params)?.eval(tau, z, trunc)
    }

    pub fn eval_rhs(&self, params: &Params, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<C64> {
        self.rhs(params)?.eval(tau, z, trunc)
    }

    /// A copy whose right-hand side has one constant negated.
    pub fn corrupted(&self) -> IdentityDescriptor {
        let inner = self.build.clone();
        IdentityDescriptor { build: Arc::new(move |p| inner(p).map(|(l, r)| (l, r.flip_first_sign()))), ..self.clone() }
    }
}

#[derive(Serialize)]
struct DescriptorRecord<'a> {
    id: &'a str,
    anchor: &'a str,
    schema: ParamSchema,
    sweep: &'a [Params],
    vanishing: Vec<Params>,
    poles: &'a str,
    formal_provable: bool,
}

#[derive(Clone, Debug)]
pub struct Registry {
    entries: Vec<IdentityDescriptor>,
}

impl Registry {
    pub fn standard() -> Registry {
        Registry { entries: standard_entries() }
    }

    pub fn from_entries(entries: Vec<IdentityDescriptor>) -> Result<Registry> {
        let mut seen = std::collections::HashSet::new();
        for e in &entries {
            if !seen.insert(e.id.clone()) {
                return Err(Error::Config(format!("duplicate identity id {}", e.id)));
            }
        }
        Ok(Registry { entries })
    }

    pub fn iter(&self) -> impl Iterator<Item = &IdentityDescriptor> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.id.as_str()).collect()
    }

    pub fn get(&self, id: &str) -> Result<&IdentityDescriptor> {
        self.entries.iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    /// The same registry with entry `id` replaced by its corrupted copy.
    pub fn with_corrupted(&self, id: &str) -> Result<Registry> {
        let bad = self.get(id)?.corrupted();
        let entries = self.entries.iter().map(|e| if e.id == id { bad.clone() } else { e.clone() }).collect();
        Ok(Registry { entries })
    }

    /// Machine-readable identity list.
    pub fn to_json(&self) -> serde_json::Value {
        let records: Vec<_> = self
            .entries
            .iter()
            .map(|e| DescriptorRecord {
                id: &e.id,
                anchor: &e.anchor,
                schema: e.schema,
                sweep: &e.sweep,
                vanishing: e.sweep.iter().filter(|p| e.is_vanishing(p)).copied().collect(),
                poles: &e.poles,
                formal_provable: e.formal_provable(),
            })
            .collect();
        serde_json::to_value(records).expect("registry records serialize")
    }
}

/// Right-hand side of a registered identity at one point.
pub fn rhs_closed_form(id: &str, params: &Params, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<C64> {
    Registry::standard().get(id)?.eval_rhs(params, tau, z, trunc)
}

/// Exact expansion of the left-hand side through `q^order`.
pub fn expand_specialized_lhs(id: &str, params: &Params, order: QExponent) -> Result<crate::formal::FormalQSeries> {
    let lhs = Registry::standard().get(id)?.lhs(params)?;
    crate::formal::expand(&lhs, crate::formal::cutoff_for(order))
}

/// Left minus right through `q^order`, both expanded exactly.
pub fn prove_identity(registry: &Registry, id: &str, params: &Params, order: QExponent) -> Result<Proof> {
    let (l, r) = registry.get(id)?.sides(params)?;
    if !l.is_expandable() || !r.is_expandable() {
        return Err(Error::UnsupportedFormal(format!("{id} at {params} has a numeric-only side")));
    }
    prove_exprs(&l, &r, order)
}

// ---------------------------------------------------------------------------

fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn sig(m2: i64, s2: i64, sign: Sign) -> AppellSignature {
    AppellSignature::new(h(m2), h(s2), sign).expect("positive index")
}

fn sl21_sig() -> AppellSignature {
    sig(2, 0, Sign::Plus)
}

fn osp_sig() -> AppellSignature {
    sig(1, 1, Sign::Minus)
}

fn line_part(part: AppellPart, s: AppellSignature, a: HalfInt, b: HalfInt) -> Expr {
    appell_line(part, s, 1, 1, LineShift::Exact(a.to_ratio()), b)
}

fn line_params(p: &Params) -> Result<(HalfInt, HalfInt)> {
    match *p {
        Params::Line { a, b } if !a.is_negative() => Ok((a, b)),
        Params::Line { a, .. } => Err(Error::Domain(format!("line coefficient a must be >= 0, got {a}"))),
        _ => Err(Error::Domain(format!("expected (a, b), got {p:?}"))),
    }
}

fn shift_param(p: &Params) -> Result<u32> {
    match *p {
        Params::Shift(n) => Ok(n),
        _ => Err(Error::Domain(format!("expected n, got {p:?}"))),
    }
}

fn line_grid(valid: impl Fn(HalfInt, HalfInt) -> bool) -> Vec<Params> {
    let mut out = Vec::new();
    for a2 in [0, 1, 2, 3] {
        for b2 in [0, 1] {
            if valid(h(a2), h(b2)) {
                out.push(Params::Line { a: h(a2), b: h(b2) });
            }
        }
    }
    out
}

fn shifts() -> Vec<Params> {
    (0..=2).map(Params::Shift).collect()
}

fn never(_: &Params) -> bool {
    false
}

fn always(_: &Params) -> bool {
    true
}

/// `(a + 1/2) b` is a half-integer.
fn osp_condition(a: HalfInt, b: HalfInt) -> bool {
    // 2 (a + 1/2) b = (2a + 1)(2b) / 2 must be an integer
    ((a.twice() + 1) * b.twice()).rem_euclid(2) == 0
}

fn entry(
    id: &str,
    anchor: &str,
    schema: ParamSchema,
    sweep: Vec<Params>,
    poles: &str,
    vanishing: fn(&Params) -> bool,
    build: impl Fn(&Params) -> Result<(Expr, Expr)> + Send + Sync + 'static,
) -> IdentityDescriptor {
    IdentityDescriptor {
        id: id.to_string(),
        anchor: anchor.to_string(),
        schema,
        sweep,
        poles: poles.to_string(),
        build: Arc::new(build),
        vanishing,
    }
}

const LINE_POLES: &str =
    "e^{2 pi i z} q^{j+a} = (-1)^{2b} for some integer j, i.e. zeros of theta11(tau, z +/- (a tau + b))";
const FAMILY_POLES: &str = "e^{2 pi i z} q^{j+shift} = +/-1, i.e. zeros of the theta functions in the denominators";

fn standard_entries() -> Vec<IdentityDescriptor> {
    use ParamSchema::*;
    let mut v = Vec::new();

    v.push(entry(
        "phi1-sl21-line",
        "Phi1[1,0](tau, z+a tau+b, z-a tau-b, 0) = (1/2)(-i eta^3 theta11(tau,2z) / (theta11(tau,z+a tau+b) theta11(tau,z-a tau-b))) \
         + (1/2) q^{a^2} sum_{k=0}^{4a} (-1)^{2bk} q^{-(k-2a)^2/4} theta_{k,1}(tau,2z)",
        Line,
        line_grid(|_, _| true),
        LINE_POLES,
        never,
        |p| {
            let (a, b) = line_params(p)?;
            Ok((line_part(AppellPart::First, sl21_sig(), a, b), phi1_sl21_line_rhs(a, b)))
        },
    ));
    v.push(entry(
        "phi1-sl21-line-series",
        "Phi1[1,0](tau, z+a tau+b, z-a tau-b, 0) = sum_j e^{4 pi i j z} q^{j^2} / (1 - (-1)^{2b} e^{2 pi i z} q^{j+a})",
        Line,
        line_grid(|_, _| true),
        LINE_POLES,
        never,
        |p| {
            let (a, b) = line_params(p)?;
            Ok((line_part(AppellPart::First, sl21_sig(), a, b), phi1_sl21_line_series(a, b)))
        },
    ));

    let shift_cases: [(&str, &str, bool, bool); 4] = [
        (
            "phi1-sl21-integer-a",
            "Phi1[1,0](tau, z+n tau, z-n tau, 0) = (1/2) q^{n^2} (-i eta^3 theta11(tau,2z)/theta11(tau,z)^2 \
             + sum_{k=0}^{4n} q^{-(k-2n)^2/4} theta_{k,1}(tau,2z))",
            false,
            false,
        ),
        (
            "phi1-sl21-integer-a-half-b",
            "Phi1[1,0](tau, z+n tau+1/2, z-n tau-1/2, 0) = (1/2) q^{n^2} (i eta^3 theta11(tau,2z)/theta10(tau,z)^2 \
             + sum_{k=0}^{4n} (-1)^k q^{-(k-2n)^2/4} theta_{k,1}(tau,2z))",
            false,
            true,
        ),
        (
            "phi1-sl21-half-odd-a",
            "Phi1[1,0](tau, z+(n+1/2) tau, z-(n+1/2) tau, 0) = (1/2) q^{(n+1/2)^2} (-i eta^3 theta11(tau,2z)/theta01(tau,z)^2 \
             + sum_{k=0}^{4n+2} q^{-(k-2n-1)^2/4} theta_{k,1}(tau,2z))",
            true,
            false,
        ),
        (
            "phi1-sl21-half-odd-a-half-b",
            "Phi1[1,0](tau, z+(n+1/2) tau+1/2, z-(n+1/2) tau-1/2, 0) = (1/2) q^{(n+1/2)^2} (i eta^3 theta11(tau,2z)/theta00(tau,z)^2 \
             + sum_{k=0}^{4n+2} (-1)^k q^{-(k-2n-1)^2/4} theta_{k,1}(tau,2z))",
            true,
            true,
        ),
    ];
    for (id, anchor, half_a, half_b) in shift_cases {
        v.push(entry(id, anchor, Shift, shifts(), LINE_POLES, never, move |p| {
            let n = shift_param(p)?;
            let a = h(2 * n as i64 + half_a as i64);
            let b = h(half_b as i64);
            Ok((line_part(AppellPart::First, sl21_sig(), a, b), phi1_sl21_shift_rhs(n, half_a, half_b)))
        }));
    }

    for family in SpecializedFamily::ALL {
        let anchor = family_anchor(family);
        v.push(entry(&format!("lerch-{}", family.name()), &anchor, Shift, shifts(), FAMILY_POLES, never, move |p| {
            let n = shift_param(p)?;
            Ok((Expr::Lerch(family.series(n)), family_rhs(family, n)))
        }));
    }

    v.push(entry(
        "osp-combination-integer-a",
        "Phi1^{(-)}[1/2,1/2](tau, z+a tau+b, z-a tau-b, 0) + Phi2^{(-)}[1/2,1/2](tau, z+a tau+b, z-a tau-b, 0) = 0 \
         for integer a with (a+1/2) b a half-integer",
        Line,
        line_grid(|a, b| a.is_integer() && osp_condition(a, b)),
        LINE_POLES,
        always,
        |p| {
            let (a, b) = line_params(p)?;
            if !a.is_integer() || !osp_condition(a, b) {
                return Err(Error::Domain(format!("needs integer a and (a+1/2) b in Z/2, got a={a}, b={b}")));
            }
            let lhs = line_part(AppellPart::Star, osp_sig(), a, b);
            Ok((lhs, Expr::int(0)))
        },
    ));
    v.push(entry(
        "osp-combination-half-odd-a",
        "Phi1^{(-)}[1/2,1/2](tau, z+a tau+b, z-a tau-b, 0) - Phi2^{(-)}[1/2,1/2](tau, z+a tau+b, z-a tau-b, 0) \
         = -i e^{pi i b} q^{a^2/2} sum_{k=0}^{2a-1} (-1)^{(2b+1)k} q^{-(k-a+1/2)^2/2} theta11(tau,z) for half-odd a",
        Line,
        line_grid(|a, b| a.is_half_odd() && osp_condition(a, b)),
        LINE_POLES,
        never,
        |p| {
            let (a, b) = line_params(p)?;
            if !a.is_half_odd() || !osp_condition(a, b) {
                return Err(Error::Domain(format!("needs half-odd a and (a+1/2) b in Z/2, got a={a}, b={b}")));
            }
            let lhs = line_part(AppellPart::Difference, osp_sig(), a, b);
            Ok((lhs, CorrectionSum::new(a, b, CorrectionKind::Half)?.expr()))
        },
    ));
    v.push(entry(
        "phi1-osp32-line",
        "Phi1^{(-)}[1/2,1/2](tau, z+a tau+b, z-a tau-b, 0) = (1/2)(i eta^3 theta11(tau,2z) theta11(tau,a tau+b) / \
         (theta11(tau,z+a tau+b) theta11(tau,z-a tau-b) theta11(tau,z))) \
         + (1/2)(-i e^{pi i b} q^{a^2/2} sum_{k=0}^{2a-1} (-1)^{(2b+1)k} q^{-(k-a+1/2)^2/2} theta11(tau,z)) for half-odd a",
        Line,
        line_grid(|a, _| a.is_half_odd()),
        "zeros of theta11(tau, z +/- (a tau + b)) and of theta11(tau, z)",
        never,
        |p| {
            let (a, b) = line_params(p)?;
            if !a.is_half_odd() {
                return Err(Error::Domain(format!("needs half-odd a, got a={a}")));
            }
            let rhs = Expr::frac(1, 2) * osp32_expr(a, b)
                + Expr::frac(1, 2) * CorrectionSum::new(a, b, CorrectionKind::Half)?.expr();
            Ok((line_part(AppellPart::First, osp_sig(), a, b), rhs))
        },
    ));

    for name in FghName::ALL {
        v.push(entry(
            name.name(),
            &fgh_anchor(name),
            None,
            vec![Params::None],
            "zeros of the theta function in the denominator, equivalently poles of the series terms",
            never,
            move |_| Ok((Expr::Lerch(name.series()), fgh_closed_form(name))),
        ));
    }

    v.push(entry(
        "sl21-denominator",
        "(Phi1 - Phi2)[1,0](tau, z+a tau+b, z-a tau-b, 0) = -i eta^3 theta11(tau,2z) / (theta11(tau,z+a tau+b) theta11(tau,z-a tau-b))",
        Line,
        line_grid(|_, _| true),
        LINE_POLES,
        never,
        |p| {
            let (a, b) = line_params(p)?;
            let lhs = line_part(AppellPart::Difference, sl21_sig(), a, b);
            Ok((lhs, sl21_expr(a, b)))
        },
    ));
    v.push(entry(
        "osp32-denominator",
        "(Phi1 + Phi2)^{(-)}[1/2,1/2](tau, z+a tau+b, z-a tau-b, 0) = i eta^3 theta11(tau,2z) theta11(tau,a tau+b) / \
         (theta11(tau,z+a tau+b) theta11(tau,z-a tau-b) theta11(tau,z))",
        Line,
        line_grid(|_, _| true),
        "zeros of theta11(tau, z +/- (a tau + b)) and of theta11(tau, z)",
        |p| matches!(p, Params::Line { a, b } if a.is_integer() && b.twice() == 0),
        |p| {
            let (a, b) = line_params(p)?;
            let lhs = line_part(AppellPart::Star, osp_sig(), a, b);
            Ok((lhs, osp32_expr(a, b)))
        },
    ));

    for (id, plus) in [("doubling-sum", true), ("doubling-difference", false)] {
        let anchor = if plus {
            "Phi1[1,0](tau, z+a tau, z-a tau, 0) + Phi1[1,0](tau, z+a tau+1/2, z-a tau-1/2, 0) = 2 Phi1[1/2,0](2tau, 2z+2a tau, 2z-2a tau, 0)"
        } else {
            "Phi1[1,0](tau, z+a tau, z-a tau, 0) - Phi1[1,0](tau, z+a tau+1/2, z-a tau-1/2, 0) = 2 Phi1[1/2,1/2](2tau, 2z+2a tau, 2z-2a tau, 0)"
        };
        let sweep =
            vec![Params::Real(C64::new(0.0, 0.0)), Params::Real(C64::new(0.5, 0.0)), Params::Real(C64::new(0.3, 0.2))];
        v.push(entry(id, anchor, Real, sweep, LINE_POLES, never, move |p| {
            let a = match *p {
                Params::Real(a) => a,
                _ => return Err(Error::Domain(format!("expected a, got {p:?}"))),
            };
            let (alpha, alpha2) = exact_shift(a);
            let one = line_part_shift(AppellPart::First, sl21_sig(), 1, 1, alpha, HalfInt::ZERO);
            let other = line_part_shift(AppellPart::First, sl21_sig(), 1, 1, alpha, HalfInt::HALF);
            let lhs = if plus { one + other } else { one - other };
            let half = sig(1, if plus { 0 } else { 1 }, Sign::Plus);
            let rhs = Expr::int(2) * line_part_shift(AppellPart::First, half, 2, 2, alpha2, HalfInt::ZERO);
            Ok((lhs, rhs))
        }));
    }

    for d in Duplication::ALL {
        let (p, r, sign, target, uses_a) = d.shape();
        let id = format!("duplication-{}{}{}", p.bits(), if sign > 0.0 { "-plus-" } else { "-minus-" }, r.bits());
        let anchor = format!(
            "{p}(tau,z)^2 {} {r}(tau,z)^2 = {} {target}(2tau,2z), A = 2 eta(2tau)^5 / (eta(tau)^2 eta(4tau)^2), B = 4 eta(4tau)^2 / eta(2tau)",
            if sign > 0.0 { "+" } else { "-" },
            if uses_a { "A" } else { "B" }
        );
        v.push(entry(&id, &anchor, None, vec![Params::None], "none (entire in z)", never, move |_| {
            let sq = |ch| Expr::theta(ch, ThetaArg::z_times(1)).pow(2);
            let lhs = if sign > 0.0 { sq(p) + sq(r) } else { sq(p) - sq(r) };
            let e = |c: i64, pw: i32| Expr::eta(Ratio::from_integer(c), pw);
            let k =
                if uses_a { Expr::int(2) * e(2, 5) * e(1, -2) * e(4, -2) } else { Expr::int(4) * e(4, 2) * e(2, -1) };
            Ok((lhs, k * Expr::theta(target, ThetaArg::level(2, 2))))
        }));
    }

    for (ch, text) in [
        (ThetaChar::T00, "eta(tau)^5 / (eta(tau/2)^2 eta(2tau)^2)"),
        (ThetaChar::T01, "eta(tau/2)^2 / eta(tau)"),
        (ThetaChar::T10, "2 eta(2tau)^2 / eta(tau)"),
    ] {
        v.push(entry(
            &format!("nullwert-{}", ch.bits()),
            &format!("{ch}(tau,0) = {text}"),
            None,
            vec![Params::None],
            "none",
            never,
            move |_| Ok((Expr::theta(ch, ThetaArg::origin()), nullwert(ch))),
        ));
    }
    v
}

/// Real half-integers stay exact; anything else is numeric only.
fn exact_shift(a: C64) -> (LineShift, LineShift) {
    let two_a = 2.0 * a.re;
    if a.im == 0.0 && two_a.fract() == 0.0 && two_a.abs() < 1e6 {
        let r = Ratio::new(two_a as i64, 2);
        (LineShift::Exact(r), LineShift::Exact(r * 2))
    } else {
        (LineShift::Complex(a), LineShift::Complex(2.0 * a))
    }
}

fn line_part_shift(part: AppellPart, s: AppellSignature, c: i64, d: i64, alpha: LineShift, beta: HalfInt) -> Expr {
    appell_line(part, s, c, d, alpha, beta)
}

fn family_anchor(f: SpecializedFamily) -> String {
    use SpecializedFamily::*;
    let (lhs, rhs) = match f {
        EvenMinusInt => ("2 sum_j e^{2 pi i j z} q^{j^2/2} / (1 - e^{2 pi i z} q^{j+n})",
            "q^{n^2/2} (-i theta00(tau,0) theta01 theta10 / theta11 + sum_{k=0}^{2n} q^{-(k-n)^2/2} theta00)"),
        OddMinusInt => ("2 sum_j e^{2 pi i (j-1/2) z} q^{(j-1/2)^2/2} / (1 - e^{2 pi i z} q^{j+n})",
            "q^{(n+1/2)^2/2} (-i theta10(tau,0) theta01 theta00 / theta11 + sum_{k=0}^{2n+1} q^{-(k-n-1/2)^2/2} theta10)"),
        EvenMinusHalf => ("2 sum_j e^{2 pi i j z} q^{j^2/2} / (1 - e^{2 pi i z} q^{j+n+1/2})",
            "q^{(n+1/2)^2/2} (-i theta10(tau,0) theta10 theta11 / theta01 + sum_{k=0}^{2n+1} q^{-(k-n-1/2)^2/2} theta00)"),
        OddMinusHalf => ("2 sum_j e^{2 pi i (j+1/2) z} q^{(j+1/2)^2/2} / (1 - e^{2 pi i z} q^{j+n+1/2})",
            "q^{n^2/2} (-i theta00(tau,0) theta00 theta11 / theta01 + sum_{k=0}^{2n} q^{-(k-n)^2/2} theta10)"),
        AltEvenPlusInt => ("2 sum_j (-1)^j e^{2 pi i j z} q^{j^2/2} / (1 + e^{2 pi i z} q^{j+n})",
            "q^{n^2/2} (i theta00(tau,0) theta00 theta11 / theta10 + sum_{k=0}^{2n} q^{-(k-n)^2/2} theta01)"),
        AltOddPlusInt => ("2 sum_j (-1)^j e^{2 pi i (j-1/2) z} q^{(j-1/2)^2/2} / (1 + e^{2 pi i z} q^{j+n})",
            "q^{(n+1/2)^2/2} (-theta10(tau,0) theta01 theta00 / theta10 + i sum_{k=0}^{2n+1} q^{-(k-n-1/2)^2/2} theta11)"),
        AltEvenPlusHalf => ("2 sum_j (-1)^j e^{2 pi i j z} q^{j^2/2} / (1 + e^{2 pi i z} q^{j+n+1/2})",
            "q^{(n+1/2)^2/2} (i theta10(tau,0) theta11 theta10 / theta00 + sum_{k=0}^{2n+1} q^{-(k-n-1/2)^2/2} theta01)"),
        AltOddPlusHalf => ("2 sum_j (-1)^j e^{2 pi i (j+1/2) z} q^{(j+1/2)^2/2} / (1 + e^{2 pi i z} q^{j+n+1/2})",
            "q^{n^2/2} (theta00(tau,0) theta01 theta10 / theta00 - i sum_{k=0}^{2n} q^{-(k-n)^2/2} theta11)"),
        AltOddMinusHalf => ("sum_j (-1)^j e^{2 pi i (j+1/2) z} q^{(j+1/2)^2/2} / (1 - e^{2 pi i z} q^{j+n+1/2})",
            "(1/2) q^{n^2/2} ((-1)^n theta01(tau,0) theta00 theta10 / theta01 - i sum_{k=0}^{2n} (-1)^k q^{-(k-n)^2/2} theta11)"),
        OddPlusHalf => ("sum_j e^{2 pi i (j+1/2) z} q^{(j+1/2)^2/2} / (1 + e^{2 pi i z} q^{j+n+1/2})",
            "(1/2) q^{n^2/2} (-i (-1)^n theta01(tau,0) theta01 theta11 / theta00 + sum_{k=0}^{2n} (-1)^k q^{-(k-n)^2/2} theta10)"),
        AltEvenMinusInt => ("sum_j (-1)^j e^{2 pi i j z} q^{j^2/2} / (1 - e^{2 pi i z} q^{j+n})",
            "(1/2) q^{n^2/2} (-i (-1)^n theta01(tau,0) theta10 theta00 / theta11 + sum_{k=0}^{2n} (-1)^k q^{-(k-n)^2/2} theta01)"),
        EvenPlusInt => ("sum_j e^{2 pi i j z} q^{j^2/2} / (1 + e^{2 pi i z} q^{j+n})",
            "(1/2) q^{n^2/2} (i (-1)^n theta01(tau,0) theta11 theta01 / theta10 + sum_{k=0}^{2n} (-1)^k q^{-(k-n)^2/2} theta00)"),
    };
    format!("{lhs} = {rhs}; theta_ab without arguments means theta_ab(tau,z)")
}

fn fgh_anchor(name: FghName) -> String {
    use FghName::*;
    let rhs = match name {
        F1 => "-i theta00(tau,0) theta01 theta10 / theta11 + theta00",
        F2 => "theta00(tau,0) theta01 theta10 / theta00 - i theta11",
        F3 => "i theta00(tau,0) theta00 theta11 / theta10 + theta01",
        F4 => "-i theta00(tau,0) theta00 theta11 / theta01 + theta10",
        G1 => "-i theta10(tau,0) theta01 theta00 / theta11 + 2 q^{-1/8} theta10",
        G2 => "-theta10(tau,0) theta01 theta00 / theta10 + 2i q^{-1/8} theta11",
        G3 => "-i theta10(tau,0) theta10 theta11 / theta01 + 2 q^{-1/8} theta00",
        G4 => "i theta10(tau,0) theta11 theta10 / theta00 + 2 q^{-1/8} theta01",
        H1 => "-i theta01(tau,0) theta10 theta00 / theta11 + theta01",
        H2 => "theta01(tau,0) theta00 theta10 / theta01 - i theta11",
        H3 => "i theta01(tau,0) theta11 theta01 / theta10 + theta00",
        H4 => "-i theta01(tau,0) theta01 theta11 / theta00 + theta10",
    };
    format!("{} = (1/2) {{{rhs}}}; theta_ab without arguments means theta_ab(tau,z)", lerch_text(name))
}

fn lerch_text(name: FghName) -> String {
    format!("{}(tau,z) = {}", name.name(), name.series().formula())
}
