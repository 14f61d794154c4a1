//! S- and T-transformation laws of `f_i, g_i, h_i`, and their leading
//! behaviour along `tau = iT`, `T -> 0`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::appell::{fgh_series, FghName};
use crate::formal::GaussianRational;
use crate::qseries::{modular_power, theta, ThetaChar};
use crate::{Error, ModularPoint, QExponent, Result, SeriesTruncation, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TransformKind {
    /// `(tau, z) -> (-1/tau, z/tau)`.
    S,
    /// `(tau, z) -> (tau + 1, z)`.
    T,
}

/// Exponential prefactor of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exponential {
    One,
    /// `e^{pi i z^2 / tau}`.
    Quadratic,
    /// `e^{pi i (z^2 + 1/4) / tau}`.
    QuadraticQuarter,
}

/// Power-type factor of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    One,
    /// `tau`.
    Tau,
    /// `tau q^{-1/8}`.
    TauQ8,
    /// `(-i tau)^{1/2}`, principal branch.
    SqrtMinusITau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    Series(FghName),
    Theta(ThetaChar),
}

/// `coeff * e^{pi i zeta8 / 4} * exponential * weight * piece(tau, z)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformTerm {
    #[serde(serialize_with = "as_string")]
    pub coeff: GaussianRational,
    pub zeta8: i64,
    pub exponential: Exponential,
    pub weight: Weight,
    pub piece: Piece,
}

fn as_string<S: serde::Serializer, T: fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformRule {
    pub source: FghName,
    pub kind: TransformKind,
    pub target: FghName,
    pub terms: Vec<TransformTerm>,
}

impl TransformRule {
    /// `"s-f1"`, `"t-g3"`, ...
    pub fn name(&self) -> String {
        let k = match self.kind {
            TransformKind::S => "s",
            TransformKind::T => "t",
        };
        format!("{k}-{}", self.source)
    }
}

fn term(coeff: GaussianRational, exponential: Exponential, weight: Weight, piece: Piece) -> TransformTerm {
    TransformTerm { coeff, zeta8: 0, exponential, weight, piece }
}

fn q(n: i64, d: i64) -> GaussianRational {
    GaussianRational::from_frac(n, d)
}

fn s_rule(source: FghName) -> TransformRule {
    use Exponential::{Quadratic as Ez, QuadraticQuarter as Ez4};
    use FghName::*;
    use Piece::{Series as F, Theta as Th};
    use ThetaChar::*;
    use Weight::{SqrtMinusITau as Sq, Tau, TauQ8};
    let i = GaussianRational::i;
    let one = GaussianRational::one;
    // (series coefficient, target, theta, [tau coeff, sqrt coeff]) per family
    let (c, target, ch, kind) = match source {
        F1 => (one(), F1, T00, 'f'),
        F2 => (-i(), F2, T11, 'f'),
        F3 => (one(), F4, T10, 'f'),
        F4 => (one(), F3, T01, 'f'),
        G1 => (one(), H1, T01, 'g'),
        G2 => (i(), H2, T11, 'g'),
        G3 => (one(), H3, T00, 'g'),
        G4 => (one(), H4, T10, 'g'),
        H1 => (one(), G1, T10, 'h'),
        H2 => (i(), G2, T11, 'h'),
        H3 => (one(), G3, T00, 'h'),
        H4 => (one(), G4, T01, 'h'),
    };
    // the theta11 rows carry the opposite sign on both corrections
    let flip = if ch == T11 && kind != 'g' { -1 } else { 1 };
    let mut terms = vec![term(c, Ez, Tau, F(target))];
    match kind {
        'f' => {
            terms.push(term(q(-flip, 2), Ez, Tau, Th(ch)));
            terms.push(term(q(flip, 2), Ez, Sq, Th(ch)));
        }
        'g' => {
            terms.push(term(q(-1, 2), Ez, Tau, Th(ch)));
            terms.push(term(one(), Ez4, Sq, Th(ch)));
        }
        _ => {
            terms.push(term(q(-flip, 1), Ez, TauQ8, Th(ch)));
            terms.push(term(q(flip, 2), Ez, Sq, Th(ch)));
        }
    }
    TransformRule { source, kind: TransformKind::S, target, terms }
}

fn t_rule(source: FghName) -> TransformRule {
    use FghName::*;
    let (zeta8, target) = match source {
        F1 => (0, H1),
        F2 => (1, H2),
        F3 => (0, H3),
        F4 => (1, H4),
        G1 => (0, G1),
        G2 => (0, G2),
        G3 => (-1, G4),
        G4 => (-1, G3),
        H1 => (0, F1),
        H2 => (1, F2),
        H3 => (0, F3),
        H4 => (1, F4),
    };
    let t = TransformTerm {
        coeff: GaussianRational::one(),
        zeta8,
        exponential: Exponential::One,
        weight: Weight::One,
        piece: Piece::Series(target),
    };
    TransformRule { source, kind: TransformKind::T, target, terms: vec![t] }
}

/// The 24 laws: 12 S-rules then 12 T-rules.
pub fn transform_rules() -> Vec<TransformRule> {
    FghName::ALL.iter().map(|&n| s_rule(n)).chain(FghName::ALL.iter().map(|&n| t_rule(n))).collect()
}

pub fn transform_rule(name: &str) -> Result<TransformRule> {
    transform_rules().into_iter().find(|r| r.name() == name).ok_or_else(|| Error::UnknownIdentity(name.to_string()))
}

/// `(-i tau)^{1/2}` on the principal branch.
pub fn sqrt_minus_i_tau(tau: C64) -> C64 {
    (-C64::i() * tau).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransformResidual {
    #[serde(serialize_with = "as_string")]
    pub lhs: C64Text,
    #[serde(serialize_with = "as_string")]
    pub rhs: C64Text,
    pub abs_err: f64,
    pub rel_err: f64,
}

/// A complex number that prints as `re+imi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C64Text(pub C64);

impl fmt::Display for C64Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}{:+e}i", self.0.re, self.0.im)
    }
}

impl TransformResidual {
    fn new(lhs: C64, rhs: C64) -> Self {
        let abs_err = (lhs - rhs).norm();
        TransformResidual {
            lhs: C64Text(lhs),
            rhs: C64Text(rhs),
            abs_err,
            rel_err: abs_err / lhs.norm().max(rhs.norm()).max(1e-30),
        }
    }

    pub fn residual(&self) -> C64 {
        self.lhs.0 - self.rhs.0
    }
}

/// Right-hand side of `rule` at `(tau, z)`, with `series` supplying the
/// values of `f_i, g_i, h_i` there.
fn rule_rhs(
    rule: &TransformRule,
    tau: &ModularPoint,
    z: C64,
    trunc: &SeriesTruncation,
    mut series: impl FnMut(FghName) -> Result<C64>,
) -> Result<C64> {
    let t = tau.tau();
    let mut out = C64::new(0.0, 0.0);
    for term in &rule.terms {
        let ex = match term.exponential {
            Exponential::One => C64::new(1.0, 0.0),
            Exponential::Quadratic => (C64::new(0.0, PI) * z * z / t).exp(),
            Exponential::QuadraticQuarter => (C64::new(0.0, PI) * (z * z + 0.25) / t).exp(),
        };
        let w = match term.weight {
            Weight::One => C64::new(1.0, 0.0),
            Weight::Tau => t,
            Weight::TauQ8 => t * modular_power(tau, QExponent::from_24ths(-3)),
            Weight::SqrtMinusITau => sqrt_minus_i_tau(t),
        };
        let p = match term.piece {
            Piece::Series(n) => series(n)?,
            Piece::Theta(ch) => theta(ch, tau, z, trunc)?,
        };
        let zeta = C64::from_polar(1.0, PI * term.zeta8 as f64 / 4.0);
        out += term.coeff.to_c64() * zeta * ex * w * p;
    }
    Ok(out)
}

/// LHS at the transformed point against the RHS at `(tau, z)`.
pub fn check_transform(
    rule: &TransformRule,
    tau: &ModularPoint,
    z: C64,
    trunc: &SeriesTruncation,
) -> Result<TransformResidual> {
    let (lt, lz) = match rule.kind {
        TransformKind::S => (tau.s_image(), z / tau.tau()),
        TransformKind::T => (tau.t_image(), z),
    };
    let lhs = fgh_series(rule.source, &lt, lz, trunc)?;
    let rhs = rule_rhs(rule, tau, z, trunc, |n| fgh_series(n, tau, z, trunc))?;
    Ok(TransformResidual::new(lhs, rhs))
}

/// Applies the S-rule of `name` twice, feeding the first application's
/// value into the second, and compares with direct evaluation at `(tau, -z)`.
pub fn check_s_squared(
    name: FghName,
    tau: &ModularPoint,
    z: C64,
    trunc: &SeriesTruncation,
) -> Result<TransformResidual> {
    // name at S(S(tau, z)) is the rule's RHS at S(tau, z); the series values
    // needed there come from one more application of the rules at (tau, z).
    let second_point = (tau.s_image(), z / tau.tau());
    let second = s_rule(name);
    let inner = |n: FghName| -> Result<C64> {
        let r = s_rule(n);
        rule_rhs(&r, tau, z, trunc, |m| fgh_series(m, tau, z, trunc))
    };
    let rhs = rule_rhs(&second, &second_point.0, second_point.1, trunc, inner)?;
    let lhs = fgh_series(name, tau, -z, trunc)?;
    Ok(TransformResidual::new(lhs, rhs))
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trig {
    Cot,
    Tan,
    Sin,
    Cos,
    Csc,
    Sec,
    Const,
}

impl Trig {
    fn eval(self, x: C64) -> C64 {
        match self {
            Trig::Cot => x.cos() / x.sin(),
            Trig::Tan => x.tan(),
            Trig::Sin => x.sin(),
            Trig::Cos => x.cos(),
            Trig::Csc => x.sin().inv(),
            Trig::Sec => x.cos().inv(),
            Trig::Const => C64::new(1.0, 0.0),
        }
    }

    /// Offset (mod 1) of the zeros and poles of the factor as a function of `a`.
    fn singular_offsets(self) -> &'static [f64] {
        match self {
            Trig::Cot | Trig::Tan => &[0.0, 0.5],
            Trig::Sin | Trig::Csc => &[0.0],
            Trig::Cos | Trig::Sec => &[0.5],
            Trig::Const => &[],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticTarget {
    Series(FghName),
    Theta(ThetaChar),
}

impl AsymptoticTarget {
    pub fn name(&self) -> String {
        match self {
            AsymptoticTarget::Series(n) => n.name().to_string(),
            AsymptoticTarget::Theta(ch) => ch.to_string(),
        }
    }
}

impl FromStr for AsymptoticTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(n) = s.parse::<FghName>() {
            return Ok(AsymptoticTarget::Series(n));
        }
        s.parse::<ThetaChar>().map(AsymptoticTarget::Theta).map_err(|_| Error::UnknownFunction(s.to_string()))
    }
}

/// `value(tau, a tau) ~ scale * (-i tau)^{-power/2} * [e^{-pi i/(4 tau)}] * trig(a pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticRule {
    pub target: AsymptoticTarget,
    /// Exponent of `(-i tau)^{-1/2}`: 2 for `(-i tau)^{-1}`, 1 for `(-i tau)^{-1/2}`.
    pub half_powers: u8,
    pub exponentially_small: bool,
    pub trig: Trig,
    /// `(re, im)` of the constant factor.
    pub scale: (f64, f64),
}

impl AsymptoticRule {
    pub fn name(&self) -> String {
        self.target.name()
    }

    /// Leading behaviour at `tau` for `z = a tau`.
    pub fn leading(&self, tau: C64, a: C64) -> C64 {
        let w = -C64::i() * tau;
        let rate = w.sqrt().powi(-(self.half_powers as i32));
        let ex = if self.exponentially_small { self.small_factor(tau) } else { C64::new(1.0, 0.0) };
        C64::new(self.scale.0, self.scale.1) * rate * ex * self.trig.eval(a * PI)
    }

    /// `e^{-pi i / (4 tau)}`, or 1.
    pub fn small_factor(&self, tau: C64) -> C64 {
        if self.exponentially_small {
            (-C64::new(0.0, PI) / (4.0 * tau)).exp()
        } else {
            C64::new(1.0, 0.0)
        }
    }

    /// Rejects `a` within `min_distance` of a zero or pole of the trig factor.
    pub fn check_a(&self, a: C64, min_distance: f64) -> Result<()> {
        for off in self.trig.singular_offsets() {
            let d = a.re - off;
            let dist = C64::new(d - d.round(), a.im).norm();
            if dist < min_distance {
                return Err(Error::TrigSingularity(format!(
                    "{}: a = {a} is {dist:.3} from a zero or pole of {:?}(a pi); need at least {min_distance}",
                    self.name(),
                    self.trig
                )));
            }
        }
        Ok(())
    }
}

fn arule(target: AsymptoticTarget, half_powers: u8, small: bool, trig: Trig, scale: (f64, f64)) -> AsymptoticRule {
    AsymptoticRule { target, half_powers, exponentially_small: small, trig, scale }
}

/// The 12 function rows followed by the 4 theta rows.
pub fn asymptotic_rules() -> Vec<AsymptoticRule> {
    use AsymptoticTarget::{Series as S, Theta as Th};
    use FghName::*;
    use ThetaChar::*;
    use Trig::*;
    vec![
        arule(S(F1), 2, false, Cot, (0.5, 0.0)),
        arule(S(F2), 2, true, Cos, (1.0, 0.0)),
        arule(S(F3), 2, true, Sin, (1.0, 0.0)),
        arule(S(F4), 2, false, Tan, (-0.5, 0.0)),
        arule(S(G1), 2, false, Cot, (0.5, 0.0)),
        arule(S(G2), 2, true, Cos, (-1.0, 0.0)),
        arule(S(G3), 2, false, Tan, (-0.5, 0.0)),
        arule(S(G4), 2, true, Sin, (1.0, 0.0)),
        arule(S(H1), 2, false, Csc, (0.5, 0.0)),
        arule(S(H2), 2, false, Sec, (0.5, 0.0)),
        arule(S(H3), 1, false, Const, (0.5, 0.0)),
        arule(S(H4), 1, false, Const, (0.5, 0.0)),
        arule(Th(T00), 1, false, Const, (1.0, 0.0)),
        arule(Th(T01), 1, true, Cos, (2.0, 0.0)),
        arule(Th(T10), 1, false, Const, (1.0, 0.0)),
        arule(Th(T11), 1, true, Sin, (0.0, -2.0)),
    ]
}

pub fn asymptotic_rule(name: &str) -> Result<AsymptoticRule> {
    let target: AsymptoticTarget = name.parse()?;
    asymptotic_rules().into_iter().find(|r| r.target == target).ok_or_else(|| Error::UnknownFunction(name.to_string()))
}

/// Minimum distance of `a` from the trig factor's zeros and poles.
pub const TRIG_GUARD: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticPoint {
    pub t: f64,
    #[serde(serialize_with = "as_string")]
    pub ratio: C64Text,
    pub deviation: f64,
}

/// `value(iT, a iT) / leading(iT)` on the grid. Where the rule carries
/// `e^{-pi/(4T)}`, both sides are divided by it first.
pub fn check_asymptotic(
    rule: &AsymptoticRule,
    a: C64,
    grid: &[f64],
    trunc: &SeriesTruncation,
) -> Result<Vec<AsymptoticPoint>> {
    rule.check_a(a, TRIG_GUARD)?;
    grid.iter()
        .map(|&t| {
            let tau = ModularPoint::from_parts(0.0, t)?;
            let z = a * tau.tau();
            let value = match rule.target {
                AsymptoticTarget::Series(n) => fgh_series(n, &tau, z, trunc)?,
                AsymptoticTarget::Theta(ch) => theta(ch, &tau, z, trunc)?,
            };
            let small = rule.small_factor(tau.tau());
            let ratio = (value / small) / (rule.leading(tau.tau(), a) / small);
            Ok(AsymptoticPoint { t, ratio: C64Text(ratio), deviation: (ratio - 1.0).norm() })
        })
        .collect()
}

/// Whether `|ratio - 1|` never grows by more than `slack` (relative) from
/// one grid point to the next, the grid being ordered by decreasing `T`.
pub fn deviations_settle(points: &[AsymptoticPoint], slack: f64) -> bool {
    points.windows(2).all(|w| w[1].deviation <= w[0].deviation * (1.0 + slack))
}
