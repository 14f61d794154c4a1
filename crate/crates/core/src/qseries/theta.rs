use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sum::{gaussian_sum, Accum};
use super::{dedekind_eta, ModularPoint, ThetaIndex};
use crate::{Error, Result, SeriesTruncation, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Characteristic of a Mumford theta function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ThetaChar {
    #[serde(rename = "00")]
    T00,
    #[serde(rename = "01")]
    T01,
    #[serde(rename = "10")]
    T10,
    #[serde(rename = "11")]
    T11,
}

impl ThetaChar {
    pub const ALL: [ThetaChar; 4] = [ThetaChar::T00, ThetaChar::T01, ThetaChar::T10, ThetaChar::T11];

    pub fn from_bits(a: u8, b: u8) -> Result<Self> {
        match (a, b) {
            (0, 0) => Ok(ThetaChar::T00),
            (0, 1) => Ok(ThetaChar::T01),
            (1, 0) => Ok(ThetaChar::T10),
            (1, 1) => Ok(ThetaChar::T11),
            _ => Err(Error::Domain(format!("theta characteristic ({a},{b}) is not a pair of bits"))),
        }
    }

    pub fn a(self) -> u8 {
        matches!(self, ThetaChar::T10 | ThetaChar::T11) as u8
    }

    pub fn b(self) -> u8 {
        matches!(self, ThetaChar::T01 | ThetaChar::T11) as u8
    }

    /// `"00"`, `"01"`, `"10"` or `"11"`.
    pub fn bits(self) -> String {
        format!("{}{}", self.a(), self.b())
    }
}

impl fmt::Display for ThetaChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theta{}{}", self.a(), self.b())
    }
}

impl FromStr for ThetaChar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bits = s.strip_prefix("theta").unwrap_or(s);
        match bits {
            "00" => Ok(ThetaChar::T00),
            "01" => Ok(ThetaChar::T01),
            "10" => Ok(ThetaChar::T10),
            "11" => Ok(ThetaChar::T11),
            _ => Err(Error::UnknownFunction(s.to_string())),
        }
    }
}

/// `sum_{x in Z + offset} sign(j) exp(pi i scale x^2 tau + 2 pi i x w)` where
/// `x = j + offset` and `sign(j) = (-1)^j` when `signed`.
pub(crate) fn lattice_theta(
    tau: C64,
    scale: f64,
    offset: f64,
    w: C64,
    signed: bool,
    trunc: &SeriesTruncation,
) -> Result<Accum> {
    let quad = -PI * scale * tau.im;
    let lin = -2.0 * PI * scale * offset * tau.im - 2.0 * PI * w.im;
    gaussian_sum(quad, lin, trunc, |j| {
        let x = j as f64 + offset;
        let e = I * PI * (scale * x * x * tau + 2.0 * x * w);
        let v = e.exp();
        let v = if signed && j.rem_euclid(2) == 1 { -v } else { v };
        (v, e.re)
    })
}

pub(crate) fn mumford_theta_acc(ch: ThetaChar, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<Accum> {
    lattice_theta(tau.tau(), 1.0, ch.a() as f64 / 2.0, z + ch.b() as f64 / 2.0, false, trunc)
}

/// `theta_ab(tau, z) = sum_n exp(pi i (n + a/2)^2 tau + 2 pi i (n + a/2)(z + b/2))`.
pub fn mumford_theta(a: u8, b: u8, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<C64> {
    Ok(mumford_theta_acc(ThetaChar::from_bits(a, b)?, tau, z, trunc)?.value)
}

pub fn theta(ch: ThetaChar, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<C64> {
    Ok(mumford_theta_acc(ch, tau, z, trunc)?.value)
}

pub(crate) fn theta_km_acc(
    idx: &ThetaIndex,
    signed: bool,
    tau: &ModularPoint,
    u: C64,
    trunc: &SeriesTruncation,
) -> Result<Accum> {
    let m = idx.m().value();
    let offset = idx.k().value() / (2.0 * m);
    // q^{m n^2} e^{2 pi i m n u} = exp(pi i (2m) n^2 tau + 2 pi i n (m u))
    lattice_theta(tau.tau(), 2.0 * m, offset, u * m, signed, trunc)
}

/// `theta_{k,m}(tau, u) = sum_{n in Z + k/(2m)} q^{m n^2} e^{2 pi i m n u}`.
pub fn theta_km(idx: &ThetaIndex, tau: &ModularPoint, u: C64, trunc: &SeriesTruncation) -> Result<C64> {
    Ok(theta_km_acc(idx, false, tau, u, trunc)?.value)
}

/// The alternating variant: lattice point `n = j + k/(2m)` carries `(-1)^j`.
pub fn theta_km_signed(idx: &ThetaIndex, tau: &ModularPoint, u: C64, trunc: &SeriesTruncation) -> Result<C64> {
    Ok(theta_km_acc(idx, true, tau, u, trunc)?.value)
}

/// The four theta constants `(theta00, theta01, theta10, theta11)` at `z = 0`,
/// from eta quotients. The last entry is exactly zero.
pub fn theta_nullwerte(tau: &ModularPoint, trunc: &SeriesTruncation) -> Result<[C64; 4]> {
    let e1 = dedekind_eta(tau, trunc)?;
    let e_half = dedekind_eta(&tau.scaled(0.5)?, trunc)?;
    let e2 = dedekind_eta(&tau.scaled(2.0)?, trunc)?;
    let t00 = e1.powi(5) / (e_half * e_half * e2 * e2);
    let t01 = e_half * e_half / e1;
    let t10 = 2.0 * e2 * e2 / e1;
    Ok([t00, t01, t10, C64::new(0.0, 0.0)])
}

/// The theta00 constant in the form `eta(tau)^5 / (eta(tau/2)^2 eta(tau)^2)`.
/// It does not equal theta00(tau, 0); kept so reports can quantify the gap.
pub fn theta00_nullwert_printed_form(tau: &ModularPoint, trunc: &SeriesTruncation) -> Result<C64> {
    let e1 = dedekind_eta(tau, trunc)?;
    let e_half = dedekind_eta(&tau.scaled(0.5)?, trunc)?;
    Ok(e1.powi(5) / (e_half * e_half * e1 * e1))
}

/// Sum and difference of squares of theta functions at level `tau`
/// expressed through level `2 tau`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Duplication {
    /// `theta00^2 + theta01^2 = A theta00(2tau, 2z)`
    ZeroZeroPlusZeroOne = 1,
    /// `theta00^2 - theta01^2 = B theta10(2tau, 2z)`
    ZeroZeroMinusZeroOne = 2,
    /// `theta10^2 + theta11^2 = B theta00(2tau, 2z)`
    OneZeroPlusOneOne = 3,
    /// `theta10^2 - theta11^2 = A theta10(2tau, 2z)`
    OneZeroMinusOneOne = 4,
}

impl Duplication {
    pub const ALL: [Duplication; 4] = [
        Duplication::ZeroZeroPlusZeroOne,
        Duplication::ZeroZeroMinusZeroOne,
        Duplication::OneZeroPlusOneOne,
        Duplication::OneZeroMinusOneOne,
    ];

    pub fn from_index(variant: u8) -> Result<Self> {
        Self::ALL
            .get((variant as usize).wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::Domain(format!("duplication variant must be 1..4, got {variant}")))
    }

    /// `(left pair, sign of second square, level-2 theta on the right, uses A)`.
    pub fn shape(self) -> (ThetaChar, ThetaChar, f64, ThetaChar, bool) {
        use ThetaChar::*;
        match self {
            Duplication::ZeroZeroPlusZeroOne => (T00, T01, 1.0, T00, true),
            Duplication::ZeroZeroMinusZeroOne => (T00, T01, -1.0, T10, false),
            Duplication::OneZeroPlusOneOne => (T10, T11, 1.0, T00, false),
            Duplication::OneZeroMinusOneOne => (T10, T11, -1.0, T10, true),
        }
    }
}

/// LHS minus RHS of the chosen duplication formula, with
/// `A = 2 eta(2tau) (eta(2tau)^2 / (eta(tau) eta(4tau)))^2` and
/// `B = 4 eta(2tau) (eta(4tau) / eta(2tau))^2`.
pub fn duplication_check(variant: Duplication, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<C64> {
    let (p, r, sign, level2, uses_a) = variant.shape();
    let tp = theta(p, tau, z, trunc)?;
    let tr = theta(r, tau, z, trunc)?;
    let e1 = dedekind_eta(tau, trunc)?;
    let e2 = dedekind_eta(&tau.scaled(2.0)?, trunc)?;
    let e4 = dedekind_eta(&tau.scaled(4.0)?, trunc)?;
    let factor = if uses_a { 2.0 * e2 * (e2 * e2 / (e1 * e4)).powi(2) } else { 4.0 * e2 * (e4 / e2).powi(2) };
    let rhs = factor * theta(level2, &tau.scaled(2.0)?, 2.0 * z, trunc)?;
    Ok(tp * tp + sign * tr * tr - rhs)
}
