//! Theta-quotient closed forms, finite theta corrections and the two
//! denominator identities, built as [`Expr`] trees.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::appell::{AppellSignature, FghName, SpecializedFamily};
use crate::expr::{AppellLine, AppellPart, Expr, LineShift, ThetaArg};
use crate::qseries::ThetaChar::{self, T00, T01, T10, T11};
use crate::{Error, HalfInt, ModularPoint, QExponent, Result, SeriesTruncation, ThetaIndex, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrectionKind {
    /// `q^{a^2} sum_{k=0}^{4a} (-1)^{2bk} q^{-(k-2a)^2/4} theta_{k,1}(tau, 2z)`
    Quarter,
    /// `-i e^{pi i b} q^{a^2/2} sum_{k=0}^{2a-1} (-1)^{(2b+1)k} q^{-(k-a+1/2)^2/2} theta11(tau, z)`
    Half,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CorrectionSum {
    a: HalfInt,
    b: HalfInt,
    kind: CorrectionKind,
}

impl CorrectionSum {
    pub fn new(a: HalfInt, b: HalfInt, kind: CorrectionKind) -> Result<Self> {
        if a.is_negative() {
            return Err(Error::Domain(format!("correction sum needs a >= 0, got {a}")));
        }
        Ok(CorrectionSum { a, b, kind })
    }

    /// The range of `k`.
    pub fn indices(&self) -> std::ops::Range<i64> {
        match self.kind {
            CorrectionKind::Quarter => 0..2 * self.a.twice() + 1,
            CorrectionKind::Half => 0..self.a.twice(),
        }
    }

    pub fn expr(&self) -> Expr {
        let a = self.a.to_ratio();
        let b2 = self.b.twice();
        match self.kind {
            CorrectionKind::Quarter => {
                let terms = self
                    .indices()
                    .map(|k| {
                        let sign = if (b2 * k).rem_euclid(2) == 0 { 1 } else { -1 };
                        let d = Ratio::from_integer(k) - a * 2;
                        Expr::int(sign) * qpow(-d * d / 4) * theta_k1_2z(k)
                    })
                    .collect::<Vec<_>>();
                qpow(a * a) * sum_or_zero(terms)
            }
            CorrectionKind::Half => {
                let terms = self
                    .indices()
                    .map(|k| {
                        let sign = if ((b2 + 1) * k).rem_euclid(2) == 0 { 1 } else { -1 };
                        let d = Ratio::from_integer(k) - a + Ratio::new(1, 2);
                        Expr::int(sign) * qpow(-d * d / 2)
                    })
                    .collect::<Vec<_>>();
                // -i e^{pi i b} = i^{3 + 2b}
                Expr::i_pow(3 + b2) * qpow(a * a / 2) * sum_or_zero(terms) * th(T11)
            }
        }
    }
}

pub fn correction_sum(cs: &CorrectionSum, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<C64> {
    cs.expr().eval(tau, z, trunc)
}

fn sum_or_zero(terms: Vec<Expr>) -> Expr {
    if terms.is_empty() {
        Expr::int(0)
    } else {
        Expr::sum(terms)
    }
}

pub(crate) fn qpow(r: Ratio<i64>) -> Expr {
    Expr::q(QExponent::from_ratio(r).expect("exponent on the 1/24 lattice"))
}

/// `theta_ab(tau, z)`.
pub(crate) fn th(ch: ThetaChar) -> Expr {
    Expr::theta(ch, ThetaArg::z_times(1))
}

fn theta_k1_2z(k: i64) -> Expr {
    let idx = ThetaIndex::new(HalfInt::from_int(k), HalfInt::ONE).expect("positive degree");
    Expr::ThetaKm { idx, signed: false, arg: ThetaArg::z_times(2) }
}

fn eta_r(num: i64, den: i64, power: i32) -> Expr {
    Expr::eta(Ratio::new(num, den), power)
}

/// `theta_ab(tau, 0)` as an eta quotient.
pub fn nullwert(ch: ThetaChar) -> Expr {
    match ch {
        T00 => eta_r(1, 1, 5) * eta_r(1, 2, -2) * eta_r(2, 1, -2),
        T01 => eta_r(1, 2, 2) * eta_r(1, 1, -1),
        T10 => Expr::int(2) * eta_r(2, 1, 2) * eta_r(1, 1, -1),
        T11 => Expr::int(0),
    }
}

/// `eta(tau)^3 theta11(tau, 2z)`.
fn eta3_theta11_2z() -> Expr {
    eta_r(1, 1, 3) * Expr::theta(T11, ThetaArg::z_times(2))
}

fn line_theta(a: HalfInt, b: HalfInt, sign: i64) -> Expr {
    let arg = if sign > 0 { ThetaArg::line(a, b) } else { ThetaArg::line(-a, -b) };
    Expr::theta(T11, arg)
}

/// `-i eta^3 theta11(2z) / (theta11(z + a tau + b) theta11(z - a tau - b))`.
pub fn sl21_expr(a: HalfInt, b: HalfInt) -> Expr {
    Expr::i_pow(3) * eta3_theta11_2z() * line_theta(a, b, 1).recip() * line_theta(a, b, -1).recip()
}

/// `i eta^3 theta11(2z) theta11(a tau + b) / (theta11(z + a tau + b) theta11(z - a tau - b) theta11(z))`.
pub fn osp32_expr(a: HalfInt, b: HalfInt) -> Expr {
    let at = Expr::theta(T11, ThetaArg::new(Ratio::from_integer(1), 0, a.to_ratio(), b));
    Expr::i_pow(1)
        * eta3_theta11_2z()
        * at
        * line_theta(a, b, 1).recip()
        * line_theta(a, b, -1).recip()
        * th(T11).recip()
}

pub fn sl21_denominator_rhs(
    tau: &ModularPoint,
    z: C64,
    a: HalfInt,
    b: HalfInt,
    trunc: &SeriesTruncation,
) -> Result<C64> {
    sl21_expr(a, b).eval(tau, z, trunc)
}

pub fn osp32_denominator_rhs(
    tau: &ModularPoint,
    z: C64,
    a: HalfInt,
    b: HalfInt,
    trunc: &SeriesTruncation,
) -> Result<C64> {
    osp32_expr(a, b).eval(tau, z, trunc)
}

/// `Phi_part(c tau, d z + alpha tau + beta, d z - alpha tau - beta, 0)`.
pub fn appell_line(part: AppellPart, sig: AppellSignature, c: i64, d: i64, alpha: LineShift, beta: HalfInt) -> Expr {
    Expr::Appell(AppellLine { part, sig, tau_scale: c, z_mult: d, alpha, beta })
}

/// `(1/2) [sl(2|1) quotient] + (1/2) [quarter correction]`: the `Phi1[1,0]` line value.
pub fn phi1_sl21_line_rhs(a: HalfInt, b: HalfInt) -> Expr {
    let cs = CorrectionSum { a, b, kind: CorrectionKind::Quarter };
    Expr::frac(1, 2) * sl21_expr(a, b) + Expr::frac(1, 2) * cs.expr()
}

/// `sum_j y^{4j} q^{j^2} / (1 - (-1)^{2b} y^2 q^{j+a})`.
pub fn phi1_sl21_line_series(a: HalfInt, b: HalfInt) -> Expr {
    use crate::appell::LerchSeries;
    use crate::formal::GaussianRational;
    Expr::Lerch(LerchSeries {
        coeff: GaussianRational::one(),
        alternating: false,
        y_lin: 4,
        y_cst: 0,
        q_quad: QExponent::ONE,
        q_lin: QExponent::ZERO,
        q_cst: QExponent::ZERO,
        den_unit: GaussianRational::from_int(if b.twice().rem_euclid(2) == 0 { 1 } else { -1 }),
        den_y: 2,
        den_lin: QExponent::ONE,
        den_cst: QExponent::from_ratio(a.to_ratio()).expect("half-integer"),
    })
}

/// Closed form of `Phi1[1,0]` on the line at `a = n` or `n + 1/2`, `b = 0` or `1/2`,
/// with the theta denominator written as a single square.
pub fn phi1_sl21_shift_rhs(n: u32, half_a: bool, half_b: bool) -> Expr {
    let n = n as i64;
    let a = Ratio::from_integer(n) + if half_a { Ratio::new(1, 2) } else { Ratio::from_integer(0) };
    let den = match (half_a, half_b) {
        (false, false) => T11,
        (false, true) => T10,
        (true, false) => T01,
        (true, true) => T00,
    };
    let unit = if half_b { 1 } else { 3 };
    let quot = Expr::i_pow(unit) * eta3_theta11_2z() * th(den).pow(-2);
    let top = (a * 4).to_integer();
    let terms = (0..=top)
        .map(|k| {
            let sign = if half_b && k % 2 == 1 { -1 } else { 1 };
            let d = Ratio::from_integer(k) - a * 2;
            Expr::int(sign) * qpow(-d * d / 4) * theta_k1_2z(k)
        })
        .collect();
    Expr::frac(1, 2) * qpow(a * a) * (quot + Expr::sum(terms))
}

/// `sum_{k=0}^{top} (+/-1)^k q^{-(k - c)^2 / 2}`.
fn half_gauss_sum(top: i64, c: Ratio<i64>, alternating: bool) -> Expr {
    Expr::sum(
        (0..=top)
            .map(|k| {
                let sign = if alternating && k % 2 == 1 { -1 } else { 1 };
                let d = Ratio::from_integer(k) - c;
                Expr::int(sign) * qpow(-d * d / 2)
            })
            .collect(),
    )
}

/// Closed form of a shifted one-variable family.
pub fn family_rhs(family: SpecializedFamily, n: u32) -> Expr {
    use SpecializedFamily::*;
    let ni = n as i64;
    let nr = Ratio::from_integer(ni);
    let nh = nr + Ratio::new(1, 2);
    let nw = nullwert;
    let i = || Expr::i_pow(1);
    let mi = || Expr::i_pow(3);
    // q^{c^2/2} (quotient + S), S = sum_{k=0}^{top} q^{-(k-c)^2/2} * theta
    let build = |c: Ratio<i64>, quotient: Expr, scale: Expr, tail: ThetaChar, top: i64, alt: bool| {
        qpow(c * c / 2) * (quotient + scale * half_gauss_sum(top, c, alt) * th(tail))
    };
    let over = |num: Expr, d: ThetaChar| num * th(d).recip();
    let sgn_n = || Expr::int(if ni % 2 == 0 { 1 } else { -1 });
    match family {
        EvenMinusInt => build(nr, mi() * nw(T00) * over(th(T01) * th(T10), T11), Expr::int(1), T00, 2 * ni, false),
        OddMinusInt => build(nh, mi() * nw(T10) * over(th(T01) * th(T00), T11), Expr::int(1), T10, 2 * ni + 1, false),
        EvenMinusHalf => build(nh, mi() * nw(T10) * over(th(T10) * th(T11), T01), Expr::int(1), T00, 2 * ni + 1, false),
        OddMinusHalf => build(nr, mi() * nw(T00) * over(th(T00) * th(T11), T01), Expr::int(1), T10, 2 * ni, false),
        AltEvenPlusInt => build(nr, i() * nw(T00) * over(th(T00) * th(T11), T10), Expr::int(1), T01, 2 * ni, false),
        AltOddPlusInt => build(nh, -(nw(T10) * over(th(T01) * th(T00), T10)), i(), T11, 2 * ni + 1, false),
        AltEvenPlusHalf => {
            build(nh, i() * nw(T10) * over(th(T11) * th(T10), T00), Expr::int(1), T01, 2 * ni + 1, false)
        }
        AltOddPlusHalf => build(nr, nw(T00) * over(th(T01) * th(T10), T00), mi(), T11, 2 * ni, false),
        AltOddMinusHalf => {
            Expr::frac(1, 2) * build(nr, sgn_n() * nw(T01) * over(th(T00) * th(T10), T01), mi(), T11, 2 * ni, true)
        }
        OddPlusHalf => {
            Expr::frac(1, 2)
                * build(nr, mi() * sgn_n() * nw(T01) * over(th(T01) * th(T11), T00), Expr::int(1), T10, 2 * ni, true)
        }
        AltEvenMinusInt => {
            Expr::frac(1, 2)
                * build(nr, mi() * sgn_n() * nw(T01) * over(th(T10) * th(T00), T11), Expr::int(1), T01, 2 * ni, true)
        }
        EvenPlusInt => {
            Expr::frac(1, 2)
                * build(nr, i() * sgn_n() * nw(T01) * over(th(T11) * th(T01), T10), Expr::int(1), T00, 2 * ni, true)
        }
    }
}

/// Theta-quotient closed form of `f_i`, `g_i`, `h_i`.
pub fn fgh_closed_form(name: FghName) -> Expr {
    use FghName::*;
    let nw = nullwert;
    let i = || Expr::i_pow(1);
    let mi = || Expr::i_pow(3);
    let q8 = || Expr::q_frac(-1, 8);
    let over = |num: Expr, d: ThetaChar| num * th(d).recip();
    let inner = match name {
        F1 => mi() * nw(T00) * over(th(T01) * th(T10), T11) + th(T00),
        F2 => nw(T00) * over(th(T01) * th(T10), T00) + mi() * th(T11),
        F3 => i() * nw(T00) * over(th(T00) * th(T11), T10) + th(T01),
        F4 => mi() * nw(T00) * over(th(T00) * th(T11), T01) + th(T10),
        G1 => mi() * nw(T10) * over(th(T01) * th(T00), T11) + Expr::int(2) * q8() * th(T10),
        G2 => -(nw(T10) * over(th(T01) * th(T00), T10)) + Expr::int(2) * i() * q8() * th(T11),
        G3 => mi() * nw(T10) * over(th(T10) * th(T11), T01) + Expr::int(2) * q8() * th(T00),
        G4 => i() * nw(T10) * over(th(T11) * th(T10), T00) + Expr::int(2) * q8() * th(T01),
        H1 => mi() * nw(T01) * over(th(T10) * th(T00), T11) + th(T01),
        H2 => nw(T01) * over(th(T00) * th(T10), T01) + mi() * th(T11),
        H3 => i() * nw(T01) * over(th(T11) * th(T01), T10) + th(T00),
        H4 => mi() * nw(T01) * over(th(T01) * th(T11), T00) + th(T10),
    };
    Expr::frac(1, 2) * inner
}
