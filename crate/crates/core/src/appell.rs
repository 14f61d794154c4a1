//! Rank-1 Appell functions and the one-variable Lerch-type series obtained
//! by restricting them to the lines `z1 = z + a tau + b`, `z2 = z - a tau - b`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::formal::GaussianRational;
use crate::qseries::{envelope_center, gaussian_tail, Accum, CDd, Dd};
use crate::{Error, HalfInt, ModularPoint, QExponent, Result, SeriesTruncation, C64};

#[cfg(test)]
const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn is_alternating(self) -> bool {
        self == Sign::Minus
    }
}

/// `(m, s, sign)`: the Appell sum carries `sign^j q^{m j^2 + s j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AppellSignature {
    m: HalfInt,
    s: HalfInt,
    sign: Sign,
}

impl AppellSignature {
    pub fn new(m: HalfInt, s: HalfInt, sign: Sign) -> Result<Self> {
        if !m.is_positive() {
            return Err(Error::Domain(format!("Appell index m must be positive, got {m}")));
        }
        Ok(AppellSignature { m, s, sign })
    }

    pub fn m(&self) -> HalfInt {
        self.m
    }

    pub fn s(&self) -> HalfInt {
        self.s
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AppellArgs {
    pub tau: ModularPoint,
    pub z1: C64,
    pub z2: C64,
    pub t: C64,
}

/// The substitution `z1 = z + a tau + b`, `z2 = z - a tau - b`, `t = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecializedLine {
    a: HalfInt,
    b: HalfInt,
    pub z: C64,
}

impl SpecializedLine {
    pub fn new(a: HalfInt, b: HalfInt, z: C64) -> Result<Self> {
        if a.is_negative() {
            return Err(Error::Domain(format!("line parameter a must be non-negative, got {a}")));
        }
        Ok(SpecializedLine { a, b, z })
    }

    pub fn a(&self) -> HalfInt {
        self.a
    }

    pub fn b(&self) -> HalfInt {
        self.b
    }

    pub fn args(&self, tau: ModularPoint) -> AppellArgs {
        let shift = self.a.value() * tau.tau() + self.b.value();
        AppellArgs { tau, z1: self.z + shift, z2: self.z - shift, t: C64::new(0.0, 0.0) }
    }
}

/// `scale * sign^j * exp(quad j^2 + lin j + cst) / (1 - den_scale exp(dlin j + dcst))`
/// summed over all integers `j`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct LerchTerms {
    pub scale: C64,
    pub alternating: bool,
    pub quad: C64,
    pub lin: C64,
    pub cst: C64,
    pub den_scale: C64,
    pub dlin: C64,
    pub dcst: C64,
}

/// One evaluated term: `num / d` with `num = sign scale e^{expo}`, `d = 1 - x`.
#[derive(Clone, Copy)]
struct Term {
    expo: C64,
    neg: bool,
    x: C64,
    d: C64,
    log_env: f64,
}

impl Term {
    fn value(&self, scale: C64) -> C64 {
        let num = scale * self.expo.exp();
        (if self.neg { -num } else { num }) / self.d
    }
}

impl LerchTerms {
    fn term(&self, j: i64, trunc: &SeriesTruncation) -> Result<Term> {
        let jf = j as f64;
        let x = self.den_scale * (self.dlin * jf + self.dcst).exp();
        let d = 1.0 - x;
        if d.norm() < trunc.pole_guard {
            return Err(Error::PoleProximity {
                what: format!("denominator 1 - x_j at j = {j}"),
                distance: d.norm(),
                guard: trunc.pole_guard,
            });
        }
        let expo = self.quad * (jf * jf) + self.lin * jf + self.cst;
        let log_env = self.quad.re * jf * jf + self.lin.re * jf + self.cst.re + self.scale.norm().ln();
        Ok(Term { expo, neg: self.alternating && j.rem_euclid(2) == 1, x, d, log_env })
    }

    /// Bound on the terms beyond `n` in direction `dir`, once one is available.
    fn tail(&self, n: i64, dir: i64, t: &Term) -> Option<f64> {
        let (qa, la) = (self.quad.re, self.lin.re);
        let shrinking = self.dlin.re * dir as f64;
        let ax = t.x.norm();
        if shrinking < 0.0 {
            (ax <= 0.5).then(|| gaussian_tail(qa, la, n, dir, t.log_env).map(|b| 2.0 * b)).flatten()
        } else if shrinking > 0.0 {
            if ax < 2.0 {
                return None;
            }
            let nf = n as f64;
            let env = t.log_env - (self.dlin.re * nf + self.dcst.re) - self.den_scale.norm().ln();
            gaussian_tail(qa, la - self.dlin.re, n, dir, env).map(|b| 2.0 * b)
        } else {
            let k = 1.0 / (1.0 - ax).abs();
            k.is_finite().then(|| gaussian_tail(qa, la, n, dir, t.log_env).map(|b| k * b)).flatten()
        }
    }

    fn check(&self) -> Result<()> {
        // also rejects NaN
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.quad.re < 0.0) {
            return Err(Error::Domain(format!("Lerch series does not converge: quadratic rate {}", self.quad.re)));
        }
        Ok(())
    }

    pub(crate) fn sum(&self, trunc: &SeriesTruncation) -> Result<Accum> {
        self.check()?;
        let center = envelope_center(self.quad.re, self.lin.re);
        let (value, acc) = walk(center, trunc, |j| {
            let t = self.term(j, trunc)?;
            let v = t.value(self.scale);
            Ok((v, v.norm(), [-1, 1].map(|dir| self.tail(j, dir, &t)), v.norm()))
        })?;
        Ok(Accum { value, ..acc })
    }
}

/// Sums outward from `center` in both directions. `f(j)` returns the term,
/// tail bounds beyond `j` towards `-inf` and `+inf`, and the size of the
/// size the tail bounds are measured against (normally `|term|`). Each
/// direction stops once its tail is below half the tolerance times the
/// largest such size seen.
fn walk<T, F>(center: i64, trunc: &SeriesTruncation, mut f: F) -> Result<(T, Accum)>
where
    T: Copy + std::ops::Add<Output = T>,
    F: FnMut(i64) -> Result<(T, f64, [Option<f64>; 2], f64)>,
{
    let budget = 0.5 * trunc.tolerance;
    let (mut total, a0, _, s0) = f(center)?;
    let mut acc = Accum { value: C64::new(0.0, 0.0), magnitude: a0, peak: a0, terms: 1, tail: 0.0 };
    let mut piece = s0;
    for (side, dir) in [(1usize, 1i64), (0, -1)] {
        let mut n = center;
        loop {
            n += dir;
            let (v, a, tails, s) = f(n)?;
            total = total + v;
            acc.magnitude += a;
            acc.peak = acc.peak.max(a);
            acc.terms += 1;
            piece = piece.max(s);
            let bound = tails[side];
            if let Some(t) = bound {
                if t <= budget * piece || t == 0.0 {
                    acc.tail += t;
                    break;
                }
            }
            if acc.terms >= trunc.max_terms {
                return Err(Error::Truncation {
                    terms: acc.terms,
                    tail: bound.unwrap_or(f64::INFINITY),
                    tolerance: trunc.tolerance,
                });
            }
        }
    }
    Ok((total, acc))
}

fn two_pi_i() -> C64 {
    C64::new(0.0, 2.0 * PI)
}

fn prefactor(sig: &AppellSignature, t: C64) -> C64 {
    (-two_pi_i() * sig.m.value() * t).exp()
}

fn phi_1_terms(sig: &AppellSignature, args: &AppellArgs) -> LerchTerms {
    let (m, s) = (sig.m.value(), sig.s.value());
    let tau = args.tau.tau();
    let w = two_pi_i();
    LerchTerms {
        scale: prefactor(sig, args.t),
        alternating: sig.sign.is_alternating(),
        quad: w * m * tau,
        lin: w * (m * (args.z1 + args.z2) + s * tau),
        cst: w * s * args.z1,
        den_scale: C64::new(1.0, 0.0),
        dlin: w * tau,
        dcst: w * args.z1,
    }
}

fn phi_2_terms(sig: &AppellSignature, args: &AppellArgs) -> LerchTerms {
    let (m, s) = (sig.m.value(), sig.s.value());
    let tau = args.tau.tau();
    let w = two_pi_i();
    LerchTerms {
        scale: prefactor(sig, args.t),
        alternating: sig.sign.is_alternating(),
        quad: w * m * tau,
        lin: w * (-m * (args.z1 + args.z2) + s * tau),
        cst: -w * s * args.z2,
        den_scale: C64::new(1.0, 0.0),
        dlin: w * tau,
        dcst: -w * args.z2,
    }
}

pub(crate) fn phi_1_acc(sig: &AppellSignature, args: &AppellArgs, trunc: &SeriesTruncation) -> Result<Accum> {
    phi_1_terms(sig, args).sum(trunc)
}

pub(crate) fn phi_2_acc(sig: &AppellSignature, args: &AppellArgs, trunc: &SeriesTruncation) -> Result<Accum> {
    phi_2_terms(sig, args).sum(trunc)
}

/// A point on the line `z1 = w + alpha tau0 + beta`, `z2 = w - alpha tau0 - beta`,
/// with the Appell modulus `tau`. The shift is only formed in extended
/// precision, so `z1 + z2 = 2w` holds exactly.
#[derive(Clone, Copy, Debug)]
pub(crate) struct LinePoint {
    pub tau: ModularPoint,
    pub w: C64,
    pub alpha: C64,
    pub tau0: C64,
    pub beta: f64,
    pub t: C64,
}

impl LinePoint {
    /// Any pair `(z1, z2)`, written as `w +/- shift`.
    fn general(args: &AppellArgs) -> LinePoint {
        let w = 0.5 * (args.z1 + args.z2);
        LinePoint { tau: args.tau, w, alpha: C64::new(1.0, 0.0), tau0: args.z1 - w, beta: 0.0, t: args.t }
    }

    pub(crate) fn args(&self) -> AppellArgs {
        let shift = self.alpha * self.tau0 + self.beta;
        AppellArgs { tau: self.tau, z1: self.w + shift, z2: self.w - shift, t: self.t }
    }
}

/// `Phi1 + sign Phi2` on a line, summed in double-double so that
/// the two large sums can cancel to far below their own size. Each sum is
/// truncated with its tail below `tolerance * 1e-16` of its largest term.
pub(crate) fn phi_pair_acc(
    sig: &AppellSignature,
    line: &LinePoint,
    sign: f64,
    trunc: &SeriesTruncation,
) -> Result<Accum> {
    let args = line.args();
    let (t1, t2) = (phi_1_terms(sig, &args), phi_2_terms(sig, &args));
    t1.check()?;
    let (m, s) = (Dd::new(sig.m.value()), Dd::new(sig.s.value()));
    let tau = CDd::from_c64(line.tau.tau());
    let w = CDd::from_c64(line.w);
    let shift = CDd::from_c64(line.alpha) * CDd::from_c64(line.tau0) + CDd::new(Dd::new(line.beta), Dd::ZERO);
    let (z1, z2) = (w + shift, w - shift);
    let w2 = w.scale(Dd::new(2.0));
    let alternating = sig.sign.is_alternating();
    let one = CDd::new(Dd::ONE, Dd::ZERO);
    let fine = SeriesTruncation { tolerance: trunc.tolerance * 1e-16, ..*trunc };
    let center = envelope_center(t1.quad.re, t1.lin.re);
    let (value, acc) = walk(center, &fine, |j| {
        let a = t1.term(j, trunc)?;
        let b = t2.term(j, trunc)?;
        let jd = Dd::new(j as f64);
        let mj = m * jd;
        // m j^2 + s j is a half-integer, exact in f64
        let qt = tau.scale(Dd::new(sig.m.value() * (j * j) as f64 + sig.s.value() * j as f64));
        let jt = tau.scale(jd);
        let e1 = (w2.scale(mj) + z1.scale(s) + qt).two_pi_i().exp();
        let e2 = (qt - w2.scale(mj) - z2.scale(s)).two_pi_i().exp();
        let d1 = one - (z1 + jt).two_pi_i().exp();
        let d2 = one - (jt - z2).two_pi_i().exp();
        let v = e1 / d1 + (e2 / d2).scale(Dd::new(sign));
        let v = if alternating && j.rem_euclid(2) == 1 { -v } else { v };
        let (va, vb) = (a.value(t1.scale).norm(), b.value(t2.scale).norm());
        let bound = |dir| Some(t1.tail(j, dir, &a)? + t2.tail(j, dir, &b)?);
        Ok((v, va + vb, [bound(-1), bound(1)], va.max(vb)))
    })?;
    Ok(Accum { value: t1.scale * value.to_c64(), ..acc })
}

/// `e^{-2 pi i m t} sum_j sign^j e^{2 pi i m j (z1+z2) + 2 pi i s z1} q^{m j^2 + s j} / (1 - e^{2 pi i z1} q^j)`.
pub fn phi_1(sig: &AppellSignature, args: &AppellArgs, trunc: &SeriesTruncation) -> Result<C64> {
    Ok(phi_1_acc(sig, args, trunc)?.value)
}

/// `e^{-2 pi i m t} sum_j sign^j e^{-2 pi i m j (z1+z2) - 2 pi i s z2} q^{m j^2 + s j} / (1 - e^{-2 pi i z2} q^j)`.
pub fn phi_2(sig: &AppellSignature, args: &AppellArgs, trunc: &SeriesTruncation) -> Result<C64> {
    Ok(phi_2_acc(sig, args, trunc)?.value)
}

/// `Phi1 - Phi2`.
pub fn phi_diff(sig: &AppellSignature, args: &AppellArgs, trunc: &SeriesTruncation) -> Result<C64> {
    Ok(phi_pair_acc(sig, &LinePoint::general(args), -1.0, trunc)?.value)
}

/// `Phi1 + Phi2`.
pub fn phi_star(sig: &AppellSignature, args: &AppellArgs, trunc: &SeriesTruncation) -> Result<C64> {
    Ok(phi_pair_acc(sig, &LinePoint::general(args), 1.0, trunc)?.value)
}

/// An exact one-variable Lerch-type series
/// `coeff * sum_j eps^j y^{y_lin j + y_cst} q^{q_quad j^2 + q_lin j + q_cst}
///  / (1 - den_unit y^{den_y} q^{den_lin j + den_cst})`, `y = e^{pi i z}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LerchSeries {
    pub coeff: GaussianRational,
    pub alternating: bool,
    pub y_lin: i64,
    pub y_cst: i64,
    pub q_quad: QExponent,
    pub q_lin: QExponent,
    pub q_cst: QExponent,
    /// One of `1, -1, i, -i`.
    pub den_unit: GaussianRational,
    pub den_y: i64,
    pub den_lin: QExponent,
    pub den_cst: QExponent,
}

impl LerchSeries {
    /// The common shape `sum_j eps^j y^{y_lin j + y_cst} q^{...} / (1 -/+ y^2 q^{j + shift})`.
    fn standard(
        coeff: i64,
        alternating: bool,
        (y_lin, y_cst): (i64, i64),
        (q_quad, q_lin, q_cst): (i64, i64, i64),
        plus: bool,
        den_shift_24: i64,
    ) -> Self {
        LerchSeries {
            coeff: GaussianRational::from_int(coeff),
            alternating,
            y_lin,
            y_cst,
            q_quad: QExponent::from_24ths(q_quad),
            q_lin: QExponent::from_24ths(q_lin),
            q_cst: QExponent::from_24ths(q_cst),
            den_unit: GaussianRational::from_int(if plus { -1 } else { 1 }),
            den_y: 2,
            den_lin: QExponent::ONE,
            den_cst: QExponent::from_24ths(den_shift_24),
        }
    }

    /// The sum written out with `y = e^{pi i z}`.
    pub fn formula(&self) -> String {
        let coeff = if self.coeff.is_one() { String::new() } else { format!("{} ", self.coeff) };
        let alt = if self.alternating { "(-1)^j " } else { "" };
        let la = |k: i64, c: i64| match (k, c) {
            (k, 0) => format!("{k}j"),
            (k, c) => format!("{k}j{c:+}"),
        };
        format!(
            "{coeff}sum_j {alt}y^{{{}}} q^{{{} j^2 + {} j + {}}} / (1 - {} y^{{{}}} q^{{{} j + {}}})",
            la(self.y_lin, self.y_cst),
            self.q_quad,
            self.q_lin,
            self.q_cst,
            self.den_unit,
            self.den_y,
            self.den_lin,
            self.den_cst
        )
    }

    pub(crate) fn terms(&self, tau: C64, z: C64) -> LerchTerms {
        let w = two_pi_i();
        let piz = C64::new(0.0, PI) * z;
        LerchTerms {
            scale: self.coeff.to_c64(),
            alternating: self.alternating,
            quad: w * tau * self.q_quad.value(),
            lin: piz * self.y_lin as f64 + w * tau * self.q_lin.value(),
            cst: piz * self.y_cst as f64 + w * tau * self.q_cst.value(),
            den_scale: self.den_unit.to_c64(),
            dlin: w * tau * self.den_lin.value(),
            dcst: piz * self.den_y as f64 + w * tau * self.den_cst.value(),
        }
    }

    pub(crate) fn eval_acc(&self, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<Accum> {
        self.terms(tau.tau(), z).sum(trunc)
    }

    pub fn eval(&self, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<C64> {
        Ok(self.eval_acc(tau, z, trunc)?.value)
    }

    /// The `j`-th term, summed by nobody; used by oracles and decay checks.
    pub fn term(&self, j: i64, tau: &ModularPoint, z: C64) -> C64 {
        let t = self.terms(tau.tau(), z);
        let jf = j as f64;
        let num = t.scale * (t.quad * (jf * jf) + t.lin * jf + t.cst).exp();
        let num = if t.alternating && j.rem_euclid(2) == 1 { -num } else { num };
        num / (1.0 - t.den_scale * (t.dlin * jf + t.dcst).exp())
    }

    pub fn scaled(mut self, c: GaussianRational) -> Self {
        self.coeff = &self.coeff * &c;
        self
    }
}

/// Twelve one-variable series indexed by a shift `n >= 0`. Names record the
/// parity of the `y`-power, the sign in the denominator, and whether the
/// denominator shift is `n` or `n + 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecializedFamily {
    /// `2 sum e^{2pi i j z} q^{j^2/2} / (1 - e^{2pi i z} q^{j+n})`
    EvenMinusInt,
    /// `2 sum e^{2pi i (j-1/2) z} q^{(j-1/2)^2/2} / (1 - e^{2pi i z} q^{j+n})`
    OddMinusInt,
    /// `2 sum e^{2pi i j z} q^{j^2/2} / (1 - e^{2pi i z} q^{j+n+1/2})`
    EvenMinusHalf,
    /// `2 sum e^{2pi i (j+1/2) z} q^{(j+1/2)^2/2} / (1 - e^{2pi i z} q^{j+n+1/2})`
    OddMinusHalf,
    /// `2 sum (-1)^j e^{2pi i j z} q^{j^2/2} / (1 + e^{2pi i z} q^{j+n})`
    AltEvenPlusInt,
    /// `2 sum (-1)^j e^{2pi i (j-1/2) z} q^{(j-1/2)^2/2} / (1 + e^{2pi i z} q^{j+n})`
    AltOddPlusInt,
    /// `2 sum (-1)^j e^{2pi i j z} q^{j^2/2} / (1 + e^{2pi i z} q^{j+n+1/2})`
    AltEvenPlusHalf,
    /// `2 sum (-1)^j e^{2pi i (j+1/2) z} q^{(j+1/2)^2/2} / (1 + e^{2pi i z} q^{j+n+1/2})`
    AltOddPlusHalf,
    /// `sum (-1)^j e^{2pi i (j+1/2) z} q^{(j+1/2)^2/2} / (1 - e^{2pi i z} q^{j+n+1/2})`
    AltOddMinusHalf,
    /// `sum e^{2pi i (j+1/2) z} q^{(j+1/2)^2/2} / (1 + e^{2pi i z} q^{j+n+1/2})`
    OddPlusHalf,
    /// `sum (-1)^j e^{2pi i j z} q^{j^2/2} / (1 - e^{2pi i z} q^{j+n})`
    AltEvenMinusInt,
    /// `sum e^{2pi i j z} q^{j^2/2} / (1 + e^{2pi i z} q^{j+n})`
    EvenPlusInt,
}

impl SpecializedFamily {
    pub const ALL: [SpecializedFamily; 12] = [
        SpecializedFamily::EvenMinusInt,
        SpecializedFamily::OddMinusInt,
        SpecializedFamily::EvenMinusHalf,
        SpecializedFamily::OddMinusHalf,
        SpecializedFamily::AltEvenPlusInt,
        SpecializedFamily::AltOddPlusInt,
        SpecializedFamily::AltEvenPlusHalf,
        SpecializedFamily::AltOddPlusHalf,
        SpecializedFamily::AltOddMinusHalf,
        SpecializedFamily::OddPlusHalf,
        SpecializedFamily::AltEvenMinusInt,
        SpecializedFamily::EvenPlusInt,
    ];

    pub fn name(self) -> &'static str {
        use SpecializedFamily::*;
        match self {
            EvenMinusInt => "even-minus-int",
            OddMinusInt => "odd-minus-int",
            EvenMinusHalf => "even-minus-half",
            OddMinusHalf => "odd-minus-half",
            AltEvenPlusInt => "alt-even-plus-int",
            AltOddPlusInt => "alt-odd-plus-int",
            AltEvenPlusHalf => "alt-even-plus-half",
            AltOddPlusHalf => "alt-odd-plus-half",
            AltOddMinusHalf => "alt-odd-minus-half",
            OddPlusHalf => "odd-plus-half",
            AltEvenMinusInt => "alt-even-minus-int",
            EvenPlusInt => "even-plus-int",
        }
    }

    /// Whether the denominator shift is `n + 1/2`.
    pub fn half_shift(self) -> bool {
        use SpecializedFamily::*;
        matches!(self, EvenMinusHalf | OddMinusHalf | AltEvenPlusHalf | AltOddPlusHalf | AltOddMinusHalf | OddPlusHalf)
    }

    pub fn series(self, n: u32) -> LerchSeries {
        use SpecializedFamily::*;
        let shift = 24 * n as i64 + if self.half_shift() { 12 } else { 0 };
        // y-power and q-power of the numerator, in 24ths:
        // even: y^{2j} q^{j^2/2}; odd-: y^{2j-1} q^{(j-1/2)^2/2}; odd+: y^{2j+1} q^{(j+1/2)^2/2}.
        let even = ((2, 0), (12, 0, 0));
        let odd_minus = ((2, -1), (12, -12, 3));
        let odd_plus = ((2, 1), (12, 12, 3));
        let (coeff, alt, num, plus) = match self {
            EvenMinusInt => (2, false, even, false),
            OddMinusInt => (2, false, odd_minus, false),
            EvenMinusHalf => (2, false, even, false),
            OddMinusHalf => (2, false, odd_plus, false),
            AltEvenPlusInt => (2, true, even, true),
            AltOddPlusInt => (2, true, odd_minus, true),
            AltEvenPlusHalf => (2, true, even, true),
            AltOddPlusHalf => (2, true, odd_plus, true),
            AltOddMinusHalf => (1, true, odd_plus, false),
            OddPlusHalf => (1, false, odd_plus, true),
            AltEvenMinusInt => (1, true, even, false),
            EvenPlusInt => (1, false, even, true),
        };
        LerchSeries::standard(coeff, alt, num.0, num.1, plus, shift)
    }
}

impl FromStr for SpecializedFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.iter().copied().find(|f| f.name() == s).ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

impl fmt::Display for SpecializedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn specialized_series(
    family: SpecializedFamily,
    n: u32,
    tau: &ModularPoint,
    z: C64,
    trunc: &SeriesTruncation,
) -> Result<C64> {
    family.series(n).eval(tau, z, trunc)
}

/// The twelve functions `f1..f4`, `g1..g4`, `h1..h4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FghName {
    F1,
    F2,
    F3,
    F4,
    G1,
    G2,
    G3,
    G4,
    H1,
    H2,
    H3,
    H4,
}

impl FghName {
    pub const ALL: [FghName; 12] = [
        FghName::F1,
        FghName::F2,
        FghName::F3,
        FghName::F4,
        FghName::G1,
        FghName::G2,
        FghName::G3,
        FghName::G4,
        FghName::H1,
        FghName::H2,
        FghName::H3,
        FghName::H4,
    ];

    pub fn name(self) -> &'static str {
        use FghName::*;
        match self {
            F1 => "f1",
            F2 => "f2",
            F3 => "f3",
            F4 => "f4",
            G1 => "g1",
            G2 => "g2",
            G3 => "g3",
            G4 => "g4",
            H1 => "h1",
            H2 => "h2",
            H3 => "h3",
            H4 => "h4",
        }
    }

    /// The defining sum.
    pub fn series(self) -> LerchSeries {
        use FghName::*;
        let even = ((2, 0), (12, 0, 0));
        let odd_plus = ((2, 1), (12, 12, 3));
        // y^{2j-1} q^{j(j-1)/2} and y^{2j} q^{(j^2 - 1/4)/2}
        let g_int = ((2, -1), (12, -12, 0));
        let g_half = ((2, 0), (12, 0, -3));
        let (alt, num, plus, half) = match self {
            F1 => (false, even, false, false),
            F2 => (true, odd_plus, true, true),
            F3 => (true, even, true, false),
            F4 => (false, odd_plus, false, true),
            G1 => (false, g_int, false, false),
            G2 => (true, g_int, true, false),
            G3 => (false, g_half, false, true),
            G4 => (true, g_half, true, true),
            H1 => (true, even, false, false),
            H2 => (true, odd_plus, false, true),
            H3 => (false, even, true, false),
            H4 => (false, odd_plus, true, true),
        };
        LerchSeries::standard(1, alt, num.0, num.1, plus, if half { 12 } else { 0 })
    }
}

impl FromStr for FghName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.iter().copied().find(|f| f.name() == s).ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

impl fmt::Display for FghName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn fgh_series(name: FghName, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<C64> {
    name.series().eval(tau, z, trunc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DoublingVariant {
    #[serde(rename = "+")]
    Sum,
    #[serde(rename = "-")]
    Difference,
}

/// `Phi1[1,0](tau, z+a tau, z-a tau, 0) +/- Phi1[1,0](tau, z+a tau+1/2, z-a tau-1/2, 0)
///  - 2 Phi1[1/2, s](2tau, 2(z+a tau), 2(z-a tau), 0)` with `s = 0` for the sum and
/// `s = 1/2` for the difference. `a` may be any complex number.
pub fn doubling_relation_check(
    variant: DoublingVariant,
    a: C64,
    tau: &ModularPoint,
    z: C64,
    trunc: &SeriesTruncation,
) -> Result<C64> {
    let one = AppellSignature::new(HalfInt::ONE, HalfInt::ZERO, Sign::Plus)?;
    let s = match variant {
        DoublingVariant::Sum => HalfInt::ZERO,
        DoublingVariant::Difference => HalfInt::HALF,
    };
    let half = AppellSignature::new(HalfInt::HALF, s, Sign::Plus)?;
    let t = tau.tau();
    let zero = C64::new(0.0, 0.0);
    let p = phi_1(&one, &AppellArgs { tau: *tau, z1: z + a * t, z2: z - a * t, t: zero }, trunc)?;
    let r = phi_1(&one, &AppellArgs { tau: *tau, z1: z + a * t + 0.5, z2: z - a * t - 0.5, t: zero }, trunc)?;
    let lhs = match variant {
        DoublingVariant::Sum => p + r,
        DoublingVariant::Difference => p - r,
    };
    let tau2 = tau.scaled(2.0)?;
    let rhs =
        2.0 * phi_1(&half, &AppellArgs { tau: tau2, z1: 2.0 * (z + a * t), z2: 2.0 * (z - a * t), t: zero }, trunc)?;
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tr() -> SeriesTruncation {
        SeriesTruncation::new(1e-15, 1_000_000).unwrap()
    }

    fn pt(re: f64, im: f64) -> ModularPoint {
        ModularPoint::from_parts(re, im).unwrap()
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm()).max(1e-30)
    }

    fn e(x: C64) -> C64 {
        (I * 2.0 * PI * x).exp()
    }

    fn qp(tau: C64, r: f64) -> C64 {
        e(tau * r)
    }

    #[allow(clippy::too_many_arguments)]
    /// Fixed symmetric window of `phi_1` terms written straight from the definition.
    fn phi1_brute(m: f64, s: f64, alt: bool, tau: C64, z1: C64, z2: C64, t: C64, n: i64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for j in -n..=n {
            let jf = j as f64;
            let sg = if alt && j.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
            acc += sg * e(m * jf * (z1 + z2) + s * z1) * qp(tau, m * jf * jf + s * jf) / (1.0 - e(z1) * qp(tau, jf));
        }
        e(-m * t) * acc
    }

    #[allow(clippy::too_many_arguments)]
    fn phi2_brute(m: f64, s: f64, alt: bool, tau: C64, z1: C64, z2: C64, t: C64, n: i64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for j in -n..=n {
            let jf = j as f64;
            let sg = if alt && j.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
            acc += sg * e(-m * jf * (z1 + z2) - s * z2) * qp(tau, m * jf * jf + s * jf) / (1.0 - e(-z2) * qp(tau, jf));
        }
        e(-m * t) * acc
    }

    fn sig(m2: i64, s2: i64, sign: Sign) -> AppellSignature {
        AppellSignature::new(HalfInt::from_twice(m2), HalfInt::from_twice(s2), sign).unwrap()
    }

    #[test]
    fn phi1_matches_direct_sum() {
        let tau = pt(0.0, 1.0);
        let args = AppellArgs { tau, z1: C64::new(0.3, 0.1), z2: C64::new(0.2, 0.0), t: C64::new(0.0, 0.0) };
        let v = phi_1(&sig(2, 0, Sign::Plus), &args, &tr()).unwrap();
        let oracle = phi1_brute(1.0, 0.0, false, tau.tau(), args.z1, args.z2, args.t, 40);
        assert!(rel(v, oracle) < 1e-12, "{v} {oracle}");
    }

    #[test]
    fn phi2_is_phi1_with_negated_swapped_arguments() {
        let tau = pt(0.13, 0.9);
        let z1 = C64::new(0.3, 0.1);
        let z2 = C64::new(0.2, 0.05);
        let t = C64::new(0.1, -0.02);
        for (m2, s2, sign) in [(2, 0, Sign::Plus), (1, 1, Sign::Minus), (2, 1, Sign::Plus)] {
            let sg = sig(m2, s2, sign);
            let lhs = phi_2(&sg, &AppellArgs { tau, z1, z2, t }, &tr()).unwrap();
            let rhs = phi_1(&sg, &AppellArgs { tau, z1: -z2, z2: -z1, t }, &tr()).unwrap();
            assert!(rel(lhs, rhs) < 1e-12);
            let oracle = phi2_brute(m2 as f64 / 2.0, s2 as f64 / 2.0, sign == Sign::Minus, tau.tau(), z1, z2, t, 40);
            assert!(rel(lhs, oracle) < 1e-12);
        }
        // Swapping without negation is a different function.
        let sg = sig(2, 0, Sign::Plus);
        let a = phi_2(&sg, &AppellArgs { tau, z1, z2, t: C64::new(0.0, 0.0) }, &tr()).unwrap();
        let b = phi_1(&sg, &AppellArgs { tau, z1: z2, z2: z1, t: C64::new(0.0, 0.0) }, &tr()).unwrap();
        assert!(rel(a, b) > 1e-3);
    }

    #[test]
    fn line_restriction_is_the_one_variable_series() {
        let tau = pt(0.11, 0.8);
        let z = C64::new(0.27, 0.06);
        for (a2, b2) in [(0, 0), (1, 0), (1, 1), (2, 0), (3, 1)] {
            let line = SpecializedLine::new(HalfInt::from_twice(a2), HalfInt::from_twice(b2), z).unwrap();
            let v = phi_1(&sig(2, 0, Sign::Plus), &line.args(tau), &tr()).unwrap();
            let (a, b) = (a2 as f64 / 2.0, b2);
            let sgn = if b % 2 == 0 { 1.0 } else { -1.0 };
            let mut oracle = C64::new(0.0, 0.0);
            for j in -40i64..=40 {
                let jf = j as f64;
                oracle += e(2.0 * jf * z) * qp(tau.tau(), jf * jf) / (1.0 - sgn * e(z) * qp(tau.tau(), jf + a));
            }
            assert!(rel(v, oracle) < 1e-12, "a2={a2} b2={b2}");
        }
    }

    #[test]
    fn families_at_zero_shift_are_fgh() {
        use FghName::*;
        use SpecializedFamily::*;
        let tau = pt(-0.17, 0.95);
        let z = C64::new(0.31, 0.12);
        let q8 = qp(tau.tau(), 1.0 / 8.0);
        let t = tr();
        let f = |n: FghName| fgh_series(n, &tau, z, &t).unwrap();
        let s = |fam: SpecializedFamily| specialized_series(fam, 0, &tau, z, &t).unwrap();
        let checks = [
            (s(EvenMinusInt), 2.0 * f(F1)),
            (s(OddMinusInt), 2.0 * q8 * f(G1)),
            (s(EvenMinusHalf), 2.0 * q8 * f(G3)),
            (s(OddMinusHalf), 2.0 * f(F4)),
            (s(AltEvenPlusInt), 2.0 * f(F3)),
            (s(AltOddPlusInt), 2.0 * q8 * f(G2)),
            (s(AltEvenPlusHalf), 2.0 * q8 * f(G4)),
            (s(AltOddPlusHalf), 2.0 * f(F2)),
            (s(AltOddMinusHalf), f(H2)),
            (s(OddPlusHalf), f(H4)),
            (s(AltEvenMinusInt), f(H1)),
            (s(EvenPlusInt), f(H3)),
        ];
        for (k, (a, b)) in checks.iter().enumerate() {
            assert!(rel(*a, *b) < 1e-12, "family {k}");
        }
    }

    #[test]
    fn shifted_family_matches_direct_sum() {
        let tau = pt(0.0, 2.0);
        let z = C64::new(0.37, 0.0);
        let v = specialized_series(SpecializedFamily::AltEvenPlusHalf, 1, &tau, z, &tr()).unwrap();
        let mut oracle = C64::new(0.0, 0.0);
        for j in -40i64..=40 {
            let jf = j as f64;
            let sg = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            oracle += 2.0 * sg * e(jf * z) * qp(tau.tau(), jf * jf / 2.0) / (1.0 + e(z) * qp(tau.tau(), jf + 1.5));
        }
        assert!((v - oracle).norm() < 1e-10);
    }

    #[test]
    fn f2_matches_direct_sum_and_g1_central_term() {
        let tau = pt(0.0, 2.0);
        let z = C64::new(0.31, 0.05);
        let v = fgh_series(FghName::F2, &tau, z, &tr()).unwrap();
        let mut oracle = C64::new(0.0, 0.0);
        for j in -40i64..=40 {
            let x = j as f64 + 0.5;
            let sg = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            oracle += sg * e(x * z) * qp(tau.tau(), x * x / 2.0) / (1.0 + e(z) * qp(tau.tau(), x));
        }
        assert!((v - oracle).norm() < 1e-10);
        let g1 = FghName::G1.series();
        let t0 = g1.term(0, &tau, z);
        let expect = (-I * PI * z).exp() / (1.0 - e(z));
        assert!(rel(t0, expect) < 1e-14);
    }

    #[test]
    fn h3_is_f1_shifted_by_half() {
        // e^{2 pi i j (z+1/2)} = (-1)^j e^{2 pi i j z} and 1 - e^{2 pi i (z+1/2)} q^j = 1 + e^{2 pi i z} q^j,
        // so the shift trades the alternation against the denominator sign.
        let tau = pt(0.2, 0.7);
        let z = C64::new(0.13, 0.08);
        let h3 = fgh_series(FghName::H3, &tau, z, &tr()).unwrap();
        let h1 = fgh_series(FghName::H1, &tau, z + 0.5, &tr()).unwrap();
        assert!(rel(h3, h1) < 1e-12);
        let f1 = fgh_series(FghName::F1, &tau, z, &tr()).unwrap();
        let f3 = fgh_series(FghName::F3, &tau, z + 0.5, &tr()).unwrap();
        assert!(rel(f1, f3) < 1e-12);
    }

    #[test]
    fn doubling_relations() {
        let tau = pt(0.13, 0.9);
        let z = C64::new(0.27, 0.11);
        for a in [C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(0.3, 0.2)] {
            for v in [DoublingVariant::Sum, DoublingVariant::Difference] {
                let r = doubling_relation_check(v, a, &tau, z, &tr()).unwrap();
                assert!(r.norm() < 1e-11, "{a} {v:?} {r}");
                let r1 = doubling_relation_check(v, a, &tau, z + 1.0, &tr()).unwrap();
                assert!(r1.norm() < 1e-11);
            }
        }
    }

    #[test]
    fn pole_guard_triggers_near_pole() {
        // 1 - e^{2 pi i z} q^{j} vanishes at z = -j tau; take j = 1.
        let tau = pt(0.1, 0.9);
        let trunc = SeriesTruncation::with_pole_guard(1e-12, 100_000, 1e-6).unwrap();
        let pole = -tau.tau();
        let near = pole + C64::new(1e-6 / (4.0 * PI), 0.0);
        let err = fgh_series(FghName::F1, &tau, near, &trunc).unwrap_err();
        assert!(err.is_pole(), "{err}");
        assert!(err.to_string().contains("j = 1"));
    }

    #[test]
    fn decay_of_retained_terms() {
        // The last retained terms sit below the envelope used for the tail bound.
        let tau = pt(0.05, 0.6);
        let z = C64::new(0.4, 0.2);
        for name in FghName::ALL {
            let s = name.series();
            let t = s.terms(tau.tau(), z);
            for j in 10i64..20 {
                let jf = j as f64;
                for jj in [j, -j] {
                    let jf2 = jj as f64;
                    let env = (t.quad.re * jf2 * jf2 + t.lin.re * jf2 + t.cst.re).exp();
                    let x = t.den_scale * (t.dlin * jf2 + t.dcst).exp();
                    let bound = if x.norm() <= 0.5 { 2.0 * env } else { 2.0 * env / x.norm() };
                    assert!(s.term(jj, &tau, z).norm() <= bound * (1.0 + 1e-12), "{name} {jf}");
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn t_prefactor_and_sum_relations(re in -0.5f64..0.5, im in 0.5f64..2.0,
                                         x1 in 0.05f64..0.95, x2 in 0.05f64..0.95,
                                         tr_ in -0.5f64..0.5, ti in -0.2f64..0.2) {
            let tau = pt(re, im);
            let z1 = C64::new(x1, 0.1);
            let z2 = C64::new(x2, -0.05);
            let t = C64::new(tr_, ti);
            let sg = sig(2, 1, Sign::Minus);
            let trunc = tr();
            let with_t = AppellArgs { tau, z1, z2, t };
            let without = AppellArgs { tau, z1, z2, t: C64::new(0.0, 0.0) };
            let pref = e(-t);
            prop_assert!(rel(phi_1(&sg, &with_t, &trunc).unwrap(), pref * phi_1(&sg, &without, &trunc).unwrap()) < 1e-12);
            prop_assert!(rel(phi_2(&sg, &with_t, &trunc).unwrap(), pref * phi_2(&sg, &without, &trunc).unwrap()) < 1e-12);
            let d = phi_diff(&sg, &with_t, &trunc).unwrap();
            let s = phi_star(&sg, &with_t, &trunc).unwrap();
            let p2 = phi_2(&sg, &with_t, &trunc).unwrap();
            prop_assert!((d + 2.0 * p2 - s).norm() <= 1e-12 * s.norm().max(1.0));
        }
    }
}
