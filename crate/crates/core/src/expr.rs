//! Expression trees for both sides of an identity. One tree is interpreted
//! numerically here and exactly by [`crate::formal`].

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::appell::{phi_1_acc, phi_2_acc, phi_pair_acc, AppellArgs, AppellSignature, LerchSeries, LinePoint};
use crate::formal::GaussianRational;
use crate::qseries::{dedekind_eta, modular_power, mumford_theta_acc, theta_km_acc, ThetaChar};
use crate::{Error, HalfInt, ModularPoint, QExponent, Result, SeriesTruncation, ThetaIndex, C64};

/// The argument `(c tau, d z + alpha tau + beta)` of a theta function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThetaArg {
    pub tau_scale: Ratio<i64>,
    pub z_mult: i64,
    pub tau_shift: Ratio<i64>,
    pub const_shift: HalfInt,
}

impl ThetaArg {
    pub fn new(tau_scale: Ratio<i64>, z_mult: i64, tau_shift: Ratio<i64>, const_shift: HalfInt) -> Self {
        ThetaArg { tau_scale, z_mult, tau_shift, const_shift }
    }

    /// `(tau, d z)`.
    pub fn z_times(d: i64) -> Self {
        Self::new(Ratio::from_integer(1), d, Ratio::zero(), HalfInt::ZERO)
    }

    /// `(tau, 0)`.
    pub fn origin() -> Self {
        Self::z_times(0)
    }

    /// `(tau, z + a tau + b)`.
    pub fn line(a: HalfInt, b: HalfInt) -> Self {
        Self::new(Ratio::from_integer(1), 1, a.to_ratio(), b)
    }

    /// `(c tau, d z)` for integer `c`.
    pub fn level(c: i64, d: i64) -> Self {
        Self::new(Ratio::from_integer(c), d, Ratio::zero(), HalfInt::ZERO)
    }

    fn point(&self, tau: &ModularPoint, z: C64) -> Result<(ModularPoint, C64)> {
        let c = ratio_f64(self.tau_scale);
        let w = z * self.z_mult as f64 + tau.tau() * ratio_f64(self.tau_shift) + self.const_shift.value();
        Ok((tau.scaled(c)?, w))
    }
}

pub(crate) fn ratio_f64(r: Ratio<i64>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AppellPart {
    First,
    Second,
    /// `Phi1 - Phi2`, summed as one series.
    Difference,
    /// `Phi1 + Phi2`, summed as one series.
    Star,
}

/// `tau`-coefficient of the line shift: exact for expandable lines, complex
/// for numeric-only evaluations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LineShift {
    Exact(Ratio<i64>),
    Complex(C64),
}

impl LineShift {
    pub fn value(&self) -> C64 {
        match *self {
            LineShift::Exact(r) => C64::new(ratio_f64(r), 0.0),
            LineShift::Complex(c) => c,
        }
    }
}

/// `Phi_part(c tau, d z + alpha tau + beta, d z - alpha tau - beta, 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AppellLine {
    pub part: AppellPart,
    pub sig: AppellSignature,
    pub tau_scale: i64,
    pub z_mult: i64,
    pub alpha: LineShift,
    pub beta: HalfInt,
}

impl AppellLine {
    pub fn args(&self, tau: &ModularPoint, z: C64) -> Result<AppellArgs> {
        let shift = self.alpha.value() * tau.tau() + self.beta.value();
        let w = z * self.z_mult as f64;
        Ok(AppellArgs { tau: tau.scaled(self.tau_scale as f64)?, z1: w + shift, z2: w - shift, t: C64::new(0.0, 0.0) })
    }

    pub(crate) fn point(&self, tau: &ModularPoint, z: C64) -> Result<LinePoint> {
        Ok(LinePoint {
            tau: tau.scaled(self.tau_scale as f64)?,
            w: z * self.z_mult as f64,
            alpha: self.alpha.value(),
            tau0: tau.tau(),
            beta: self.beta.value(),
            t: C64::new(0.0, 0.0),
        })
    }

    /// The same sum as an exact Lerch series in `y = e^{pi i z}`.
    pub fn to_lerch(&self) -> Result<LerchSeries> {
        let alpha = match self.alpha {
            LineShift::Exact(r) => r,
            LineShift::Complex(_) => {
                return Err(Error::UnsupportedFormal("line shift with a complex tau-coefficient".into()))
            }
        };
        let (m, s) = (self.sig.m().to_ratio(), self.sig.s().to_ratio());
        let (c, d) = (self.tau_scale, self.z_mult);
        let lattice = |r: Ratio<i64>| {
            QExponent::from_ratio(r)
                .ok_or_else(|| Error::UnsupportedFormal(format!("q-exponent {r} off the 1/24 lattice")))
        };
        let int = |r: Ratio<i64>| {
            r.is_integer()
                .then(|| r.to_integer())
                .ok_or_else(|| Error::UnsupportedFormal(format!("y-exponent {r} is not integral")))
        };
        // e^{2 pi i s beta} = i^{4 s beta}
        let four_s_beta = int(s * self.beta.to_ratio() * 4)?;
        let y_sign = match self.part {
            AppellPart::First => 1,
            AppellPart::Second => -1,
            AppellPart::Difference | AppellPart::Star => {
                return Err(Error::UnsupportedFormal("combined Appell line; expand its two parts".into()))
            }
        };
        Ok(LerchSeries {
            coeff: GaussianRational::i_pow(four_s_beta),
            alternating: self.sig.sign().is_alternating(),
            y_lin: y_sign * int(m * 4 * d)?,
            y_cst: y_sign * int(s * 2 * d)?,
            q_quad: lattice(m * c)?,
            q_lin: lattice(s * c)?,
            q_cst: lattice(s * alpha)?,
            den_unit: GaussianRational::i_pow(2 * self.beta.twice()),
            den_y: y_sign * 2 * d,
            den_lin: QExponent::from_int(c),
            den_cst: lattice(alpha)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(GaussianRational),
    /// `q^r`.
    QPow(QExponent),
    /// `y^k = e^{pi i k z}`.
    YPow(i64),
    /// `eta(c tau)^p`.
    Eta {
        scale: Ratio<i64>,
        power: i32,
    },
    Theta {
        ch: ThetaChar,
        arg: ThetaArg,
    },
    ThetaKm {
        idx: ThetaIndex,
        signed: bool,
        arg: ThetaArg,
    },
    Lerch(LerchSeries),
    Appell(AppellLine),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Pow(Box<Expr>, i32),
}

/// A numeric value with the scale `sum |parts|` it was computed from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num {
    pub v: C64,
    pub mag: f64,
}

impl Num {
    fn exact(v: C64) -> Num {
        Num { v, mag: v.norm() }
    }
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(GaussianRational::from_int(n))
    }

    pub fn frac(num: i64, den: i64) -> Expr {
        Expr::Const(GaussianRational::from_frac(num, den))
    }

    /// `i^k`.
    pub fn i_pow(k: i64) -> Expr {
        Expr::Const(GaussianRational::i_pow(k))
    }

    pub fn q(r: QExponent) -> Expr {
        Expr::QPow(r)
    }

    /// `q^{num/den}`; panics off the lattice, so only for literal exponents.
    pub fn q_frac(num: i64, den: i64) -> Expr {
        Expr::QPow(QExponent::from_fraction(num, den).expect("exponent on the 1/24 lattice"))
    }

    pub fn eta(scale: Ratio<i64>, power: i32) -> Expr {
        Expr::Eta { scale, power }
    }

    pub fn theta(ch: ThetaChar, arg: ThetaArg) -> Expr {
        Expr::Theta { ch, arg }
    }

    pub fn pow(self, p: i32) -> Expr {
        Expr::Pow(Box::new(self), p)
    }

    pub fn recip(self) -> Expr {
        self.pow(-1)
    }

    pub fn sum(parts: Vec<Expr>) -> Expr {
        Expr::Sum(parts)
    }

    pub fn prod(parts: Vec<Expr>) -> Expr {
        Expr::Prod(parts)
    }

    pub fn eval(&self, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<C64> {
        Ok(self.eval_num(tau, z, trunc)?.v)
    }

    pub fn eval_num(&self, tau: &ModularPoint, z: C64, trunc: &SeriesTruncation) -> Result<Num> {
        Ok(match self {
            Expr::Const(c) => Num::exact(c.to_c64()),
            Expr::QPow(r) => Num::exact(modular_power(tau, *r)),
            Expr::YPow(k) => Num::exact((C64::new(0.0, PI * *k as f64) * z).exp()),
            Expr::Eta { scale, power } => {
                Num::exact(dedekind_eta(&tau.scaled(ratio_f64(*scale))?, trunc)?.powi(*power))
            }
            Expr::Theta { ch, arg } => {
                let (t, w) = arg.point(tau, z)?;
                let acc = mumford_theta_acc(*ch, &t, w, trunc)?;
                Num { v: acc.value, mag: acc.magnitude }
            }
            Expr::ThetaKm { idx, signed, arg } => {
                let (t, w) = arg.point(tau, z)?;
                let acc = theta_km_acc(idx, *signed, &t, w, trunc)?;
                Num { v: acc.value, mag: acc.magnitude }
            }
            Expr::Lerch(l) => {
                let acc = l.eval_acc(tau, z, trunc)?;
                Num { v: acc.value, mag: acc.magnitude }
            }
            Expr::Appell(line) => {
                let acc = match line.part {
                    AppellPart::First => phi_1_acc(&line.sig, &line.args(tau, z)?, trunc)?,
                    AppellPart::Second => phi_2_acc(&line.sig, &line.args(tau, z)?, trunc)?,
                    AppellPart::Difference => phi_pair_acc(&line.sig, &line.point(tau, z)?, -1.0, trunc)?,
                    AppellPart::Star => phi_pair_acc(&line.sig, &line.point(tau, z)?, 1.0, trunc)?,
                };
                Num { v: acc.value, mag: acc.magnitude }
            }
            Expr::Sum(parts) => {
                let mut out = Num { v: C64::new(0.0, 0.0), mag: 0.0 };
                for p in parts {
                    let n = p.eval_num(tau, z, trunc)?;
                    out.v += n.v;
                    out.mag += n.mag;
                }
                out
            }
            Expr::Prod(parts) => {
                let mut out = Num { v: C64::new(1.0, 0.0), mag: 1.0 };
                for p in parts {
                    let n = p.eval_num(tau, z, trunc)?;
                    out.v *= n.v;
                    out.mag *= n.mag;
                }
                out
            }
            Expr::Pow(e, p) => {
                let n = e.eval_num(tau, z, trunc)?;
                if *p < 0 && n.v.norm() <= trunc.pole_guard * n.mag {
                    return Err(Error::PoleProximity {
                        what: "vanishing denominator".into(),
                        distance: n.v.norm() / n.mag.max(f64::MIN_POSITIVE),
                        guard: trunc.pole_guard,
                    });
                }
                let v = n.v.powi(*p);
                let cond = if n.v.norm() > 0.0 { n.mag / n.v.norm() } else { 1.0 };
                Num { v, mag: v.norm() * cond.powi(p.abs()) }
            }
        })
    }

    /// True when the tree contains no numeric-only node.
    pub fn is_expandable(&self) -> bool {
        match self {
            Expr::Appell(line) => matches!(line.alpha, LineShift::Exact(_)),
            Expr::Sum(p) | Expr::Prod(p) => p.iter().all(Expr::is_expandable),
            Expr::Pow(e, _) => e.is_expandable(),
            _ => true,
        }
    }

    /// Replaces the first constant encountered in depth-first order by its
    /// negative; used to build deliberately wrong identities.
    pub fn flip_first_sign(&self) -> Expr {
        fn go(e: &Expr, done: &mut bool) -> Expr {
            if *done {
                return e.clone();
            }
            match e {
                Expr::Const(c) => {
                    *done = true;
                    Expr::Const(-c)
                }
                Expr::Sum(p) => Expr::Sum(p.iter().map(|x| go(x, done)).collect()),
                Expr::Prod(p) => Expr::Prod(p.iter().map(|x| go(x, done)).collect()),
                Expr::Pow(x, k) => Expr::Pow(Box::new(go(x, done)), *k),
                other => other.clone(),
            }
        }
        let mut done = false;
        let out = go(self, &mut done);
        if done {
            out
        } else {
            Expr::Prod(vec![Expr::int(-1), self.clone()])
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match self {
            Expr::Sum(mut v) => {
                v.push(rhs);
                Expr::Sum(v)
            }
            other => Expr::Sum(vec![other, rhs]),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(-c),
            other => Expr::Prod(vec![Expr::int(-1), other]),
        }
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match self {
            Expr::Prod(mut v) => {
                v.push(rhs);
                Expr::Prod(v)
            }
            other => Expr::Prod(vec![other, rhs]),
        }
    }
}
