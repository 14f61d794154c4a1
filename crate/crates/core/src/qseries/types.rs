use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// A point of the open upper half-plane. Every power of the nome is derived
/// from it through [`super::modular_power`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModularPoint {
    tau: C64,
}

impl ModularPoint {
    pub fn new(tau: C64) -> Result<Self> {
        if !(tau.re.is_finite() && tau.im.is_finite()) {
            return Err(Error::Domain(format!("tau = {tau} is not finite")));
        }
        if tau.im <= 0.0 {
            return Err(Error::Domain(format!("Im tau must be positive, got tau = {tau}")));
        }
        let point = ModularPoint { tau };
        debug_assert!(point.nome_abs() < 1.0);
        Ok(point)
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(C64::new(re, im))
    }

    #[inline]
    pub fn tau(&self) -> C64 {
        self.tau
    }

    /// `|q| = exp(-2 pi Im tau)`.
    pub fn nome_abs(&self) -> f64 {
        (-2.0 * std::f64::consts::PI * self.tau.im).exp()
    }

    /// The point `c * tau` for a positive real scale `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if c <= 0.0 {
            return Err(Error::Domain(format!("tau scale must be positive, got {c}")));
        }
        Self::new(self.tau * c)
    }

    /// `-1/tau`.
    pub fn s_image(&self) -> Self {
        ModularPoint { tau: -self.tau.inv() }
    }

    /// `tau + 1`.
    pub fn t_image(&self) -> Self {
        ModularPoint { tau: self.tau + 1.0 }
    }
}

/// An exact element of `(1/2) Z`, stored as twice its value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    #[inline]
    pub const fn twice(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// True for elements of `(1/2)Z_odd`.
    pub const fn is_half_odd(self) -> bool {
        self.0 % 2 != 0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn to_ratio(self) -> Ratio<i64> {
        Ratio::new(self.0, 2)
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("`{s}` is not a half-integer"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => Ok(HalfInt::from_int(num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(bad()),
            }
        } else if let Ok(n) = s.parse::<i64>() {
            Ok(HalfInt::from_int(n))
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            let twice = (2.0 * x).round();
            if (2.0 * x - twice).abs() > 1e-12 {
                return Err(bad());
            }
            Ok(HalfInt(twice as i64))
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        HalfInt(self.0 * rhs)
    }
}

/// An exact exponent `r = numerator / 24` of the nome.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QExponent(i64);

impl QExponent {
    pub const DENOMINATOR: i64 = 24;
    pub const ZERO: QExponent = QExponent(0);
    pub const ONE: QExponent = QExponent(24);

    pub const fn from_24ths(numerator: i64) -> Self {
        QExponent(numerator)
    }

    pub const fn from_int(n: i64) -> Self {
        QExponent(24 * n)
    }

    #[inline]
    pub const fn numerator(self) -> i64 {
        self.0
    }

    /// `Some` when `r` lies on the `1/24` lattice.
    pub fn from_ratio(r: Ratio<i64>) -> Option<Self> {
        let scaled = r * 24;
        scaled.is_integer().then(|| QExponent(scaled.to_integer()))
    }

    pub fn from_fraction(num: i64, den: i64) -> Option<Self> {
        (den != 0).then(|| Self::from_ratio(Ratio::new(num, den))).flatten()
    }

    pub fn to_ratio(self) -> Ratio<i64> {
        Ratio::new(self.0, 24)
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 24.0
    }
}

impl fmt::Display for QExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_ratio();
        if r.is_integer() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}

impl FromStr for QExponent {
    type Err = Error;

    /// Accepts `P/24`, any fraction on the lattice (`5/8`) or an integer.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("`{s}` is not an exponent on the 1/24 lattice"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?),
            None => (s.parse::<i64>().map_err(|_| bad())?, 1),
        };
        QExponent::from_fraction(num, den).ok_or_else(bad)
    }
}

impl Add for QExponent {
    type Output = QExponent;
    fn add(self, rhs: QExponent) -> QExponent {
        QExponent(self.0 + rhs.0)
    }
}

impl Sub for QExponent {
    type Output = QExponent;
    fn sub(self, rhs: QExponent) -> QExponent {
        QExponent(self.0 - rhs.0)
    }
}

impl Neg for QExponent {
    type Output = QExponent;
    fn neg(self) -> QExponent {
        QExponent(-self.0)
    }
}

impl Mul<i64> for QExponent {
    type Output = QExponent;
    fn mul(self, rhs: i64) -> QExponent {
        QExponent(self.0 * rhs)
    }
}

/// Characteristic `(k, m)` of a degree-`m` theta function. `k` is kept as
/// given; it is never reduced modulo `2m` implicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThetaIndex {
    k: HalfInt,
    m: HalfInt,
}

impl ThetaIndex {
    pub fn new(k: HalfInt, m: HalfInt) -> Result<Self> {
        if !m.is_positive() {
            return Err(Error::Domain(format!("theta degree m must be positive, got {m}")));
        }
        Ok(ThetaIndex { k, m })
    }

    pub fn k(&self) -> HalfInt {
        self.k
    }

    pub fn m(&self) -> HalfInt {
        self.m
    }

    /// The lattice offset `k / (2m)`.
    pub fn offset(&self) -> Ratio<i64> {
        Ratio::new(self.k.twice(), 2 * self.m.twice())
    }

    /// `k mod 2m`, on request only.
    pub fn reduced(&self) -> ThetaIndex {
        let period = 2 * self.m.twice();
        ThetaIndex { k: HalfInt::from_twice(self.k.twice().rem_euclid(period)), m: self.m }
    }
}

/// Stopping rule shared by every series loop.
impl Serialize for QExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QExponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesTruncation {
    /// A sum is accepted once the rigorous bound on everything not yet summed
    /// is below `tolerance` times the largest term seen.
    pub tolerance: f64,
    pub max_terms: usize,
    /// Minimum admissible `|1 - x|` for Appell-type denominators, and the
    /// relative floor `|value| / sum|terms|` for theta denominators.
    pub pole_guard: f64,
}

impl SeriesTruncation {
    pub fn new(tolerance: f64, max_terms: usize) -> Result<Self> {
        Self::with_pole_guard(tolerance, max_terms, 1e-6)
    }

    pub fn with_pole_guard(tolerance: f64, max_terms: usize, pole_guard: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::Config(format!("tolerance must be positive, got {tolerance}")));
        }
        if max_terms == 0 {
            return Err(Error::Config("max_terms must be positive".into()));
        }
        if !(pole_guard >= 0.0 && pole_guard.is_finite()) {
            return Err(Error::Config(format!("pole guard must be non-negative, got {pole_guard}")));
        }
        Ok(SeriesTruncation { tolerance, max_terms, pole_guard })
    }
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        SeriesTruncation { tolerance: 1e-12, max_terms: 1_000_000, pole_guard: 1e-6 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_int_parsing_and_parity() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("1.5".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("-2".parse::<HalfInt>().unwrap(), HalfInt::from_int(-2));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.3".parse::<HalfInt>().is_err());
        assert!(HalfInt::from_twice(-3).is_half_odd());
        assert!(HalfInt::from_twice(4).is_integer());
        assert_eq!(HalfInt::from_twice(-3).to_string(), "-3/2");
    }

    #[test]
    fn q_exponent_lattice() {
        assert_eq!(QExponent::from_fraction(1, 8), Some(QExponent::from_24ths(3)));
        assert_eq!(QExponent::from_fraction(1, 48), None);
        assert_eq!("120/24".parse::<QExponent>().unwrap(), QExponent::from_int(5));
        assert_eq!(QExponent::from_24ths(9).to_string(), "3/8");
    }

    #[test]
    fn modular_point_rejects_lower_half_plane() {
        assert!(ModularPoint::from_parts(0.0, 0.0).is_err());
        assert!(ModularPoint::from_parts(0.3, -1.0).is_err());
        assert!(ModularPoint::from_parts(f64::NAN, 1.0).is_err());
        let p = ModularPoint::from_parts(0.0, 1.0).unwrap();
        assert!((p.nome_abs() - (-2.0 * std::f64::consts::PI).exp()).abs() < 1e-18);
    }

    #[test]
    fn theta_index_reduction_is_explicit() {
        let idx = ThetaIndex::new(HalfInt::from_int(5), HalfInt::ONE).unwrap();
        assert_eq!(idx.k(), HalfInt::from_int(5));
        assert_eq!(idx.reduced().k(), HalfInt::from_int(1));
        assert!(ThetaIndex::new(HalfInt::ONE, HalfInt::ZERO).is_err());
    }

    #[test]
    fn truncation_validation() {
        assert!(SeriesTruncation::new(0.0, 10).is_err());
        assert!(SeriesTruncation::new(1e-10, 0).is_err());
        assert!(SeriesTruncation::new(1e-10, 10).is_ok());
    }
}
