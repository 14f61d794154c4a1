use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::C64;

/// An exact element of `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ratios(re: Ratio<i64>, im: Ratio<i64>) -> Self {
        GaussianRational { re: big(re), im: big(im) }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational { re: BigRational::from_integer(n.into()), im: BigRational::zero() }
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_ratios(Ratio::new(num, den), Ratio::zero())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    /// `i^k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::from_int(1),
            1 => Self::i(),
            2 => Self::from_int(-1),
            _ => -Self::i(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// `Some(k)` when the value is `i^k`.
    pub fn unit_index(&self) -> Option<i64> {
        (0..4).find(|&k| *self == Self::i_pow(k))
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(ratio_f64(&self.re), ratio_f64(&self.im))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn big(r: Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// `a`, `bi`, `(a+bi)` with `b` written as `1`-free when unit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = |r: &BigRational| -> String {
            if r.abs().is_one() {
                if r.is_negative() {
                    "-i".into()
                } else {
                    "i".into()
                }
            } else {
                format!("{}i", fmt_ratio(r))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_ratio(&self.re)),
            (true, false) => write!(f, "{}", im(&self.im)),
            (false, false) => {
                let i_part = im(&self.im);
                let sep = if i_part.starts_with('-') { "" } else { "+" };
                write!(f, "({}{}{})", fmt_ratio(&self.re), sep, i_part)
            }
        }
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &'a GaussianRational) -> GaussianRational {
                let f: fn(&GaussianRational, &GaussianRational) -> GaussianRational = $body;
                f(self, rhs)
            }
        }
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| GaussianRational { re: &a.re + &b.re, im: &a.im + &b.im });
binop!(Sub, sub, |a, b| GaussianRational { re: &a.re - &b.re, im: &a.im - &b.im });
binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return GaussianRational { re: &a.re * &b.re, im: BigRational::zero() };
    }
    GaussianRational { re: &a.re * &b.re - &a.im * &b.im, im: &a.re * &b.im + &a.im * &b.re }
});
binop!(Div, div, |a, b| a * &b.inv().expect("division by zero in Q(i)"));

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations() {
        let a = GaussianRational::from_ratios(Ratio::new(1, 2), Ratio::new(-3, 4));
        let b = GaussianRational::from_ratios(Ratio::new(2, 3), Ratio::new(5, 1));
        let p = &a * &b;
        assert_eq!(&(&p / &b) - &a, GaussianRational::zero());
        assert_eq!(GaussianRational::i() * GaussianRational::i(), GaussianRational::from_int(-1));
        assert_eq!(GaussianRational::i_pow(-1), -GaussianRational::i());
        assert_eq!(GaussianRational::i_pow(7).unit_index(), Some(3));
        assert!(GaussianRational::zero().inv().is_none());
        let c = a.to_c64();
        assert!((c - C64::new(0.5, -0.75)).norm() < 1e-16);
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussianRational::from_frac(-3, 2).to_string(), "-3/2");
        assert_eq!((-GaussianRational::i()).to_string(), "-i");
        let z = GaussianRational::from_ratios(Ratio::new(1, 1), Ratio::new(-2, 1));
        assert_eq!(z.to_string(), "(1-2i)");
    }
}
