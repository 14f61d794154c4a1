use std::fmt;

use super::{GaussianRational, Poly};
use crate::C64;

/// An element `y^shift N(y) / D(y)` of `Q(i)(y)`. Canonical form: `D` monic,
/// `N(0) != 0` and `D(0) != 0` (the power of `y` lives in `shift`), and
/// `gcd(N, D) = 1`. Zero is `N = 0, D = 1, shift = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffFunction {
    shift: i64,
    num: Poly,
    den: Poly,
}

impl CoeffFunction {
    pub fn zero() -> Self {
        CoeffFunction { shift: 0, num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c y^k`.
    pub fn monomial(c: GaussianRational, k: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        CoeffFunction { shift: k, num: Poly::constant(c), den: Poly::one() }
    }

    /// `y^shift num / den` brought to canonical form.
    pub fn from_parts(shift: i64, num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let vn = num.valuation().unwrap();
        let vd = den.valuation().unwrap();
        let mut num = num.shift_down(vn);
        let mut den = den.shift_down(vd);
        let shift = shift + vn as i64 - vd as i64;
        if !den.is_constant() && !num.is_constant() {
            let g = Poly::gcd(&num, &den);
            if !g.is_constant() {
                num = num.divrem(&g).0;
                den = den.divrem(&g).0;
            }
        }
        let lead = den.lead().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.inv().unwrap();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        CoeffFunction { shift, num, den }
    }

    /// `c / (1 - u y^g)` for a unit or scalar `u`.
    pub fn geometric(c: GaussianRational, u: &GaussianRational, g: i64) -> Self {
        let one = GaussianRational::one();
        if g >= 0 {
            let den = Poly::one().sub(&Poly::monomial(u.clone(), g as usize));
            Self::from_parts(0, Poly::constant(c), den)
        } else {
            // 1 / (1 - u y^{-k}) = y^k / (y^k - u)
            let k = (-g) as usize;
            let den = Poly::monomial(one, k).sub(&Poly::constant(u.clone()));
            Self::from_parts(k as i64, Poly::constant(c), den)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(rhs.shift);
        let a = self.num.shift_up((self.shift - s) as usize);
        let b = rhs.num.shift_up((rhs.shift - s) as usize);
        if self.den == rhs.den {
            return Self::from_parts(s, a.add(&b), self.den.clone());
        }
        let num = a.mul(&rhs.den).add(&b.mul(&self.den));
        Self::from_parts(s, num, self.den.mul(&rhs.den))
    }

    pub fn neg(&self) -> Self {
        CoeffFunction { shift: self.shift, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let shift = self.shift + rhs.shift;
        if self.den.is_constant() && rhs.den.is_constant() {
            return Self::from_parts(shift, self.num.mul(&rhs.num), Poly::one());
        }
        // Cross-cancel before multiplying to keep degrees small.
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let (n1, d2) = if g1.is_constant() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.divrem(&g1).0, rhs.den.divrem(&g1).0)
        };
        let (n2, d1) = if g2.is_constant() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.divrem(&g2).0, self.den.divrem(&g2).0)
        };
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lead = den.lead().unwrap().clone();
        if lead.is_one() {
            CoeffFunction { shift, num, den }
        } else {
            let inv = lead.inv().unwrap();
            CoeffFunction { shift, num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        CoeffFunction { shift: self.shift, num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_y(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        CoeffFunction { shift: self.shift + k, num: self.num.clone(), den: self.den.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::from_parts(-self.shift, self.den.clone(), self.num.clone()))
    }

    pub fn eval(&self, y: C64) -> C64 {
        y.powi(self.shift as i32) * self.num.eval(y) / self.den.eval(y)
    }

    /// Numerator as a Laurent polynomial (the `y^shift` factor included).
    pub fn numerator_text(&self) -> String {
        self.num.laurent_text(self.shift)
    }

    pub fn denominator_text(&self) -> String {
        self.den.laurent_text(0)
    }
}

impl fmt::Display for CoeffFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.numerator_text())
        } else {
            write!(f, "({}) / ({})", self.numerator_text(), self.denominator_text())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn canonical_form() {
        // y^2 (y - 1)(y + 1) / (2 (y - 1)) = y^2 (y + 1) / 2 ... with monic denominator
        let num = Poly::from_coeffs(vec![g(0), g(0), g(-1), g(0), g(1)]);
        let den = Poly::from_coeffs(vec![g(-2), g(2)]);
        let c = CoeffFunction::from_parts(0, num, den);
        assert_eq!(c.shift(), 2);
        assert!(c.is_polynomial());
        assert_eq!(c.numerator_text(), "1/2*y^2 + 1/2*y^3");
    }

    #[test]
    fn field_laws() {
        let a = CoeffFunction::geometric(g(1), &g(1), 2);
        let b = CoeffFunction::geometric(g(3), &g(-1), -1);
        let s = a.add(&b);
        assert_eq!(s.sub(&b), a);
        let p = a.mul(&b);
        assert_eq!(p.mul(&b.inv().unwrap()), a);
        assert!(a.sub(&a).is_zero());
        let y = C64::new(0.3, 0.4);
        let direct = 1.0 / (1.0 - y * y) + 3.0 / (1.0 + 1.0 / y);
        assert!((s.eval(y) - direct).norm() < 1e-14);
    }

    #[test]
    fn geometric_display() {
        let a = CoeffFunction::geometric(g(1), &g(1), 2);
        assert_eq!(a.to_string(), "(-1) / (-1 + 1*y^2)");
    }
}
