//! Double-double arithmetic (about 32 significant digits), used where two
//! large Appell sums are subtracted.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.2246467991473532e-16 };
    pub const FRAC_PI_2: Dd = Dd { hi: std::f64::consts::FRAC_PI_2, lo: 6.123233995736766e-17 };
    pub const LN_2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.3190468138462996e-17 };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Multiplication by a power of two, exact.
    pub fn ldexp(self, k: i32) -> Dd {
        let f = |x: f64| {
            // split so that neither factor overflows
            let (k1, k2) = (k / 2, k - k / 2);
            x * 2f64.powi(k1) * 2f64.powi(k2)
        };
        Dd { hi: f(self.hi), lo: f(self.lo) }
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = (self - Dd::LN_2 * Dd::new(k)).ldexp(-10);
        // e^r - 1 by Taylor; |r| < 3.4e-4
        let mut term = r;
        let mut s = r;
        for n in 2..12 {
            term = term * r / Dd::new(n as f64);
            s = s + term;
        }
        // (1 + s)^{1024} - 1 by repeated squaring
        for _ in 0..10 {
            s = s.ldexp(1) + s * s;
        }
        (s + Dd::ONE).ldexp(k as i32)
    }

    pub fn sin_cos(self) -> (Dd, Dd) {
        let n = (self.hi / std::f64::consts::FRAC_PI_2).round();
        let r = self - Dd::FRAC_PI_2 * Dd::new(n);
        let r2 = r * r;
        // Taylor series; |r| <= pi/4
        let (mut s, mut c) = (r, Dd::ONE);
        let (mut ts, mut tc) = (r, Dd::ONE);
        for k in 1..16 {
            let kf = k as f64;
            ts = -(ts * r2) / Dd::new((2.0 * kf) * (2.0 * kf + 1.0));
            tc = -(tc * r2) / Dd::new((2.0 * kf - 1.0) * (2.0 * kf));
            s = s + ts;
            c = c + tc;
        }
        match (n as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// A complex number with double-double parts.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub(crate) struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub fn new(re: Dd, im: Dd) -> CDd {
        CDd { re, im }
    }

    pub fn from_c64(z: num_complex::Complex64) -> CDd {
        CDd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(self, k: Dd) -> CDd {
        CDd { re: self.re * k, im: self.im * k }
    }

    /// `2 pi i self`.
    pub fn two_pi_i(self) -> CDd {
        let tp = Dd::PI.ldexp(1);
        CDd { re: -(self.im * tp), im: self.re * tp }
    }

    pub fn exp(self) -> CDd {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        CDd { re: m * c, im: m * s }
    }

    #[cfg(test)]
    pub fn norm_f64(self) -> f64 {
        self.to_c64().norm()
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, b: CDd) -> CDd {
        CDd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for CDd {
    type Output = CDd;
    fn sub(self, b: CDd) -> CDd {
        CDd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Neg for CDd {
    type Output = CDd;
    fn neg(self) -> CDd {
        CDd { re: -self.re, im: -self.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, b: CDd) -> CDd {
        CDd { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, b: CDd) -> CDd {
        let den = b.re * b.re + b.im * b.im;
        let num = self * CDd { re: b.re, im: -b.im };
        CDd { re: num.re / den, im: num.im / den }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, b: Dd, tol: f64) -> bool {
        ((a - b).to_f64()).abs() <= tol * b.to_f64().abs().max(1e-300)
    }

    #[test]
    fn exp_of_one_is_e() {
        let e = Dd { hi: std::f64::consts::E, lo: 1.4456468917292502e-16 };
        assert!(close(Dd::ONE.exp(), e, 1e-30));
        assert!(close(Dd::LN_2.exp(), Dd::new(2.0), 1e-30));
    }

    #[test]
    fn exp_is_multiplicative() {
        for (a, b) in [(0.3, 1.7), (-23.4, 9.1), (55.5, -12.25), (-300.1, 0.001)] {
            let lhs = Dd::new(a).exp() * Dd::new(b).exp();
            let rhs = (Dd::new(a) + Dd::new(b)).exp();
            assert!(close(lhs, rhs, 1e-29), "{a} {b}");
        }
    }

    #[test]
    fn sin_cos_circle_and_addition() {
        for x in [0.1, 1.7, -23.4, 9.1, 55.5, 700.25] {
            let (s, c) = Dd::new(x).sin_cos();
            assert!(close(s * s + c * c, Dd::ONE, 1e-30), "{x}");
            let (s2, c2) = (Dd::new(x) + Dd::new(x)).sin_cos();
            assert!(((s2 - (s * c).ldexp(1)).to_f64()).abs() < 1e-29, "{x}");
            assert!(((c2 - (c * c - s * s)).to_f64()).abs() < 1e-29, "{x}");
        }
        let (s, c) = Dd::PI.sin_cos();
        assert!(s.to_f64().abs() < 1e-31 && (c + Dd::ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn division_round_trip() {
        let a = Dd::new(1.0) / Dd::new(3.0);
        assert!(close(a * Dd::new(3.0), Dd::ONE, 1e-31));
        let z = CDd::new(Dd::new(0.3), Dd::new(-1.2));
        let w = CDd::new(Dd::new(2.5), Dd::new(0.7));
        let back = (z / w) * w - z;
        assert!(back.norm_f64() < 1e-30);
    }
}
