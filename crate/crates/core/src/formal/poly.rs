use std::fmt;

use super::GaussianRational;
use crate::C64;

/// A polynomial in `y` over `Q(i)`, dense, ascending, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<GaussianRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c y^k`.
    pub fn monomial(c: GaussianRational, k: usize) -> Self {
        let mut v = vec![GaussianRational::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut c: Vec<GaussianRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&GaussianRational> {
        self.c.last()
    }

    /// Index of the lowest non-zero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    /// Divides by `y^k`; the caller guarantees `k <= valuation`.
    pub fn shift_down(&self, k: usize) -> Self {
        Poly { c: self.c[k.min(self.c.len())..].to_vec() }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![GaussianRational::zero(); k];
        v.extend(self.c.iter().cloned());
        Poly { c: v }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(match (self.c.get(k), rhs.c.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(v)
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut v = vec![GaussianRational::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += &(a * b);
                }
            }
        }
        Self::from_coeffs(v)
    }

    pub fn scale(&self, s: &GaussianRational) -> Poly {
        if s.is_zero() {
            return Self::zero();
        }
        Poly { c: self.c.iter().map(|x| x * s).collect() }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv = d.lead().unwrap().inv().unwrap();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![GaussianRational::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let f = &r[k] * &inv;
            for (i, dc) in d.c.iter().enumerate() {
                if !dc.is_zero() {
                    let t = &f * dc;
                    r[k - dd + i] -= &t;
                }
            }
            q[k - dd] = f;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    /// `self / lead(self)`.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) if !l.is_one() => self.scale(&l.inv().unwrap()),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Self::one();
        }
        let (mut x, mut y) = if a.c.len() >= b.c.len() { (a.monic(), b.monic()) } else { (b.monic(), a.monic()) };
        while !y.is_zero() {
            let (_, r) = x.divrem(&y);
            x = y;
            y = r.monic();
            if y.is_constant() && !y.is_zero() {
                return Self::one();
            }
        }
        x.monic()
    }

    pub fn eval(&self, y: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in self.c.iter().rev() {
            acc = acc * y + c.to_c64();
        }
        acc
    }

    /// Terms `c*y^k` in ascending degree, each exponent offset by `shift`.
    pub fn laurent_text(&self, shift: i64) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = k as i64 + shift;
            parts.push(if e == 0 { c.to_string() } else { format!("{c}*y^{e}") });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.laurent_text(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Poly {
        Poly::from_coeffs(v.iter().map(|&x| GaussianRational::from_int(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (y - 1)(y + 2) and (y - 1)(y^2 + 1)
        let a = p(&[-2, 1, 1]);
        let b = p(&[-1, 1, -1, 1]);
        assert_eq!(Poly::gcd(&a, &b), p(&[-1, 1]));
        let (q, r) = b.divrem(&a);
        assert_eq!(q.mul(&a).add(&r), b);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(Poly::gcd(&p(&[1, 1]), &p(&[-1, 1])), Poly::one());
    }

    #[test]
    fn gaussian_gcd() {
        // (y - i)(y + 1) and (y - i)(y - 3)
        let yi = Poly::from_coeffs(vec![-GaussianRational::i(), GaussianRational::one()]);
        let a = yi.mul(&p(&[1, 1]));
        let b = yi.mul(&p(&[-3, 1]));
        assert_eq!(Poly::gcd(&a, &b), yi);
    }

    #[test]
    fn text_and_eval() {
        let a = p(&[1, 0, -1]);
        assert_eq!(a.laurent_text(-1), "1*y^-1 + -1*y^1");
        let v = a.eval(C64::new(0.5, 0.5));
        let y = C64::new(0.5, 0.5);
        assert!((v - (1.0 - y * y)).norm() < 1e-15);
    }
}
