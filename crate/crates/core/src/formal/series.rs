use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{CoeffFunction, GaussianRational};
use crate::qseries::nome_power;
use crate::{Error, ModularPoint, QExponent, Result, C64};

/// Marks a series with no truncation.
pub const EXACT: i64 = i64::MAX;

/// `sum_e c_e q^{e/24}`: every coefficient with `e < order` is exact, and
/// nothing at or beyond `order` is stored. Exponents are `1/24`-numerators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalQSeries {
    terms: BTreeMap<i64, CoeffFunction>,
    order: i64,
}

impl FormalQSeries {
    pub fn zero(order: i64) -> Self {
        FormalQSeries { terms: BTreeMap::new(), order }
    }

    pub fn one() -> Self {
        Self::monomial(CoeffFunction::one(), 0, EXACT)
    }

    /// `c q^{e/24}`, known below `order`.
    pub fn monomial(c: CoeffFunction, e: i64, order: i64) -> Self {
        let mut s = Self::zero(order);
        s.add_term(e, c);
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, CoeffFunction)>, order: i64) -> Self {
        let mut s = Self::zero(order);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    /// Accumulates `c q^{e/24}` unless it lies at or beyond the order.
    pub fn add_term(&mut self, e: i64, c: CoeffFunction) {
        if e >= self.order || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order == EXACT
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CoeffFunction)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: i64) -> CoeffFunction {
        self.terms.get(&e).cloned().unwrap_or_else(CoeffFunction::zero)
    }

    /// Lowest stored exponent, or the order for an empty series.
    pub fn valuation(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.order)
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        FormalQSeries { terms: self.terms.range(..order).map(|(e, c)| (*e, c.clone())).collect(), order }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        for (e, c) in rhs.terms.range(..order) {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        FormalQSeries { terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(), order: self.order }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.saturating_add(rhs.valuation()).min(rhs.order.saturating_add(self.valuation()));
        let mut acc: BTreeMap<i64, Vec<CoeffFunction>> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea + eb;
                if e < order {
                    acc.entry(e).or_default().push(ca.mul(cb));
                }
            }
        }
        let mut out = Self::zero(order);
        for (e, parts) in acc {
            out.add_term(e, sum_coeffs(parts));
        }
        out
    }

    /// Multiplies by `c y^k q^{e}`.
    pub fn scale(&self, c: &GaussianRational, k: i64, e: QExponent) -> Self {
        let n = e.numerator();
        FormalQSeries {
            terms: if c.is_zero() {
                BTreeMap::new()
            } else {
                self.terms.iter().map(|(x, t)| (x + n, t.scale(c).mul_y(k))).collect()
            },
            order: self.order.saturating_add(n),
        }
    }

    pub fn mul_coeff(&self, c: &CoeffFunction) -> Self {
        let mut out = Self::zero(self.order);
        for (e, t) in &self.terms {
            out.add_term(*e, t.mul(c));
        }
        out
    }

    /// Multiplicative inverse by back-substitution. Known below
    /// `order - 2 * valuation`.
    pub fn invert(&self) -> Result<Self> {
        let (&v, lead) = self
            .terms
            .iter()
            .next()
            .ok_or_else(|| Error::NotInvertible("no non-zero coefficient below the truncation order".into()))?;
        if self.order <= v {
            return Err(Error::NotInvertible("leading coefficient is not known".into()));
        }
        let lead_inv = lead.inv().expect("stored coefficients are non-zero");
        let order = if self.is_exact() { EXACT } else { self.order - 2 * v };
        if self.terms.len() == 1 {
            return Ok(Self::monomial(lead_inv, -v, order));
        }
        if order == EXACT {
            return Err(Error::NotInvertible("inverse of an exact multi-term series needs a truncation order".into()));
        }
        let rest: Vec<(i64, &CoeffFunction)> = self.terms.iter().skip(1).map(|(e, c)| (*e - v, c)).collect();
        // t = lead^{-1} q^{-v} (1 + r)^{-1}; build b_n with sum_{k} a_k b_{n-k} = [n = 0].
        let mut b: BTreeMap<i64, CoeffFunction> = BTreeMap::new();
        b.insert(0, CoeffFunction::one());
        let limit = order + v; // relative exponents of (1+r)^{-1} needed
        let step_min = rest[0].0;
        let mut n = step_min;
        while n < limit {
            let mut parts = Vec::new();
            for (k, a) in &rest {
                if *k > n {
                    break;
                }
                if let Some(bn) = b.get(&(n - k)) {
                    parts.push(bn.mul(&a.mul(&lead_inv)));
                }
            }
            let s = sum_coeffs(parts);
            if !s.is_zero() {
                b.insert(n, s.neg());
            }
            n += 1;
        }
        let mut out = Self::zero(order);
        for (e, c) in b {
            out.add_term(e - v, c.mul(&lead_inv));
        }
        Ok(out)
    }

    pub fn pow(&self, p: i32) -> Result<Self> {
        if p < 0 {
            return self.pow(-p)?.invert();
        }
        let mut acc = Self::one();
        for _ in 0..p {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Substitutes `q^{e/24} = exp(2 pi i tau e / 24)` and `y = e^{pi i z}`.
    pub fn eval(&self, tau: &ModularPoint, z: C64) -> C64 {
        let y = (C64::new(0.0, std::f64::consts::PI) * z).exp();
        self.terms.iter().map(|(e, c)| nome_power(tau.tau(), *e as f64 / 24.0) * c.eval(y)).sum()
    }

    /// One line per term: `e/24 <tab> numerator <tab> denominator`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (e, c) in &self.terms {
            let _ = writeln!(s, "{e}/24\t{}\t{}", c.numerator_text(), c.denominator_text());
        }
        s
    }

    /// Parses the dump format back (coefficients compared as text).
    pub fn dump_lines(&self) -> Vec<(i64, String, String)> {
        self.terms.iter().map(|(e, c)| (*e, c.numerator_text(), c.denominator_text())).collect()
    }
}

/// Sums coefficients, grouping equal denominators first.
pub(crate) fn sum_coeffs(parts: Vec<CoeffFunction>) -> CoeffFunction {
    if parts.len() == 1 {
        return parts.into_iter().next().unwrap();
    }
    let mut groups: Vec<CoeffFunction> = Vec::new();
    for p in parts {
        if p.is_zero() {
            continue;
        }
        match groups.iter_mut().find(|g| g.denominator() == p.denominator()) {
            Some(g) => *g = g.add(&p),
            None => groups.push(p),
        }
    }
    groups.iter().fold(CoeffFunction::zero(), |acc, g| acc.add(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::Poly;
    use proptest::prelude::*;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn c(n: i64) -> CoeffFunction {
        CoeffFunction::constant(g(n))
    }

    #[test]
    fn exponent_addition() {
        let a = FormalQSeries::monomial(CoeffFunction::one(), 1, EXACT);
        let p = a.mul(&a);
        assert_eq!(p.dump_lines(), vec![(2, "1".to_string(), "1".to_string())]);
        assert!(a.sub(&a).is_empty());
    }

    #[test]
    fn invert_constant_in_q() {
        let one_minus_y2 = CoeffFunction::from_parts(0, Poly::from_coeffs(vec![g(1), g(0), g(-1)]), Poly::one());
        let s = FormalQSeries::monomial(one_minus_y2, 0, EXACT);
        let inv = s.invert().unwrap();
        assert_eq!(inv.coefficient(0), CoeffFunction::geometric(g(1), &g(1), 2));
        assert!(FormalQSeries::zero(48).invert().is_err());
    }

    #[test]
    fn invert_geometric() {
        // (1 - q)^{-1} = sum q^n
        let s = FormalQSeries::from_terms([(0, c(1)), (24, c(-1))], EXACT).truncate(24 * 6);
        let inv = s.invert().unwrap();
        assert_eq!(inv.order(), 144);
        for n in 0..6 {
            assert_eq!(inv.coefficient(24 * n), c(1));
        }
        assert_eq!(inv.mul(&s).truncate(144), FormalQSeries::one().truncate(144));
    }

    #[test]
    fn order_bookkeeping() {
        let a = FormalQSeries::from_terms([(-3, c(1)), (5, c(2))], 30);
        let b = FormalQSeries::from_terms([(3, c(1))], 40);
        let p = a.mul(&b);
        // min(30 + 3, 40 - 3)
        assert_eq!(p.order(), 33);
        let inv = a.invert().unwrap();
        assert_eq!(inv.order(), 30 + 6);
    }

    fn small_series() -> impl Strategy<Value = FormalQSeries> {
        proptest::collection::vec((-2i64..6, -3i64..4, -2i64..3), 1..4).prop_map(|v| {
            let terms = v.into_iter().map(|(e, a, k)| {
                (e * 3, CoeffFunction::monomial(g(a), k).add(&CoeffFunction::geometric(g(1), &g(-1), k.abs() + 1)))
            });
            FormalQSeries::from_terms(terms, 60)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ring_laws(a in small_series(), b in small_series(), s in small_series()) {
            let ab_c = a.add(&b).add(&s);
            let a_bc = a.add(&b.add(&s));
            prop_assert_eq!(ab_c, a_bc);
            let m1 = a.mul(&b).mul(&s);
            let m2 = a.mul(&b.mul(&s));
            let o = m1.order().min(m2.order());
            prop_assert_eq!(m1.truncate(o), m2.truncate(o));
            let d1 = a.mul(&b.add(&s));
            let d2 = a.mul(&b).add(&a.mul(&s));
            let o = d1.order().min(d2.order());
            prop_assert_eq!(d1.truncate(o), d2.truncate(o));
        }
    }
}
