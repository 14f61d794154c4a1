//! Exact expansion of [`Expr`] trees.

use num_rational::Ratio;
use num_traits::Zero;

use super::{CoeffFunction, FormalQSeries, GaussianRational, EXACT};
use crate::appell::LerchSeries;
use crate::expr::{AppellLine, AppellPart, Expr, ThetaArg};
use crate::qseries::ThetaChar;
use crate::{Error, QExponent, Result, ThetaIndex};

fn lattice(r: Ratio<i64>) -> Result<i64> {
    QExponent::from_ratio(r)
        .map(QExponent::numerator)
        .ok_or_else(|| Error::UnsupportedFormal(format!("q-exponent {r} off the 1/24 lattice")))
}

fn integral(r: Ratio<i64>, what: &str) -> Result<i64> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::UnsupportedFormal(format!("{what} {r} is not integral")))
    }
}

/// Expands `expr` with every coefficient below `q^{cutoff/24}` exact.
pub fn expand(expr: &Expr, cutoff: i64) -> Result<FormalQSeries> {
    let mut target = cutoff;
    for _ in 0..16 {
        let s = expand_node(expr, target)?;
        if s.order() >= cutoff {
            return Ok(s.truncate(cutoff));
        }
        target += (cutoff - s.order()).max(24);
    }
    Err(Error::UnsupportedFormal(format!("could not reach order {cutoff}/24")))
}

fn expand_node(expr: &Expr, cut: i64) -> Result<FormalQSeries> {
    Ok(match expr {
        Expr::Const(c) => FormalQSeries::monomial(CoeffFunction::constant(c.clone()), 0, EXACT),
        Expr::QPow(r) => FormalQSeries::monomial(CoeffFunction::one(), r.numerator(), EXACT),
        Expr::YPow(k) => FormalQSeries::monomial(CoeffFunction::monomial(GaussianRational::one(), *k), 0, EXACT),
        Expr::Eta { scale, power } => expand_eta(*scale, *power, cut)?,
        Expr::Theta { ch, arg } => expand_theta(*ch, arg, cut)?,
        Expr::ThetaKm { idx, signed, arg } => expand_theta_km(idx, *signed, arg, cut)?,
        Expr::Lerch(l) => expand_lerch(l, cut)?,
        Expr::Appell(line) => match line.part {
            AppellPart::Difference | AppellPart::Star => {
                let first = AppellLine { part: AppellPart::First, ..*line };
                let second = AppellLine { part: AppellPart::Second, ..*line };
                let a = expand_lerch(&first.to_lerch()?, cut)?;
                let b = expand_lerch(&second.to_lerch()?, cut)?;
                if line.part == AppellPart::Star {
                    a.add(&b)
                } else {
                    a.sub(&b)
                }
            }
            _ => expand_lerch(&line.to_lerch()?, cut)?,
        },
        Expr::Sum(parts) => {
            let mut acc = FormalQSeries::zero(EXACT);
            for p in parts {
                acc = acc.add(&expand_node(p, cut)?);
            }
            acc
        }
        Expr::Prod(parts) => {
            let mut first: Vec<FormalQSeries> = parts.iter().map(|p| expand_node(p, cut)).collect::<Result<_>>()?;
            let vals: Vec<i64> = first.iter().map(FormalQSeries::valuation).collect();
            let total: i64 = vals.iter().filter(|v| **v < EXACT / 4).sum();
            for (i, p) in parts.iter().enumerate() {
                let need = cut - (total - vals[i].clamp(-EXACT / 4, EXACT / 4));
                if first[i].order() < need {
                    first[i] = expand_node(p, need)?;
                }
            }
            let mut acc = FormalQSeries::one();
            for f in &first {
                acc = acc.mul(f);
            }
            acc
        }
        Expr::Pow(e, p) => {
            let first = expand_node(e, cut)?;
            let v = first.valuation();
            let k = p.unsigned_abs() as i64;
            let need = if *p >= 0 { cut - (k - 1) * v } else { cut + (k + 1) * v };
            let base = if first.order() < need { expand_node(e, need)? } else { first };
            base.pow(*p)?
        }
    })
}

/// `eta(c tau)^p = q^{c p / 24} prod (1 - q^{c n})^p`.
fn expand_eta(scale: Ratio<i64>, power: i32, cut: i64) -> Result<FormalQSeries> {
    let lead = lattice(scale * power as i64 / 24)?;
    let step = lattice(scale)?;
    if step <= 0 {
        return Err(Error::UnsupportedFormal(format!("eta scale {scale} must be positive")));
    }
    let inner_cut = cut - lead;
    let mut prod = FormalQSeries::one().truncate(inner_cut.max(0));
    if inner_cut > 0 {
        let mut n = 1;
        while step * n < inner_cut {
            let factor = FormalQSeries::from_terms(
                [(0, CoeffFunction::one()), (step * n, CoeffFunction::constant(GaussianRational::from_int(-1)))],
                EXACT,
            );
            prod = prod.mul(&factor);
            n += 1;
        }
    }
    let powered = prod.pow(power)?;
    Ok(powered.scale(&GaussianRational::one(), 0, QExponent::from_24ths(lead)))
}

/// Walks a convex integer function outwards from `start` and returns every
/// index whose value lies below `cut`.
fn convex_window(start: i64, cut: i64, mut f: impl FnMut(i64) -> i64) -> Vec<i64> {
    let mut out = Vec::new();
    if f(start) < cut {
        out.push(start);
    }
    for dir in [1i64, -1] {
        let mut j = start;
        loop {
            j += dir;
            let v = f(j);
            if v < cut {
                out.push(j);
            } else if f(j + dir) >= v {
                break;
            }
        }
    }
    out.sort_unstable();
    out
}

/// `theta_ab(c tau, d z + alpha tau + beta)`: over `X = 2n + a`,
/// `q^{c X^2/8 + alpha X/2} y^{d X} i^{X (2 beta + b)}`.
fn expand_theta(ch: ThetaChar, arg: &ThetaArg, cut: i64) -> Result<FormalQSeries> {
    let (a, b) = (ch.a() as i64, ch.b() as i64);
    let c = arg.tau_scale;
    if c <= Ratio::zero() {
        return Err(Error::UnsupportedFormal("theta at a non-positive tau scale".into()));
    }
    let alpha = arg.tau_shift;
    let phase = arg.const_shift.twice() + b; // 2 beta + b
    let exponent = |x: i64| -> Result<i64> { lattice(c * (x * x) / 8 + alpha * x / 2) };
    // Check the lattice once on both parities in play, then use exact i64.
    exponent(a)?;
    exponent(a + 2)?;
    let ex = |n: i64| exponent(2 * n + a).unwrap_or(i64::MAX);
    let vertex = (-(alpha * 2) / c - Ratio::from_integer(a)) / 2;
    let start = vertex.round().to_integer();
    let mut out = FormalQSeries::zero(cut);
    for n in convex_window(start, cut, ex) {
        let x = 2 * n + a;
        let coeff = CoeffFunction::monomial(GaussianRational::i_pow(x * phase), arg.z_mult * x);
        out.add_term(exponent(x)?, coeff);
    }
    Ok(out)
}

/// `theta_{k,m}(c tau, w)`, `w = d z + alpha tau + beta`: over `x = j + k/(2m)`,
/// `sign(j) q^{c m x^2 + m alpha x} y^{2 m d x} e^{2 pi i m x beta}`.
fn expand_theta_km(idx: &ThetaIndex, signed: bool, arg: &ThetaArg, cut: i64) -> Result<FormalQSeries> {
    let m = idx.m().to_ratio();
    let off = idx.offset();
    let c = arg.tau_scale;
    let alpha = arg.tau_shift;
    let beta = arg.const_shift.to_ratio();
    let x_of = |j: i64| Ratio::from_integer(j) + off;
    let exponent = |j: i64| -> Result<i64> {
        let x = x_of(j);
        lattice(c * m * x * x + m * alpha * x)
    };
    exponent(0)?;
    exponent(1)?;
    let ex = |j: i64| exponent(j).unwrap_or(i64::MAX);
    let vertex = -alpha / (c * 2) - off;
    let mut out = FormalQSeries::zero(cut);
    for j in convex_window(vertex.round().to_integer(), cut, ex) {
        let x = x_of(j);
        let y = integral(m * x * 2 * arg.z_mult, "y-exponent")?;
        let quarter = integral(m * x * beta * 4, "phase exponent")?;
        let mut unit = GaussianRational::i_pow(quarter);
        if signed && j.rem_euclid(2) == 1 {
            unit = -unit;
        }
        out.add_term(exponent(j)?, CoeffFunction::monomial(unit, y));
    }
    Ok(out)
}

/// Each `1/(1 - u)` is expanded geometrically when `u` has positive
/// valuation, kept as a rational function of `y` when `u` is free of `q`,
/// and rewritten as `-u^{-1}/(1 - u^{-1})` when the valuation is negative.
pub fn expand_lerch(l: &LerchSeries, cut: i64) -> Result<FormalQSeries> {
    let (qa, qb, qc) = (l.q_quad.numerator(), l.q_lin.numerator(), l.q_cst.numerator());
    let (mu, nu) = (l.den_lin.numerator(), l.den_cst.numerator());
    if qa <= 0 {
        return Err(Error::UnsupportedFormal("Lerch series without a positive quadratic exponent".into()));
    }
    let unit_inv = l.den_unit.inv().ok_or_else(|| Error::UnsupportedFormal("zero denominator unit".into()))?;
    let n_j = |j: i64| qa * j * j + qb * j + qc;
    let e_j = |j: i64| mu * j + nu;
    let val = |j: i64| n_j(j) + (-e_j(j)).max(0);
    let start = ((-qb as f64) / (2.0 * qa as f64)).round() as i64;
    let mut out = FormalQSeries::zero(cut);
    for j in convex_window(start, cut, val) {
        let mut base = l.coeff.clone();
        if l.alternating && j.rem_euclid(2) == 1 {
            base = -base;
        }
        let ypow = l.y_lin * j + l.y_cst;
        let (n, e) = (n_j(j), e_j(j));
        if e > 0 {
            let mut k = 0;
            let mut u = GaussianRational::one();
            while n + k * e < cut {
                out.add_term(n + k * e, CoeffFunction::monomial(&base * &u, ypow + k * l.den_y));
                u = &u * &l.den_unit;
                k += 1;
            }
        } else if e == 0 {
            if l.den_y == 0 && l.den_unit.is_one() {
                return Err(Error::UnsupportedFormal(format!("term j = {j} has an identically vanishing denominator")));
            }
            let c = CoeffFunction::geometric(base, &l.den_unit, l.den_y).mul_y(ypow);
            out.add_term(n, c);
        } else {
            let mut k = 1;
            let mut u = unit_inv.clone();
            while n - k * e < cut {
                out.add_term(n - k * e, CoeffFunction::monomial(-(&base * &u), ypow - k * l.den_y));
                u = &u * &unit_inv;
                k += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appell::FghName;
    use crate::{HalfInt, ModularPoint, SeriesTruncation, C64};

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    /// Euler's pentagonal series, as `(exponent in 24ths, coefficient)`.
    fn pentagonal(limit: i64) -> Vec<(i64, i64)> {
        let mut v = Vec::new();
        for k in -20i64..=20 {
            let e = 1 + 24 * k * (3 * k - 1) / 2;
            if e < limit {
                v.push((e, if k.rem_euclid(2) == 0 { 1 } else { -1 }));
            }
        }
        v.sort();
        v
    }

    #[test]
    fn eta_is_pentagonal() {
        let s = expand(&Expr::eta(Ratio::from_integer(1), 1), 24 * 30).unwrap();
        let expected = FormalQSeries::from_terms(
            pentagonal(24 * 30).into_iter().map(|(e, c)| (e, CoeffFunction::constant(g(c)))),
            24 * 30,
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn eta_cube_matches_brute_force_cube() {
        // Cube of the truncated pentagonal polynomial, by hand.
        let limit = 24 * 12;
        let p = pentagonal(limit);
        let mut cube = std::collections::BTreeMap::<i64, i64>::new();
        for (a, ca) in &p {
            for (b, cb) in &p {
                for (c, cc) in &p {
                    let e = a + b + c;
                    if e < limit {
                        *cube.entry(e).or_default() += ca * cb * cc;
                    }
                }
            }
        }
        let s = expand(&Expr::eta(Ratio::from_integer(1), 3), limit).unwrap();
        for (e, c) in cube {
            assert_eq!(s.coefficient(e), CoeffFunction::constant(g(c)), "exponent {e}");
        }
        // eta^3 = q^{1/8} (1 - 3q + 5q^3 - 7q^6 + ...)
        assert_eq!(s.coefficient(3 + 24), CoeffFunction::constant(g(-3)));
        assert_eq!(s.coefficient(3 + 48), CoeffFunction::zero());
    }

    #[test]
    fn theta11_leading_term() {
        let s = expand(&Expr::theta(ThetaChar::T11, ThetaArg::z_times(1)), 24).unwrap();
        let lines = s.dump_lines();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].0, 3);
        // i q^{1/8} (y - y^{-1})
        assert_eq!(
            s.coefficient(3),
            CoeffFunction::monomial(GaussianRational::i(), 1).add(&CoeffFunction::monomial(-GaussianRational::i(), -1))
        );
    }

    #[test]
    fn theta_inverse_self_check() {
        let th = Expr::theta(ThetaChar::T11, ThetaArg::z_times(1));
        let cut = 24 * 5;
        let prod = expand(&(th.clone() * th.recip()), cut).unwrap();
        assert_eq!(prod, FormalQSeries::one().truncate(cut));
    }

    #[test]
    fn theta_km_reindexing_is_exact() {
        let arg = ThetaArg::z_times(2);
        let a = ThetaIndex::new(HalfInt::ONE, HalfInt::ONE).unwrap();
        let b = ThetaIndex::new(HalfInt::from_int(3), HalfInt::ONE).unwrap();
        let ea = expand(&Expr::ThetaKm { idx: a, signed: false, arg }, 24 * 8).unwrap();
        let eb = expand(&Expr::ThetaKm { idx: b, signed: false, arg }, 24 * 8).unwrap();
        assert_eq!(ea, eb);
    }

    #[test]
    fn f1_constant_term() {
        let s = expand_lerch(&FghName::F1.series(), 24 * 2).unwrap();
        // j = 0 gives 1/(1 - y^2) at q^0, and j = -1 contributes -y^{-2} q^{1/2} y^{... } only from q^{1/2} on.
        assert_eq!(s.coefficient(0), CoeffFunction::geometric(g(1), &g(1), 2));
        assert_eq!(s.valuation(), 0);
    }

    #[test]
    fn series_substitution_matches_numeric_f1() {
        let tau = ModularPoint::from_parts(0.1, 1.6).unwrap();
        let z = C64::new(0.3, 0.2);
        let trunc = SeriesTruncation::new(1e-15, 100_000).unwrap();
        let s = expand_lerch(&FghName::F1.series(), 24 * 6).unwrap();
        let numeric = FghName::F1.series().eval(&tau, z, &trunc).unwrap();
        let tail = (-2.0 * std::f64::consts::PI * 1.6 * 6.0).exp() * 50.0;
        assert!((s.eval(&tau, z) - numeric).norm() < tail + 1e-14 * numeric.norm(), "{} {}", s.eval(&tau, z), numeric);
    }
}
