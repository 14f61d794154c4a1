//! Bilateral sums whose terms are dominated by a Gaussian envelope
//! `exp(quad * n^2 + lin * n + c)` with `quad < 0`.

use crate::{Error, Result, SeriesTruncation, C64};

/// A tail-bounded partial sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Accum {
    pub value: C64,
    /// `sum |term|`; the condition scale of the sum.
    pub magnitude: f64,
    /// Largest `|term|` seen.
    pub peak: f64,
    pub terms: usize,
    /// Rigorous bound on everything not summed.
    pub tail: f64,
}

/// Bound on `sum_{k >= 1} exp(E(n + k dir))` given `log_env = E(n)`, where
/// `E(x) = quad x^2 + lin x + c`. `None` while the envelope still grows in
/// direction `dir`.
pub(crate) fn gaussian_tail(quad: f64, lin: f64, n: i64, dir: i64, log_env: f64) -> Option<f64> {
    debug_assert!(quad < 0.0);
    let d = dir as f64;
    let log_r = quad * (2.0 * n as f64 * d + 1.0) + lin * d;
    if log_r >= 0.0 {
        return None;
    }
    let r = log_r.exp();
    let shrink = (2.0 * quad).exp();
    Some(log_env.exp() * r / (1.0 - r * shrink))
}

/// Index of the largest envelope value.
pub(crate) fn envelope_center(quad: f64, lin: f64) -> i64 {
    let c = -lin / (2.0 * quad);
    if c.is_finite() {
        c.round().clamp(-1e15, 1e15) as i64
    } else {
        0
    }
}

/// Sums `term(n)` over all integers. `term` returns the value and the
/// natural log of its envelope, which must dominate `|value|` and have the
/// given quadratic and linear coefficients in `n`.
pub(crate) fn gaussian_sum<F>(quad: f64, lin: f64, trunc: &SeriesTruncation, mut term: F) -> Result<Accum>
where
    F: FnMut(i64) -> (C64, f64),
{
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(quad < 0.0) {
        return Err(Error::Domain(format!("series does not converge: quadratic rate {quad}")));
    }
    let center = envelope_center(quad, lin);
    // Each side gets half of the budget.
    let budget = 0.5 * trunc.tolerance;
    let (v0, _) = term(center);
    let mut acc = Accum { value: v0, magnitude: v0.norm(), peak: v0.norm(), terms: 1, tail: 0.0 };
    for dir in [1i64, -1] {
        let mut n = center;
        loop {
            n += dir;
            let (v, log_env) = term(n);
            let a = v.norm();
            acc.value += v;
            acc.magnitude += a;
            acc.peak = acc.peak.max(a);
            acc.terms += 1;
            let bound = gaussian_tail(quad, lin, n, dir, log_env);
            if let Some(t) = bound {
                if t <= budget * acc.peak || t == 0.0 {
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
    Ok(acc)
}
