//! Exact comparison of two expansions.

use serde::Serialize;

use super::{expand, FormalQSeries};
use crate::expr::{Expr, ThetaArg};
use crate::qseries::ThetaChar;
use crate::{QExponent, Result, ThetaIndex};

/// Outcome of an exact comparison below the cutoff.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum ResidualStatus {
    /// Both sides have coefficients below the cutoff and all of them agree.
    Zero,
    /// Neither side has a coefficient below the cutoff; nothing was compared.
    Trivial,
    /// First disagreeing exponent and the coefficient of the difference there.
    NonZero { exponent: QExponent, coefficient: String },
}

impl ResidualStatus {
    pub fn passed(&self) -> bool {
        !matches!(self, ResidualStatus::NonZero { .. })
    }
}

#[derive(Clone, Debug)]
pub struct Proof {
    pub order: QExponent,
    pub lhs: FormalQSeries,
    pub rhs: FormalQSeries,
    pub residual: FormalQSeries,
    pub status: ResidualStatus,
}

/// The exclusive cutoff (in 24ths) used for "through `q^order`".
pub fn cutoff_for(order: QExponent) -> i64 {
    order.numerator() + 1
}

/// Expands both sides through `q^order` inclusive and subtracts.
pub fn prove_exprs(lhs: &Expr, rhs: &Expr, order: QExponent) -> Result<Proof> {
    let cut = cutoff_for(order);
    let l = expand(lhs, cut)?;
    let r = expand(rhs, cut)?;
    let residual = l.sub(&r);
    let status = match residual.terms().next() {
        Some((e, c)) => ResidualStatus::NonZero { exponent: QExponent::from_24ths(e), coefficient: c.to_string() },
        None if l.is_empty() && r.is_empty() => ResidualStatus::Trivial,
        None => ResidualStatus::Zero,
    };
    Ok(Proof { order, lhs: l, rhs: r, residual, status })
}

/// Building blocks that can be expanded on their own.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasicSeries {
    Eta,
    Mumford(ThetaChar),
    ThetaKm(ThetaIndex),
    ThetaKmSigned(ThetaIndex),
}

impl BasicSeries {
    pub fn expr(&self) -> Expr {
        let arg = ThetaArg::z_times(1);
        match *self {
            BasicSeries::Eta => Expr::eta(num_rational::Ratio::from_integer(1), 1),
            BasicSeries::Mumford(ch) => Expr::theta(ch, arg),
            BasicSeries::ThetaKm(idx) => Expr::ThetaKm { idx, signed: false, arg },
            BasicSeries::ThetaKmSigned(idx) => Expr::ThetaKm { idx, signed: true, arg },
        }
    }
}

/// Expansion through `q^order` inclusive.
pub fn expand_basic(which: BasicSeries, order: QExponent) -> Result<FormalQSeries> {
    expand(&which.expr(), cutoff_for(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appell::FghName;
    use crate::closed_forms::fgh_closed_form;
    use crate::formal::{CoeffFunction, GaussianRational};
    use crate::HalfInt;

    #[test]
    fn f3_through_q5() {
        let p = prove_exprs(&Expr::Lerch(FghName::F3.series()), &fgh_closed_form(FghName::F3), QExponent::from_int(5))
            .unwrap();
        assert_eq!(p.status, ResidualStatus::Zero);
        assert!(p.lhs.coefficient(120) != CoeffFunction::zero() || p.rhs.coefficient(120) == CoeffFunction::zero());
    }

    #[test]
    fn flipped_sign_is_caught() {
        let rhs = fgh_closed_form(FghName::F3).flip_first_sign();
        let p = prove_exprs(&Expr::Lerch(FghName::F3.series()), &rhs, QExponent::from_int(5)).unwrap();
        match p.status {
            ResidualStatus::NonZero { exponent, .. } => assert!(exponent.numerator() <= 120),
            s => panic!("expected a nonzero residual, got {s:?}"),
        }
    }

    #[test]
    fn positive_valuation_at_order_zero_is_trivial() {
        let e = Expr::q_frac(1, 8) * Expr::int(3);
        let p = prove_exprs(&e, &e, QExponent::ZERO).unwrap();
        assert_eq!(p.status, ResidualStatus::Trivial);
    }

    #[test]
    fn basic_signed_theta_anchor() {
        // theta^{(-)}_{1/2,1/2}(tau, 2z) = -i theta11(tau, z): compare at level z via the y-substitution y -> y^2.
        let idx = ThetaIndex::new(HalfInt::HALF, HalfInt::HALF).unwrap();
        let lhs = Expr::ThetaKm { idx, signed: true, arg: ThetaArg::z_times(2) };
        let rhs = Expr::i_pow(3) * Expr::theta(ThetaChar::T11, ThetaArg::z_times(1));
        let p = prove_exprs(&lhs, &rhs, QExponent::from_int(5)).unwrap();
        assert_eq!(p.status, ResidualStatus::Zero);
        let eta = expand_basic(BasicSeries::Eta, QExponent::from_int(1)).unwrap();
        assert_eq!(eta.coefficient(1), CoeffFunction::constant(GaussianRational::one()));
    }
}
