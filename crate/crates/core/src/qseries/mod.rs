//! Nome powers, Dedekind eta and theta functions in double precision.

mod dd;
mod sum;
mod theta;
mod types;

use std::f64::consts::PI;

pub(crate) use dd::{CDd, Dd};
pub use sum::Accum;
pub(crate) use sum::{envelope_center, gaussian_tail};
pub use theta::{
    duplication_check, mumford_theta, theta, theta00_nullwert_printed_form, theta_km, theta_km_signed, theta_nullwerte,
    Duplication, ThetaChar,
};
pub(crate) use theta::{mumford_theta_acc, theta_km_acc};
pub use types::{HalfInt, ModularPoint, QExponent, SeriesTruncation, ThetaIndex};

use crate::{Error, Result, C64};

/// `q^r = exp(2 pi i tau r)`.
pub fn modular_power(tau: &ModularPoint, r: QExponent) -> C64 {
    nome_power(tau.tau(), r.value())
}

/// `exp(2 pi i tau r)` for a real exponent.
#[inline]
pub(crate) fn nome_power(tau: C64, r: f64) -> C64 {
    (C64::new(0.0, 2.0 * PI * r) * tau).exp()
}

/// `eta(tau) = q^{1/24} prod_{n >= 1} (1 - q^n)`. The product stops once
/// `exp(|q|^{N+1} / (1 - |q|)) - 1`, which bounds the relative size of the
/// remaining factors, is below the tolerance.
pub fn dedekind_eta(tau: &ModularPoint, trunc: &SeriesTruncation) -> Result<C64> {
    let t = tau.tau();
    let aq = tau.nome_abs();
    let mut prod = C64::new(1.0, 0.0);
    let mut n = 1usize;
    loop {
        prod *= 1.0 - nome_power(t, n as f64);
        let tail = (aq.powi(n as i32 + 1) / (1.0 - aq)).exp_m1();
        if tail <= trunc.tolerance {
            break;
        }
        if n >= trunc.max_terms {
            return Err(Error::Truncation { terms: n, tail, tolerance: trunc.tolerance });
        }
        n += 1;
    }
    Ok(modular_power(tau, QExponent::from_24ths(1)) * prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tr() -> SeriesTruncation {
        SeriesTruncation::new(1e-16, 1_000_000).unwrap()
    }

    fn pt(re: f64, im: f64) -> ModularPoint {
        ModularPoint::from_parts(re, im).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm()).max(1e-30)
    }

    /// `q^{1/24} sum_k (-1)^k q^{k(3k-1)/2}`, summed far past convergence.
    fn eta_pentagonal(tau: C64) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for k in -60i64..=60 {
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            s += sign * nome_power(tau, (k * (3 * k - 1)) as f64 / 2.0);
        }
        nome_power(tau, 1.0 / 24.0) * s
    }

    /// Plain symmetric sum of the defining Mumford series.
    fn theta_brute(a: u8, b: u8, tau: C64, z: C64) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for n in -80i64..=80 {
            let x = n as f64 + a as f64 / 2.0;
            s += (C64::new(0.0, PI) * (x * x * tau + 2.0 * x * (z + b as f64 / 2.0))).exp();
        }
        s
    }

    #[test]
    fn modular_power_values() {
        let i = pt(0.0, 1.0);
        assert_eq!(modular_power(&i, QExponent::ZERO), c(1.0, 0.0));
        let q = modular_power(&i, QExponent::ONE);
        assert!((q.re - 0.001_867_442_731_707_988_8).abs() < 1e-17 && q.im.abs() < 1e-18);
    }

    #[test]
    fn eta_reference_values() {
        let e = dedekind_eta(&pt(0.0, 1.0), &tr()).unwrap();
        assert!((e.re - 0.768_225_422_326_056_7).abs() < 1e-12, "{e}");
        let e2 = dedekind_eta(&pt(0.0, 2.0), &tr()).unwrap();
        assert!((e2.re - 0.592_382_781_332_415_5).abs() < 1e-12, "{e2}");
    }

    #[test]
    fn eta_matches_pentagonal_series() {
        for &(re, im) in &[(0.1, 0.5), (-0.4, 0.7), (0.3, 1.9), (0.05, 0.31)] {
            let tau = pt(re, im);
            assert!(rel(dedekind_eta(&tau, &tr()).unwrap(), eta_pentagonal(tau.tau())) < 1e-12);
        }
    }

    #[test]
    fn theta_matches_brute_force() {
        let tau = pt(0.13, 0.9);
        let z = c(0.27, 0.11);
        for ch in ThetaChar::ALL {
            let v = theta(ch, &tau, z, &tr()).unwrap();
            assert!(rel(v, theta_brute(ch.a(), ch.b(), tau.tau(), z)) < 1e-13, "{ch}");
        }
    }

    #[test]
    fn convention_gate() {
        let t = tr();
        for &(re, im) in &[(0.0, 1.0), (0.21, 0.6), (-0.37, 1.4)] {
            let tau = pt(re, im);
            assert!(theta(ThetaChar::T11, &tau, c(0.0, 0.0), &t).unwrap().norm() < 1e-14);
            let e1 = dedekind_eta(&tau, &t).unwrap();
            let e2 = dedekind_eta(&tau.scaled(2.0).unwrap(), &t).unwrap();
            let eh = dedekind_eta(&tau.scaled(0.5).unwrap(), &t).unwrap();
            let t10 = theta(ThetaChar::T10, &tau, c(0.0, 0.0), &t).unwrap();
            let t01 = theta(ThetaChar::T01, &tau, c(0.0, 0.0), &t).unwrap();
            assert!(rel(t10, 2.0 * e2 * e2 / e1) < 1e-12);
            assert!(rel(t01, eh * eh / e1) < 1e-12);
            let z = c(0.31, -0.07);
            let idx = ThetaIndex::new(HalfInt::HALF, HalfInt::HALF).unwrap();
            let signed = theta_km_signed(&idx, &tau, 2.0 * z, &t).unwrap();
            let t11 = theta(ThetaChar::T11, &tau, z, &t).unwrap();
            assert!(rel(signed, -C64::i() * t11) < 1e-12);
        }
    }

    #[test]
    fn theta00_constant_at_i() {
        // pi^{1/4} / Gamma(3/4)
        let v = theta(ThetaChar::T00, &pt(0.0, 1.0), c(0.0, 0.0), &tr()).unwrap();
        assert!((v.re - 1.086_434_811_213_308).abs() < 1e-13);
    }

    #[test]
    fn theta_11_degree_one_at_i() {
        // 2 e^{-pi/2} (1 + e^{-4 pi} + e^{-12 pi} + ...)
        let idx = ThetaIndex::new(HalfInt::ONE, HalfInt::ONE).unwrap();
        let v = theta_km(&idx, &pt(0.0, 1.0), c(0.0, 0.0), &tr()).unwrap();
        let mut oracle = 0.0;
        for n in -30i64..=30 {
            let x = n as f64 + 0.5;
            oracle += (-2.0 * PI * x * x).exp();
        }
        assert!((v.re - oracle).abs() < 1e-15);
        assert!((v.re - 0.415_760_602_6).abs() < 1e-9);
    }

    #[test]
    fn half_degree_theta_is_level_two_theta00() {
        let tau = pt(0.17, 0.8);
        let z = c(0.12, 0.05);
        let idx = ThetaIndex::new(HalfInt::ZERO, HalfInt::HALF).unwrap();
        let lhs = theta_km(&idx, &tau.scaled(2.0).unwrap(), 4.0 * z, &tr()).unwrap();
        let rhs = theta(ThetaChar::T00, &tau.scaled(2.0).unwrap(), 2.0 * z, &tr()).unwrap();
        assert!(rel(lhs, rhs) < 1e-13);
    }

    #[test]
    fn nullwerte_agree_with_series() {
        let tau = pt(-0.2, 0.75);
        let nw = theta_nullwerte(&tau, &tr()).unwrap();
        for (k, ch) in ThetaChar::ALL.iter().enumerate().take(3) {
            let direct = theta(*ch, &tau, c(0.0, 0.0), &tr()).unwrap();
            assert!(rel(nw[k], direct) < 1e-11, "{ch}");
        }
        assert_eq!(nw[3], c(0.0, 0.0));
        let printed = theta00_nullwert_printed_form(&tau, &tr()).unwrap();
        assert!(rel(printed, nw[0]) > 1e-3);
    }

    #[test]
    fn duplication_at_zero_reduces_to_nullwert_form() {
        let tau = pt(0.1, 0.9);
        let r = duplication_check(Duplication::OneZeroPlusOneOne, &tau, c(0.0, 0.0), &tr()).unwrap();
        assert!(r.norm() < 1e-12);
        for v in Duplication::ALL {
            let z = c(0.3, 0.2);
            let r0 = duplication_check(v, &tau, z, &tr()).unwrap();
            let r1 = duplication_check(v, &tau, z + 1.0, &tr()).unwrap();
            assert!(r0.norm() < 1e-11 && r1.norm() < 1e-11, "{v:?}");
        }
        assert!(Duplication::from_index(0).is_err());
        assert_eq!(Duplication::from_index(3).unwrap(), Duplication::OneZeroPlusOneOne);
    }

    #[test]
    fn tolerance_halving_is_stable() {
        let tau = pt(0.4, 0.35);
        let z = c(0.2, 0.15);
        let coarse = SeriesTruncation::new(1e-8, 1_000_000).unwrap();
        let fine = SeriesTruncation::new(5e-9, 1_000_000).unwrap();
        for ch in ThetaChar::ALL {
            let a = mumford_theta_acc(ch, &tau, z, &coarse).unwrap();
            let b = mumford_theta_acc(ch, &tau, z, &fine).unwrap();
            assert!((a.value - b.value).norm() <= 1e-8 * a.peak);
        }
    }

    fn tau_strategy() -> impl Strategy<Value = ModularPoint> {
        (-0.5f64..0.5, 0.3f64..2.5).prop_map(|(re, im)| pt(re, im))
    }

    fn z_strategy() -> impl Strategy<Value = C64> {
        (-1.0f64..1.0, -0.3f64..0.3).prop_map(|(re, im)| c(re, im))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn power_is_multiplicative(tau in tau_strategy(), a in -120i64..120, b in -120i64..120) {
            let lhs = modular_power(&tau, QExponent::from_24ths(a + b));
            let rhs = modular_power(&tau, QExponent::from_24ths(a)) * modular_power(&tau, QExponent::from_24ths(b));
            prop_assert!(rel(lhs, rhs) < 1e-12);
        }

        #[test]
        fn eta_t_phase(tau in tau_strategy()) {
            let r = dedekind_eta(&tau.t_image(), &tr()).unwrap() / dedekind_eta(&tau, &tr()).unwrap();
            prop_assert!((r - C64::from_polar(1.0, PI / 12.0)).norm() < 1e-11);
        }

        #[test]
        fn quasi_periodicity(tau in tau_strategy(), z in z_strategy()) {
            let t = tr();
            for ch in ThetaChar::ALL {
                let base = theta(ch, &tau, z, &t).unwrap();
                let sa = if ch.a() == 1 { -1.0 } else { 1.0 };
                let sb = if ch.b() == 1 { -1.0 } else { 1.0 };
                let shifted = theta(ch, &tau, z + 1.0, &t).unwrap();
                prop_assert!(rel(shifted, sa * base) < 1e-9);
                let shifted = theta(ch, &tau, z + tau.tau(), &t).unwrap();
                let factor = sb * (C64::new(0.0, -PI) * (tau.tau() + 2.0 * z)).exp();
                prop_assert!(rel(shifted, factor * base) < 1e-9);
            }
        }

        #[test]
        fn theta_km_reindexing(tau in tau_strategy(), u in z_strategy(), k2 in -6i64..6, m2 in 1i64..5) {
            let t = tr();
            let m = HalfInt::from_twice(m2);
            let k = HalfInt::from_twice(k2);
            let idx = ThetaIndex::new(k, m).unwrap();
            let shifted = ThetaIndex::new(k + m * 2, m).unwrap();
            let a = theta_km(&idx, &tau, u, &t).unwrap();
            let b = theta_km(&shifted, &tau, u, &t).unwrap();
            prop_assert!(rel(a, b) < 1e-11);
            let sa = theta_km_signed(&idx, &tau, u, &t).unwrap();
            let sb = theta_km_signed(&shifted, &tau, u, &t).unwrap();
            prop_assert!(rel(sa, -sb) < 1e-11);
            // theta_{k,m}(tau, u + 2) = e^{2 pi i k} theta_{k,m}(tau, u)
            let moved = theta_km(&idx, &tau, u + 2.0, &t).unwrap();
            let phase = if k2.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            prop_assert!(rel(moved, phase * a) < 1e-11);
        }
    }
}
