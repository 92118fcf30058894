//! Special-function layer: heat kernel, Hermite orthonormal functions and
//! their space-time dressings, Mehler summation, Airy and Bessel functions.
//!
//! All operations are pure and safe to call from any number of threads.

mod airy;
mod bessel;
mod hermite;

pub use airy::{airy_ai, airy_ai_prime, AiryBranchConfig, AIRY_BRANCHES};
pub use bessel::{bessel_i, bessel_i_scaled, bessel_j, bessel_j_prime};
pub use hermite::{hermite_phi, hermite_phi_deriv, hermite_phi_upto, HermitePhiSeq};

use crate::{Error, Result};

const LN2: f64 = core::f64::consts::LN_2;

/// Gaussian transition density (2 pi t)^{-1/2} exp(-(x-x')^2 / 2t).
pub fn heat_kernel(t: f64, x: f64, xprime: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("heat kernel needs t > 0"));
    }
    let d = x - xprime;
    Ok(libm::exp(-d * d / (2.0 * t)) / libm::sqrt(2.0 * core::f64::consts::PI * t))
}

/// phi_n(t, x) = 2^{-1/2} t^{-(n+1)/2} e^{-x^2/4t} phi_n(x / sqrt(2t)).
pub fn phi_tx(n: u32, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("phi_tx needs t > 0"));
    }
    let log2_pre = -(n as f64 + 1.0) / 2.0 * libm::log2(t) - x * x / (4.0 * t * LN2) - 0.5;
    dressed(n, t, x, log2_pre)
}

/// hat-phi_n(t, x) = t^{n/2} e^{x^2/4t} phi_n(x / sqrt(2t)).
pub fn hatphi_tx(n: u32, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("hatphi_tx needs t > 0"));
    }
    let log2_pre = n as f64 / 2.0 * libm::log2(t) + x * x / (4.0 * t * LN2);
    dressed(n, t, x, log2_pre)
}

fn dressed(n: u32, t: f64, x: f64, log2_pre: f64) -> Result<f64> {
    let zeta = x / libm::sqrt(2.0 * t);
    let mut seq = HermitePhiSeq::new(zeta);
    for _ in 0..n {
        seq.next_scaled();
    }
    let phi = seq.next_scaled();
    let (m, e) = phi.into_parts();
    if m == 0.0 {
        return Ok(0.0);
    }
    let e_pre = libm::floor(log2_pre);
    let total = e + e_pre as i64;
    if total > 1020 {
        return Err(Error::Range("space-time Hermite dressing overflows"));
    }
    if total < -1100 {
        return Ok(0.0);
    }
    Ok(libm::ldexp(m * libm::exp2(log2_pre - e_pre), total as i32))
}

/// Partial Mehler sum with `terms` terms:
/// (2t)^{-1/2} e^{-x^2/4t + x'^2/4t'} sum_n (t'/t)^{n/2} phi_n(x/sqrt(2t)) phi_n(x'/sqrt(2t')).
/// Converges to heat_kernel(t - t', x, x') as terms grow, provided t' < t.
pub fn mehler_sum(t: f64, tprime: f64, x: f64, xprime: f64, terms: u32) -> Result<f64> {
    if !(tprime > 0.0) {
        return Err(Error::Domain("mehler_sum needs t' > 0"));
    }
    if !(tprime < t) {
        return Err(Error::Domain("mehler_sum diverges unless t' < t"));
    }
    let sqrt_ratio = libm::sqrt(tprime / t);
    let mut sa = HermitePhiSeq::new(x / libm::sqrt(2.0 * t));
    let mut sb = HermitePhiSeq::new(xprime / libm::sqrt(2.0 * tprime));
    let mut pw = 1.0;
    let mut sum = 0.0;
    for _ in 0..terms {
        sum += pw * sa.next_value() * sb.next_value();
        pw *= sqrt_ratio;
    }
    let pre =
        libm::exp(-x * x / (4.0 * t) + xprime * xprime / (4.0 * tprime)) / libm::sqrt(2.0 * t);
    if !pre.is_finite() {
        return Err(Error::Range("mehler_sum prefactor overflows"));
    }
    Ok(pre * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    #[test]
    fn heat_kernel_values_and_symmetry() {
        assert!((heat_kernel(1.0, 0.0, 0.0).unwrap() - 0.3989422804014327).abs() < 1e-12);
        assert!((heat_kernel(2.0, 1.0, 1.0).unwrap() - 0.28209479177387814).abs() < 1e-12);
        let a = heat_kernel(0.7, 1.3, -0.4).unwrap();
        let b = heat_kernel(0.7, -0.4, 1.3).unwrap();
        assert_eq!(a, b);
        assert!(matches!(heat_kernel(0.0, 0.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn heat_kernel_normalizes_to_one() {
        let r = quad::integrate(|x| heat_kernel(1.0, x, 0.0).unwrap(), -10.0, 10.0, 1e-12);
        assert!((r.value - 1.0).abs() < 1e-10, "got {}", r.value);
    }

    #[test]
    fn dressing_product_collapses_to_phi_squared() {
        for &(n, t, x) in &[(0u32, 0.5, 0.3), (3, 2.0, -1.1), (12, 0.1, 0.9)] {
            let zeta = x / libm::sqrt(2.0 * t);
            let want = hermite_phi(n, zeta).powi(2) / libm::sqrt(2.0 * t);
            let got = phi_tx(n, t, x).unwrap() * hatphi_tx(n, t, x).unwrap();
            assert!((got - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn dressings_are_biorthonormal_at_equal_times() {
        let t = 0.8;
        for n in 0..=10u32 {
            for np in 0..=10u32 {
                let r = quad::integrate(
                    |x| hatphi_tx(n, t, x).unwrap() * phi_tx(np, t, x).unwrap(),
                    -14.0,
                    14.0,
                    1e-11,
                );
                let want = if n == np { 1.0 } else { 0.0 };
                assert!((r.value - want).abs() < 1e-8, "n={n} n'={np}: {}", r.value);
            }
        }
    }

    #[test]
    fn heat_flow_leaves_phi_tx_invariant() {
        let (t1, t2) = (0.6, 1.7);
        for &n in &[0u32, 1, 4, 9] {
            for &x2 in &[-1.0, 0.4, 2.2] {
                let r = quad::integrate(
                    |x1| heat_kernel(t2 - t1, x2, x1).unwrap() * phi_tx(n, t1, x1).unwrap(),
                    -20.0,
                    20.0,
                    1e-12,
                );
                let want = phi_tx(n, t2, x2).unwrap();
                assert!(
                    (r.value - want).abs() < 1e-8,
                    "n={n} x2={x2}: got {} want {want}",
                    r.value
                );
            }
        }
    }

    #[test]
    fn hatphi_overflow_is_a_range_error() {
        // the Gaussian inside phi_n cancels e^{x^2/4t} exactly, so hat-phi_n
        // grows like a degree-n polynomial; push it past the f64 range
        assert!(matches!(hatphi_tx(300, 1.0, 1.0e4), Err(Error::Range(_))));
        // while moderate arguments with a huge lone exponential stay finite
        assert!(hatphi_tx(0, 0.01, 20.0).unwrap().is_finite());
    }

    #[test]
    fn mehler_converges_to_the_heat_kernel() {
        let got = mehler_sum(2.0, 1.0, 0.0, 0.0, 80).unwrap();
        let want = heat_kernel(1.0, 0.0, 0.0).unwrap();
        assert!((got - want).abs() < 1e-10, "got {got}, want {want}");
    }

    #[test]
    fn mehler_single_term_is_the_first_summand() {
        let (t, tp, x, xp) = (1.5, 1.2, 0.4, -0.9);
        let got = mehler_sum(t, tp, x, xp, 1).unwrap();
        let want = libm::exp(-x * x / (4.0 * t) + xp * xp / (4.0 * tp)) / libm::sqrt(2.0 * t)
            * hermite_phi(0, x / libm::sqrt(2.0 * t))
            * hermite_phi(0, xp / libm::sqrt(2.0 * tp));
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn mehler_rejects_reversed_times() {
        assert!(matches!(
            mehler_sum(1.0, 2.0, 0.0, 0.0, 10),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn mehler_truncation_error_decays_geometrically() {
        let (t, tp) = (2.0, 1.0);
        let target = heat_kernel(t - tp, 0.3, -0.2).unwrap();
        let mut errs = alloc::vec::Vec::new();
        for terms in [20u32, 40, 60, 80] {
            errs.push((mehler_sum(t, tp, 0.3, -0.2, terms).unwrap() - target).abs());
        }
        // ratio t'/t = 1/2 per 2 terms in n (odd terms vanish at the origin but
        // generic arguments see every term); demand at least geometric decay 0.6^20
        for w in errs.windows(2) {
            assert!(w[1] < w[0] * 0.01 + 1e-15, "errors {errs:?}");
        }
    }

    #[test]
    fn orthonormality_of_phi_up_to_30() {
        // Gauss-Hermite-grade quadrature: adaptive panels over [-16, 16]
        for m in (0..=30u32).step_by(6) {
            for n in (0..=30u32).step_by(5) {
                let r = quad::integrate(
                    |z| hermite_phi(m, z) * hermite_phi(n, z),
                    -16.0,
                    16.0,
                    1e-11,
                );
                let want = if m == n { 1.0 } else { 0.0 };
                assert!((r.value - want).abs() <= 1e-8, "m={m} n={n}: {}", r.value);
            }
        }
    }

    #[test]
    fn scaled_bulk_limit_toward_cosine() {
        // (-1)^l l^{1/4} phi_{2l}(u/(2 sqrt(l))) -> cos(u)/sqrt(pi), error monotone in l
        for &u in &[0.0, 1.0, 2.0] {
            let target = libm::cos(u) / libm::sqrt(core::f64::consts::PI);
            let mut prev = f64::INFINITY;
            for &l in &[50u32, 100, 200, 400] {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                let v = sign
                    * libm::pow(l as f64, 0.25)
                    * hermite_phi(2 * l, u / (2.0 * libm::sqrt(l as f64)));
                let err = (v - target).abs();
                assert!(err < prev, "u={u} l={l}: err {err} !< prev {prev}");
                prev = err;
            }
        }
    }

    #[test]
    fn scaled_edge_limit_toward_airy() {
        // 2^{-1/4} l^{1/12} phi_l(sqrt(2l) + u l^{-1/6}/sqrt(2)) -> Ai(u)
        for &u in &[-2.0, 0.0, 2.0] {
            let target = airy_ai(u);
            let mut prev = f64::INFINITY;
            for &l in &[50u32, 100, 200, 400] {
                let lf = l as f64;
                let z = libm::sqrt(2.0 * lf) + u * libm::pow(lf, -1.0 / 6.0) / libm::sqrt(2.0);
                let v = libm::pow(2.0, -0.25) * libm::pow(lf, 1.0 / 12.0) * hermite_phi(l, z);
                let err = (v - target).abs();
                if l == 400 {
                    // measured in 50-digit arithmetic: 4.03e-2, 1.75e-2, 3.47e-3
                    // at u = -2, 0, 2; the convergence rate here is only l^{-1/3}
                    let cap = if u < -1.0 { 0.045 } else { 0.02 };
                    assert!(err <= cap, "u={u}: err {err}");
                }
                assert!(err < prev, "u={u} l={l}: err {err} !< prev {prev}");
                prev = err;
            }
        }
    }
}
