//! Bessel J and modified Bessel I of real order nu > -1 on x >= 0.
//!
//! Power series for small argument; Hankel-type asymptotic expansions beyond
//! `J_SERIES_LIMIT` (for J) and 40 (for scaled I). Relative accuracy is 1e-9
//! or better for x <= 50, nu <= 5.

use crate::{Error, Result};

const J_SERIES_LIMIT: f64 = 14.0;

fn check_order(nu: f64) -> Result<()> {
    if !(nu > -1.0) {
        return Err(Error::Domain("Bessel order must satisfy nu > -1"));
    }
    Ok(())
}

/// J_nu(x) = sum_n (-1)^n (x/2)^{2n+nu} / (n! Gamma(n+nu+1)).
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check_order(nu)?;
    if !(x >= 0.0) {
        return Err(Error::Domain("Bessel argument must be nonnegative"));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    if x <= J_SERIES_LIMIT {
        Ok(j_series(nu, x))
    } else {
        Ok(j_hankel(nu, x))
    }
}

fn j_series(nu: f64, x: f64) -> f64 {
    let h = x / 2.0;
    // leading term via logs so fractional orders and small x behave
    let mut term = libm::exp(nu * libm::log(h) - lgamma(nu + 1.0));
    let h2 = h * h;
    let mut sum = term;
    let mut comp = 0.0;
    for n in 1..300 {
        let nf = n as f64;
        term *= -h2 / (nf * (nf + nu));
        // Kahan step
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
    }
    sum
}

/// Large-argument form sqrt(2/(pi x)) [P cos w - Q sin w], w = x - nu pi/2 - pi/4.
fn j_hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut a = 1.0; // a_k = prod (mu - (2j-1)^2) / (k! (8x)^k)
    let mut p = 1.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * x);
        if a.abs() > last {
            break;
        }
        last = a.abs();
        // k odd -> Q with sign (-1)^((k-1)/2); k even -> P with sign (-1)^(k/2)
        if k % 2 == 1 {
            let sign = if ((k - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            q += sign * a;
        } else {
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            p += sign * a;
        }
        if a.abs() < 1e-18 {
            break;
        }
    }
    let w = x - nu * core::f64::consts::FRAC_PI_2 - core::f64::consts::FRAC_PI_4;
    let (s, c) = libm::sincos(w);
    libm::sqrt(2.0 / (core::f64::consts::PI * x)) * (p * c - q * s)
}

/// dJ_nu/dx = (nu/x) J_nu(x) - J_{nu+1}(x).
pub fn bessel_j_prime(nu: f64, x: f64) -> Result<f64> {
    check_order(nu)?;
    if !(x > 0.0) {
        return Err(Error::Domain("Bessel derivative needs x > 0"));
    }
    Ok(nu / x * bessel_j(nu, x)? - bessel_j(nu + 1.0, x)?)
}

/// I_nu(x) = sum_n (x/2)^{2n+nu} / (n! Gamma(n+nu+1)).
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    check_order(nu)?;
    if !(x >= 0.0) {
        return Err(Error::Domain("Bessel argument must be nonnegative"));
    }
    if x >= 705.0 {
        return Err(Error::Range(
            "modified Bessel overflow; use bessel_i_scaled",
        ));
    }
    Ok(bessel_i_scaled(nu, x)? * libm::exp(x))
}

/// e^{-x} I_nu(x); stays representable for any x >= 0.
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    check_order(nu)?;
    if !(x >= 0.0) {
        return Err(Error::Domain("Bessel argument must be nonnegative"));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    if x <= 40.0 {
        let h = x / 2.0;
        let mut term = libm::exp(nu * libm::log(h) - lgamma(nu + 1.0) - x);
        let h2 = h * h;
        let mut sum = term;
        for n in 1..400 {
            let nf = n as f64;
            term *= h2 / (nf * (nf + nu));
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        Ok(sum)
    } else {
        // e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k
        let mu = 4.0 * nu * nu;
        let mut a = 1.0;
        let mut sum = 1.0;
        let mut last = f64::INFINITY;
        for k in 1..40 {
            let kf = k as f64;
            let odd = 2.0 * kf - 1.0;
            a *= (mu - odd * odd) / (kf * 8.0 * x);
            if a.abs() > last {
                break;
            }
            last = a.abs();
            sum += if k % 2 == 0 { a } else { -a };
            if a.abs() < 1e-18 {
                break;
            }
        }
        Ok(sum / libm::sqrt(2.0 * core::f64::consts::PI * x))
    }
}

fn lgamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_reference_values() {
        // 40-digit references
        let cases = [
            (0.0, 1.0, 0.7651976865579665514497),
            (0.5, 2.3, 0.3923225958912276770666),
            (2.0, 7.0, -0.3014172200859401202786),
            (5.0, 14.0, 0.2203776482919637047774),
            (5.0, 50.0, -0.08140024769656963964397),
            (0.0, 30.0, -0.08636798358104021133596),
            (0.5, 0.05, 0.178338082402197427891),
            (4.5, 30.0, -0.1293491158467019107455),
        ];
        for (nu, x, want) in cases {
            let got = bessel_j(nu, x).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-9,
                "J({nu},{x}): got {got}, want {want}"
            );
        }
    }

    #[test]
    fn j_at_origin_and_zero_crossing() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.0, 0.0).unwrap(), 0.0);
        // first zero of J_0, located by bisection on the series
        assert!(bessel_j(0.0, 2.404825557695773).unwrap().abs() < 1e-9);
    }

    #[test]
    fn i_reference_values() {
        let cases = [
            (0.0, 1.0, 1.266065877752008335598),
            (0.5, 2.3, 2.597382504158523003721),
            (2.0, 10.0, 2281.518967726003540602),
            (5.0, 50.0, 227854830791128189603.3),
            (0.5, 0.05, 0.178486759412983053256),
        ];
        for (nu, x, want) in cases {
            let got = bessel_i(nu, x).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-9,
                "I({nu},{x}): got {got}, want {want}"
            );
            let scaled = bessel_i_scaled(nu, x).unwrap();
            assert!(((scaled - want * libm::exp(-x)) / scaled).abs() < 1e-9);
        }
    }

    #[test]
    fn order_domain_is_enforced() {
        assert!(matches!(bessel_j(-1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i(-1.5, 1.0), Err(Error::Domain(_))));
        assert!(bessel_j(-0.5, 1.0).is_ok());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &(nu, x) in &[(0.0, 1.3), (0.5, 4.0), (2.0, 20.0)] {
            let h = 1e-6;
            let fd = (bessel_j(nu, x + h).unwrap() - bessel_j(nu, x - h).unwrap()) / (2.0 * h);
            let an = bessel_j_prime(nu, x).unwrap();
            assert!((fd - an).abs() < 1e-7, "nu={nu} x={x}");
        }
    }

    #[test]
    fn series_and_hankel_agree_at_the_switch() {
        for &nu in &[0.0, 0.5, 1.0, 2.5, 5.0] {
            let a = j_series(nu, J_SERIES_LIMIT);
            let b = j_hankel(nu, J_SERIES_LIMIT);
            assert!((a - b).abs() < 2e-10, "nu={nu}: {a} vs {b}");
        }
    }
}
