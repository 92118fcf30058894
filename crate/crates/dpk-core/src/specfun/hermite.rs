//! Hermite orthonormal functions evaluated by a normalized three-term
//! recurrence that carries the Gaussian weight inside, so neither the raw
//! polynomials nor the normalization constants are ever formed.

use alloc::vec::Vec;

/// Streaming evaluator of the orthonormal functions at a fixed argument.
///
/// Values are held as mantissa/power-of-two pairs so the recurrence stays
/// meaningful even when the Gaussian prefactor underflows `f64` (arguments
/// near the turning point of degrees around 10^4 need starting values as
/// small as 2^-14000).
pub struct HermitePhiSeq {
    zeta: f64,
    next_k: u32,
    cur: Scaled,
    prev: Scaled,
}

#[derive(Copy, Clone)]
pub(crate) struct Scaled {
    m: f64,
    e: i64,
}

impl Scaled {
    fn zero() -> Self {
        Scaled { m: 0.0, e: 0 }
    }

    fn normalize(m: f64, e: i64) -> Self {
        if m == 0.0 {
            return Scaled::zero();
        }
        let (frac, exp) = libm::frexp(m);
        Scaled {
            m: frac,
            e: e + exp as i64,
        }
    }

    pub(crate) fn value(self) -> f64 {
        if self.m == 0.0 || self.e < -1100 {
            0.0
        } else {
            libm::ldexp(self.m, self.e.clamp(-1100, 1100) as i32)
        }
    }

    pub(crate) fn into_parts(self) -> (f64, i64) {
        (self.m, self.e)
    }

    /// a*self + b*other, renormalized.
    fn combine(a: f64, x: Scaled, b: f64, y: Scaled) -> Scaled {
        let tx = a * x.m;
        let ty = b * y.m;
        if tx == 0.0 {
            return Scaled::normalize(ty, y.e);
        }
        if ty == 0.0 {
            return Scaled::normalize(tx, x.e);
        }
        if x.e >= y.e {
            let shift = (y.e - x.e).max(-2000) as i32;
            Scaled::normalize(tx + libm::ldexp(ty, shift), x.e)
        } else {
            let shift = (x.e - y.e).max(-2000) as i32;
            Scaled::normalize(libm::ldexp(tx, shift) + ty, y.e)
        }
    }
}

const LN2: f64 = core::f64::consts::LN_2;

impl HermitePhiSeq {
    pub fn new(zeta: f64) -> Self {
        // phi_0 = pi^{-1/4} exp(-zeta^2/2), split into mantissa and binary exponent
        let log2_gauss = -zeta * zeta / (2.0 * LN2);
        let e = libm::floor(log2_gauss);
        let m = libm::exp2(log2_gauss - e) * libm::pow(core::f64::consts::PI, -0.25);
        HermitePhiSeq {
            zeta,
            next_k: 0,
            cur: Scaled::normalize(m, e as i64),
            prev: Scaled::zero(),
        }
    }

    /// Value of phi_k for the next k (starting at k = 0).
    pub fn next_value(&mut self) -> f64 {
        self.next_scaled().value()
    }

    pub(crate) fn next_scaled(&mut self) -> Scaled {
        let out = self.cur;
        let k = self.next_k;
        // phi_{k+1} = zeta sqrt(2/(k+1)) phi_k - sqrt(k/(k+1)) phi_{k-1}
        let kp1 = (k + 1) as f64;
        let a = self.zeta * libm::sqrt(2.0 / kp1);
        let b = -libm::sqrt(k as f64 / kp1);
        let next = Scaled::combine(a, self.cur, b, self.prev);
        self.prev = self.cur;
        self.cur = next;
        self.next_k += 1;
        out
    }
}

/// phi_n(zeta) = h_n^{-1/2} e^{-zeta^2/2} H_n(zeta).
pub fn hermite_phi(n: u32, zeta: f64) -> f64 {
    let mut seq = HermitePhiSeq::new(zeta);
    for _ in 0..n {
        seq.next_scaled();
    }
    seq.next_value()
}

/// phi_0(zeta), ..., phi_n(zeta) in one recurrence pass.
pub fn hermite_phi_upto(n: u32, zeta: f64) -> Vec<f64> {
    let mut seq = HermitePhiSeq::new(zeta);
    (0..=n).map(|_| seq.next_value()).collect()
}

/// d/dzeta phi_n(zeta) = -zeta phi_n(zeta) + sqrt(2n) phi_{n-1}(zeta).
pub fn hermite_phi_deriv(n: u32, zeta: f64) -> f64 {
    if n == 0 {
        return -zeta * hermite_phi(0, zeta);
    }
    let v = hermite_phi_upto(n, zeta);
    -zeta * v[n as usize] + libm::sqrt(2.0 * n as f64) * v[(n - 1) as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = core::f64::consts::PI;

    #[test]
    fn low_orders_match_closed_forms() {
        // phi_0 = pi^{-1/4} e^{-z^2/2}, phi_1 = sqrt(2) z phi_0
        for &z in &[-3.0, -0.7, 0.0, 0.4, 2.5] {
            let p0 = libm::pow(PI, -0.25) * libm::exp(-z * z / 2.0);
            assert!((hermite_phi(0, z) - p0).abs() < 1e-15);
            assert!((hermite_phi(1, z) - libm::sqrt(2.0) * z * p0).abs() < 1e-15);
        }
        assert!((hermite_phi(0, 0.0) - 0.7511255444649425).abs() < 1e-12);
        assert_eq!(hermite_phi(1, 0.0), 0.0);
    }

    #[test]
    fn reference_value_degree_25() {
        // 60-digit recurrence reference
        let want = 0.29344700435648359148359;
        assert!((hermite_phi(25, 3.0) - want).abs() < 1e-13);
    }

    #[test]
    fn reference_value_degree_10000_at_turning_point() {
        // starting Gaussian factor is ~2^{-14427}; exponent carrying must survive it
        let z = libm::sqrt(20000.0);
        let want = 0.1992835673855555134779309;
        let got = hermite_phi(10000, z);
        assert!((got - want).abs() < 1e-10, "got {got}, want {want}");
    }

    #[test]
    fn recurrence_consistency_against_rearranged_form() {
        // phi_{n+1} recomputed from the recurrence rearranged for phi_{n-1}
        for &z in &[-10.0, -4.2, -0.3, 0.0, 1.7, 10.0] {
            let v = hermite_phi_upto(101, z);
            for n in 1..=100usize {
                let lhs = v[n + 1];
                let rhs = z * libm::sqrt(2.0 / (n as f64 + 1.0)) * v[n]
                    - libm::sqrt(n as f64 / (n as f64 + 1.0)) * v[n - 1];
                let scale = lhs.abs().max(1e-30);
                assert!(
                    ((lhs - rhs) / scale).abs() < 1e-12,
                    "n={n} z={z} lhs={lhs} rhs={rhs}"
                );
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for &(n, z) in &[(3u32, 0.8), (12, -1.9), (40, 5.0)] {
            let fd = (hermite_phi(n, z + h) - hermite_phi(n, z - h)) / (2.0 * h);
            let an = hermite_phi_deriv(n, z);
            assert!((fd - an).abs() < 1e-6, "n={n} z={z} fd={fd} an={an}");
        }
    }
}
