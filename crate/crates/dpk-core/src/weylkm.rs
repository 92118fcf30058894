//! Weyl-chamber transition densities: the Karlin-McGregor determinant, the
//! survival probability of the absorbing walk, the Vandermonde h-transform,
//! Schur-expansion and Selberg-integral checks, and GUE eigenvalue densities.

use alloc::vec::Vec;

use crate::linalg;
use crate::quad;
use crate::specfun::heat_kernel;
use crate::{Error, Result};

/// A strictly increasing finite point configuration (the Weyl chamber W_N).
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<f64>,
}

impl Configuration {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Argument("configuration must be nonempty"));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Argument(
                "configuration points must be strictly increasing",
            ));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Argument("configuration points must be finite"));
        }
        Ok(Configuration { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

impl core::ops::Deref for Configuration {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.points
    }
}

/// GUE ensemble parameters: particle count and variance t0.
#[derive(Debug, Clone, Copy)]
pub struct GueParams {
    n: usize,
    variance: f64,
}

impl GueParams {
    pub fn new(n: usize, variance: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("GUE needs at least one particle"));
        }
        if !(variance > 0.0) {
            return Err(Error::Domain("GUE variance must be positive"));
        }
        Ok(GueParams { n, variance })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }
}

/// Product of differences prod_{j<k} (x_k - x_j); the Vandermonde determinant.
pub fn vandermonde(x: &[f64]) -> f64 {
    let mut h = 1.0;
    for k in 1..x.len() {
        for j in 0..k {
            h *= x[k] - x[j];
        }
    }
    h
}

/// Karlin-McGregor transition density of the absorbing walk:
/// det over the N x N matrix of heat kernels p(t, y_j | x_k), via pivoted LU.
///
/// Accepts raw sequences; the result is only guaranteed nonnegative when both
/// lie in the Weyl chamber.
pub fn km_density(t: f64, y: &[f64], x: &[f64]) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("km_density needs t > 0"));
    }
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Argument("km_density needs equally sized sequences"));
    }
    let n = x.len();
    let mut m = Vec::with_capacity(n * n);
    for &yj in y {
        for &xk in x {
            m.push(heat_kernel(t, yj, xk)?);
        }
    }
    Ok(linalg::det_lu(&m, n))
}

/// Survival probability of the absorbing walk by adaptive tensor quadrature
/// over the chamber, in gap coordinates. Supported for N <= 3.
pub fn survival_quadrature(t: f64, x: &Configuration) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("survival needs t > 0"));
    }
    let n = x.len();
    match n {
        1 => Ok(1.0),
        2 | 3 => Ok(survival_quad_impl(t, x.points())),
        _ => Err(Error::UnsupportedSize { limit: 3, got: n }),
    }
}

fn survival_quad_impl(t: f64, x: &[f64]) -> f64 {
    let n = x.len();
    let spread = 10.0 * libm::sqrt(t);
    let lo = x[0] - spread;
    let hi = x[n - 1] + spread;
    let max_gap = hi - lo;
    if n == 2 {
        let r = quad::integrate(
            |y1| {
                quad::integrate(
                    |g| km_density(t, &[y1, y1 + g], x).unwrap_or(0.0),
                    0.0,
                    max_gap,
                    1e-11,
                )
                .value
            },
            lo,
            hi,
            1e-9,
        );
        r.value
    } else {
        let r = quad::integrate(
            |y1| {
                quad::integrate(
                    |g1| {
                        quad::integrate(
                            |g2| km_density(t, &[y1, y1 + g1, y1 + g1 + g2], x).unwrap_or(0.0),
                            0.0,
                            max_gap,
                            1e-9,
                        )
                        .value
                    },
                    0.0,
                    max_gap,
                    1e-8,
                )
                .value
            },
            lo,
            hi,
            1e-6,
        );
        r.value
    }
}

/// Temporally homogeneous noncolliding transition density
/// p_N(dt, y | x) = h_N(y) f_N(dt, y | x) / h_N(x).
pub fn noncolliding_transition(dt: f64, y: &Configuration, x: &Configuration) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Argument("configuration sizes must match"));
    }
    let hx = vandermonde(x.points());
    if hx == 0.0 {
        return Err(Error::Domain(
            "start on the chamber boundary; the entrance law is gue_density",
        ));
    }
    Ok(vandermonde(y.points()) * km_density(dt, y.points(), x.points())? / hx)
}

/// Finite-horizon noncolliding transition density
/// g_{N,T} = N_N(T-t, y) f_N(t-t0, y|x) / N_N(T-t0, x), survival by quadrature.
pub fn finite_t_transition(
    horizon: f64,
    t0: f64,
    t: f64,
    y: &Configuration,
    x: &Configuration,
) -> Result<f64> {
    if !(0.0 < t0 && t0 <= t && t < horizon) {
        return Err(Error::Argument("finite_t_transition needs 0 < t0 <= t < T"));
    }
    if x.len() != y.len() {
        return Err(Error::Argument("configuration sizes must match"));
    }
    let num = survival_quadrature(horizon - t, y)?;
    let den = survival_quadrature(horizon - t0, x)?;
    if t == t0 {
        // zero elapsed time: the density degenerates; report the ratio of
        // survivals times a delta is out of scope, so require t > t0
        return Err(Error::Argument("finite_t_transition needs t > t0"));
    }
    Ok(num * km_density(t - t0, y.points(), x.points())? / den)
}

/// Both sides of the Schur-function expansion of det[e^{x_j y_k}], truncated
/// at partitions with largest part <= max_part, plus an upper bound on the
/// dropped tail.
pub struct SchurCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub remainder_bound: f64,
}

pub fn schur_expansion_check(x: &[f64], y: &[f64], max_part: u32) -> Result<SchurCheck> {
    let n = x.len();
    if n != y.len() || n == 0 {
        return Err(Error::Argument("sequences must be nonempty, equal length"));
    }
    if n > 4 {
        return Err(Error::UnsupportedSize { limit: 4, got: n });
    }
    // lhs: plain determinant
    let mut m = Vec::with_capacity(n * n);
    for &xj in x {
        for &yk in y {
            m.push(libm::exp(xj * yk));
        }
    }
    let lhs = linalg::det_lu(&m, n);

    // rhs: sum over partitions mu with l(mu) <= n, mu_1 <= max_part of
    //   det[x_j^{mu_k + n - k}] det[y_j^{mu_k + n - k}] / prod Gamma(mu_k + n - k + 1)
    // (the bialternant numerators; dividing by h_N would break repeated-point limits)
    let mut rhs = 0.0;
    let mut mu = alloc::vec![0u32; n];
    loop {
        let mut exponents = alloc::vec![0.0f64; n];
        let mut log_gamma = 0.0;
        for k in 0..n {
            let e = mu[k] as f64 + (n - 1 - k) as f64;
            exponents[k] = e;
            log_gamma += libm::lgamma_r(e + 1.0).0;
        }
        let dx = power_det(x, &exponents);
        let dy = power_det(y, &exponents);
        rhs += dx * dy * libm::exp(-log_gamma);
        if !next_partition(&mut mu, max_part) {
            break;
        }
    }

    // tail bound: terms with some exponent beyond max_part + n - 1 are bounded by
    // (N!)^2 e^{(N-1) r} * sum_{m >= max_part + n} r^m / m!, r = max|x| max|y|
    let r =
        x.iter().fold(0.0f64, |a, v| a.max(v.abs())) * y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let start = (max_part as usize + n) as f64;
    let mut tail_term = libm::exp(start * libm::log(r.max(1e-300)) - libm::lgamma_r(start + 1.0).0);
    let mut tail = 0.0;
    for i in 0..200 {
        tail += tail_term;
        tail_term *= r / (start + 1.0 + i as f64);
        if tail_term < 1e-30 {
            break;
        }
    }
    let nfact = libm::tgamma(n as f64 + 1.0);
    let remainder_bound = nfact * nfact * libm::exp((n as f64 - 1.0) * r) * tail;

    Ok(SchurCheck {
        lhs,
        rhs,
        remainder_bound,
    })
}

fn power_det(base: &[f64], exponents: &[f64]) -> f64 {
    let n = base.len();
    let mut m = Vec::with_capacity(n * n);
    for &b in base {
        for &e in exponents {
            m.push(libm::pow(b, e));
        }
    }
    linalg::det_lu(&m, n)
}

/// Advance mu (weakly decreasing, mu_1 <= cap) to the next partition;
/// false when exhausted.
fn next_partition(mu: &mut [u32], cap: u32) -> bool {
    let n = mu.len();
    for i in (0..n).rev() {
        let limit = if i == 0 { cap } else { mu[i - 1] };
        if mu[i] < limit {
            mu[i] += 1;
            for slot in mu.iter_mut().take(n).skip(i + 1) {
                *slot = 0;
            }
            return true;
        }
    }
    false
}

/// GUE eigenvalue density nu_0(x) = C_N^{-1} t0^{-N^2/2} e^{-|x|^2/2t0} h_N(x)^2,
/// C_N = (2 pi)^{N/2} prod_{j=1}^N Gamma(j).
pub fn gue_density(params: &GueParams, x: &[f64]) -> Result<f64> {
    let n = params.n();
    if x.len() != n {
        return Err(Error::Argument("point count must match GUE parameters"));
    }
    let t0 = params.variance();
    let h = vandermonde(x);
    let norm2: f64 = x.iter().map(|v| v * v).sum();
    let log = -((n * n) as f64) / 2.0 * libm::log(t0)
        - norm2 / (2.0 * t0)
        - libm::log(gue_normalization(n));
    Ok(h * h * libm::exp(log))
}

/// C_N = (2 pi)^{N/2} prod_{j=1}^{N} Gamma(j).
pub fn gue_normalization(n: usize) -> f64 {
    let mut c = libm::pow(2.0 * core::f64::consts::PI, n as f64 / 2.0);
    for j in 1..=n {
        c *= libm::tgamma(j as f64);
    }
    c
}

/// C'_N = 2^{N/2} prod_{j=1}^{N} Gamma(j/2).
pub fn selberg_half_normalization(n: usize) -> f64 {
    let mut c = libm::pow(2.0, n as f64 / 2.0);
    for j in 1..=n {
        c *= libm::tgamma(j as f64 / 2.0);
    }
    c
}

/// Quadrature values and reference values of the two Selberg-type chamber
/// integrals of e^{-|x|^2/2t} h_N(x) and e^{-|x|^2/2t} h_N(x)^2.
pub struct SelbergCheck {
    pub i1: f64,
    pub i2: f64,
    pub ref1: f64,
    pub ref2: f64,
}

pub fn selberg_check(n: usize, t: f64) -> Result<SelbergCheck> {
    if n == 0 || n > 3 {
        return Err(Error::UnsupportedSize { limit: 3, got: n });
    }
    if !(t > 0.0) {
        return Err(Error::Domain("selberg_check needs t > 0"));
    }
    let weight = move |y: &[f64]| {
        let norm2: f64 = y.iter().map(|v| v * v).sum();
        libm::exp(-norm2 / (2.0 * t))
    };
    let i1 = chamber_integral(n, t, &|y| weight(y) * vandermonde(y));
    let i2 = chamber_integral(n, t, &|y| {
        let h = vandermonde(y);
        weight(y) * h * h
    });
    let ref1 = selberg_half_normalization(n) * libm::pow(t, n as f64 * (n as f64 + 1.0) / 4.0);
    let ref2 = gue_normalization(n) * libm::pow(t, (n * n) as f64 / 2.0);
    Ok(SelbergCheck { i1, i2, ref1, ref2 })
}

/// Adaptive integral of `f` over the chamber y_1 < ... < y_n within
/// [-L, L]^n, L = 10 sqrt(t) + a margin, in gap coordinates.
fn chamber_integral(n: usize, t: f64, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    let reach = 10.0 * libm::sqrt(t) * libm::sqrt(n as f64);
    match n {
        1 => quad::integrate(|y| f(&[y]), -reach, reach, 1e-10).value,
        2 => {
            quad::integrate(
                |y1| quad::integrate(|g| f(&[y1, y1 + g]), 0.0, 2.0 * reach, 1e-11).value,
                -reach,
                reach,
                1e-9,
            )
            .value
        }
        3 => {
            quad::integrate(
                |y1| {
                    quad::integrate(
                        |g1| {
                            quad::integrate(
                                |g2| f(&[y1, y1 + g1, y1 + g1 + g2]),
                                0.0,
                                2.0 * reach,
                                1e-9,
                            )
                            .value
                        },
                        0.0,
                        2.0 * reach,
                        1e-8,
                    )
                    .value
                },
                -reach,
                reach,
                1e-6,
            )
            .value
        }
        _ => unreachable!(),
    }
}

/// Absorbing 1D Brownian motion at a wall at the origin and its h-transform:
/// (p_abs, p_bessel3) with p_abs = p(t,y|x) - p(t,y|-x), p_bessel3 = (y/x) p_abs.
pub fn abs_bm_1d(t: f64, y: f64, x: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(Error::Domain("abs_bm_1d needs t > 0"));
    }
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain("abs_bm_1d needs x > 0 and y > 0"));
    }
    let p_abs = heat_kernel(t, y, x)? - heat_kernel(t, y, -x)?;
    Ok((p_abs, y / x * p_abs))
}
