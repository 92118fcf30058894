//! The four determinantal matrix-kernel families (finite Hermite, sine, Airy,
//! hard-edge Bessel), density profiles, scaling-limit probes, the closed-form
//! transition kernels of the associated effective Hamiltonians, and the
//! fourth-moment diagnostic used by the continuity bound.
//!
//! All kernels are returned in the determinant-invariant gauge: the factors
//! e^{-x^2/4t + y^2/4t'} cancel in every determinant and are dropped. The
//! edge-scaling probe additionally drops the ratio factor (t_n/t_m)^{(N-1)/2},
//! which is likewise invisible to determinants.

use crate::quad;
use crate::specfun::{
    airy_ai, airy_ai_prime, bessel_i_scaled, bessel_j, bessel_j_prime, HermitePhiSeq,
};
use crate::{Error, Result};

const PI: f64 = core::f64::consts::PI;

/// Kernel family selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    HermiteFinite { n: usize },
    Sine,
    Airy,
    Bessel { nu: f64 },
}

impl KernelKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            KernelKind::HermiteFinite { n } if *n == 0 => {
                Err(Error::Argument("HermiteFinite needs n >= 1"))
            }
            KernelKind::Bessel { nu } if !(*nu > -1.0) => {
                Err(Error::Domain("Bessel kernel needs nu > -1"))
            }
            _ => Ok(()),
        }
    }

    fn check_point(&self, p: SpaceTimePoint) -> Result<()> {
        match self {
            KernelKind::HermiteFinite { .. } if !(p.time > 0.0) => {
                Err(Error::Domain("HermiteFinite kernel needs times > 0"))
            }
            KernelKind::Bessel { .. } if !(p.position > 0.0) => {
                Err(Error::Domain("Bessel kernel needs positions > 0"))
            }
            _ => Ok(()),
        }
    }
}

/// A (time, position) pair indexing matrix-kernel arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimePoint {
    pub time: f64,
    pub position: f64,
}

impl SpaceTimePoint {
    pub fn new(time: f64, position: f64) -> Self {
        SpaceTimePoint { time, position }
    }
}

/// Evaluate the matrix-kernel K(t_a, x_a; t_b, x_b) for the given family.
pub fn kernel_eval(kind: KernelKind, a: SpaceTimePoint, b: SpaceTimePoint) -> Result<f64> {
    kind.validate()?;
    kind.check_point(a)?;
    kind.check_point(b)?;
    match kind {
        KernelKind::HermiteFinite { n } => {
            if a.time <= b.time {
                hermite_sum_le(n, a.time, a.position, b.time, b.position)
            } else {
                hermite_sum_gt(n, a.time, a.position, b.time, b.position)
            }
        }
        _ => {
            if a.time == b.time {
                static_kernel(kind, a.position, b.position)
            } else if a.time < b.time {
                propagator(kind, b.time - a.time, a.position, b.position)
            } else {
                anti_propagator(kind, a.time - b.time, a.position, b.position)
            }
        }
    }
}

/// Finite-sum branch (t_a <= t_b):
/// (2 t_a)^{-1/2} sum_{k<N} (t_b/t_a)^{k/2} phi_k(x_a/sqrt(2 t_a)) phi_k(x_b/sqrt(2 t_b)).
/// The formula extends to t_a > t_b; the branch-consistency identity relies on that.
pub(crate) fn hermite_sum_le(n: usize, ta: f64, xa: f64, tb: f64, xb: f64) -> Result<f64> {
    let ratio_sqrt = libm::sqrt(tb / ta);
    let mut sa = HermitePhiSeq::new(xa / libm::sqrt(2.0 * ta));
    let mut sb = HermitePhiSeq::new(xb / libm::sqrt(2.0 * tb));
    let mut pw = 1.0;
    let mut sum = 0.0;
    for _ in 0..n {
        sum += pw * sa.next_value() * sb.next_value();
        pw *= ratio_sqrt;
    }
    let v = sum / libm::sqrt(2.0 * ta);
    if !v.is_finite() {
        return Err(Error::Range(
            "Hermite kernel sum overflows at this time ratio",
        ));
    }
    Ok(v)
}

/// Infinite-tail branch (t_a > t_b):
/// -(2 t_a)^{-1/2} sum_{k>=N} (t_b/t_a)^{k/2} phi_k(...) phi_k(...).
/// Terms decay geometrically with ratio sqrt(t_b/t_a) < 1; the sum stops once
/// the remaining tail is certified below 1e-10 relative.
fn hermite_sum_gt(n: usize, ta: f64, xa: f64, tb: f64, xb: f64) -> Result<f64> {
    if !(ta > tb) {
        return Err(Error::NumericalConsistency(
            "tail branch invoked with t_a <= t_b",
        ));
    }
    let rho = libm::sqrt(tb / ta);
    const REL_TOL: f64 = 1e-10;
    const PHI_PAIR_BOUND: f64 = 0.58; // sup |phi_j phi_k| <= 0.751^2
    if rho >= 1.0 - 1e-12 {
        return Err(Error::Precision {
            achieved: 1.0,
            required: REL_TOL,
        });
    }
    let mut sa = HermitePhiSeq::new(xa / libm::sqrt(2.0 * ta));
    let mut sb = HermitePhiSeq::new(xb / libm::sqrt(2.0 * tb));
    let mut pw = 1.0;
    for _ in 0..n {
        sa.next_value();
        sb.next_value();
        pw *= rho;
    }
    let mut sum = 0.0;
    let mut k = n;
    loop {
        sum += pw * sa.next_value() * sb.next_value();
        pw *= rho;
        k += 1;
        let tail_bound = PHI_PAIR_BOUND * pw / (1.0 - rho);
        if tail_bound <= REL_TOL * sum.abs().max(1e-30) {
            break;
        }
        if k > n + 100_000_000 {
            return Err(Error::Precision {
                achieved: tail_bound / sum.abs().max(1e-30),
                required: REL_TOL,
            });
        }
    }
    Ok(-sum / libm::sqrt(2.0 * ta))
}

/// Equal-time finite Hermite kernel in Christoffel-Darboux form.
pub fn hermite_equal_time(n: usize, t: f64, x: f64, y: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Argument("hermite_equal_time needs n >= 1"));
    }
    if !(t > 0.0) {
        return Err(Error::Domain("hermite_equal_time needs t > 0"));
    }
    let s = libm::sqrt(2.0 * t);
    let (xi, eta) = (x / s, y / s);
    if x == y {
        let v = phi_window(n, xi);
        let nf = n as f64;
        Ok((nf * v.n * v.n - libm::sqrt(nf * (nf + 1.0)) * v.nm1 * v.np1) / s)
    } else {
        let vx = phi_window(n, xi);
        let vy = phi_window(n, eta);
        Ok(libm::sqrt(n as f64 / 2.0) * (vx.n * vy.nm1 - vx.nm1 * vy.n) / (x - y))
    }
}

struct PhiWindow {
    nm1: f64,
    n: f64,
    np1: f64,
}

fn phi_window(n: usize, zeta: f64) -> PhiWindow {
    let mut seq = HermitePhiSeq::new(zeta);
    let mut nm1 = 0.0;
    for _ in 0..n {
        nm1 = seq.next_value();
    }
    let vn = seq.next_value();
    let np1 = seq.next_value();
    PhiWindow { nm1, n: vn, np1 }
}

/// One-time particle density rho_N(t, x); quadrature noise below zero is
/// clamped with a warning.
pub fn density_rho_n(n: usize, t: f64, x: f64) -> Result<f64> {
    let v = hermite_equal_time(n, t, x, x)?;
    if v < 0.0 {
        if v < -1e-10 {
            log::warn!("density_rho_n clamped a negative value {v:e} at x={x}");
        }
        return Ok(0.0);
    }
    Ok(v)
}

/// Large-N density profile: (pi sqrt(2t))^{-1} sqrt(2N - x^2/2t) on
/// |x| <= 2 sqrt(N t), zero outside.
pub fn semicircle(n: usize, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("semicircle needs t > 0"));
    }
    let arg = 2.0 * n as f64 - x * x / (2.0 * t);
    if arg <= 0.0 {
        return Ok(0.0);
    }
    Ok(libm::sqrt(arg) / (PI * libm::sqrt(2.0 * t)))
}

/// Soft-edge position shift a_N(s) = 2 N^{2/3} + 2 N^{1/3} s - s^2.
pub fn edge_shift(n: usize, s: f64) -> f64 {
    let nf = n as f64;
    2.0 * libm::cbrt(nf * nf) + 2.0 * libm::cbrt(nf) * s - s * s
}

/// Finite-N probe of the bulk scaling limit: the Hermite kernel at times
/// N + 2s with unscaled positions. Converges to the sine kernel.
pub fn bulk_scaled_kernel(n: usize, s_a: f64, x_a: f64, s_b: f64, x_b: f64) -> Result<f64> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::Argument("bulk scaling probe needs even n"));
    }
    let nf = n as f64;
    let (ta, tb) = (nf + 2.0 * s_a, nf + 2.0 * s_b);
    if !(ta > 0.0 && tb > 0.0) {
        return Err(Error::Domain("bulk scaling probe needs N + 2s > 0"));
    }
    kernel_eval(
        KernelKind::HermiteFinite { n },
        SpaceTimePoint::new(ta, x_a),
        SpaceTimePoint::new(tb, x_b),
    )
}

/// Finite-N probe of the soft-edge scaling limit: the Hermite kernel at times
/// N^{1/3} + 2s, positions a_N(s) + x, with the determinant-invisible factor
/// (t_b/t_a)^{(N-1)/2} stripped. Converges to the Airy kernel.
pub fn edge_scaled_kernel(n: usize, s_a: f64, x_a: f64, s_b: f64, x_b: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Argument("edge scaling probe needs n >= 1"));
    }
    let nf = n as f64;
    let (ta, tb) = (libm::cbrt(nf) + 2.0 * s_a, libm::cbrt(nf) + 2.0 * s_b);
    if !(ta > 0.0 && tb > 0.0) {
        return Err(Error::Domain("edge scaling probe needs N^(1/3) + 2s > 0"));
    }
    let raw = kernel_eval(
        KernelKind::HermiteFinite { n },
        SpaceTimePoint::new(ta, edge_shift(n, s_a) + x_a),
        SpaceTimePoint::new(tb, edge_shift(n, s_b) + x_b),
    )?;
    let strip = libm::exp(-(nf - 1.0) / 2.0 * libm::log(tb / ta));
    let v = raw * strip;
    if !v.is_finite() {
        return Err(Error::Range("edge scaling probe overflows"));
    }
    Ok(v)
}

/// Equal-time (static) kernel K(x, y) of the family: the diagonal of the
/// spectral projection. For the finite Hermite family this is the projection
/// kernel in dimensionless coordinates, sum_{k<N} phi_k(x) phi_k(y).
pub fn static_kernel(kind: KernelKind, x: f64, y: f64) -> Result<f64> {
    kind.validate()?;
    match kind {
        KernelKind::HermiteFinite { n } => {
            // Christoffel-Darboux form of the projection kernel
            let nf = n as f64;
            if x == y {
                let v = phi_window(n, x);
                Ok(nf * v.n * v.n - libm::sqrt(nf * (nf + 1.0)) * v.nm1 * v.np1)
            } else {
                let vx = phi_window(n, x);
                let vy = phi_window(n, y);
                Ok(libm::sqrt(nf / 2.0) * (vx.n * vy.nm1 - vx.nm1 * vy.n) / (x - y))
            }
        }
        KernelKind::Sine => {
            if x == y {
                Ok(1.0 / PI)
            } else {
                Ok(libm::sin(y - x) / (PI * (y - x)))
            }
        }
        KernelKind::Airy => {
            if x == y {
                Ok(airy_ai_prime(x) * airy_ai_prime(x) - x * airy_ai(x) * airy_ai(x))
            } else {
                Ok((airy_ai(x) * airy_ai_prime(y) - airy_ai_prime(x) * airy_ai(y)) / (x - y))
            }
        }
        KernelKind::Bessel { nu } => {
            if !(x > 0.0 && y > 0.0) {
                return Err(Error::Domain("Bessel kernel needs positions > 0"));
            }
            if x == y {
                // no closed diagonal form for this family; take the symmetric
                // numerical limit of the off-diagonal branch
                let h = (1e-5 * x.abs()).max(1e-7);
                let lo = bessel_static_offdiag(nu, x, x - h)?;
                let hi = bessel_static_offdiag(nu, x, x + h)?;
                Ok(0.5 * (lo + hi))
            } else {
                bessel_static_offdiag(nu, x, y)
            }
        }
    }
}

fn bessel_static_offdiag(nu: f64, y: f64, x: f64) -> Result<f64> {
    let (sy, sx) = (libm::sqrt(y), libm::sqrt(x));
    let v = (bessel_j(nu, 2.0 * sy)? * sx * bessel_j_prime(nu, 2.0 * sx)?
        - sy * bessel_j_prime(nu, 2.0 * sy)? * bessel_j(nu, 2.0 * sx)?)
        / (y - x);
    Ok(v)
}

/// Projection-side propagator G_s(x, y) = <y| e^{s H} P |x>, any real s.
pub fn propagator(kind: KernelKind, s: f64, x: f64, y: f64) -> Result<f64> {
    kind.validate()?;
    match kind {
        KernelKind::HermiteFinite { .. } => Err(Error::Argument(
            "propagator is defined for the limit kernels; use kernel_eval",
        )),
        KernelKind::Sine => {
            let d = x - y;
            let r = quad::integrate(|u| libm::exp(s * u * u) * libm::cos(u * d), 0.0, 1.0, 1e-12);
            Ok(r.value / PI)
        }
        KernelKind::Airy => {
            // integral over u >= 0 of e^{-s u} Ai(x+u) Ai(y+u); the Airy decay
            // dominates any e^{|s| u} growth, so an upper cut always exists
            let floor = x.min(y);
            let mut upper = 8.0f64;
            while 4.0 / 3.0 * libm::pow((floor + upper).max(0.0), 1.5) - s.min(0.0).abs() * upper
                < 45.0
                && upper < 400.0
            {
                upper += 8.0;
            }
            let r = quad::integrate(
                |u| libm::exp(-s * u) * airy_ai(x + u) * airy_ai(y + u),
                0.0,
                upper,
                1e-11,
            );
            Ok(r.value)
        }
        KernelKind::Bessel { nu } => {
            if !(x > 0.0 && y > 0.0) {
                return Err(Error::Domain("Bessel kernel needs positions > 0"));
            }
            let r = quad::integrate(
                |lam| {
                    libm::exp(s * lam)
                        * bessel_j(nu, 2.0 * libm::sqrt(lam * x)).unwrap_or(0.0)
                        * bessel_j(nu, 2.0 * libm::sqrt(lam * y)).unwrap_or(0.0)
                },
                0.0,
                1.0,
                1e-11,
            );
            Ok(r.value)
        }
    }
}

/// Complement-side propagator Gbar_s(x, y) = -<y| e^{-s H} (1 - P) |x>, s > 0.
pub fn anti_propagator(kind: KernelKind, s: f64, x: f64, y: f64) -> Result<f64> {
    kind.validate()?;
    if !(s > 0.0) {
        return Err(Error::Domain("anti_propagator needs a positive gap"));
    }
    match kind {
        KernelKind::HermiteFinite { .. } => Err(Error::Argument(
            "anti_propagator is defined for the limit kernels; use kernel_eval",
        )),
        KernelKind::Sine => {
            // cut where e^{-s u^2} < 1e-14
            let umax = libm::sqrt(32.3 / s);
            if umax <= 1.0 {
                return Ok(0.0);
            }
            let d = x - y;
            let r = quad::integrate(
                |u| libm::exp(-s * u * u) * libm::cos(u * d),
                1.0,
                umax,
                1e-11,
            );
            Ok(-r.value / PI)
        }
        KernelKind::Airy => {
            let lmax = 38.0 / s;
            let r = quad::integrate(
                |lam| libm::exp(-s * lam) * airy_ai(x - lam) * airy_ai(y - lam),
                0.0,
                lmax,
                1e-11,
            );
            Ok(-r.value)
        }
        KernelKind::Bessel { nu } => {
            if !(x > 0.0 && y > 0.0) {
                return Err(Error::Domain("Bessel kernel needs positions > 0"));
            }
            let lmax = 1.0 + 38.0 / s;
            let r = quad::integrate(
                |lam| {
                    libm::exp(-s * lam)
                        * bessel_j(nu, 2.0 * libm::sqrt(lam * x)).unwrap_or(0.0)
                        * bessel_j(nu, 2.0 * libm::sqrt(lam * y)).unwrap_or(0.0)
                },
                1.0,
                lmax,
                1e-11,
            );
            Ok(-r.value)
        }
    }
}

/// Closed-form transition kernel delta_t(x,y) = <y| e^{-t H} |x> of the
/// effective Hamiltonian behind each family.
pub fn delta_t(kind: KernelKind, t: f64, x: f64, y: f64) -> Result<f64> {
    kind.validate()?;
    if !(t > 0.0) {
        return Err(Error::Domain("delta_t needs t > 0"));
    }
    match kind {
        KernelKind::HermiteFinite { .. } => {
            let d = x - y;
            let coth = 1.0 / libm::tanh(t / 2.0);
            let pre = 1.0 / (2.0 * libm::sqrt(PI * (1.0 - libm::exp(-t))));
            Ok(pre * libm::exp(-d * d / 8.0 * coth - x * y / 4.0 * libm::tanh(t / 4.0)))
        }
        KernelKind::Sine => {
            let d = x - y;
            Ok(libm::exp(-d * d / (4.0 * t)) / libm::sqrt(4.0 * PI * t))
        }
        KernelKind::Airy => {
            let d = x - y;
            Ok(
                libm::exp(-d * d / (4.0 * t) - t * (x + y) / 2.0 + t * t * t / 12.0)
                    / libm::sqrt(4.0 * PI * t),
            )
        }
        KernelKind::Bessel { nu } => {
            if !(x > 0.0 && y > 0.0) {
                return Err(Error::Domain("Bessel delta_t needs positions > 0"));
            }
            // exact rewrite of (sqrt(xy)/2t) e^{-(x^2+y^2)/4t} I_nu(xy/2t)
            // through the scaled Bessel function, safe for large xy/2t
            let d = x - y;
            Ok(libm::sqrt(x * y) / (2.0 * t)
                * libm::exp(-d * d / (4.0 * t))
                * bessel_i_scaled(nu, x * y / (2.0 * t))?)
        }
    }
}

/// Fourth-moment diagnostic: integral over the state space of
/// (x - y)^4 delta_t(x, y) dy.
pub fn bound1_diagnostic(kind: KernelKind, t: f64, x: f64) -> Result<f64> {
    kind.validate()?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(
            "bound1_diagnostic is defined for t in (0, 1]",
        ));
    }
    let reach = 30.0 * libm::sqrt(t) + t * t + x.abs() + 2.0;
    let lo = match kind {
        KernelKind::Bessel { .. } => {
            if !(x > 0.0) {
                return Err(Error::Domain("Bessel diagnostic needs x > 0"));
            }
            1e-12
        }
        _ => x - reach,
    };
    let hi = x + reach;
    let r = quad::integrate(
        |y| {
            let d = x - y;
            d * d * d * d * delta_t(kind, t, x, y).unwrap_or(0.0)
        },
        lo,
        hi,
        1e-11,
    );
    Ok(r.value)
}

/// Density rho(x) = K(x, x) of the infinite determinantal field.
pub fn spectral_rho(kind: KernelKind, x: f64) -> Result<f64> {
    match kind {
        KernelKind::HermiteFinite { .. } => Err(Error::Argument(
            "spectral_rho is defined for the limit kernels (Sine | Airy | Bessel)",
        )),
        _ => static_kernel(kind, x, x),
    }
}

/// Palm kernel of the field conditioned to carry a particle at z:
/// K^z(x,y) = [K(x,y) K(z,z) - K(x,z) K(z,y)] / K(z,z).
pub fn palm_kernel(kind: KernelKind, z: f64, x: f64, y: f64) -> Result<f64> {
    let kzz = static_kernel(kind, z, z)?;
    if kzz == 0.0 {
        return Err(Error::Domain("palm_kernel divides by K(z,z) = 0"));
    }
    let kxy = static_kernel(kind, x, y)?;
    let kxz = static_kernel(kind, x, z)?;
    let kzy = static_kernel(kind, z, y)?;
    Ok((kxy * kzz - kxz * kzy) / kzz)
}
