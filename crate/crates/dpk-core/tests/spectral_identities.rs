//! Cross-module identities tying the closed-form transition kernels delta_t to
//! the projection propagators and the static kernels.

use dpk_core::kernels::{
    anti_propagator, delta_t, kernel_eval, propagator, spectral_rho, static_kernel, KernelKind,
    SpaceTimePoint,
};
use dpk_core::quad;

/// integral over y of delta_t(x, y) G_t(y, x) recovers the density rho(x).
#[test]
fn delta_against_propagator_gives_density() {
    let t = 0.3;
    for kind in [KernelKind::Sine, KernelKind::Airy] {
        for &x in &[-0.4, 0.5] {
            let r = quad::integrate(
                |y| delta_t(kind, t, x, y).unwrap() * propagator(kind, t, y, x).unwrap(),
                x - 16.0,
                x + 16.0,
                1e-9,
            );
            let rho = spectral_rho(kind, x).unwrap();
            assert!(
                (r.value - rho).abs() < 1e-6,
                "{kind:?} x={x}: {} vs {rho}",
                r.value
            );
        }
    }
}

/// integral over y of delta_t(x, y) G_t(y, z) recovers the static kernel K(x, z).
#[test]
fn delta_against_propagator_gives_static_kernel() {
    let t = 0.3;
    for kind in [KernelKind::Sine, KernelKind::Airy] {
        let (x, z) = (0.2, -0.7);
        let r = quad::integrate(
            |y| delta_t(kind, t, x, y).unwrap() * propagator(kind, t, y, z).unwrap(),
            x - 16.0,
            x + 16.0,
            1e-9,
        );
        let k = static_kernel(kind, x, z).unwrap();
        assert!((r.value - k).abs() < 1e-6, "{kind:?}: {} vs {k}", r.value);
    }
}

/// Gbar_t = G_{-t} - delta_t, with each side evaluated through its own
/// integral representation.
#[test]
fn complement_propagator_expansion_for_airy() {
    let t = 0.3;
    for &(x, y) in &[(0.0, 0.4), (-1.2, 0.9), (1.5, 1.5)] {
        let lhs = anti_propagator(KernelKind::Airy, t, x, y).unwrap();
        let rhs = propagator(KernelKind::Airy, -t, x, y).unwrap()
            - delta_t(KernelKind::Airy, t, x, y).unwrap();
        assert!((lhs - rhs).abs() < 1e-7, "x={x} y={y}: {lhs} vs {rhs}");
    }
}

/// The t < s branch of kernel_eval agrees with the propagator at the time gap,
/// and the t > s branch with the complement propagator.
#[test]
fn kernel_eval_branches_are_the_propagators() {
    for kind in [KernelKind::Sine, KernelKind::Airy] {
        let a = SpaceTimePoint::new(0.4, 0.3);
        let b = SpaceTimePoint::new(1.1, -0.2);
        let lt = kernel_eval(kind, a, b).unwrap();
        let g = propagator(kind, b.time - a.time, a.position, b.position).unwrap();
        assert!((lt - g).abs() < 1e-10);
        let gt = kernel_eval(kind, b, a).unwrap();
        let gbar = anti_propagator(kind, b.time - a.time, b.position, a.position).unwrap();
        assert!((gt - gbar).abs() < 1e-10);
    }
}
