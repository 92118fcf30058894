//! Large-N behavior of the finite Hermite family against its limit profiles.

use dpk_core::kernels::{density_rho_n, semicircle};

/// sup over |xi| <= 0.9 of the scaled density against the Wigner profile
/// shrinks with N and is below 0.05 by N = 100.
#[test]
fn scaled_density_approaches_the_semicircle() {
    let t = 1.0;
    let mut prev = f64::INFINITY;
    for &n in &[50usize, 100] {
        let edge = 2.0 * ((n as f64) * t).sqrt();
        let mut sup = 0.0f64;
        let mut xi = -0.9;
        while xi <= 0.9 {
            let x = edge * xi;
            let scaled = density_rho_n(n, t, x).unwrap() * edge * 2.0 / (2.0 * n as f64);
            let wigner = 2.0 / core::f64::consts::PI * (1.0 - xi * xi).sqrt();
            sup = sup.max((scaled - wigner).abs());
            xi += 0.036;
        }
        assert!(sup < prev, "n={n}: sup {sup} !< {prev}");
        if n == 100 {
            assert!(sup <= 0.05, "n=100: sup {sup}");
        }
        prev = sup;
    }
}

/// The pointwise density sits close to the semicircle inside the bulk.
#[test]
fn density_tracks_semicircle_pointwise() {
    let (n, t) = (40usize, 0.7);
    for &x in &[0.0, 1.5, -3.0] {
        let d = density_rho_n(n, t, x).unwrap();
        let s = semicircle(n, t, x).unwrap();
        assert!((d - s).abs() / s < 0.05, "x={x}: {d} vs {s}");
    }
}
