//! Eigenvalue backends: an implicit-QL solver for symmetric tridiagonal
//! matrices (fast enough for ensemble sampling at N ~ 100) and a dense
//! Hermitian path through nalgebra's real symmetric solver via the standard
//! [[A, -B], [B, A]] embedding.

use nalgebra::DMatrix;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// subdiagonal `e`, ascending. Implicit QL with Wilkinson-style shifts.
pub fn sym_tridiag_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Vec<f64> {
    let n = d.len();
    assert_eq!(e.len(), n.saturating_sub(1));
    if n <= 1 {
        return d;
    }
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 64, "tridiagonal QL did not converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let denom = g + if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / denom;
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d
}

/// Eigenvalues of an N x N Hermitian matrix given as row-major real and
/// imaginary parts, ascending.
///
/// Embeds H = A + iB into the real symmetric 2N x 2N matrix [[A, -B], [B, A]],
/// whose spectrum is that of H doubled; adjacent pairs are averaged away.
pub fn hermitian_eigenvalues(re: &[f64], im: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(re.len(), n * n);
    assert_eq!(im.len(), n * n);
    let mut big = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            big[(j, k)] = re[j * n + k];
            big[(n + j, n + k)] = re[j * n + k];
            big[(j, n + k)] = -im[j * n + k];
            big[(n + j, k)] = im[j * n + k];
        }
    }
    let mut eig: Vec<f64> = big.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (0..n)
        .map(|i| 0.5 * (eig[2 * i] + eig[2 * i + 1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_laplacian_spectrum() {
        // diag 2, offdiag -1: eigenvalues 2 - 2 cos(k pi / (n+1))
        let n = 12;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let eig = sym_tridiag_eigenvalues(d, e);
        for (i, &l) in eig.iter().enumerate() {
            let want = 2.0 - 2.0 * ((i + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((l - want).abs() < 1e-12, "i={i}: {l} vs {want}");
        }
    }

    #[test]
    fn tridiagonal_matches_dense_solver() {
        let d = [0.3, -1.2, 2.0, 0.7, -0.4];
        let e = [1.1, 0.2, -0.9, 0.5];
        let eig = sym_tridiag_eigenvalues(d.to_vec(), e.to_vec());
        let mut m = DMatrix::<f64>::zeros(5, 5);
        for i in 0..5 {
            m[(i, i)] = d[i];
        }
        for i in 0..4 {
            m[(i, i + 1)] = e[i];
            m[(i + 1, i)] = e[i];
        }
        let mut dense: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        dense.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in eig.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn hermitian_2x2_closed_form() {
        // [[a, b + ic], [b - ic, d]]: eigenvalues (a+d)/2 +- sqrt(((a-d)/2)^2 + b^2 + c^2)
        let (a, b, c, d) = (0.4, -1.3, 0.8, 2.1);
        let re = [a, b, b, d];
        let im = [0.0, c, -c, 0.0];
        let eig = hermitian_eigenvalues(&re, &im, 2);
        let mid = (a + d) / 2.0;
        let rad = (((a - d) / 2.0).powi(2) + b * b + c * c).sqrt();
        assert!((eig[0] - (mid - rad)).abs() < 1e-12);
        assert!((eig[1] - (mid + rad)).abs() < 1e-12);
    }

    #[test]
    fn hermitian_trace_and_reality() {
        // random Hermitian 6x6: eigenvalue sum equals the trace
        let n = 6;
        let mut seed = 42u64;
        let mut rnd = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut re = vec![0.0; n * n];
        let mut im = vec![0.0; n * n];
        for j in 0..n {
            re[j * n + j] = rnd();
            for k in j + 1..n {
                let (a, b) = (rnd(), rnd());
                re[j * n + k] = a;
                re[k * n + j] = a;
                im[j * n + k] = b;
                im[k * n + j] = -b;
            }
        }
        let eig = hermitian_eigenvalues(&re, &im, n);
        let trace: f64 = (0..n).map(|j| re[j * n + j]).sum();
        let sum: f64 = eig.iter().sum();
        assert!((sum - trace).abs() < 1e-10);
        assert!(eig.windows(2).all(|w| w[0] <= w[1]));
    }
}
