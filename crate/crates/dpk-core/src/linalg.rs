//! Small dense determinants via pivoted LU, in plain and sign/log form.

use alloc::vec::Vec;

/// Determinant of a row-major n x n matrix by partially pivoted LU.
pub fn det_lu(matrix: &[f64], n: usize) -> f64 {
    let (sign, logmag) = det_sign_log(matrix, n);
    if sign == 0.0 {
        0.0
    } else {
        sign * libm::exp(logmag)
    }
}

/// (sign, log|det|) of a row-major n x n matrix; sign is 0 for a singular one.
/// The split form survives block matrices of a few dozen points whose
/// determinants underflow in plain arithmetic.
pub fn det_sign_log(matrix: &[f64], n: usize) -> (f64, f64) {
    assert_eq!(matrix.len(), n * n);
    let mut a: Vec<f64> = matrix.to_vec();
    let mut sign = 1.0f64;
    let mut logmag = 0.0f64;
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for row in col + 1..n {
            let v = a[row * n + col].abs();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            sign = -sign;
        }
        let d = a[col * n + col];
        if d < 0.0 {
            sign = -sign;
        }
        logmag += libm::log(d.abs());
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            if f != 0.0 {
                for k in col..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
            }
        }
    }
    (sign, logmag)
}

/// Cofactor-expansion determinant for n <= 3; cross-checks the LU path.
pub fn det_cofactor(matrix: &[f64], n: usize) -> f64 {
    assert_eq!(matrix.len(), n * n);
    match n {
        0 => 1.0,
        1 => matrix[0],
        2 => matrix[0] * matrix[3] - matrix[1] * matrix[2],
        3 => {
            matrix[0] * (matrix[4] * matrix[8] - matrix[5] * matrix[7])
                - matrix[1] * (matrix[3] * matrix[8] - matrix[5] * matrix[6])
                + matrix[2] * (matrix[3] * matrix[7] - matrix[4] * matrix[6])
        }
        _ => panic!("cofactor determinant only supports n <= 3"),
    }
}
