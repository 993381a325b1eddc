use super::rmatrix::RealMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_PIVOT_REL_TOL: f64 = 1e-12;

/// Sign and log|det| of a real square matrix via LU with partial pivoting.
///
/// Returns (sign, log_abs_det). The sign is 0 when some pivot falls below
/// `rel_tol` times the matrix's max-abs entry, i.e. the matrix is singular
/// at that resolution; log_abs_det is then −∞.
pub fn det_sign_lu_with_tol(m: &RealMatrix, rel_tol: f64) -> (i8, f64) {
    assert!(m.is_square(), "determinant needs a square matrix");
    let n = m.rows();
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let floor = rel_tol * scale;
    let mut a = m.clone();
    let mut sign: i8 = 1;
    let mut log_abs = 0.0f64;
    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, a[(r, col)].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pivot_abs < floor {
            return (0, f64::NEG_INFINITY);
        }
        if pivot_row != col {
            a.swap_rows(pivot_row, col);
            sign = -sign;
        }
        let p = a[(col, col)];
        if p < 0.0 {
            sign = -sign;
        }
        log_abs += p.abs().ln();
        for r in (col + 1)..n {
            let f = a[(r, col)] / p;
            if f == 0.0 {
                continue;
            }
            for j in (col + 1)..n {
                let u = a[(col, j)];
                a[(r, j)] -= f * u;
            }
        }
    }
    (sign, log_abs)
}

pub fn det_sign_lu(m: &RealMatrix) -> (i8, f64) {
    det_sign_lu_with_tol(m, DEFAULT_PIVOT_REL_TOL)
}

/// Solve A x = b for square A by LU with partial pivoting.
pub fn lu_solve(a: &RealMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(a.rows(), a.cols()));
    }
    let n = a.rows();
    if b.len() != n {
        return Err(Error::DimensionMismatch(b.len(), n));
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let mut m = a.clone();
    let mut x: Vec<f64> = b.to_vec();
    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, m[(r, col)].abs()))
            .max_by(|u, v| u.1.total_cmp(&v.1))
            .unwrap();
        if pivot_abs < 1e-14 * scale {
            return Err(Error::Singular);
        }
        if pivot_row != col {
            m.swap_rows(pivot_row, col);
            x.swap(pivot_row, col);
        }
        let p = m[(col, col)];
        for r in (col + 1)..n {
            let f = m[(r, col)] / p;
            if f == 0.0 {
                continue;
            }
            for j in (col + 1)..n {
                let u = m[(col, j)];
                m[(r, j)] -= f * u;
            }
            x[r] -= f * x[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for j in (col + 1)..n {
            s -= m[(col, j)] * x[j];
        }
        x[col] = s / m[(col, col)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_positive_sign_and_zero_log() {
        let (sign, log_abs) = det_sign_lu(&RealMatrix::identity(4));
        assert_eq!(sign, 1);
        assert_eq!(log_abs, 0.0);
    }

    #[test]
    fn swap_has_negative_sign() {
        let mut m = RealMatrix::zeros(2, 2);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = 1.0;
        let (sign, log_abs) = det_sign_lu(&m);
        assert_eq!(sign, -1);
        assert!(log_abs.abs() < 1e-15);
    }

    #[test]
    fn diagonal_with_negative_entry() {
        let mut m = RealMatrix::zeros(2, 2);
        m[(0, 0)] = 2.0;
        m[(1, 1)] = -3.0;
        let (sign, log_abs) = det_sign_lu(&m);
        assert_eq!(sign, -1);
        assert!((log_abs - 6.0f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn singular_matrix_gets_sign_zero() {
        let m = RealMatrix::from_fn(2, 2, |_, _| 1.0);
        let (sign, log_abs) = det_sign_lu(&m);
        assert_eq!(sign, 0);
        assert_eq!(log_abs, f64::NEG_INFINITY);
    }

    #[test]
    fn tolerance_controls_the_singularity_call() {
        let mut m = RealMatrix::identity(2);
        m[(1, 1)] = 1e-10;
        assert_eq!(det_sign_lu_with_tol(&m, 1e-12).0, 1);
        assert_eq!(det_sign_lu_with_tol(&m, 1e-8).0, 0);
    }

    #[test]
    fn sign_matches_cofactor_expansion_on_3x3() {
        let m = RealMatrix::from_fn(3, 3, |i, j| ((i * 3 + j) as f64 * 0.7).sin() + if i == j { 2.0 } else { 0.0 });
        let det3 = |m: &RealMatrix| {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        };
        let direct = det3(&m);
        let (sign, log_abs) = det_sign_lu(&m);
        assert_eq!(sign as f64, direct.signum());
        assert!((log_abs - direct.abs().ln()).abs() < 1e-12);
    }

    #[test]
    fn solve_recovers_known_vector() {
        let a = RealMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                4.0
            } else {
                1.0 / (1.0 + (i + 2 * j) as f64)
            }
        });
        let truth = vec![1.0, -2.0, 0.5];
        let b = a.apply(&truth);
        let x = lu_solve(&a, &b).unwrap();
        for (got, want) in x.iter().zip(&truth) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn solve_rejects_singular() {
        let m = RealMatrix::from_fn(2, 2, |_, _| 3.0);
        assert!(matches!(lu_solve(&m, &[1.0, 2.0]), Err(Error::Singular)));
    }
}
