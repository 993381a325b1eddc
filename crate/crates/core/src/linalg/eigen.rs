use super::cmatrix::ComplexMatrix;
use super::complex::Complex;
use super::rmatrix::RealMatrix;
use crate::error::{Error, Result};

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues sorted in descending order and the orthogonal matrix
/// whose columns are the matching eigenvectors.
pub fn sym_eig(m: &RealMatrix) -> Result<(Vec<f64>, RealMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(m.rows(), m.cols()));
    }
    let defect = m.symmetry_defect();
    let tol = 1e-10 * m.max_abs().max(1.0);
    if defect > tol {
        return Err(Error::NotSymmetric(defect));
    }
    let n = m.rows();
    let mut a = m.clone();
    // Symmetrize so rotations see an exactly symmetric input.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    let mut v = RealMatrix::identity(n);
    let scale = a.max_abs().max(1.0);
    let sweep_limit = 100;
    for _ in 0..sweep_limit {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(a[(i, j)].abs());
            }
        }
        if off <= 1e-14 * scale {
            let mut pairs: Vec<(f64, usize)> = (0..n).map(|j| (a[(j, j)], j)).collect();
            pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
            let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let vectors = RealMatrix::from_fn(n, n, |i, j| v[(i, pairs[j].1)]);
            return Ok((values, vectors));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::NoConvergence)
}

/// e^{iQ} for real symmetric Q, via the spectral decomposition
/// Q = V diag(λ) Vᵀ, giving V diag(e^{iλ}) Vᵀ. The result is both
/// unitary and complex symmetric.
pub fn expi_sym(q: &RealMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = sym_eig(q)?;
    let n = q.rows();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut z = Complex::new(0.0, 0.0);
            for k in 0..n {
                let w = Complex::unit(values[k]).scale(vectors[(i, k)] * vectors[(j, k)]);
                z += w;
            }
            out[(i, j)] = z;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eig_of_diagonal_is_sorted() {
        let mut m = RealMatrix::zeros(3, 3);
        m[(0, 0)] = -1.0;
        m[(1, 1)] = 4.0;
        m[(2, 2)] = 0.5;
        let (values, vectors) = sym_eig(&m).unwrap();
        assert_eq!(values, vec![4.0, 0.5, -1.0]);
        // Columns are the permuted standard basis.
        assert_eq!(vectors[(1, 0)].abs(), 1.0);
        assert_eq!(vectors[(2, 1)].abs(), 1.0);
        assert_eq!(vectors[(0, 2)].abs(), 1.0);
    }

    #[test]
    fn eig_of_2x2_pauli_x() {
        let mut m = RealMatrix::zeros(2, 2);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = 1.0;
        let (values, vectors) = sym_eig(&m).unwrap();
        assert!((values[0] - 1.0).abs() < 1e-14);
        assert!((values[1] + 1.0).abs() < 1e-14);
        // Reconstruct and compare.
        let d = RealMatrix::from_fn(2, 2, |i, j| if i == j { values[i] } else { 0.0 });
        let rebuilt = vectors.mul(&d).mul(&vectors.transpose());
        assert!(rebuilt.sub(&m).frobenius_norm() < 1e-14);
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let m = RealMatrix::from_fn(4, 4, |i, j| 1.0 / (1.0 + (i + j) as f64));
        let (_, vectors) = sym_eig(&m).unwrap();
        let g = vectors.transpose().mul(&vectors);
        assert!(g.dist_from_identity() < 1e-13);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let mut m = RealMatrix::identity(2);
        m[(0, 1)] = 1.0;
        assert!(matches!(sym_eig(&m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn expi_of_zero_is_identity() {
        let q = RealMatrix::zeros(3, 3);
        let u = expi_sym(&q).unwrap();
        assert!(u.dist_from_identity() < 1e-14);
    }

    #[test]
    fn expi_of_pi_diagonal() {
        let mut q = RealMatrix::zeros(2, 2);
        q[(0, 0)] = std::f64::consts::PI;
        let u = expi_sym(&q).unwrap();
        assert!((u[(0, 0)] - Complex::new(-1.0, 0.0)).abs() < 1e-14);
        assert!((u[(1, 1)] - Complex::new(1.0, 0.0)).abs() < 1e-14);
    }

    #[test]
    fn expi_is_unitary_and_symmetric() {
        let q = RealMatrix::from_fn(3, 3, |i, j| 0.3 * ((i * 3 + j) as f64).sin())
            .mul(&RealMatrix::identity(3));
        let q = {
            // Symmetrize the arbitrary input.
            let mut s = RealMatrix::zeros(3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    s[(i, j)] = 0.5 * (q[(i, j)] + q[(j, i)]);
                }
            }
            s
        };
        let u = expi_sym(&q).unwrap();
        let gram = u.adjoint().mul(&u).unwrap();
        assert!(gram.dist_from_identity() < 1e-13);
        assert!(u.transpose().frobenius_dist(&u).unwrap() < 1e-13);
    }
}
