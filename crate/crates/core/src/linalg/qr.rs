use rand::Rng;

use super::cmatrix::ComplexMatrix;
use super::complex::{self, Complex};
use super::rmatrix::RealMatrix;
use crate::error::{Error, Result};

/// Standard normal samples via Box-Muller. Consumes uniforms in pairs, so a
/// fixed seed yields the same vector regardless of how callers batch draws.
pub fn gaussian_vec(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len + 1);
    while out.len() < len {
        let u1: f64 = 1.0 - rng.gen::<f64>();
        let u2: f64 = rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * u2;
        out.push(r * t.cos());
        out.push(r * t.sin());
    }
    out.truncate(len);
    out
}

/// Householder QR. Returns (Q, R) with Q unitary and R upper triangular.
pub fn qr_decompose(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n {
        let mut norm_sq = 0.0;
        for i in k..n {
            norm_sq += r[(i, k)].abs_sq();
        }
        let norm = norm_sq.sqrt();
        if norm <= 1e-300 {
            continue;
        }
        // alpha = -phase(x0) * ||x|| makes v0 = x0 - alpha cancellation-free.
        let alpha = r[(k, k)].phase().scale(-norm);
        let mut v = vec![complex::ZERO; n - k];
        for i in k..n {
            v[i - k] = r[(i, k)];
        }
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|z| z.abs_sq()).sum();
        if vv <= 1e-300 {
            continue;
        }
        let beta = 2.0 / vv;
        // R <- H R with H = id - beta v v*
        for j in k..n {
            let mut w = complex::ZERO;
            for i in k..n {
                w += v[i - k].conj() * r[(i, j)];
            }
            let w = w.scale(beta);
            for i in k..n {
                let dv = v[i - k] * w;
                r[(i, j)] -= dv;
            }
        }
        // Q <- Q H
        for i in 0..n {
            let mut w = complex::ZERO;
            for l in k..n {
                w += q[(i, l)] * v[l - k];
            }
            let w = w.scale(beta);
            for l in k..n {
                let dv = w * v[l - k].conj();
                q[(i, l)] -= dv;
            }
        }
        r[(k, k)] = alpha;
        for i in (k + 1)..n {
            r[(i, k)] = complex::ZERO;
        }
    }
    (q, r)
}

/// Q with its columns rotated so the R diagonal becomes real positive. On a
/// Ginibre input this is the Haar correction; on an already-unitary input it
/// reproduces the input exactly.
fn qr_phase_fixed(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim();
    let (q, r) = qr_decompose(a);
    let mut out = q;
    for k in 0..n {
        if r[(k, k)].abs() <= 1e-13 {
            return Err(Error::Singular);
        }
        let phase = r[(k, k)].phase();
        for i in 0..n {
            out[(i, k)] *= phase;
        }
    }
    Ok(out)
}

/// Haar-distributed unitary: complex Gaussian matrix, QR, phase fix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    loop {
        let g = gaussian_vec(rng, 2 * n * n);
        let entries: Vec<Complex> = g.chunks_exact(2).map(|p| Complex::new(p[0], p[1])).collect();
        let a = ComplexMatrix::from_entries(n, entries).expect("gaussian entries are finite");
        // A Ginibre matrix is almost surely nonsingular; retry on the
        // measure-zero failure rather than propagate it.
        if let Ok(u) = qr_phase_fixed(&a) {
            return u;
        }
    }
}

/// Haar-distributed real orthogonal matrix. Real Gaussian entries keep the
/// whole QR pass in real arithmetic (a real scalar's phase is its sign), so
/// the imaginary parts stay exactly zero.
pub fn random_orthogonal(n: usize, rng: &mut impl Rng) -> RealMatrix {
    loop {
        let g = gaussian_vec(rng, n * n);
        let entries: Vec<Complex> = g.iter().map(|&x| Complex::new(x, 0.0)).collect();
        let a = ComplexMatrix::from_entries(n, entries).expect("gaussian entries are finite");
        if let Ok(u) = qr_phase_fixed(&a) {
            return u.re_part();
        }
    }
}

/// Snap a near-unitary matrix back onto the unitary group. Exact unitaries
/// pass through unchanged.
pub fn orthonormalize(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    qr_phase_fixed(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gaussians_have_plausible_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs = gaussian_vec(&mut rng, 20_000);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn qr_reconstructs_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = gaussian_vec(&mut rng, 32);
        let entries: Vec<Complex> = g.chunks_exact(2).map(|p| Complex::new(p[0], p[1])).collect();
        let a = ComplexMatrix::from_entries(4, entries).unwrap();
        let (q, r) = qr_decompose(&a);
        let qr = q.mul(&r).unwrap();
        assert!(qr.frobenius_dist(&a).unwrap() < 1e-12);
        let gram = q.adjoint().mul(&q).unwrap();
        assert!(gram.dist_from_identity() < 1e-13);
        for i in 0..4 {
            for j in 0..i {
                assert!(r[(i, j)].abs() < 1e-13);
            }
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 5] {
            let u = random_unitary(n, &mut rng);
            let gram = u.adjoint().mul(&u).unwrap();
            assert!(gram.dist_from_identity() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn random_unitary_is_seed_deterministic() {
        let a = random_unitary(3, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_unitary(3, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a.frobenius_dist(&b).unwrap(), 0.0);
    }

    #[test]
    fn random_orthogonal_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = random_orthogonal(4, &mut rng);
        let gram = r.transpose().mul(&r);
        assert!(gram.dist_from_identity() < 1e-13);
    }

    #[test]
    fn orthonormalize_fixes_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_unitary(3, &mut rng);
        let fixed = orthonormalize(&u).unwrap();
        assert!(fixed.frobenius_dist(&u).unwrap() < 1e-13);
    }

    #[test]
    fn orthonormalize_repairs_drift() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let u = random_unitary(3, &mut rng);
        let drifted = u.scale(Complex::new(1.0 + 1e-4, 0.0));
        let fixed = orthonormalize(&drifted).unwrap();
        let gram = fixed.adjoint().mul(&fixed).unwrap();
        assert!(gram.dist_from_identity() < 1e-12);
        assert!(fixed.frobenius_dist(&u).unwrap() < 1e-3);
    }
}
