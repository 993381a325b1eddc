//! Mapping degree of Θ₀(A) = A conj(B₀) A at the regular value id: the
//! preimage set in closed form, the linearization α^ε in the symmetric-
//! matrix chart, its determinant sign by LU and by the analytic pair rule,
//! and the signed sum over all 2^n preimages.

use rand::Rng;
use rayon::prelude::*;

use crate::combinatorics::{sigma, EpsSeq, BRUTE_LIMIT};
use crate::error::{Error, Result};
use crate::linalg::lu::{det_sign_lu_with_tol, DEFAULT_PIVOT_REL_TOL};
use crate::linalg::{Complex, ComplexMatrix, RealMatrix};
use crate::models::SymmetricUnitary;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Basepoint angles 0 < θ₁ < … < θ_n < 2π. The gap floor keeps every
/// cosine factor of the linearization safely away from zero.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleSpec {
    thetas: Vec<f64>,
}

pub const MIN_ANGLE_GAP: f64 = 1e-9;

impl AngleSpec {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::InvalidAngles("need at least one angle".into()));
        }
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidAngles("angles must be finite".into()));
        }
        if thetas[0] <= 0.0 {
            return Err(Error::InvalidAngles(format!(
                "first angle {} must be positive",
                thetas[0]
            )));
        }
        if *thetas.last().unwrap() >= TAU {
            return Err(Error::InvalidAngles(format!(
                "last angle {} must be below 2*pi",
                thetas.last().unwrap()
            )));
        }
        for w in thetas.windows(2) {
            if w[1] - w[0] <= MIN_ANGLE_GAP {
                return Err(Error::InvalidAngles(format!(
                    "angles must increase with gaps above {MIN_ANGLE_GAP:.0e} (got {} then {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { thetas })
    }

    /// θ_j = 2πj/(n+1): evenly spread, all constraints met with room.
    pub fn default_angles(n: usize) -> Self {
        assert!(n >= 1);
        let thetas = (1..=n).map(|j| TAU * j as f64 / (n + 1) as f64).collect();
        Self { thetas }
    }

    /// Random valid spec: gap fractions drawn from [0.5, 1.5) and
    /// renormalized, so no gap is ever below 2π/(3(n+1)).
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        assert!(n >= 1);
        let gaps: Vec<f64> = (0..=n).map(|_| 0.5 + rng.gen::<f64>()).collect();
        let total: f64 = gaps.iter().sum();
        let mut acc = 0.0;
        let thetas = gaps[..n]
            .iter()
            .map(|g| {
                acc += g;
                TAU * acc / total
            })
            .collect();
        Self::new(thetas).expect("construction keeps all gaps positive")
    }

    pub fn n(&self) -> usize {
        self.thetas.len()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }
}

/// B₀ = diag(e^{iθ_j}).
pub fn basepoint(spec: &AngleSpec) -> SymmetricUnitary {
    let diag: Vec<Complex> = spec.thetas().iter().map(|&t| Complex::unit(t)).collect();
    SymmetricUnitary::new(ComplexMatrix::from_diagonal(&diag))
        .expect("a diagonal of unit scalars is symmetric unitary")
}

/// The 2^n solutions of Θ₀(A) = id: A^ε = diag(e^{i(θ_k/2 + ε_k π)}).
pub fn enumerate_preimages(spec: &AngleSpec) -> Vec<(EpsSeq, SymmetricUnitary)> {
    EpsSeq::all(spec.n())
        .map(|eps| {
            let a = preimage_matrix(spec, &eps);
            let a = SymmetricUnitary::new(a).expect("diagonal unit entries");
            (eps, a)
        })
        .collect()
}

fn preimage_matrix(spec: &AngleSpec, eps: &EpsSeq) -> ComplexMatrix {
    let diag: Vec<Complex> = spec
        .thetas()
        .iter()
        .zip(eps.bits())
        .map(|(&t, &b)| Complex::unit(t / 2.0 + b as f64 * std::f64::consts::PI))
        .collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// U^ε = diag(e^{i(θ_k/4 + ε_k π/2)}), the chart unitary with
/// A^ε = U^ε (conj U^ε)^{−1}.
pub fn chart_unitary(spec: &AngleSpec, eps: &EpsSeq) -> ComplexMatrix {
    let diag: Vec<Complex> = spec
        .thetas()
        .iter()
        .zip(eps.bits())
        .map(|(&t, &b)| Complex::unit(t / 4.0 + b as f64 * std::f64::consts::PI / 2.0))
        .collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// Orthonormal basis of Sym(n) under trace(X Yᵀ): the E_jj in order, then
/// (E_jk + E_kj)/√2 for j < k lexicographically. N = n(n+1)/2 elements.
pub fn sym_basis(n: usize) -> Vec<RealMatrix> {
    let mut basis = Vec::with_capacity(n * (n + 1) / 2);
    for j in 0..n {
        let mut e = RealMatrix::zeros(n, n);
        e[(j, j)] = 1.0;
        basis.push(e);
    }
    let w = 1.0 / 2f64.sqrt();
    for j in 0..n {
        for k in (j + 1)..n {
            let mut e = RealMatrix::zeros(n, n);
            e[(j, k)] = w;
            e[(k, j)] = w;
            basis.push(e);
        }
    }
    basis
}

/// Coordinates of a symmetric matrix in sym_basis order.
pub fn sym_coords(s: &RealMatrix) -> Vec<f64> {
    let n = s.rows();
    let mut v = Vec::with_capacity(n * (n + 1) / 2);
    for j in 0..n {
        v.push(s[(j, j)]);
    }
    let w = 2f64.sqrt();
    for j in 0..n {
        for k in (j + 1)..n {
            v.push(w * s[(j, k)]);
        }
    }
    v
}

/// Inverse of sym_coords.
pub fn sym_from_coords(n: usize, v: &[f64]) -> RealMatrix {
    assert_eq!(v.len(), n * (n + 1) / 2);
    let mut s = RealMatrix::zeros(n, n);
    for j in 0..n {
        s[(j, j)] = v[j];
    }
    let w = 1.0 / 2f64.sqrt();
    let mut idx = n;
    for j in 0..n {
        for k in (j + 1)..n {
            s[(j, k)] = w * v[idx];
            s[(k, j)] = w * v[idx];
            idx += 1;
        }
    }
    s
}

fn alpha_factor(spec: &AngleSpec, eps: &EpsSeq, j: usize, k: usize) -> f64 {
    let t = spec.thetas();
    let b = eps.bits();
    let shift = (b[j] as f64 - b[k] as f64) * std::f64::consts::PI / 2.0;
    2.0 * ((t[j] - t[k]) / 4.0 + shift).cos()
}

/// α^ε(Q) = 2 Re(U^ε Q (U^ε)^{−1}), evaluated by the entrywise closed form
/// 2 cos((θ_j − θ_k)/4 + (ε_j − ε_k)π/2) · q_jk.
pub fn alpha_apply(spec: &AngleSpec, eps: &EpsSeq, q: &RealMatrix) -> Result<RealMatrix> {
    let n = spec.n();
    if q.rows() != n || q.cols() != n {
        return Err(Error::DimensionMismatch(q.rows(), n));
    }
    if !q.is_symmetric_within(1e-12 * q.max_abs().max(1.0)) {
        return Err(Error::NotSymmetric(q.symmetry_defect()));
    }
    Ok(RealMatrix::from_fn(n, n, |j, k| {
        alpha_factor(spec, eps, j, k) * q[(j, k)]
    }))
}

/// The same map along the unsimplified chain: push Q to the tangent vector
/// T = U^ε (iQ) (conj U^ε)^{−1} at A^ε, apply the raw differential
/// T conj(B) A^ε + A^ε conj(B) T, and read the result i·Q' back off. Any
/// disagreement with the closed form beyond 1e−10 is reported as an error.
pub fn alpha_apply_direct(spec: &AngleSpec, eps: &EpsSeq, q: &RealMatrix) -> Result<RealMatrix> {
    let n = spec.n();
    if q.rows() != n || q.cols() != n {
        return Err(Error::DimensionMismatch(q.rows(), n));
    }
    let u = chart_unitary(spec, eps);
    let iq = ComplexMatrix::from_re_im(&RealMatrix::zeros(n, n), q)?;
    // (conj U)^{−1} = Uᵀ for unitary U.
    let t = u.mul(&iq)?.mul(&u.conj().inverse()?)?;
    let b_conj = basepoint(spec).into_matrix().conj();
    let a = preimage_matrix(spec, eps);
    let d = t.mul(&b_conj)?.mul(&a)?.add(&a.mul(&b_conj)?.mul(&t)?)?;
    // d is tangent at id, i.e. i times a real symmetric matrix.
    let real_leak = d.re_part().frobenius_norm();
    let direct = d.im_part();
    let closed = alpha_apply(spec, eps, q)?;
    let mismatch = direct.sub(&closed).frobenius_norm().max(real_leak);
    if mismatch > 1e-10 {
        return Err(Error::LinearizationMismatch(mismatch));
    }
    Ok(direct)
}

/// Matrix of α^ε in sym_basis coordinates (N×N, diagonal in this basis).
pub fn alpha_matrix(spec: &AngleSpec, eps: &EpsSeq) -> RealMatrix {
    let n = spec.n();
    let basis = sym_basis(n);
    let nn = basis.len();
    let mut m = RealMatrix::zeros(nn, nn);
    for (col, e) in basis.iter().enumerate() {
        let image = alpha_apply(spec, eps, e).expect("basis elements are symmetric");
        m.set_column(col, &sym_coords(&image));
    }
    m
}

/// Sign of det α^ε by the pair rule: a factor is negative exactly when
/// ε_j = 0, ε_k = 1 with j < k, so the sign is (−1)^{σ(ε)}. Every factor is
/// also checked against a 1e−9 floor; a valid AngleSpec cannot get near it.
pub fn sign_analytic(spec: &AngleSpec, eps: &EpsSeq) -> Result<i8> {
    let n = spec.n();
    for j in 0..n {
        for k in (j + 1)..n {
            let f = alpha_factor(spec, eps, j, k);
            if f.abs() <= 1e-9 {
                return Err(Error::DegenerateFactor {
                    value: f,
                    tol: 1e-9,
                });
            }
        }
    }
    let (_, parity) = sigma(eps);
    Ok(1 - 2 * parity as i8)
}

/// One preimage with everything the degree sum needs about it.
#[derive(Clone, Debug)]
pub struct PreimagePoint {
    pub eps: EpsSeq,
    pub a_eps: SymmetricUnitary,
    pub u_eps: ComplexMatrix,
    pub sign_numeric: i8,
    pub sign_analytic: i8,
    pub log_abs_det: f64,
    pub residual: f64,
}

/// All 2^n preimage points with numeric and analytic signs, in ε index
/// order. `pivot_rel_tol` is the LU threshold below which a point is
/// declared non-regular.
pub fn preimage_points_with_tol(
    spec: &AngleSpec,
    pivot_rel_tol: f64,
) -> Result<Vec<PreimagePoint>> {
    let n = spec.n();
    if n > BRUTE_LIMIT {
        return Err(Error::BruteBudget {
            n,
            limit: BRUTE_LIMIT,
        });
    }
    let b_conj = basepoint(spec).into_matrix().conj();
    let id = ComplexMatrix::identity(n);
    (0..(1u64 << n))
        .into_par_iter()
        .map(|idx| {
            let eps = EpsSeq::from_index(n, idx);
            let a = preimage_matrix(spec, &eps);
            let theta = a.mul(&b_conj)?.mul(&a)?;
            let residual = theta.frobenius_dist(&id)?;
            if residual >= 1e-11 {
                return Err(Error::InvariantViolation {
                    model: "preimage",
                    what: "residual at the target",
                    deviation: residual,
                    tol: 1e-11,
                });
            }
            let alpha = alpha_matrix(spec, &eps);
            let (sign_numeric, log_abs_det) = det_sign_lu_with_tol(&alpha, pivot_rel_tol);
            if sign_numeric == 0 {
                return Err(Error::NonRegularPoint {
                    eps: eps.bits().to_vec(),
                });
            }
            let analytic = sign_analytic(spec, &eps)?;
            if sign_numeric != analytic {
                return Err(Error::SignMismatch {
                    eps: eps.bits().to_vec(),
                    numeric: sign_numeric,
                    analytic,
                });
            }
            Ok(PreimagePoint {
                u_eps: chart_unitary(spec, &eps),
                a_eps: SymmetricUnitary::new(a)?,
                eps,
                sign_numeric,
                sign_analytic: analytic,
                log_abs_det,
                residual,
            })
        })
        .collect()
}

pub fn preimage_points(spec: &AngleSpec) -> Result<Vec<PreimagePoint>> {
    preimage_points_with_tol(spec, DEFAULT_PIVOT_REL_TOL)
}

/// The assembled degree computation.
#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub n: usize,
    pub m: usize,
    pub degree_signed_sum: i64,
    pub degree_closed_form: i64,
    pub points: Vec<PreimagePoint>,
    pub all_regular: bool,
}

/// Signed preimage count of Θ₀ over the 2^n closed-form solutions. Only
/// defined for odd n; the signed sum must land exactly on 2^{m+1}.
pub fn degree_with_tol(spec: &AngleSpec, pivot_rel_tol: f64) -> Result<DegreeReport> {
    let n = spec.n();
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    let points = preimage_points_with_tol(spec, pivot_rel_tol)?;
    let all_regular = points.iter().all(|p| p.sign_numeric != 0);
    let sum: i64 = points.iter().map(|p| p.sign_numeric as i64).sum();
    let m = (n - 1) / 2;
    let closed = 1i64 << (m + 1);
    if sum != closed {
        return Err(Error::DegreeMismatch {
            got: sum,
            expected: closed,
        });
    }
    Ok(DegreeReport {
        n,
        m,
        degree_signed_sum: sum,
        degree_closed_form: closed,
        points,
        all_regular,
    })
}

pub fn degree(spec: &AngleSpec) -> Result<DegreeReport> {
    degree_with_tol(spec, DEFAULT_PIVOT_REL_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn eps(bits: &[u8]) -> EpsSeq {
        EpsSeq::new(bits.to_vec()).unwrap()
    }

    #[test]
    fn default_angles_hand_values() {
        assert_eq!(AngleSpec::default_angles(1).thetas(), &[PI]);
        let a3 = AngleSpec::default_angles(3);
        let want = [PI / 2.0, PI, 3.0 * PI / 2.0];
        for (got, want) in a3.thetas().iter().zip(want) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn angle_spec_rejections() {
        assert!(AngleSpec::new(vec![]).is_err());
        assert!(AngleSpec::new(vec![0.0, 1.0]).is_err());
        assert!(AngleSpec::new(vec![1.0, 7.0]).is_err());
        assert!(AngleSpec::new(vec![2.0, 1.0]).is_err());
        assert!(AngleSpec::new(vec![1.0, 1.0 + 1e-12]).is_err());
        assert!(AngleSpec::new(vec![1.0, 2.0, 3.0]).is_ok());
    }

    #[test]
    fn random_specs_are_valid_and_deterministic() {
        let a = AngleSpec::random(6, &mut ChaCha8Rng::seed_from_u64(5));
        let b = AngleSpec::random(6, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
        assert!(AngleSpec::new(a.thetas().to_vec()).is_ok());
    }

    #[test]
    fn basepoint_n2_oracle() {
        let spec = AngleSpec::new(vec![PI / 2.0, PI]).unwrap();
        let b = basepoint(&spec);
        assert!((b.matrix()[(0, 0)] - Complex::I).abs() < 1e-15);
        assert!((b.matrix()[(1, 1)] - Complex::new(-1.0, 0.0)).abs() < 1e-15);
    }

    #[test]
    fn scalar_preimages_are_plus_minus_i() {
        let spec = AngleSpec::new(vec![PI]).unwrap();
        let pre = enumerate_preimages(&spec);
        assert_eq!(pre.len(), 2);
        assert!((pre[0].1.matrix()[(0, 0)] - Complex::I).abs() < 1e-15);
        assert!((pre[1].1.matrix()[(0, 0)] + Complex::I).abs() < 1e-15);
    }

    #[test]
    fn preimage_count_is_two_to_the_n() {
        for n in 1..=6 {
            let spec = AngleSpec::default_angles(n);
            assert_eq!(enumerate_preimages(&spec).len(), 1 << n);
        }
    }

    #[test]
    fn chart_unitary_scalar_oracle() {
        let spec = AngleSpec::new(vec![PI]).unwrap();
        let u0 = chart_unitary(&spec, &eps(&[0]));
        assert!((u0[(0, 0)] - Complex::unit(PI / 4.0)).abs() < 1e-15);
        let u1 = chart_unitary(&spec, &eps(&[1]));
        assert!((u1[(0, 0)] - Complex::unit(PI / 4.0 + PI / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn chart_factorizes_the_preimage() {
        let spec = AngleSpec::default_angles(3);
        for (eps, a) in enumerate_preimages(&spec) {
            let u = chart_unitary(&spec, &eps);
            let rebuilt = u.mul(&u.conj().inverse().unwrap()).unwrap();
            assert!(rebuilt.frobenius_dist(a.matrix()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn sym_basis_is_orthonormal() {
        for n in [1, 2, 4] {
            let basis = sym_basis(n);
            assert_eq!(basis.len(), n * (n + 1) / 2);
            for (i, x) in basis.iter().enumerate() {
                for (j, y) in basis.iter().enumerate() {
                    let ip = x.mul(&y.transpose());
                    let tr: f64 = (0..n).map(|k| ip[(k, k)]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((tr - want).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn sym_coords_round_trip() {
        let s = RealMatrix::from_fn(3, 3, |i, j| ((i + 1) * (j + 1)) as f64);
        let s = {
            let mut t = RealMatrix::zeros(3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    t[(i, j)] = 0.5 * (s[(i, j)] + s[(j, i)]);
                }
            }
            t
        };
        let v = sym_coords(&s);
        let back = sym_from_coords(3, &v);
        assert!(back.sub(&s).frobenius_norm() < 1e-14);
        // The basis is orthonormal, so coordinates preserve the norm.
        let norm_v: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm_v - s.frobenius_norm()).abs() < 1e-12);
    }

    #[test]
    fn alpha_doubles_the_identity() {
        let spec = AngleSpec::default_angles(3);
        let id = RealMatrix::identity(3);
        for e in EpsSeq::all(3) {
            let img = alpha_apply(&spec, &e, &id).unwrap();
            assert!(img.sub(&id.scale(2.0)).frobenius_norm() < 1e-14);
        }
    }

    #[test]
    fn alpha_offdiag_factor_oracle() {
        // θ = (π/2, π), ε = (0,1): factor 2cos(−π/8 − π/2) = 2cos(−5π/8) < 0.
        let spec = AngleSpec::new(vec![PI / 2.0, PI]).unwrap();
        let mut q = RealMatrix::zeros(2, 2);
        q[(0, 1)] = 1.0;
        q[(1, 0)] = 1.0;
        let img = alpha_apply(&spec, &eps(&[0, 1]), &q).unwrap();
        let want = 2.0 * (-5.0 * PI / 8.0).cos();
        assert!(want < 0.0);
        assert!((img[(0, 1)] - want).abs() < 1e-15);
        assert!((img[(1, 0)] - want).abs() < 1e-15);
        assert_eq!(img[(0, 0)], 0.0);
    }

    #[test]
    fn alpha_direct_path_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=4 {
            let spec = AngleSpec::default_angles(n);
            let g = crate::linalg::gaussian_vec(&mut rng, n * n);
            let mut q = RealMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let x = g[i * n + j];
                    q[(i, j)] = x;
                    q[(j, i)] = x;
                }
            }
            for e in EpsSeq::all(n) {
                let direct = alpha_apply_direct(&spec, &e, &q).unwrap();
                let closed = alpha_apply(&spec, &e, &q).unwrap();
                assert!(direct.sub(&closed).frobenius_norm() < 1e-10);
            }
        }
    }

    #[test]
    fn alpha_matrix_is_diagonal_with_cosine_entries() {
        let spec = AngleSpec::new(vec![PI / 2.0, PI]).unwrap();
        let m = alpha_matrix(&spec, &eps(&[0, 0]));
        assert_eq!(m.rows(), 3);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(m[(i, j)].abs() < 1e-14);
                }
            }
        }
        assert!((m[(0, 0)] - 2.0).abs() < 1e-15);
        assert!((m[(1, 1)] - 2.0).abs() < 1e-15);
        assert!((m[(2, 2)] - 2.0 * (-PI / 8.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn alpha_matrix_scalar_case() {
        let spec = AngleSpec::new(vec![PI]).unwrap();
        let m = alpha_matrix(&spec, &eps(&[0]));
        assert_eq!(m.rows(), 1);
        assert!((m[(0, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn analytic_sign_hand_cases() {
        let s2 = AngleSpec::default_angles(2);
        assert_eq!(sign_analytic(&s2, &eps(&[0, 0])).unwrap(), 1);
        assert_eq!(sign_analytic(&s2, &eps(&[0, 1])).unwrap(), -1);
        let s3 = AngleSpec::default_angles(3);
        assert_eq!(sign_analytic(&s3, &eps(&[0, 1, 1])).unwrap(), 1);
    }

    #[test]
    fn degree_small_odd_dimensions() {
        let r1 = degree(&AngleSpec::default_angles(1)).unwrap();
        assert_eq!(r1.degree_signed_sum, 2);
        assert!(r1.all_regular);
        assert!(r1.points.iter().all(|p| p.sign_numeric == 1));

        let r3 = degree(&AngleSpec::default_angles(3)).unwrap();
        assert_eq!(r3.degree_signed_sum, 4);
        let plus = r3.points.iter().filter(|p| p.sign_numeric == 1).count();
        let minus = r3.points.iter().filter(|p| p.sign_numeric == -1).count();
        assert_eq!((plus, minus), (6, 2));

        let r5 = degree(&AngleSpec::default_angles(5)).unwrap();
        assert_eq!(r5.degree_signed_sum, 8);
    }

    #[test]
    fn degree_rejects_even_n() {
        assert!(matches!(
            degree(&AngleSpec::default_angles(2)),
            Err(Error::EvenDimension(2))
        ));
    }

    #[test]
    fn degree_ignores_the_angles() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let a = degree(&AngleSpec::random(3, &mut rng)).unwrap();
        let b = degree(&AngleSpec::random(3, &mut rng)).unwrap();
        assert_eq!(a.degree_signed_sum, b.degree_signed_sum);
    }

    #[test]
    fn preimage_residuals_are_tiny() {
        let points = preimage_points(&AngleSpec::default_angles(5)).unwrap();
        assert_eq!(points.len(), 32);
        for p in &points {
            assert!(p.residual < 1e-13);
            assert_eq!(p.sign_numeric, p.sign_analytic);
        }
    }
}
