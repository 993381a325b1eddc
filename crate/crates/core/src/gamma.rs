//! The general group-level construction the Grassmannian product is an
//! instance of: for an involutive anti-isomorphism I of a matrix group, the
//! product (g, h) ↦ g h^{−1} g restricts to Fix(I). Two concrete fixed-point
//! sets are exhibited: symmetric orthogonal involutions in O(n), a
//! disjoint union of ordinary Grassmannians indexed by the +1-eigenspace
//! dimension k, and the symmetric matrices in SU(2), a 2-sphere.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{random_orthogonal, Complex, ComplexMatrix};

/// The two involutive anti-isomorphisms in play. A closed enumeration keeps
/// the anti-isomorphism laws testable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AntiIso {
    Transpose,
    Inverse,
}

impl AntiIso {
    pub fn apply(&self, g: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self {
            AntiIso::Transpose => Ok(g.transpose()),
            AntiIso::Inverse => g.inverse(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Unitary,
    Orthogonal,
    SpecialUnitary,
}

impl GroupKind {
    /// Distance from the group, as a max of the defining defects.
    pub fn membership_defect(&self, g: &ComplexMatrix) -> f64 {
        let unitary = match g.adjoint().mul(g) {
            Ok(p) => p.dist_from_identity(),
            Err(_) => f64::INFINITY,
        };
        match self {
            GroupKind::Unitary => unitary,
            GroupKind::Orthogonal => unitary.max(g.im_part().frobenius_norm()),
            GroupKind::SpecialUnitary => {
                unitary.max((g.det() - Complex::ONE).abs())
            }
        }
    }
}

/// A group element certified to lie in Fix(I) of its group.
#[derive(Clone, Debug)]
pub struct FixSample {
    g: ComplexMatrix,
    group: GroupKind,
    anti_iso: AntiIso,
}

impl FixSample {
    pub fn new(g: ComplexMatrix, group: GroupKind, anti_iso: AntiIso) -> Result<Self> {
        let membership = group.membership_defect(&g);
        if !(membership < 1e-10) {
            return Err(Error::InvariantViolation {
                model: "fix_sample",
                what: "group membership",
                deviation: membership,
                tol: 1e-10,
            });
        }
        let fixed = anti_iso.apply(&g)?.frobenius_dist(&g)?;
        if !(fixed < 1e-10) {
            return Err(Error::InvariantViolation {
                model: "fix_sample",
                what: "fixed by the anti-isomorphism",
                deviation: fixed,
                tol: 1e-10,
            });
        }
        Ok(Self { g, group, anti_iso })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.g
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn anti_iso(&self) -> AntiIso {
        self.anti_iso
    }
}

/// g h^{−1} g.
pub fn gamma_product(g: &ComplexMatrix, h: &ComplexMatrix) -> Result<ComplexMatrix> {
    if g.dim() != h.dim() {
        return Err(Error::DimensionMismatch(g.dim(), h.dim()));
    }
    g.mul(&h.inverse()?)?.mul(g)
}

/// Transpose-fixed point of U(n): a symmetric unitary, sampled as U Uᵀ.
pub fn random_transpose_unitary(n: usize, rng: &mut impl Rng) -> FixSample {
    let a = crate::models::random_lagrangian(n, rng).into_matrix();
    FixSample::new(a, GroupKind::Unitary, AntiIso::Transpose)
        .expect("U U^T is symmetric unitary")
}

/// Symmetric orthogonal involution V diag(±1) Vᵀ: a point of Fix(Inverse)
/// in O(n). Real entries throughout; stored with zero imaginary parts.
pub fn random_symmetric_orthogonal_involution(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let v = random_orthogonal(n, rng);
    let signs: Vec<f64> = (0..n).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
    let mut g = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += v[(i, k)] * signs[k] * v[(j, k)];
            }
            g[(i, j)] = Complex::new(s, 0.0);
        }
    }
    g
}

/// Inverse-fixed point of O(n), as a FixSample.
pub fn random_inverse_orthogonal(n: usize, rng: &mut impl Rng) -> FixSample {
    let g = random_symmetric_orthogonal_involution(n, rng);
    FixSample::new(g, GroupKind::Orthogonal, AntiIso::Inverse)
        .expect("V diag(±1) V^T is an orthogonal involution")
}

/// Max over the pairs of ‖I(g h^{−1} g) − g h^{−1} g‖_F. All samples must
/// share group, anti-isomorphism, and dimension.
pub fn fix_closure_check(pairs: &[(FixSample, FixSample)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (x, y) in pairs {
        if x.group != y.group || x.anti_iso != y.anti_iso || x.g.dim() != y.g.dim() {
            return Err(Error::MixedSamples);
        }
        let t = gamma_product(&x.g, &y.g)?;
        worst = worst.max(x.anti_iso.apply(&t)?.frobenius_dist(&t)?);
    }
    Ok(worst)
}

/// For a symmetric orthogonal involution, the connected-component label:
/// the dimension k of its +1-eigenspace, read off the trace (tr = 2k − n).
pub fn grassmannian_component(g: &ComplexMatrix) -> Result<usize> {
    let n = g.dim();
    let realness = g.im_part().frobenius_norm();
    let orth = g.adjoint().mul(g)?.dist_from_identity();
    let invol = g.mul(g)?.dist_from_identity();
    let symm = g.transpose().frobenius_dist(g)?;
    let defect = realness.max(orth).max(invol).max(symm);
    if !(defect < 1e-9) {
        return Err(Error::InvariantViolation {
            model: "grassmannian_point",
            what: "real symmetric orthogonal involution",
            deviation: defect,
            tol: 1e-9,
        });
    }
    let tr = g.trace().re;
    let k_float = (n as f64 + tr) / 2.0;
    let k = k_float.round();
    if (k_float - k).abs() > 1e-6 || k < 0.0 || k > n as f64 {
        return Err(Error::TraceNotIntegral(tr));
    }
    Ok(k as usize)
}

/// Sample `samples` symmetric orthogonal involutions and return their
/// component labels. Along the way each sample is conjugated (via the
/// product) by the next one and the label is checked to be unchanged.
pub fn component_spectrum(n: usize, samples: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    let mut points = Vec::with_capacity(samples);
    for _ in 0..samples {
        points.push(random_symmetric_orthogonal_involution(n, rng));
    }
    let mut ks = Vec::with_capacity(samples);
    for (i, g) in points.iter().enumerate() {
        let k = grassmannian_component(g)?;
        let h = &points[(i + 1) % points.len()];
        let conjugated = gamma_product(h, g)?;
        let k_conj = grassmannian_component(&conjugated)?;
        if k_conj != k {
            return Err(Error::InvariantViolation {
                model: "grassmannian_point",
                what: "component label under conjugation",
                deviation: (k_conj as f64 - k as f64).abs(),
                tol: 0.0,
            });
        }
        ks.push(k);
    }
    Ok(ks)
}

/// The symmetric SU(2) matrix attached to a point of S²:
/// [[p₁ + i p₂, i p₃], [i p₃, p₁ − i p₂]]. Unitary, determinant one,
/// symmetric; distinct points give distinct matrices.
pub fn su2_fix_point(p: [f64; 3]) -> Result<ComplexMatrix> {
    let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidConfig(format!(
            "point must lie on the unit sphere (norm {norm})"
        )));
    }
    let mut g = ComplexMatrix::zeros(2);
    g[(0, 0)] = Complex::new(p[0], p[1]);
    g[(0, 1)] = Complex::new(0.0, p[2]);
    g[(1, 0)] = Complex::new(0.0, p[2]);
    g[(1, 1)] = Complex::new(p[0], -p[1]);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn anti_iso_laws_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for kind in [AntiIso::Transpose, AntiIso::Inverse] {
            for _ in 0..20 {
                let g = crate::linalg::random_unitary(3, &mut rng);
                let h = crate::linalg::random_unitary(3, &mut rng);
                let lhs = kind.apply(&g.mul(&h).unwrap()).unwrap();
                let rhs = kind.apply(&h).unwrap().mul(&kind.apply(&g).unwrap()).unwrap();
                assert!(lhs.frobenius_dist(&rhs).unwrap() < 1e-10);
                let twice = kind.apply(&kind.apply(&g).unwrap()).unwrap();
                assert!(twice.frobenius_dist(&g).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn gamma_product_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let g = crate::linalg::random_unitary(3, &mut rng);
        let fixed = gamma_product(&g, &g).unwrap();
        assert!(fixed.frobenius_dist(&g).unwrap() < 1e-12);
        let id = ComplexMatrix::identity(3);
        let inv = gamma_product(&id, &g).unwrap();
        assert!(inv.frobenius_dist(&g.inverse().unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn gamma_equals_theta_on_symmetric_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let a = crate::models::random_lagrangian(3, &mut rng);
            let b = crate::models::random_lagrangian(3, &mut rng);
            let via_gamma = gamma_product(a.matrix(), b.matrix()).unwrap();
            let via_theta = crate::models::theta_unitary(&a, &b).unwrap();
            assert!(via_gamma.frobenius_dist(via_theta.matrix()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn closure_on_transpose_fixed_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let pairs: Vec<_> = (0..30)
            .map(|_| {
                (
                    random_transpose_unitary(3, &mut rng),
                    random_transpose_unitary(3, &mut rng),
                )
            })
            .collect();
        assert!(fix_closure_check(&pairs).unwrap() < 1e-10);
    }

    #[test]
    fn closure_on_inverse_fixed_orthogonals() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let pairs: Vec<_> = (0..30)
            .map(|_| {
                (
                    random_inverse_orthogonal(3, &mut rng),
                    random_inverse_orthogonal(3, &mut rng),
                )
            })
            .collect();
        assert!(fix_closure_check(&pairs).unwrap() < 1e-10);
    }

    #[test]
    fn mixed_samples_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let a = random_transpose_unitary(2, &mut rng);
        let b = random_inverse_orthogonal(2, &mut rng);
        assert!(matches!(
            fix_closure_check(&[(a, b)]),
            Err(Error::MixedSamples)
        ));
    }

    #[test]
    fn component_of_sign_diagonals() {
        let id = ComplexMatrix::identity(3);
        assert_eq!(grassmannian_component(&id).unwrap(), 3);
        assert_eq!(grassmannian_component(&id.scale(Complex::new(-1.0, 0.0))).unwrap(), 0);
        let g = ComplexMatrix::from_diagonal(&[
            Complex::ONE,
            Complex::ONE,
            Complex::new(-1.0, 0.0),
        ]);
        assert_eq!(grassmannian_component(&g).unwrap(), 2);
    }

    #[test]
    fn component_rejects_non_involutions() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let u = crate::linalg::random_unitary(3, &mut rng);
        assert!(grassmannian_component(&u).is_err());
    }

    #[test]
    fn spectrum_sees_multiple_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let ks = component_spectrum(3, 100, &mut rng).unwrap();
        assert_eq!(ks.len(), 100);
        let mut distinct: Vec<usize> = ks.clone();
        distinct.sort_unstable();
        distinct.dedup();
        assert!(distinct.len() >= 2, "saw only {distinct:?}");
        assert!(ks.iter().all(|&k| k <= 3));
    }

    #[test]
    fn scalar_spectrum_is_binary() {
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        let ks = component_spectrum(1, 50, &mut rng).unwrap();
        assert!(ks.iter().all(|&k| k == 0 || k == 1));
    }

    #[test]
    fn su2_hand_points() {
        let id = su2_fix_point([1.0, 0.0, 0.0]).unwrap();
        assert!(id.dist_from_identity() < 1e-15);
        let minus = su2_fix_point([-1.0, 0.0, 0.0]).unwrap();
        assert!((minus[(0, 0)] + Complex::ONE).abs() < 1e-15);
        let swap = su2_fix_point([0.0, 0.0, 1.0]).unwrap();
        assert!((swap[(0, 1)] - Complex::I).abs() < 1e-15);
        assert!((swap[(1, 0)] - Complex::I).abs() < 1e-15);
        assert!(swap[(0, 0)].abs() < 1e-15);
    }

    #[test]
    fn su2_points_are_special_unitary_and_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(49);
        for _ in 0..50 {
            let g = crate::linalg::gaussian_vec(&mut rng, 3);
            let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
            let p = [g[0] / norm, g[1] / norm, g[2] / norm];
            let m = su2_fix_point(p).unwrap();
            let sample = FixSample::new(m, GroupKind::SpecialUnitary, AntiIso::Transpose);
            assert!(sample.is_ok());
        }
    }

    #[test]
    fn su2_rejects_off_sphere_points() {
        assert!(su2_fix_point([1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn su2_map_is_injective_on_samples() {
        let a = su2_fix_point([0.0, 1.0, 0.0]).unwrap();
        let b = su2_fix_point([0.0, -1.0, 0.0]).unwrap();
        assert!(a.frobenius_dist(&b).unwrap() > 1.0);
    }
}
