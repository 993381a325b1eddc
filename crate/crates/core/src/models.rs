//! Three equivalent descriptions of a point of the Lagrangian Grassmannian:
//! a symmetric unitary matrix, an orthogonal anti-symplectic involution of
//! R^{2n}, and the Lagrangian plane the involution fixes. Conversions follow
//! one realification convention throughout: x + iy in C^n corresponds to
//! (x, y) in R^{2n}, and the complex structure is J = [[0, -I], [I, 0]].

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{random_unitary, sym_eig, Complex, ComplexMatrix, RealMatrix};

pub const DEFAULT_TOL: f64 = 1e-10;

/// The complex structure J on R^{2n} in (x, y) coordinates.
pub fn standard_j(n: usize) -> RealMatrix {
    let mut j = RealMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, k + n)] = -1.0;
        j[(k + n, k)] = 1.0;
    }
    j
}

/// A point of the Grassmannian in the unitary picture: A unitary with
/// A conj(A) = id, equivalently A = A^T.
#[derive(Clone, Debug)]
pub struct SymmetricUnitary {
    a: ComplexMatrix,
}

impl SymmetricUnitary {
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        Self::with_tol(a, DEFAULT_TOL)
    }

    /// Validating constructor: data outside the manifold is rejected, never
    /// projected back onto it.
    pub fn with_tol(a: ComplexMatrix, tol: f64) -> Result<Self> {
        let unitarity = a.adjoint().mul(&a)?.dist_from_identity();
        if !(unitarity < tol) {
            return Err(Error::InvariantViolation {
                model: "symmetric_unitary",
                what: "unitarity",
                deviation: unitarity,
                tol,
            });
        }
        let self_conj = a.mul(&a.conj())?.dist_from_identity();
        if !(self_conj < tol) {
            return Err(Error::InvariantViolation {
                model: "symmetric_unitary",
                what: "self-conjugacy",
                deviation: self_conj,
                tol,
            });
        }
        Ok(Self { a })
    }

    pub fn n(&self) -> usize {
        self.a.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.a
    }

    pub fn identity(n: usize) -> Self {
        Self {
            a: ComplexMatrix::identity(n),
        }
    }

    pub fn dist(&self, other: &Self) -> Result<f64> {
        self.a.frobenius_dist(&other.a)
    }
}

/// A point of the Grassmannian as a real 2n x 2n matrix R with
/// R^T R = id, R^2 = id and R^T J R = -J.
#[derive(Clone, Debug)]
pub struct AntiSympInvolution {
    r: RealMatrix,
}

impl AntiSympInvolution {
    pub fn new(r: RealMatrix) -> Result<Self> {
        Self::with_tol(r, DEFAULT_TOL)
    }

    pub fn with_tol(r: RealMatrix, tol: f64) -> Result<Self> {
        if !r.is_square() || !r.rows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(r.rows(), r.cols()));
        }
        let n = r.rows() / 2;
        let orth = r.transpose().mul(&r).dist_from_identity();
        if !(orth < tol) {
            return Err(Error::InvariantViolation {
                model: "involution",
                what: "orthogonality",
                deviation: orth,
                tol,
            });
        }
        let invol = r.mul(&r).dist_from_identity();
        if !(invol < tol) {
            return Err(Error::InvariantViolation {
                model: "involution",
                what: "involutivity",
                deviation: invol,
                tol,
            });
        }
        let j = standard_j(n);
        let anti = r.transpose().mul(&j).mul(&r).sub(&j.scale(-1.0)).frobenius_norm();
        if !(anti < tol) {
            return Err(Error::InvariantViolation {
                model: "involution",
                what: "anti-symplecticity",
                deviation: anti,
                tol,
            });
        }
        Ok(Self { r })
    }

    /// Complex dimension n (the matrix is 2n x 2n).
    pub fn n(&self) -> usize {
        self.r.rows() / 2
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.r
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.r
    }
}

/// A Lagrangian plane given by an orthonormal frame: n rows spanning an
/// n-dimensional subspace of R^{2n} on which the symplectic form vanishes.
#[derive(Clone, Debug)]
pub struct LagrangianPlane {
    frame: RealMatrix,
}

impl LagrangianPlane {
    pub fn new(frame: RealMatrix) -> Result<Self> {
        Self::with_tol(frame, DEFAULT_TOL)
    }

    pub fn with_tol(frame: RealMatrix, tol: f64) -> Result<Self> {
        if frame.cols() != 2 * frame.rows() {
            return Err(Error::DimensionMismatch(frame.cols(), 2 * frame.rows()));
        }
        let n = frame.rows();
        let gram = frame.mul(&frame.transpose()).dist_from_identity();
        if !(gram < tol) {
            return Err(Error::InvariantViolation {
                model: "lagrangian_plane",
                what: "row orthonormality",
                deviation: gram,
                tol,
            });
        }
        let omega = frame
            .mul(&standard_j(n).transpose())
            .mul(&frame.transpose())
            .frobenius_norm();
        if !(omega < tol) {
            return Err(Error::InvariantViolation {
                model: "lagrangian_plane",
                what: "omega-vanishing",
                deviation: omega,
                tol,
            });
        }
        Ok(Self { frame })
    }

    pub fn n(&self) -> usize {
        self.frame.rows()
    }

    pub fn frame(&self) -> &RealMatrix {
        &self.frame
    }

    /// Orthogonal projector onto the plane; the frame-independent
    /// description of the subspace, used for comparisons.
    pub fn projector(&self) -> RealMatrix {
        self.frame.transpose().mul(&self.frame)
    }
}

/// The product A conj(B) A in the unitary model. Closure is asserted on the
/// output, at ten times the construction tolerance.
pub fn theta_unitary(a: &SymmetricUnitary, b: &SymmetricUnitary) -> Result<SymmetricUnitary> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    let m = a.matrix().mul(&b.matrix().conj())?.mul(a.matrix())?;
    SymmetricUnitary::with_tol(m, 10.0 * DEFAULT_TOL)
}

/// The product R S R in the involution model.
pub fn theta_involution(
    r: &AntiSympInvolution,
    s: &AntiSympInvolution,
) -> Result<AntiSympInvolution> {
    if r.n() != s.n() {
        return Err(Error::DimensionMismatch(r.n(), s.n()));
    }
    let m = r.matrix().mul(s.matrix()).mul(r.matrix());
    AntiSympInvolution::with_tol(m, 10.0 * DEFAULT_TOL)
}

/// Read off A from R = A ∘ τ, where τ is coordinatewise complex conjugation
/// ((x, y) to (x, -y)). R ∘ τ is complex-linear exactly when R is orthogonal
/// anti-symplectic; its blocks then give A = X + iY directly.
pub fn involution_to_unitary(r: &AntiSympInvolution) -> Result<SymmetricUnitary> {
    let n = r.n();
    let m = r.matrix();
    // M = R τ negates the right block column: M = [[R11, -R12], [R21, -R22]].
    // Complex-linearity of M means M11 = M22 and M12 = -M21, i.e.
    // R11 = -R22 and R12 = R21.
    let mut deviation = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            deviation = deviation.max((m[(i, j)] + m[(i + n, j + n)]).abs());
            deviation = deviation.max((m[(i, j + n)] - m[(i + n, j)]).abs());
        }
    }
    if deviation > 10.0 * DEFAULT_TOL {
        return Err(Error::NotComplexLinear(deviation));
    }
    let mut a = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = Complex::new(m[(i, j)], m[(i + n, j)]);
        }
    }
    SymmetricUnitary::with_tol(a, 10.0 * DEFAULT_TOL)
}

/// Realify A ∘ τ. With A = X + iY the real matrix is [[X, Y], [Y, -X]].
pub fn unitary_to_involution(a: &SymmetricUnitary) -> Result<AntiSympInvolution> {
    let n = a.n();
    let mut r = RealMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = a.matrix()[(i, j)];
            r[(i, j)] = z.re;
            r[(i, j + n)] = z.im;
            r[(i + n, j)] = z.im;
            r[(i + n, j + n)] = -z.re;
        }
    }
    AntiSympInvolution::with_tol(r, 10.0 * DEFAULT_TOL)
}

/// Orthonormal frame of the fixed plane ker(R - id), from the spectral
/// decomposition of R (symmetric, eigenvalues ±1). The +1 eigenspace of an
/// anti-symplectic orthogonal involution has dimension exactly n.
pub fn plane_from_involution(r: &AntiSympInvolution) -> Result<LagrangianPlane> {
    let n = r.n();
    let (values, vectors) = sym_eig(r.matrix())?;
    let plus = values.iter().filter(|&&v| v > 0.0).count();
    if plus != n {
        return Err(Error::PlaneDimension {
            got: plus,
            expected: n,
        });
    }
    // Eigenvalues are sorted descending, so the first n columns span the
    // fixed plane.
    let frame = RealMatrix::from_fn(n, 2 * n, |i, j| vectors[(j, i)]);
    LagrangianPlane::with_tol(frame, 10.0 * DEFAULT_TOL)
}

/// R = 2P - id for the orthogonal projector P onto the plane.
pub fn involution_from_plane(l: &LagrangianPlane) -> Result<AntiSympInvolution> {
    let p = l.projector();
    let mut r = p.scale(2.0);
    for k in 0..r.rows() {
        r[(k, k)] -= 1.0;
    }
    AntiSympInvolution::with_tol(r, 10.0 * DEFAULT_TOL)
}

/// Haar-ish random point: A = U U^T for Haar unitary U. Every point of the
/// Grassmannian arises this way.
pub fn random_lagrangian(n: usize, rng: &mut impl Rng) -> SymmetricUnitary {
    let u = random_unitary(n, rng);
    let a = u.mul(&u.transpose()).expect("dimensions agree");
    SymmetricUnitary::with_tol(a, 1e-11).expect("U U^T satisfies the invariants")
}

/// ‖Θ(R₀, Θ(R₀, S)) − S‖_F: the first slot of Θ acts as an involution, so
/// this must vanish up to round-off.
pub fn first_slot_involution_check(
    r0: &SymmetricUnitary,
    s: &SymmetricUnitary,
) -> Result<f64> {
    if r0.n() != s.n() {
        return Err(Error::DimensionMismatch(r0.n(), s.n()));
    }
    let a = r0.matrix();
    let inner = a.mul(&s.matrix().conj())?.mul(a)?;
    let outer = a.mul(&inner.conj())?.mul(a)?;
    outer.frobenius_dist(s.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar_point(z: Complex) -> SymmetricUnitary {
        SymmetricUnitary::new(ComplexMatrix::from_diagonal(&[z])).unwrap()
    }

    #[test]
    fn theta_of_a_with_itself_is_a() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_lagrangian(3, &mut rng);
        let t = theta_unitary(&a, &a).unwrap();
        assert!(t.dist(&a).unwrap() < 1e-12);
    }

    #[test]
    fn theta_at_identity_conjugates() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let id = SymmetricUnitary::identity(3);
        let b = random_lagrangian(3, &mut rng);
        let t = theta_unitary(&id, &b).unwrap();
        assert!(t.matrix().frobenius_dist(&b.matrix().conj()).unwrap() < 1e-14);
    }

    #[test]
    fn theta_scalar_oracle() {
        // (i) conj(e^{i pi}) (i) = (i)(-1)(i) = 1
        let a = scalar_point(Complex::I);
        let b = scalar_point(Complex::unit(std::f64::consts::PI));
        let t = theta_unitary(&a, &b).unwrap();
        assert!((t.matrix()[(0, 0)] - Complex::ONE).abs() < 1e-15);
    }

    #[test]
    fn theta_involution_fixes_its_own_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let r = unitary_to_involution(&random_lagrangian(2, &mut rng)).unwrap();
        let t = theta_involution(&r, &r).unwrap();
        assert!(t.matrix().sub(r.matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn theta_involution_preserves_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let r = unitary_to_involution(&random_lagrangian(3, &mut rng)).unwrap();
        let s = unitary_to_involution(&random_lagrangian(3, &mut rng)).unwrap();
        let t = theta_involution(&r, &s).unwrap();
        let tr = |m: &RealMatrix| (0..m.rows()).map(|k| m[(k, k)]).sum::<f64>();
        assert!((tr(t.matrix()) - tr(s.matrix())).abs() < 1e-12);
    }

    #[test]
    fn tau_converts_to_identity() {
        let n = 2;
        let mut tau = RealMatrix::identity(2 * n);
        for k in n..2 * n {
            tau[(k, k)] = -1.0;
        }
        let r = AntiSympInvolution::new(tau).unwrap();
        let a = involution_to_unitary(&r).unwrap();
        assert!(a.matrix().dist_from_identity() < 1e-15);
    }

    #[test]
    fn reflection_across_imaginary_axis_is_minus_one() {
        let mut m = RealMatrix::zeros(2, 2);
        m[(0, 0)] = -1.0;
        m[(1, 1)] = 1.0;
        let r = AntiSympInvolution::new(m).unwrap();
        let a = involution_to_unitary(&r).unwrap();
        assert!((a.matrix()[(0, 0)] - Complex::new(-1.0, 0.0)).abs() < 1e-15);
    }

    #[test]
    fn scalar_i_realifies_to_swap() {
        let a = scalar_point(Complex::I);
        let r = unitary_to_involution(&a).unwrap();
        let m = r.matrix();
        assert!((m[(0, 1)] - 1.0).abs() < 1e-15);
        assert!((m[(1, 0)] - 1.0).abs() < 1e-15);
        assert!(m[(0, 0)].abs() < 1e-15);
        assert!(m[(1, 1)].abs() < 1e-15);
    }

    #[test]
    fn conversions_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..20 {
            let a = random_lagrangian(3, &mut rng);
            let back = involution_to_unitary(&unitary_to_involution(&a).unwrap()).unwrap();
            assert!(back.dist(&a).unwrap() < 1e-12);
        }
    }

    #[test]
    fn swap_involution_fixes_the_diagonal_line() {
        let mut m = RealMatrix::zeros(2, 2);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = 1.0;
        let r = AntiSympInvolution::new(m).unwrap();
        let plane = plane_from_involution(&r).unwrap();
        let p = plane.projector();
        // Projector onto span{(1,1)/sqrt(2)} is the all-halves matrix.
        for i in 0..2 {
            for j in 0..2 {
                assert!((p[(i, j)] - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn plane_round_trips_through_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let r = unitary_to_involution(&random_lagrangian(3, &mut rng)).unwrap();
        let plane = plane_from_involution(&r).unwrap();
        let r2 = involution_from_plane(&plane).unwrap();
        assert!(r2.matrix().sub(r.matrix()).frobenius_norm() < 1e-10);
    }

    #[test]
    fn standard_frame_gives_tau() {
        let frame = RealMatrix::from_fn(2, 4, |i, j| if i == j { 1.0 } else { 0.0 });
        let plane = LagrangianPlane::new(frame).unwrap();
        let r = involution_from_plane(&plane).unwrap();
        let m = r.matrix();
        for k in 0..2 {
            assert_eq!(m[(k, k)], 1.0);
            assert_eq!(m[(k + 2, k + 2)], -1.0);
        }
    }

    #[test]
    fn first_slot_check_is_tiny() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let r0 = random_lagrangian(3, &mut rng);
        let s = random_lagrangian(3, &mut rng);
        assert!(first_slot_involution_check(&r0, &s).unwrap() < 1e-10);
        let id = SymmetricUnitary::identity(3);
        assert!(first_slot_involution_check(&id, &s).unwrap() < 1e-14);
    }

    #[test]
    fn generic_unitary_is_rejected() {
        // Unitary but not symmetric.
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let u = random_unitary(3, &mut rng);
        assert!(matches!(
            SymmetricUnitary::new(u),
            Err(Error::InvariantViolation { .. })
        ));
    }

    #[test]
    fn non_orthogonal_involution_is_rejected() {
        let m = RealMatrix::from_fn(2, 2, |i, j| if i == j { 2.0 } else { 0.0 });
        assert!(AntiSympInvolution::new(m).is_err());
    }

    #[test]
    fn random_lagrangian_is_deterministic() {
        let a = random_lagrangian(4, &mut ChaCha8Rng::seed_from_u64(77));
        let b = random_lagrangian(4, &mut ChaCha8Rng::seed_from_u64(77));
        assert_eq!(a.dist(&b).unwrap(), 0.0);
    }

    #[test]
    fn symplectic_form_is_anti_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let r = unitary_to_involution(&random_lagrangian(2, &mut rng)).unwrap();
        let j = standard_j(2);
        let lhs = r.matrix().transpose().mul(&j).mul(r.matrix());
        assert!(lhs.sub(&j.scale(-1.0)).frobenius_norm() < 1e-12);
    }
}
