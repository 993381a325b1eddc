//! Randomized invariant checks over the whole public surface. Fast paths
//! are cross-checked against naive oracles; counting identities are
//! checked exhaustively in the ranges a test budget allows.

use lagrangian_gamma::combinatorics::{
    d_brute, d_closed, d_recursion, m_brute, mp_recursion, p_brute, pa, sigma, EpsSeq,
};
use lagrangian_gamma::degree::{degree, sym_coords, sym_from_coords, AngleSpec};
use lagrangian_gamma::io::{to_json_string, ModelFile};
use lagrangian_gamma::linalg::{
    det_sign_lu, expi_sym, gaussian_vec, random_unitary, RealMatrix,
};
use lagrangian_gamma::models::{
    involution_from_plane, involution_to_unitary, plane_from_involution, random_lagrangian,
    theta_involution, theta_unitary, unitary_to_involution,
};
use lagrangian_gamma::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_symmetric(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> RealMatrix {
    let g = gaussian_vec(rng, n * n);
    let mut s = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = scale * 0.5 * (g[i * n + j] + g[j * n + i]);
        }
    }
    s
}

proptest! {
    // The running-zeros pass must agree with the literal pair count.
    #[test]
    fn sigma_matches_pair_loop(bits in prop::collection::vec(0u8..2, 1..=64)) {
        let eps = EpsSeq::new(bits.clone()).unwrap();
        let (count, parity) = sigma(&eps);
        let mut naive = 0u64;
        for j in 0..bits.len() {
            for k in j + 1..bits.len() {
                if bits[j] == 0 && bits[k] == 1 {
                    naive += 1;
                }
            }
        }
        prop_assert_eq!(count, naive);
        prop_assert_eq!(parity as u64, naive % 2);
        let ones = bits.iter().filter(|&&b| b == 1).count() as u8;
        prop_assert_eq!(pa(&eps), ones % 2);
    }

    #[test]
    fn eps_index_round_trips(n in 1usize..=20, raw in any::<u64>()) {
        let index = raw % (1u64 << n);
        let eps = EpsSeq::from_index(n, index);
        let recovered = eps
            .bits()
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
        prop_assert_eq!(recovered, index);
        prop_assert_eq!(eps.len(), n);
    }

    // LU sign against the exact cofactor expansion on small integer
    // matrices, where both sides are computed without rounding.
    #[test]
    fn lu_sign_matches_cofactor(entries in prop::array::uniform9(-3i64..=3)) {
        let exact = entries[0] * (entries[4] * entries[8] - entries[5] * entries[7])
            - entries[1] * (entries[3] * entries[8] - entries[5] * entries[6])
            + entries[2] * (entries[3] * entries[7] - entries[4] * entries[6]);
        let m = RealMatrix::from_fn(3, 3, |i, j| entries[i * 3 + j] as f64);
        let (sign, log_abs) = det_sign_lu(&m);
        prop_assert_eq!(sign as i64, exact.signum());
        if exact != 0 {
            prop_assert!((log_abs - (exact.abs() as f64).ln()).abs() < 1e-9);
        }
    }

    // Orthonormal coordinates on symmetric matrices: exact inverse pair
    // and an isometry onto the Frobenius norm.
    #[test]
    fn sym_coords_round_trip_isometry(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_symmetric(n, 1.0, &mut rng);
        let v = sym_coords(&s);
        prop_assert_eq!(v.len(), n * (n + 1) / 2);
        let back = sym_from_coords(n, &v);
        prop_assert!(back.sub(&s).frobenius_norm() < 1e-14);
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((vnorm - s.frobenius_norm()).abs() < 1e-12);
    }

    #[test]
    fn random_unitary_has_unit_determinant_modulus(n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unitary(n, &mut rng);
        prop_assert!(u.mul(&u.adjoint()).unwrap().dist_from_identity() < 1e-12);
        let (sign, log_abs) = det_sign_lu(&u.realify());
        prop_assert_eq!(sign, 1);
        prop_assert!(log_abs.abs() < 1e-9);
    }

    #[test]
    fn expi_of_opposite_arguments_invert(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_symmetric(n, 2.0, &mut rng);
        let e = expi_sym(&q).unwrap();
        let e_neg = expi_sym(&q.scale(-1.0)).unwrap();
        prop_assert!(e.mul(&e_neg).unwrap().dist_from_identity() < 1e-11);
        prop_assert!(e.sub(&e.transpose()).unwrap().frobenius_norm() < 1e-11);
    }

    // The product computed in the unitary model and pushed through the
    // involution model must land on the same point.
    #[test]
    fn product_agrees_across_models(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_lagrangian(n, &mut rng);
        let b = random_lagrangian(n, &mut rng);
        let t_unitary = theta_unitary(&a, &b).unwrap();
        let r = unitary_to_involution(&a).unwrap();
        let s = unitary_to_involution(&b).unwrap();
        let t_involution = involution_to_unitary(&theta_involution(&r, &s).unwrap()).unwrap();
        prop_assert!(t_unitary.dist(&t_involution).unwrap() < 1e-9);
    }

    #[test]
    fn model_conversions_round_trip(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_lagrangian(n, &mut rng);
        let r = unitary_to_involution(&a).unwrap();
        prop_assert!(involution_to_unitary(&r).unwrap().dist(&a).unwrap() < 1e-12);
        let plane = plane_from_involution(&r).unwrap();
        let r2 = involution_from_plane(&plane).unwrap();
        prop_assert!(r2.matrix().sub(r.matrix()).frobenius_norm() < 1e-9);
    }

    #[test]
    fn model_files_round_trip(n in 1usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_lagrangian(n, &mut rng);
        let json = to_json_string(&ModelFile::from_unitary(&a)).unwrap();
        let back: ModelFile = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.into_unitary().unwrap().dist(&a).unwrap(), 0.0);
    }
}

#[test]
fn counting_routes_agree_exhaustively() {
    for n in 1..=15 {
        let (m, p) = mp_recursion(n).unwrap();
        assert_eq!(m[n - 1], m_brute(n).unwrap(), "M at n={n}");
        assert_eq!(p[n - 1], p_brute(n).unwrap(), "P at n={n}");
    }
    for n in (1..=19).step_by(2) {
        let brute = d_brute(n).unwrap();
        assert_eq!(brute, d_recursion(n).unwrap(), "recursion at n={n}");
        assert_eq!(brute, d_closed(n).unwrap(), "closed form at n={n}");
    }
}

#[test]
fn signed_sum_is_twice_evens_minus_total() {
    let (m, _) = mp_recursion(25).unwrap();
    for n in 1..=25usize {
        let signed = 2 * m[n - 1] as i64 - (1i64 << n);
        assert_eq!(signed, d_recursion(n).unwrap(), "identity at n={n}");
        if n % 2 == 1 {
            assert_eq!(signed, d_closed(n).unwrap());
        }
    }
}

#[test]
fn even_dimensions_are_out_of_scope() {
    for n in [2usize, 4, 6] {
        assert!(matches!(d_closed(n), Err(Error::EvenDimension(_))));
        assert!(matches!(
            degree(&AngleSpec::default_angles(n)),
            Err(Error::EvenDimension(_))
        ));
    }
}

#[test]
fn degree_is_independent_of_the_basepoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [1usize, 3, 5] {
        let expected = d_closed(n).unwrap();
        for _ in 0..3 {
            let spec = AngleSpec::random(n, &mut rng);
            let report = degree(&spec).unwrap();
            assert_eq!(report.degree_signed_sum, expected);
            assert!(report.all_regular);
        }
    }
}
