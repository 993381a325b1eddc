//! Multistart root search for Θ₀(A) = id on the manifold itself: every
//! iterate stays a symmetric unitary because steps are taken through the
//! chart Q ↦ U e^{iQ} (conj U)^{−1}, Q real symmetric. The solver knows
//! nothing of the closed-form answer; agreement with the enumerated
//! preimages is the point of the exercise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::EpsSeq;
use crate::degree::{basepoint, enumerate_preimages, sym_from_coords, AngleSpec};
use crate::error::{Error, Result};
use crate::linalg::{expi_sym, lu_solve, orthonormalize, random_unitary, ComplexMatrix, RealMatrix};
use crate::models::SymmetricUnitary;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub spec: AngleSpec,
    pub starts: usize,
    pub max_iter: usize,
    pub residual_tol: f64,
    pub step_tol: f64,
    pub dedup_tol: f64,
    pub fd_step: f64,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(spec: AngleSpec) -> Self {
        Self {
            spec,
            starts: 500,
            max_iter: 50,
            residual_tol: 1e-10,
            step_tol: 1e-12,
            dedup_tol: 1e-6,
            fd_step: 1e-6,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("residual_tol", self.residual_tol),
            ("step_tol", self.step_tol),
            ("dedup_tol", self.dedup_tol),
            ("fd_step", self.fd_step),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if self.dedup_tol <= self.residual_tol {
            return Err(Error::InvalidConfig(format!(
                "dedup_tol {} must exceed residual_tol {}",
                self.dedup_tol, self.residual_tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// Step through the chart: A = U e^{iQ} (conj U)^{−1}, with the chart
/// recentered at u_new = U e^{iQ/2} so that A = u_new (conj u_new)^{−1}.
/// A drifted-off-unitary U is reorthonormalized and retried once.
pub fn retract(
    u: &ComplexMatrix,
    q: &RealMatrix,
) -> Result<(SymmetricUnitary, ComplexMatrix)> {
    match retract_once(u, q) {
        Ok(pair) => Ok(pair),
        Err(_) => {
            let fixed = orthonormalize(u)?;
            retract_once(&fixed, q)
        }
    }
}

fn retract_once(
    u: &ComplexMatrix,
    q: &RealMatrix,
) -> Result<(SymmetricUnitary, ComplexMatrix)> {
    let a_raw = u.mul(&expi_sym(q)?)?.mul(&u.conj().inverse()?)?;
    let a = SymmetricUnitary::with_tol(a_raw, 1e-10)?;
    let u_new = u.mul(&expi_sym(&q.scale(0.5))?)?;
    let rebuilt = u_new.mul(&u_new.conj().inverse()?)?;
    let chart_defect = rebuilt.frobenius_dist(a.matrix())?;
    if chart_defect > 1e-10 {
        return Err(Error::InvariantViolation {
            model: "chart",
            what: "recentering consistency",
            deviation: chart_defect,
            tol: 1e-10,
        });
    }
    Ok((a, u_new))
}

/// Re and Im of A conj(B) A − id, flattened row-major (all real parts,
/// then all imaginary parts). The euclidean norm of this vector equals the
/// Frobenius distance of Θ(A, B) from the identity.
pub fn residual_vector(a: &SymmetricUnitary, b: &SymmetricUnitary) -> Result<Vec<f64>> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    let theta = a.matrix().mul(&b.matrix().conj())?.mul(a.matrix())?;
    Ok(flatten_minus_id(&theta))
}

fn flatten_minus_id(theta: &ComplexMatrix) -> Vec<f64> {
    let n = theta.dim();
    let mut v = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            let sub = if i == j { 1.0 } else { 0.0 };
            v.push(theta[(i, j)].re - sub);
        }
    }
    for i in 0..n {
        for j in 0..n {
            v.push(theta[(i, j)].im);
        }
    }
    v
}

fn vec_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Residual of Θ₀ at the chart point Q around U; `u_ct` caches
/// (conj U)^{−1}.
fn residual_at(
    u: &ComplexMatrix,
    u_ct: &ComplexMatrix,
    q: &RealMatrix,
    b_conj: &ComplexMatrix,
) -> Result<Vec<f64>> {
    let a = u.mul(&expi_sym(q)?)?.mul(u_ct)?;
    let theta = a.mul(b_conj)?.mul(&a)?;
    Ok(flatten_minus_id(&theta))
}

#[derive(Clone, Debug)]
pub struct LocalSolve {
    pub solution: Option<SymmetricUnitary>,
    pub iterations: usize,
    pub residual: f64,
}

/// Damped Gauss-Newton from the point charted by u0. The Jacobian of the
/// residual with respect to the N = n(n+1)/2 chart coordinates is taken by
/// central finite differences; steps solve the normal equations and are
/// halved until the residual decreases.
pub fn local_solve(u0: &ComplexMatrix, config: &SearchConfig) -> Result<LocalSolve> {
    config.validate()?;
    let n = config.spec.n();
    if u0.dim() != n {
        return Err(Error::DimensionMismatch(u0.dim(), n));
    }
    let b_conj = basepoint(&config.spec).into_matrix().conj();
    let ncoords = n * (n + 1) / 2;
    let h = config.fd_step;
    let mut u = orthonormalize(u0)?;
    let mut last_residual = f64::INFINITY;

    for iter in 0..config.max_iter {
        let u_ct = u.conj().inverse()?;
        let zero = RealMatrix::zeros(n, n);
        let r = residual_at(&u, &u_ct, &zero, &b_conj)?;
        let rnorm = vec_norm(&r);
        last_residual = rnorm;

        let mut jac = RealMatrix::zeros(2 * n * n, ncoords);
        let mut coords = vec![0.0; ncoords];
        for col in 0..ncoords {
            coords[col] = h;
            let qp = sym_from_coords(n, &coords);
            coords[col] = -h;
            let qm = sym_from_coords(n, &coords);
            coords[col] = 0.0;
            let rp = residual_at(&u, &u_ct, &qp, &b_conj)?;
            let rm = residual_at(&u, &u_ct, &qm, &b_conj)?;
            let dcol: Vec<f64> = rp
                .iter()
                .zip(&rm)
                .map(|(p, m)| (p - m) / (2.0 * h))
                .collect();
            jac.set_column(col, &dcol);
        }

        let jt = jac.transpose();
        let jtj = jt.mul(&jac);
        let rhs: Vec<f64> = jt.apply(&r).iter().map(|x| -x).collect();
        let delta = match lu_solve(&jtj, &rhs) {
            Ok(d) => d,
            Err(_) => break,
        };
        let step = vec_norm(&delta);

        if rnorm < config.residual_tol && step < config.step_tol {
            let a = SymmetricUnitary::with_tol(u.mul(&u_ct)?, 1e-9)?;
            return Ok(LocalSolve {
                solution: Some(a),
                iterations: iter,
                residual: rnorm,
            });
        }

        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..20 {
            let scaled: Vec<f64> = delta.iter().map(|x| lambda * x).collect();
            let q = sym_from_coords(n, &scaled);
            let rt = residual_at(&u, &u_ct, &q, &b_conj)?;
            if vec_norm(&rt) < rnorm {
                let (_, u_next) = retract(&u, &q)?;
                u = u_next;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
        if (iter + 1) % 10 == 0 {
            u = orthonormalize(&u)?;
        }
    }

    Ok(LocalSolve {
        solution: None,
        iterations: config.max_iter,
        residual: last_residual,
    })
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Converged solutions, deduplicated, in discovery order.
    pub solutions: Vec<SymmetricUnitary>,
    /// For each solution, the ε of the closed-form preimage it matches, if
    /// any lies within dedup_tol.
    pub matched: Vec<Option<EpsSeq>>,
    /// Fraction of the 2^n closed-form preimages hit by some solution.
    pub coverage: f64,
    /// Solutions matching no closed-form preimage.
    pub strays: usize,
}

/// Run local_solve from `starts` random points and reconcile the converged
/// results with the closed-form preimage list. Per-start RNG streams make
/// the outcome independent of scheduling.
pub fn multistart(config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let n = config.spec.n();
    let solves: Vec<LocalSolve> = (0..config.starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let u0 = random_unitary(n, &mut rng);
            local_solve(&u0, config)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut solutions: Vec<SymmetricUnitary> = Vec::new();
    for s in solves.into_iter().filter_map(|s| s.solution) {
        let duplicate = solutions
            .iter()
            .any(|known| known.dist(&s).map(|d| d <= config.dedup_tol).unwrap_or(false));
        if !duplicate {
            solutions.push(s);
        }
    }

    let reference = enumerate_preimages(&config.spec);
    let mut matched: Vec<Option<EpsSeq>> = Vec::with_capacity(solutions.len());
    let mut hit = vec![false; reference.len()];
    for s in &solutions {
        let mut best: Option<(usize, f64)> = None;
        for (idx, (_, a)) in reference.iter().enumerate() {
            let d = s.dist(a)?;
            if best.map(|(_, bd)| d < bd).unwrap_or(true) {
                best = Some((idx, d));
            }
        }
        match best {
            Some((idx, d)) if d < config.dedup_tol => {
                hit[idx] = true;
                matched.push(Some(reference[idx].0.clone()));
            }
            _ => matched.push(None),
        }
    }
    let coverage = hit.iter().filter(|&&h| h).count() as f64 / reference.len() as f64;
    let strays = matched.iter().filter(|m| m.is_none()).count();

    Ok(SearchOutcome {
        solutions,
        matched,
        coverage,
        strays,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::chart_unitary;
    use crate::linalg::Complex;
    use std::f64::consts::PI;

    fn scalar_spec() -> AngleSpec {
        AngleSpec::new(vec![PI]).unwrap()
    }

    #[test]
    fn retract_with_zero_q_is_noop() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let u = random_unitary(3, &mut rng);
        let (a, u_new) = retract(&u, &RealMatrix::zeros(3, 3)).unwrap();
        let direct = u.mul(&u.conj().inverse().unwrap()).unwrap();
        assert!(a.matrix().frobenius_dist(&direct).unwrap() < 1e-13);
        assert!(u_new.frobenius_dist(&u).unwrap() < 1e-13);
    }

    #[test]
    fn retract_scalar_oracle() {
        // U = e^{i pi/4}, Q = (pi): A = e^{i pi/2} e^{i pi} = -i.
        let u = ComplexMatrix::from_diagonal(&[Complex::unit(PI / 4.0)]);
        let mut q = RealMatrix::zeros(1, 1);
        q[(0, 0)] = PI;
        let (a, _) = retract(&u, &q).unwrap();
        assert!((a.matrix()[(0, 0)] - Complex::new(0.0, -1.0)).abs() < 1e-14);
    }

    #[test]
    fn retract_outputs_stay_on_the_manifold() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let u = random_unitary(3, &mut rng);
            let g = crate::linalg::gaussian_vec(&mut rng, 6);
            let q = sym_from_coords(3, &g.iter().map(|x| 0.3 * x).collect::<Vec<_>>());
            let (a, u_new) = retract(&u, &q).unwrap();
            let rebuilt = u_new.mul(&u_new.conj().inverse().unwrap()).unwrap();
            assert!(rebuilt.frobenius_dist(a.matrix()).unwrap() < 1e-11);
        }
    }

    #[test]
    fn residual_vector_norm_matches_frobenius() {
        let spec = AngleSpec::default_angles(2);
        let b = basepoint(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let a = crate::models::random_lagrangian(2, &mut rng);
        let v = residual_vector(&a, &b).unwrap();
        let theta = a.matrix().mul(&b.matrix().conj()).unwrap().mul(a.matrix()).unwrap();
        assert!((vec_norm(&v) - theta.dist_from_identity()).abs() < 1e-13);
    }

    #[test]
    fn residual_vanishes_at_identity_pair() {
        let id = SymmetricUnitary::identity(2);
        let v = residual_vector(&id, &id).unwrap();
        assert!(vec_norm(&v) < 1e-15);
    }

    #[test]
    fn residual_vanishes_at_closed_form_preimages() {
        let spec = AngleSpec::default_angles(3);
        let b = basepoint(&spec);
        for (_, a) in enumerate_preimages(&spec) {
            assert!(vec_norm(&residual_vector(&a, &b).unwrap()) < 1e-11);
        }
    }

    #[test]
    fn solver_converges_instantly_at_a_solution() {
        let spec = AngleSpec::default_angles(3);
        let config = SearchConfig::new(spec.clone());
        let eps = EpsSeq::from_index(3, 5);
        let u = chart_unitary(&spec, &eps);
        let out = local_solve(&u, &config).unwrap();
        assert!(out.solution.is_some());
        assert!(out.iterations <= 1);
    }

    #[test]
    fn solver_recovers_from_a_small_perturbation() {
        let spec = AngleSpec::default_angles(3);
        let config = SearchConfig::new(spec.clone());
        let eps = EpsSeq::from_index(3, 2);
        let u = chart_unitary(&spec, &eps);
        let pre = enumerate_preimages(&spec);
        let target = &pre[2].1;
        let mut coords = vec![0.0; 6];
        coords[1] = 1e-3;
        coords[4] = -1e-3;
        let q = sym_from_coords(3, &coords);
        let (_, u_perturbed) = retract(&u, &q).unwrap();
        let out = local_solve(&u_perturbed, &config).unwrap();
        let sol = out.solution.expect("must converge from the basin");
        assert!(sol.dist(target).unwrap() < 1e-9);
        assert!(out.iterations <= 10);
    }

    #[test]
    fn scalar_multistart_finds_both_roots() {
        let mut config = SearchConfig::new(scalar_spec());
        config.starts = 40;
        config.seed = 7;
        let out = multistart(&config).unwrap();
        assert_eq!(out.solutions.len(), 2);
        assert_eq!(out.coverage, 1.0);
        assert_eq!(out.strays, 0);
        for s in &out.solutions {
            assert!(s.matrix()[(0, 0)].im.abs() > 0.99);
        }
    }

    #[test]
    fn zero_starts_is_an_empty_outcome() {
        let mut config = SearchConfig::new(scalar_spec());
        config.starts = 0;
        let out = multistart(&config).unwrap();
        assert!(out.solutions.is_empty());
        assert_eq!(out.coverage, 0.0);
        assert_eq!(out.strays, 0);
    }

    #[test]
    fn multistart_is_deterministic() {
        let mut config = SearchConfig::new(scalar_spec());
        config.starts = 10;
        config.seed = 99;
        let a = multistart(&config).unwrap();
        let b = multistart(&config).unwrap();
        assert_eq!(a.solutions.len(), b.solutions.len());
        for (x, y) in a.solutions.iter().zip(&b.solutions) {
            assert_eq!(x.dist(y).unwrap(), 0.0);
        }
    }

    #[test]
    fn config_validation_catches_inverted_tolerances() {
        let mut config = SearchConfig::new(scalar_spec());
        config.dedup_tol = 1e-12;
        assert!(matches!(
            config.validate(),
            Err(Error::InvalidConfig(_))
        ));
    }
}
