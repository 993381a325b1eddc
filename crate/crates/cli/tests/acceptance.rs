//! End-to-end acceptance gate. Each criterion prints exactly one
//! PASS/FAIL line (visible under --nocapture) and asserts it. Binary
//! invocations go through the compiled `lagamma` executable; numeric
//! follow-ups use the library directly.

use std::process::Command;
use std::time::Instant;

use lagrangian_gamma::combinatorics::lemma_report;
use lagrangian_gamma::degree::{degree_with_tol, enumerate_preimages, preimage_points, AngleSpec};
use lagrangian_gamma::io::SearchOutcomeJson;
use lagrangian_gamma::properties::run_suite;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run_bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lagamma"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
    )
}

fn report(criterion: &str, passed: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} ({detail})",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_degree_reproduction() {
    let start = Instant::now();
    let mut detail = String::new();
    let mut ok = true;
    for n in [1usize, 3, 5, 7, 9] {
        let expected = 1i64 << n.div_ceil(2);
        let (code, stdout) = run_bin(&["degree", "--n", &n.to_string(), "--json"]);
        let v: serde_json::Value = serde_json::from_str(&stdout).expect("degree JSON");
        let deg = v["degree"].as_i64().unwrap();
        let regular = v["all_regular"].as_bool().unwrap();
        let points = v["points"].as_array().unwrap().len();

        // Regularity at the pinned scale-relative threshold 1e-8.
        let strict = degree_with_tol(&AngleSpec::default_angles(n), 1e-8);

        let this = code == 0
            && deg == expected
            && regular
            && points == 1 << n
            && strict.map(|r| r.all_regular).unwrap_or(false);
        ok &= this;
        detail.push_str(&format!("n={n}:{deg} "));
    }
    let elapsed = start.elapsed().as_secs_f64();
    ok &= elapsed < 10.0;
    detail.push_str(&format!("({elapsed:.2}s < 10s)"));
    report("1 degree reproduction", ok, &detail);
}

#[test]
fn criterion_2_sign_path_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut cases = 0usize;
    let mut ok = true;
    for n in [1usize, 3, 5, 7, 9] {
        let mut specs = vec![AngleSpec::default_angles(n)];
        for _ in 0..5 {
            specs.push(AngleSpec::random(n, &mut rng));
        }
        for spec in &specs {
            // preimage_points itself errors on any sign disagreement; the
            // explicit comparison keeps the count honest.
            match preimage_points(spec) {
                Ok(points) => {
                    for p in &points {
                        ok &= p.sign_numeric == p.sign_analytic;
                        cases += 1;
                    }
                }
                Err(_) => ok = false,
            }
        }
    }
    let expected_cases = 6 * (2 + 8 + 32 + 128 + 512);
    ok &= cases == expected_cases;
    report(
        "2 sign-path agreement",
        ok,
        &format!("{cases}/{expected_cases} cases agree"),
    );
}

#[test]
fn criterion_3_preimage_residuals() {
    let mut worst = 0.0f64;
    for n in [1usize, 3, 5, 7, 9] {
        let points = preimage_points(&AngleSpec::default_angles(n)).expect("points");
        for p in &points {
            worst = worst.max(p.residual);
        }
    }
    let ok = worst < 1e-11;
    report(
        "3 preimage residuals",
        ok,
        &format!("max residual {worst:.3e} < 1e-11"),
    );
}

#[test]
fn criterion_4_lemma_triple_agreement() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for n in (1usize..=21).step_by(2) {
        let expected = 1i64 << n.div_ceil(2);
        match lemma_report(n) {
            Ok(r) => {
                ok &= r.d_brute == expected && r.d_rec == expected && r.d_closed == expected;
                if n == 21 {
                    detail.push_str(&format!(
                        "n=21: {}/{}/{} ",
                        r.d_brute, r.d_rec, r.d_closed
                    ));
                }
            }
            Err(_) => ok = false,
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ok &= elapsed < 30.0;
    detail.push_str(&format!("({elapsed:.2}s < 30s)"));
    report("4 lemma triple agreement", ok, &detail);
}

#[test]
fn criterion_5_empirical_uniqueness() {
    let mut ok = true;
    let mut detail = String::new();
    for (n, starts, expected) in [(1usize, "100", 2usize), (3, "500", 8)] {
        let (code, stdout) = run_bin(&[
            "search",
            "--n",
            &n.to_string(),
            "--starts",
            starts,
            "--seed",
            "7",
            "--json",
        ]);
        let outcome: SearchOutcomeJson = serde_json::from_str(&stdout).expect("search JSON");
        let preimages = enumerate_preimages(&AngleSpec::default_angles(n));
        let mut max_min_dist = 0.0f64;
        for sol in &outcome.solutions {
            let m = sol.to_matrix().expect("solution matrix");
            let nearest = preimages
                .iter()
                .map(|(_, a)| m.frobenius_dist(a.matrix()).unwrap())
                .fold(f64::INFINITY, f64::min);
            max_min_dist = max_min_dist.max(nearest);
        }
        let this = code == 0
            && outcome.solutions.len() == expected
            && outcome.coverage == 1.0
            && outcome.strays == 0
            && max_min_dist < 1e-8;
        ok &= this;
        detail.push_str(&format!(
            "n={n}: {} solutions, worst match {max_min_dist:.2e}; ",
            outcome.solutions.len()
        ));
    }
    report("5 empirical uniqueness", ok, detail.trim_end_matches("; "));
}

#[test]
fn criterion_6_randomized_property_suite() {
    // Named tolerances are pinned; a suite that silently loosened one
    // would fail here even if every check reported passed.
    let pinned: &[(&str, f64)] = &[
        ("theta_closure", 1e-9),
        ("model_equivalence", 1e-9),
        ("first_slot_involution", 1e-9),
        ("conversion_round_trips", 1e-10),
        ("gamma_matches_theta", 1e-10),
        ("framework_closure", 1e-9),
        ("k_invariance", 0.0),
    ];
    let mut ok = true;
    let mut checked = 0usize;
    for n in [1usize, 2, 3, 5] {
        let checks = run_suite(n, 1000, 42).expect("suite runs");
        for (name, tol) in pinned {
            let c = checks
                .iter()
                .find(|c| c.name == *name)
                .unwrap_or_else(|| panic!("check {name} missing at n={n}"));
            ok &= c.passed && c.tolerance == *tol && c.trials == 1000;
            checked += 1;
        }
        let spectrum = checks
            .iter()
            .find(|c| c.name == "k_spectrum")
            .expect("k_spectrum present");
        ok &= spectrum.passed && spectrum.trials == 100;
        if let Some(deg) = checks.iter().find(|c| c.name == "degree_consistency") {
            ok &= deg.passed;
        } else {
            ok &= n % 2 == 0;
        }
    }
    report(
        "6 randomized property suite",
        ok,
        &format!("{checked} pinned checks at 1000 trials, n in {{1,2,3,5}}"),
    );
}

#[test]
fn criterion_7_basepoint_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ok = true;
    let mut detail = String::new();
    for n in [3usize, 5] {
        let sums: Vec<i64> = (0..10)
            .map(|_| {
                let spec = AngleSpec::random(n, &mut rng);
                degree_with_tol(&spec, 1e-12)
                    .map(|r| r.degree_signed_sum)
                    .unwrap_or(i64::MIN)
            })
            .collect();
        let first = sums[0];
        ok &= first != i64::MIN && sums.iter().all(|&s| s == first);
        detail.push_str(&format!("n={n}: 10 specs -> {first}; "));
    }
    report("7 basepoint independence", ok, detail.trim_end_matches("; "));
}
