//! Batch front end. Every subcommand reads flags, computes, prints, and
//! exits: 0 on success, 1 when a verification disagrees, 2 on input or
//! scope errors. Output is deterministic for fixed flags and seed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lagrangian_gamma::combinatorics::{d_brute, d_closed, d_recursion, lemma_report};
use lagrangian_gamma::degree::{degree, preimage_points, AngleSpec, PreimagePoint};
use lagrangian_gamma::gamma::{
    component_spectrum, fix_closure_check, random_inverse_orthogonal, random_transpose_unitary,
    su2_fix_point, AntiIso, GroupKind,
};
use lagrangian_gamma::io::{
    read_model_file, to_json_string, DegreeReportJson, LemmaReportJson, MatrixJson, ModelFile,
    SearchOutcomeJson,
};
use lagrangian_gamma::models::{theta_involution, theta_unitary};
use lagrangian_gamma::properties::run_suite;
use lagrangian_gamma::search::{multistart, SearchConfig};
use lagrangian_gamma::Error;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DEFAULT_SEED: u64 = 42;

const EXIT_OK: u8 = 0;
const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "lagamma",
    version,
    about = "Degree computations on the Lagrangian Grassmannian",
    long_about = "Computes the mapping degree of the basepoint self-map A -> A conj(B0) A \
three independent ways (closed-form preimages with Jacobian signs, a counting recursion, \
and multistart root search), converts between Grassmannian models, and runs randomized \
invariant checks."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Signed preimage count of the basepoint self-map at odd n
    Degree {
        /// Matrix dimension (odd)
        #[arg(long)]
        n: usize,
        /// Basepoint angles as a comma-separated list, strictly increasing in (0, 2pi)
        #[arg(long)]
        angles: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the 2^n closed-form preimages with residuals and signs
    Preimages {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        angles: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Count the signed epsilon sequences three ways
    Lemma {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// Recover the preimages by multistart Gauss-Newton on the manifold
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 500)]
        starts: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run the randomized property suite
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also validate a stored model file before the suite
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Multiply two stored points: Theta(A, B) in the declared model
    Product {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long, value_enum, default_value_t = ModelArg::Unitary)]
        model: ModelArg,
    },
    /// Demonstrations of the fixed-point framework beyond the Grassmannian
    Framework {
        #[arg(long, value_enum)]
        demo: Demo,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Recursion,
    Closed,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Unitary,
    Involution,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Grassmannian,
    Su2,
    Closure,
}

// Rust ignores SIGPIPE by default, so `lagamma ... | head` would panic on
// the closed pipe instead of exiting like other line-oriented tools.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_INPUT);
    }
    let code = match Cli::parse().command {
        Command::Degree { n, angles, json } => cmd_degree(n, angles.as_deref(), json),
        Command::Preimages { n, angles, json } => cmd_preimages(n, angles.as_deref(), json),
        Command::Lemma { n, method, json } => cmd_lemma(n, method, json),
        Command::Search {
            n,
            starts,
            seed,
            json,
        } => cmd_search(n, starts, seed, json),
        Command::Verify {
            n,
            trials,
            seed,
            input,
            json,
        } => cmd_verify(n, trials, seed, input.as_deref(), json),
        Command::Product {
            file_a,
            file_b,
            model,
        } => cmd_product(&file_a, &file_b, model),
        Command::Framework { demo, n, seed, json } => cmd_framework(demo, n, seed, json),
    };
    ExitCode::from(code)
}

/// LAGAMMA_THREADS caps the rayon pool; it changes speed only, never output.
fn configure_threads() -> Result<(), String> {
    let raw = match std::env::var("LAGAMMA_THREADS") {
        Ok(v) => v,
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(e) => return Err(format!("LAGAMMA_THREADS: {e}")),
    };
    let k: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("LAGAMMA_THREADS must be a positive integer, got {raw:?}"))?;
    if k == 0 {
        return Err("LAGAMMA_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| e.to_string())
}

fn input_error(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_INPUT
}

/// Errors raised after inputs validated: disagreements exit 1, everything
/// else is an input or scope problem.
fn computation_error(e: &Error) -> u8 {
    let code = match e {
        Error::DegreeMismatch { .. }
        | Error::CountMismatch { .. }
        | Error::SignMismatch { .. }
        | Error::NonRegularPoint { .. }
        | Error::InvariantViolation { .. }
        | Error::DegenerateFactor { .. }
        | Error::LinearizationMismatch(_)
        | Error::NoConvergence => EXIT_VERIFY,
        _ => EXIT_INPUT,
    };
    eprintln!("error: {e}");
    code
}

fn parse_spec(n: usize, angles: Option<&str>) -> Result<AngleSpec, String> {
    if n == 0 {
        return Err("n must be at least 1".into());
    }
    let Some(csv) = angles else {
        return Ok(AngleSpec::default_angles(n));
    };
    let thetas = csv
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| format!("malformed angle list: {e}"))?;
    if thetas.len() != n {
        return Err(format!("expected {n} angles, got {}", thetas.len()));
    }
    AngleSpec::new(thetas).map_err(|e| e.to_string())
}

fn eps_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| char::from(b'0' + b)).collect()
}

fn sign_char(s: i8) -> char {
    if s >= 0 {
        '+'
    } else {
        '-'
    }
}

fn print_json<T: Serialize>(value: &T) -> u8 {
    match to_json_string(value) {
        Ok(s) => {
            println!("{s}");
            EXIT_OK
        }
        Err(e) => input_error(e),
    }
}

fn cmd_degree(n: usize, angles: Option<&str>, json: bool) -> u8 {
    if n.is_multiple_of(2) {
        return input_error(format!(
            "n = {n} is even: the preimage orientations cancel pairwise only up to sign \
conventions that need odd n, so no degree is defined; use an odd n"
        ));
    }
    let spec = match parse_spec(n, angles) {
        Ok(s) => s,
        Err(m) => return input_error(m),
    };
    let report = match degree(&spec) {
        Ok(r) => r,
        Err(e) => return computation_error(&e),
    };
    if json {
        return print_json(&DegreeReportJson::from(&report));
    }
    println!("n = {}  m = {}", report.n, report.m);
    println!("closed form 2^(m+1) = {}", report.degree_closed_form);
    println!("signed sum          = {}", report.degree_signed_sum);
    println!(
        "points: {} of {} regular",
        report.points.iter().filter(|p| p.sign_numeric != 0).count(),
        report.points.len()
    );
    println!();
    print_point_table(&report.points);
    EXIT_OK
}

fn print_point_table(points: &[PreimagePoint]) {
    let width = points
        .first()
        .map(|p| p.eps.len().max(3))
        .unwrap_or(3);
    println!(
        "{:>w$}  {:>4}  {:>4}  {:>12}  {:>12}",
        "eps",
        "num",
        "ana",
        "residual",
        "log|det|",
        w = width
    );
    for p in points {
        println!(
            "{:>w$}  {:>4}  {:>4}  {:>12.3e}  {:>12.6}",
            eps_string(p.eps.bits()),
            sign_char(p.sign_numeric),
            sign_char(p.sign_analytic),
            p.residual,
            p.log_abs_det,
            w = width
        );
    }
}

#[derive(Serialize)]
struct PreimagesJson {
    n: usize,
    points: Vec<PreimageEntryJson>,
}

#[derive(Serialize)]
struct PreimageEntryJson {
    eps: Vec<u8>,
    sign_numeric: i8,
    sign_analytic: i8,
    residual: f64,
    matrix: MatrixJson,
}

fn cmd_preimages(n: usize, angles: Option<&str>, json: bool) -> u8 {
    let spec = match parse_spec(n, angles) {
        Ok(s) => s,
        Err(m) => return input_error(m),
    };
    let points = match preimage_points(&spec) {
        Ok(p) => p,
        Err(e) => return computation_error(&e),
    };
    if json {
        let out = PreimagesJson {
            n,
            points: points
                .iter()
                .map(|p| PreimageEntryJson {
                    eps: p.eps.bits().to_vec(),
                    sign_numeric: p.sign_numeric,
                    sign_analytic: p.sign_analytic,
                    residual: p.residual,
                    matrix: MatrixJson::from_matrix(p.a_eps.matrix()),
                })
                .collect(),
        };
        return print_json(&out);
    }
    println!("{} preimages of the basepoint at n = {n}", points.len());
    println!();
    print_point_table(&points);
    println!();
    println!("diagonal phases (radians):");
    for p in &points {
        let phases: Vec<String> = (0..n)
            .map(|k| {
                let z = p.a_eps.matrix()[(k, k)];
                format!("{:>9.6}", z.im.atan2(z.re))
            })
            .collect();
        println!("{:>w$}  {}", eps_string(p.eps.bits()), phases.join(" "), w = n.max(3));
    }
    EXIT_OK
}

#[derive(Serialize)]
struct LemmaSingleJson {
    n: usize,
    method: &'static str,
    value: i64,
    in_closed_form_scope: bool,
}

fn cmd_lemma(n: usize, method: Method, json: bool) -> u8 {
    if n == 0 {
        return input_error("n must be at least 1");
    }
    let scope_note = n.is_multiple_of(2);
    let single = |name: &'static str, result: Result<i64, Error>| -> u8 {
        let value = match result {
            Ok(v) => v,
            Err(e) => return computation_error(&e),
        };
        if json {
            return print_json(&LemmaSingleJson {
                n,
                method: name,
                value,
                in_closed_form_scope: !scope_note,
            });
        }
        println!("n = {n}  method = {name}  signed count = {value}");
        if scope_note {
            println!(
                "note: even n lies outside the closed-form statement; raw signed count only"
            );
        }
        EXIT_OK
    };
    match method {
        Method::Brute => single("brute", d_brute(n)),
        Method::Recursion => single("recursion", d_recursion(n)),
        Method::Closed => single("closed", d_closed(n)),
        Method::All => {
            let report = match lemma_report(n) {
                Ok(r) => r,
                Err(e) => return computation_error(&e),
            };
            if json {
                return print_json(&LemmaReportJson::from(&report));
            }
            println!("n = {n}");
            println!("{:>12}  {:>12}", "method", "signed count");
            println!("{:>12}  {:>12}", "brute", report.d_brute);
            println!("{:>12}  {:>12}", "recursion", report.d_rec);
            println!("{:>12}  {:>12}", "closed", report.d_closed);
            println!();
            println!("{:>4}  {:>20}  {:>20}", "k", "M_k", "P_k");
            for k in 1..=n {
                println!(
                    "{:>4}  {:>20}  {:>20}",
                    k,
                    report.m[k - 1],
                    report.p[k - 1]
                );
            }
            EXIT_OK
        }
    }
}

fn cmd_search(n: usize, starts: usize, seed: u64, json: bool) -> u8 {
    let spec = match parse_spec(n, None) {
        Ok(s) => s,
        Err(m) => return input_error(m),
    };
    let mut config = SearchConfig::new(spec);
    config.starts = starts;
    config.seed = seed;
    if let Err(e) = config.validate() {
        return input_error(e);
    }
    let outcome = match multistart(&config) {
        Ok(o) => o,
        Err(e) => return computation_error(&e),
    };
    let ok = outcome.coverage == 1.0 && outcome.strays == 0;
    if json {
        let code = print_json(&SearchOutcomeJson::from(&outcome));
        if code != EXIT_OK {
            return code;
        }
    } else {
        println!(
            "starts = {starts}  seed = {seed}  solutions = {}",
            outcome.solutions.len()
        );
        println!("coverage = {:.4}  strays = {}", outcome.coverage, outcome.strays);
        println!();
        println!("{:>4}  {:>width$}", "sol", "matches", width = n.max(7));
        for (i, m) in outcome.matched.iter().enumerate() {
            let label = match m {
                Some(eps) => eps_string(eps.bits()),
                None => "stray".into(),
            };
            println!("{:>4}  {:>width$}", i, label, width = n.max(7));
        }
    }
    if ok {
        EXIT_OK
    } else {
        eprintln!(
            "verification failed: coverage {:.4} with {} strays",
            outcome.coverage, outcome.strays
        );
        EXIT_VERIFY
    }
}

fn cmd_verify(n: usize, trials: usize, seed: u64, input: Option<&std::path::Path>, json: bool) -> u8 {
    if n == 0 {
        return input_error("n must be at least 1");
    }
    if let Some(path) = input {
        let file = match read_model_file(path) {
            Ok(f) => f,
            Err(e) => return input_error(format!("{}: {e}", path.display())),
        };
        let name = file.model_name();
        let dim = if name == "symmetric_unitary" {
            file.into_unitary().map(|a| a.n())
        } else {
            file.into_involution().map(|r| r.n())
        };
        match dim {
            Ok(d) => {
                if !json {
                    println!("input ok: {name} model, n = {d}");
                }
            }
            Err(e) => return input_error(format!("{}: {e}", path.display())),
        }
    }
    let checks = match run_suite(n, trials, seed) {
        Ok(c) => c,
        Err(e) => return computation_error(&e),
    };
    let all_passed = checks.iter().all(|c| c.passed);
    if json {
        let code = print_json(&checks);
        if code != EXIT_OK {
            return code;
        }
    } else {
        println!(
            "{:<26}  {:>7}  {:>12}  {:>9}  {:>6}",
            "property", "trials", "max dev", "tol", "result"
        );
        for c in &checks {
            println!(
                "{:<26}  {:>7}  {:>12.3e}  {:>9.1e}  {:>6}",
                c.name,
                c.trials,
                c.max_deviation,
                c.tolerance,
                if c.passed { "pass" } else { "FAIL" }
            );
        }
    }
    if all_passed {
        EXIT_OK
    } else {
        eprintln!("verification failed: some properties exceeded tolerance");
        EXIT_VERIFY
    }
}

fn cmd_product(file_a: &std::path::Path, file_b: &std::path::Path, model: ModelArg) -> u8 {
    let load = |path: &std::path::Path| -> Result<ModelFile, String> {
        read_model_file(path).map_err(|e| format!("{}: {e}", path.display()))
    };
    let (fa, fb) = match (load(file_a), load(file_b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(m), _) | (_, Err(m)) => return input_error(m),
    };
    let out = match model {
        ModelArg::Unitary => {
            let a = match fa.into_unitary() {
                Ok(a) => a,
                Err(e) => return input_error(format!("{}: {e}", file_a.display())),
            };
            let b = match fb.into_unitary() {
                Ok(b) => b,
                Err(e) => return input_error(format!("{}: {e}", file_b.display())),
            };
            match theta_unitary(&a, &b) {
                Ok(t) => ModelFile::from_unitary(&t),
                Err(e) => return computation_error(&e),
            }
        }
        ModelArg::Involution => {
            let r = match fa.into_involution() {
                Ok(r) => r,
                Err(e) => return input_error(format!("{}: {e}", file_a.display())),
            };
            let s = match fb.into_involution() {
                Ok(s) => s,
                Err(e) => return input_error(format!("{}: {e}", file_b.display())),
            };
            match theta_involution(&r, &s) {
                Ok(t) => ModelFile::from_involution(&t),
                Err(e) => return computation_error(&e),
            }
        }
    };
    print_json(&out)
}

#[derive(Serialize)]
struct ClosureJson {
    n: usize,
    pairs: usize,
    transpose_deviation: f64,
    inverse_deviation: f64,
    tolerance: f64,
}

#[derive(Serialize)]
struct SpectrumJson {
    n: usize,
    samples: usize,
    counts: Vec<usize>,
    distinct: usize,
}

#[derive(Serialize)]
struct Su2Json {
    points: Vec<Su2PointJson>,
    tolerance: f64,
}

#[derive(Serialize)]
struct Su2PointJson {
    point: [f64; 3],
    membership_deviation: f64,
    symmetry_deviation: f64,
}

fn cmd_framework(demo: Demo, n: usize, seed: u64, json: bool) -> u8 {
    if n == 0 {
        return input_error("n must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match demo {
        Demo::Closure => {
            let pairs = 50;
            let transpose: Vec<_> = (0..pairs)
                .map(|_| {
                    (
                        random_transpose_unitary(n, &mut rng),
                        random_transpose_unitary(n, &mut rng),
                    )
                })
                .collect();
            let inverse: Vec<_> = (0..pairs)
                .map(|_| {
                    (
                        random_inverse_orthogonal(n, &mut rng),
                        random_inverse_orthogonal(n, &mut rng),
                    )
                })
                .collect();
            let (dev_t, dev_i) = match (fix_closure_check(&transpose), fix_closure_check(&inverse))
            {
                (Ok(t), Ok(i)) => (t, i),
                (Err(e), _) | (_, Err(e)) => return computation_error(&e),
            };
            let tol = 1e-9;
            let ok = dev_t < tol && dev_i < tol;
            if json {
                let code = print_json(&ClosureJson {
                    n,
                    pairs,
                    transpose_deviation: dev_t,
                    inverse_deviation: dev_i,
                    tolerance: tol,
                });
                if code != EXIT_OK {
                    return code;
                }
            } else {
                println!("fixed-point closure of (g, h) -> g h^(-1) g at n = {n}, {pairs} pairs each");
                println!("transpose on U(n):   max deviation {dev_t:.3e}");
                println!("inverse on O(n):     max deviation {dev_i:.3e}");
            }
            if ok {
                EXIT_OK
            } else {
                eprintln!("verification failed: closure deviation exceeds {tol:.1e}");
                EXIT_VERIFY
            }
        }
        Demo::Grassmannian => {
            let samples = 100;
            let ks = match component_spectrum(n, samples, &mut rng) {
                Ok(ks) => ks,
                Err(e) => return computation_error(&e),
            };
            let mut counts = vec![0usize; n + 1];
            for &k in &ks {
                counts[k] += 1;
            }
            let distinct = counts.iter().filter(|&&c| c > 0).count();
            if json {
                let code = print_json(&SpectrumJson {
                    n,
                    samples,
                    counts,
                    distinct,
                });
                if code != EXIT_OK {
                    return code;
                }
            } else {
                println!(
                    "component labels of {samples} random symmetric orthogonal involutions, n = {n}"
                );
                println!("{:>4}  {:>8}", "k", "count");
                for (k, &c) in counts.iter().enumerate() {
                    println!("{:>4}  {:>8}", k, c);
                }
                println!("distinct components seen: {distinct}");
            }
            if distinct >= 2 {
                EXIT_OK
            } else {
                eprintln!("verification failed: expected at least 2 distinct components");
                EXIT_VERIFY
            }
        }
        Demo::Su2 => {
            let mut points = vec![
                [1.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0],
            ];
            let g = lagrangian_gamma::linalg::gaussian_vec(&mut rng, 3);
            let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
            points.push([g[0] / norm, g[1] / norm, g[2] / norm]);
            let tol = 1e-9;
            let mut rows = Vec::new();
            let mut worst = 0.0f64;
            for p in &points {
                let m = match su2_fix_point(*p) {
                    Ok(m) => m,
                    Err(e) => return computation_error(&e),
                };
                let membership = GroupKind::SpecialUnitary.membership_defect(&m);
                let symmetry = match AntiIso::Transpose.apply(&m).and_then(|t| t.frobenius_dist(&m))
                {
                    Ok(d) => d,
                    Err(e) => return computation_error(&e),
                };
                worst = worst.max(membership).max(symmetry);
                rows.push(Su2PointJson {
                    point: *p,
                    membership_deviation: membership,
                    symmetry_deviation: symmetry,
                });
            }
            if json {
                let code = print_json(&Su2Json {
                    points: rows,
                    tolerance: tol,
                });
                if code != EXIT_OK {
                    return code;
                }
            } else {
                println!("symmetric SU(2) points from the unit sphere");
                println!(
                    "{:>24}  {:>12}  {:>12}",
                    "point", "SU(2) dev", "symmetry dev"
                );
                for r in &rows {
                    println!(
                        "({:>6.3}, {:>6.3}, {:>6.3})  {:>12.3e}  {:>12.3e}",
                        r.point[0], r.point[1], r.point[2], r.membership_deviation, r.symmetry_deviation
                    );
                }
            }
            if worst < tol {
                EXIT_OK
            } else {
                eprintln!("verification failed: sphere embedding deviation {worst:.3e}");
                EXIT_VERIFY
            }
        }
    }
}
