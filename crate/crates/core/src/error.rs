use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not symmetric (deviation {0:.3e})")]
    NotSymmetric(f64),

    #[error("Jacobi eigensolver did not converge")]
    NoConvergence,

    #[error("matrix is numerically singular")]
    Singular,

    #[error("{model}: {what} deviates by {deviation:.3e} (tolerance {tol:.3e})")]
    InvariantViolation {
        model: &'static str,
        what: &'static str,
        deviation: f64,
        tol: f64,
    },

    #[error("invalid angles: {0}")]
    InvalidAngles(String),

    #[error("bit sequences may contain only 0 and 1")]
    InvalidBits,

    #[error("degree undefined: the Lagrangian Grassmannian is non-orientable for even n = {0}")]
    EvenDimension(usize),

    #[error("brute-force budget exceeded: n = {n} > {limit}")]
    BruteBudget { n: usize, limit: usize },

    #[error("integer width exceeded: n = {n} > {limit}")]
    WidthExceeded { n: usize, limit: usize },

    #[error("non-regular point at eps {eps:?}: |det| below pivot threshold")]
    NonRegularPoint { eps: Vec<u8> },

    #[error("sign mismatch at eps {eps:?}: numeric {numeric} vs analytic {analytic}")]
    SignMismatch {
        eps: Vec<u8>,
        numeric: i8,
        analytic: i8,
    },

    #[error("signed sum {got} differs from closed form {expected}")]
    DegreeMismatch { got: i64, expected: i64 },

    #[error("count routes disagree: brute {brute}, recursion {recursion}, closed {closed}")]
    CountMismatch {
        brute: i64,
        recursion: i64,
        closed: i64,
    },

    #[error("cosine factor {value:.3e} within {tol:.1e} of zero; angle spec too degenerate")]
    DegenerateFactor { value: f64, tol: f64 },

    #[error("linearization paths disagree by {0:.3e}")]
    LinearizationMismatch(f64),

    #[error("fixed plane has dimension {got}, expected {expected}")]
    PlaneDimension { got: usize, expected: usize },

    #[error("composition with conjugation is not complex-linear (deviation {0:.3e})")]
    NotComplexLinear(f64),

    #[error("trace {0} is not near an integer of the required parity")]
    TraceNotIntegral(f64),

    #[error("samples mix groups, anti-isomorphisms, or dimensions")]
    MixedSamples,

    #[error("invalid search config: {0}")]
    InvalidConfig(String),

    #[error("unexpected model tag: expected {expected}, found {found}")]
    ModelMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
