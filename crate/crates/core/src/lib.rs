//! Degree-theoretic structure of the squaring-type product on the
//! Lagrangian Grassmannian.
//!
//! The Grassmannian Λ(n) of Lagrangian planes in R^{2n} is modeled three
//! equivalent ways: symmetric unitary matrices, anti-symplectic orthogonal
//! involutions on R^{2n}, and orthonormal frames of Lagrangian planes.
//! The binary product Θ(A, B) = A·conj(B)·A keeps Λ(n) closed, and fixing
//! the second slot at a diagonal basepoint B₀ gives the self-map
//! Θ₀(A) = Θ(A, B₀) whose topological degree this crate computes three
//! independent ways:
//!
//! * [`degree`] enumerates all 2^n closed-form preimages of the basepoint,
//!   orients each by the LU sign of the linearized map in an adapted
//!   chart, and checks the signed sum against the closed form 2^{m+1}
//!   for n = 2m + 1.
//! * [`combinatorics`] counts the same signs as a parity statistic on
//!   bit sequences: brute enumeration, a two-sequence recursion, and the
//!   closed form must all agree.
//! * [`search`] recovers the preimages with no closed-form knowledge, by
//!   Gauss-Newton descent from random unitary starts, and reconciles the
//!   solution set against the analytic one.
//!
//! [`models`] houses the three Grassmannian models and the conversions
//! between them; [`gamma`] generalizes the product to other groups with
//! an anti-isomorphism; [`properties`] bundles the randomized invariant
//! checks; [`io`] fixes the JSON interchange formats.
//!
//! [`degree`]: degree::degree

// Tolerance guards are written `!(dev < tol)` so that a NaN deviation fails.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod combinatorics;
pub mod degree;
pub mod error;
pub mod gamma;
pub mod io;
pub mod linalg;
pub mod models;
pub mod properties;
pub mod search;

pub use combinatorics::{d_closed, lemma_report, EpsSeq, LemmaReport};
pub use degree::{degree, enumerate_preimages, AngleSpec, DegreeReport, PreimagePoint};
pub use error::{Error, Result};
pub use gamma::{gamma_product, AntiIso, FixSample, GroupKind};
pub use linalg::{Complex, ComplexMatrix, RealMatrix};
pub use models::{
    involution_to_unitary, theta_involution, theta_unitary, unitary_to_involution,
    AntiSympInvolution, LagrangianPlane, SymmetricUnitary,
};
pub use properties::{run_suite, PropertyCheck};
pub use search::{multistart, SearchConfig, SearchOutcome};

// Every code block in the guide compiles and runs against the current API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/product.md")]
    mod product {}
    #[doc = include_str!("../../../book/src/degree.md")]
    mod degree {}
    #[doc = include_str!("../../../book/src/combinatorics.md")]
    mod combinatorics {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
