//! Dense linear algebra kernels sized for the dimensions this crate works
//! at (matrices up to a few hundred rows): complex and real matrices,
//! Householder QR, a cyclic Jacobi symmetric eigensolver, and LU routines
//! for determinant signs and linear solves.

pub mod cmatrix;
pub mod complex;
pub mod eigen;
pub mod lu;
pub mod qr;
pub mod rmatrix;

pub use cmatrix::ComplexMatrix;
pub use complex::Complex;
pub use eigen::{expi_sym, sym_eig};
pub use lu::{det_sign_lu, det_sign_lu_with_tol, lu_solve};
pub use qr::{gaussian_vec, orthonormalize, qr_decompose, random_orthogonal, random_unitary};
pub use rmatrix::RealMatrix;
