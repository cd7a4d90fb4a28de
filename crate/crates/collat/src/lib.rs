//! Exact linear algebra over the Gaussian rationals ℚ(i): invariant-subspace
//! lattices, commutants and intertwiner spaces, reflexive covers, nilpotent
//! structure, and membership in the collineation group Col(A) — the group of
//! invertible maps S for which M ↦ S·M is an automorphism of Lat(A).
//!
//! All arithmetic is exact; every reported equality is an equality of
//! canonical forms, never an approximation.
//!
//! ```
//! use collat::{Matrix, VectorSample};
//! use collat::collineation::{col_check_nilpotent, Verdict};
//!
//! // N = J2 + J2; scaling the second block's tail coordinate moves an
//! // invariant plane off the lattice, so T is no collineation of N.
//! let n = Matrix::block_diag(&[Matrix::jordan_block(2), Matrix::jordan_block(2)]);
//! let t = Matrix::from_int_rows(&[
//!     &[1, 0, 0, 0],
//!     &[0, 1, 0, 0],
//!     &[0, 0, 1, 0],
//!     &[0, 0, 0, 2],
//! ]);
//! let verdict = col_check_nilpotent(&n, &t, &VectorSample::new(4, 100, 0)).unwrap();
//! assert_eq!(verdict.verdict, Verdict::NonMember);
//! let witness = verdict.witness.unwrap();
//! assert!(witness.verify(&n, &t, &[collat::GaussianRational::zero()]).unwrap());
//! ```

pub mod collineation;
pub mod error;
pub mod matrix;
pub mod opspaces;
pub mod sample;
pub mod scalar;
pub mod structure;
pub mod subspace;
pub mod suites;

pub use error::{Error, Result};
pub use matrix::{solve_linear, AffineSolution, Matrix, Rref, Vector};
pub use sample::VectorSample;
pub use scalar::{GaussianRational, ParseScalarError, Rational};
pub use subspace::{image, is_invariant, nullspace, preimage, Subspace, SubspaceOrder};
