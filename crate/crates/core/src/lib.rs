//! Exact-arithmetic toolkit for cup-product embedding obstructions.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] exact rational matrices (rank, kernel, determinant, congruence
//!   diagonalisation),
//! * [`multilinear`] skew-symmetric and symmetric multilinear forms on `Q^m`,
//! * [`graded_algebra`] the Poincaré duality algebra built from a form,
//! * [`obstruction`] special-function witnesses, real Jordan block
//!   constructors and the dimension-counting thresholds,
//! * [`intersection_form`] invariants and classification of integral
//!   unimodular forms together with Kirby–Siebenmann bookkeeping.
//!
//! Everything is exact: scalars are [`Rational`] (arbitrary precision) and no
//! floating point is used anywhere.

pub mod combinatorics;
pub mod error;
pub mod graded_algebra;
pub mod intersection_form;
pub mod io;
pub mod linalg;
pub mod multilinear;
pub mod obstruction;
pub mod rational;

pub use error::{Error, Result};
pub use linalg::MatrixQ;
pub use multilinear::{FormKind, IndexTuple, MultilinearForm};
pub use rational::Rational;
