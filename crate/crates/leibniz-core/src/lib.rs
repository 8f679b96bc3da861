//! Exact-arithmetic toolkit for finite-dimensional Leibniz algebras given by
//! structure constants: identity verification, nilpotency and solvability
//! series, derivation spaces, connected gradations, solvable-extension
//! replay, and a catalog of quasi-filiform nilradicals of maximum length
//! together with their solvable extensions.

pub mod algebra;
pub mod catalog;
pub mod derivations;
pub mod error;
pub mod extension;
pub mod gradation;
pub mod invariants;
pub mod io;
pub mod matrix;
pub mod scalar;
pub mod series;

pub use algebra::{Algebra, LeibnizCheck, LinearMap, Subspace};
pub use error::{Error, Result};
pub use matrix::ExactMatrix;
pub use scalar::{Rational, Scalar};
