//! Exact enumeration of Latin rectangles and Latin squares.
//!
//! An `m x n` Latin rectangle is an `m`-row matrix over `{1..n}` with no
//! repeated symbol in any row or column; `K(m, n)` counts the *reduced*
//! rectangles (first row fixed to `1 2 .. n`) and `L(m, n) = n! K(m, n)`.
//! This crate provides several independent ways of computing these counts
//! so that they can be cross-checked against each other:
//!
//! * [`closed`] — direct evaluators for the fixed-order cases: derangements,
//!   menage numbers, two three-row formulas, and two four-row formulas.
//! * [`general`] — an alternating multi-sum over pairs of integer vectors
//!   indexed by covering tuples (equivalently by permutations of the row
//!   set), which evaluates `K(m, n)` for any order, in four equivalent
//!   forms plus a Latin-square specialization.
//! * [`oracle`] — exhaustive backtracking counts, the final arbiter for
//!   every value produced by the formulas.
//!
//! Supporting modules: [`numeric`] (arbitrary-precision counts and the
//! factorial family), [`perm`] (permutation coordinate systems), [`tuples`]
//! (covering tuples, components, and their counting results), [`board`]
//! (rook numbers and hit numbers), and [`compositions`] (enumeration of
//! constrained integer compositions).
//!
//! All arithmetic is exact; no value is ever rounded or truncated. The crate
//! is `no_std`-compatible (`alloc` required) with the default `std` feature
//! adding only `std::error::Error` integration.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod board;
pub mod closed;
pub mod compositions;
mod error;
pub mod general;
pub mod numeric;
pub mod oracle;
pub mod perm;
pub mod tuples;

pub use error::{Error, Result};
pub use numeric::BigCount;
