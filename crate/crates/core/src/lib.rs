//! Minimal zeros of copositive matrices.
//!
//! A symmetric matrix `A` is copositive if `x^T A x >= 0` for every
//! entrywise-nonnegative `x`. A zero of `A` is a nonzero nonnegative vector
//! `u` with `u^T A u = 0`; it is minimal if no other zero has a support
//! strictly contained in `Supp(u)`. Minimal zeros are determined by their
//! supports up to positive scaling, which makes them amenable to exact,
//! combinatorial computation.
//!
//! This crate provides:
//!
//! - exact rational linear algebra with PSD certificates ([`ratlin`]),
//! - computation of minimal zeros and zero decompositions ([`zeros`]),
//! - irreducibility tests with respect to the PSD and nonnegative cones
//!   ([`irred`]),
//! - combinatorial conditions on support families and canonical forms under
//!   coordinate permutation ([`families`]),
//! - an exact rational simplex solver and the support-family feasibility
//!   program built on cut-polytope membership ([`lp`]),
//! - an isomorph-free census of support families reproducing the published
//!   class counts for n <= 7 ([`census`]),
//! - generators and parsers for the named test matrices ([`matgen`]).

pub mod census;
pub mod families;
pub mod irred;
pub mod lp;
pub mod matgen;
pub mod ratlin;
pub mod zeros;

pub use families::SupportFamily;
pub use ratlin::{Rat, SymmetricRationalMatrix};
