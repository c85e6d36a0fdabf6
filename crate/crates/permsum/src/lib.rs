//! Exact reciprocal-sum functionals over permutations.
//!
//! This crate constructs, evaluates, enumerates, and searches for
//! permutations of `{1..n}` that hit exact rational targets under seven
//! functionals built from reciprocals of adjacent-entry differences,
//! products, sums, and square-differences (each in a plain and a cyclic
//! wrap-around flavor). Everything is exact: values are arbitrary-precision
//! rationals, searches account incrementally with scaled integers over a
//! fixed common denominator, and every reported witness is re-verified from
//! first principles before it leaves the library.
//!
//! The main entry points:
//!
//! - [`Permutation`] and its structural operators ([`perm`])
//! - [`Functional`], [`evaluate`], [`Witness`] ([`functional`])
//! - deterministic constructions for zero/one targets and all attainable
//!   integer targets of `dif` ([`construct`])
//! - pruned exhaustive search and exact value-set enumeration ([`search`])
//! - increasing-binary-tree export in DOT form ([`tree`])

pub mod construct;
pub mod functional;
pub mod perm;
pub mod rational;
pub mod search;
pub mod seeds;
pub mod tree;

pub use functional::{evaluate, evaluate_prefix, EvalError, Functional, Witness, ALL_FUNCTIONALS};
pub use perm::{PermError, Permutation};
pub use rational::Rational;
