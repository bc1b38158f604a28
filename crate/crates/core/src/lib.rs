//! Exact-arithmetic Virasoro correlation functions on hyperelliptic curves
//! y^2 = p(x).
//!
//! The crate constructs and verifies the one-, two-, and three-point
//! functions of the Virasoro field on y^2 = p(x) over exact rationals with
//! symbolic parameters (central charge, vacuum normalization, state
//! constants), enumerates the partial-permutation digraph expansion of
//! N-point functions, and runs the complete coefficient solve for the (2,5)
//! minimal model at genus 2.

pub mod curve;
pub mod diag;
pub mod error;
pub mod galois;
pub mod graphs;
pub mod linalg;
pub mod minimal;
pub mod multipoly;
pub mod onepoint;
pub mod param;
pub mod project;
pub mod rat;
pub mod ratfunc;
pub mod report;
pub mod solve;
pub mod threepoint;
pub mod twopoint;
pub mod unipoly;

pub use error::Error;
