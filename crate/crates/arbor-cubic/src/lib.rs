//! Exact-arithmetic toolkit for cubic polynomials whose two finite critical
//! points collide under iteration, and for the ternary-tree automorphism
//! groups their preimage trees live in.
//!
//! The crate is organized around six subsystems:
//!
//! - [`exact`] — arbitrary-precision rationals, p-adic valuations, primality,
//!   and desk-scale integer factorization;
//! - [`poly`] — dense univariate polynomials over the rationals with
//!   resultants, discriminants, Newton polygons, and rational-root finding,
//!   plus minimal sparse multivariate polynomials in [`mpoly`];
//! - [`dynamics`] — the normal form f(z) = Az³ + Bz + 1, critical-orbit
//!   recursions, collision detection, discriminant towers, and the resolvent
//!   cubic/quartic attached to a collision;
//! - [`tree`] — finite ternary-tree automorphisms as portraits, sign
//!   functions, membership tests for the sign-constrained groups, and the
//!   self-certifying relabeling algorithm;
//! - [`group`] — permutation-group machinery (stabilizer chains) over tree
//!   portraits, the finite groups Q_{ℓ,n}, arboreal double transitivity, and
//!   machine verification of the generation theorem;
//! - [`certify`] — hypothesis checkers that turn the valuation conditions
//!   into per-level certificates, place searches, and the function-field
//!   variant.
//!
//! The `arbor-cubic` binary exposes the same functionality as subcommands;
//! see the examples/ directory for one runnable walkthrough per capability.

pub mod certify;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod group;
pub mod mpoly;
pub mod poly;
pub mod tree;

pub use error::{Error, Result};
pub use exact::Rational;
