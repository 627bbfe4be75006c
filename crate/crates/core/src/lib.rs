//! Exact and numeric dynamics of one-parameter families of regular
//! polynomial skew products `F_t(x, y) = (f_t(x), g_t(x, y))`.
//!
//! The crate is organized bottom-up:
//!
//! - [`algebra`] — exact scalars (big rationals, number-field elements),
//!   univariate and bivariate polynomials, Laurent tails, root finding, and
//!   the polynomial text grammar.
//! - [`skew`] — the dynamical objects: regularity checking, symbolic and
//!   specialized iteration, restriction to the line at infinity, critical
//!   components, and degree-hypothesis reports.
//! - [`prep`] — preperiodicity certificates, preperiodicity-parameter
//!   polynomials over `Q[t]`, and intersection of two marked points'
//!   parameter sets.
//! - [`pcf`] — post-critically-finite machinery for the quadratic moduli
//!   space: 1-D PCF search, σ-embeddings, the exceptional-locus classifier,
//!   and the homogeneous-family curve dynamics.
//! - [`bottcher`] — vertical Böttcher coefficient recursion with verified
//!   degree bounds, polynomial parts, and the orbit-relation candidate.
//! - [`green`] — escape-rate Green functions, the Green ratio identity,
//!   bifurcation rasters, and equidistribution comparison.
//! - [`closure`] — exact polynomial relations on symbolic orbits (bounded
//!   Zariski closure) and invariance checking.
//!
//! Exact values are immutable and freely shareable across threads; all
//! operations on them are pure functions. Floating-point evaluation is a
//! separate code path that never feeds back into exact polynomials.

pub mod algebra;
pub mod bottcher;
pub mod closure;
pub mod error;
pub mod green;
pub mod pcf;
pub mod prep;
pub mod skew;

pub use error::{Error, Result};
