//! Exact arithmetic foundation: rationals, univariate and bivariate
//! polynomials, cyclotomic polynomials, quadratic number fields, root
//! finding, truncated Laurent series, and the polynomial input grammar.
//!
//! Everything downstream builds on the two polynomial types here:
//! [`UPoly`] (dense univariate over any [`Ring`]) and [`MPoly`] (sparse
//! bivariate in `x`, `y`). Parameter families live in `Q[t]`, so the
//! workhorse instantiations are [`TPoly`] for `Q[t]` and nested
//! [`XTPoly`] for `Q[t][x]`.

pub mod cyclotomic;
pub mod laurent;
pub mod mpoly;
pub mod numfield;
pub mod parse;
pub mod ring;
pub mod roots;
pub mod upoly;

pub use cyclotomic::{cyclotomic_detect, cyclotomic_poly, euler_phi};
pub use laurent::LaurentTail;
pub use mpoly::{MPoly, Mono};
pub use numfield::{sqrt_brackets, NumberField, NumberFieldElem};
pub use parse::{
    gpoly_string, parse_gpoly, parse_rat, parse_tpoly, parse_xtpoly, upoly_string,
    xtpoly_string,
};
pub use ring::{rat, rint, QAlgebra, Rat, Ring, Scalar};
pub use roots::{complex_roots, rational_roots};
pub use upoly::{poly_compose, upoly_gcd, UPoly};

/// Polynomial in the parameter `t` over `Q`.
pub type TPoly = UPoly<Rat>;

/// Polynomial in `x` with coefficients in `Q[t]`.
pub type XTPoly = UPoly<TPoly>;

/// Polynomial in `x`, `y` with coefficients in `Q[t]`.
pub type GPoly = MPoly<TPoly>;
