//! Error type shared by every module of the crate.
//!
//! Outcomes that the callers are expected to branch on (`ZeroIdentity`
//! differences, empty relation bases, unfactored critical components,
//! bounded-at-budget Green values) are ordinary values on the respective
//! result types, not errors; this enum holds the conditions that abort a
//! computation.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `f` is not monic of the declared degree in `x`, or the `y^d`
    /// coefficient of `g` is not exactly 1.
    #[error("not monic: {0}")]
    NotMonic(String),

    /// Some monomial `x^i y^j` of `g` has `i + j > d`, so the map does not
    /// extend to an endomorphism of the projective plane.
    #[error("degree overflow: monomial x^{i} y^{j} exceeds total degree {d}")]
    DegreeOverflow { i: u32, j: u32, d: usize },

    /// The `y`-degree of `g` does not match the declared degree `d`.
    #[error("bad y-degree: expected y^{expected}, found y^{found}")]
    BadYDegree { expected: usize, found: usize },

    /// A symbolic computation would exceed the configured coefficient
    /// budget.
    #[error("degree budget exceeded: needs ~{needed} coefficients, budget {budget}")]
    DegreeBudgetExceeded { needed: usize, budget: usize },

    /// A degree hypothesis required by the requested operation fails.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// The orbit-relation identity is not an exact polynomial identity at
    /// the reported orbit index.
    #[error("relation fails at orbit index {n}")]
    RelationFails { n: usize },

    /// The leading-coefficient ratio ξ is provably not a root of unity.
    #[error("candidate ξ = {xi} is not a root of unity")]
    NotRootOfUnity { xi: String },

    /// Pseudo-division would be unsound: the divisor has no unit
    /// `y`-leading coefficient.
    #[error("not monicizable: y-leading coefficient {0} is not a nonzero rational")]
    NotMonicizable(String),

    /// Numeric root finding did not converge within its iteration budget.
    #[error("root finding did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },

    /// Text that does not conform to the polynomial grammar or the JSON
    /// schemas built on it.
    #[error("parse error at line {line}, column {col}: {msg}")]
    ParseError { line: usize, col: usize, msg: String },
}

impl Error {
    /// Shorthand used by the parser.
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::ParseError { line, col, msg: msg.into() }
    }
}
