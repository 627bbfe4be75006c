//! Input loading: the family JSON schema, the polynomial grammar hooks,
//! and the degree-budget environment override.
//!
//! A family file is a JSON object with exactly four string fields,
//!
//! ```json
//! { "f": "x^2 + t", "g": "y^2 + t*x*y", "a": "t", "b": "0" }
//! ```
//!
//! where `f` is the base polynomial in `x` over `Q[t]`, `g` the fiber
//! polynomial in `x, y` over `Q[t]`, and `(a, b)` the marked point in
//! `Q[t]²`. Unknown keys are rejected so that typos fail loudly instead of
//! silently running a default. Regularity of `(f, g)` is enforced at load
//! time; every violation is a configuration error (exit code 2), never a
//! computational one.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use skewdyn_core::algebra::{parse_gpoly, parse_tpoly, parse_xtpoly};
use skewdyn_core::skew::{MarkedPair, SkewProduct, DEFAULT_DEGREE_BUDGET};

use crate::Failure;

/// On-disk schema of a family file. Field order does not matter; extra
/// fields are errors.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilySpec {
    f: String,
    g: String,
    a: String,
    b: String,
}

/// Reads, parses, and validates a family file into a [`MarkedPair`].
///
/// # Errors
/// Returns a configuration [`Failure`] when the file cannot be read, the
/// JSON does not match the schema, a polynomial fails to parse, or the
/// family violates regularity.
pub fn load_pair(path: &Path) -> Result<MarkedPair, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    let spec: FamilySpec = serde_json::from_str(&text)
        .map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
    let f = parse_xtpoly(&spec.f)
        .map_err(|e| Failure::config(format!("field \"f\": {e}")))?;
    let g = parse_gpoly(&spec.g)
        .map_err(|e| Failure::config(format!("field \"g\": {e}")))?;
    let family = SkewProduct::check_regular(f, g)
        .map_err(|e| Failure::config(format!("family is not regular: {e}")))?;
    let a = parse_tpoly(&spec.a)
        .map_err(|e| Failure::config(format!("field \"a\": {e}")))?;
    let b = parse_tpoly(&spec.b)
        .map_err(|e| Failure::config(format!("field \"b\": {e}")))?;
    Ok(MarkedPair::new(family, a, b))
}

/// The symbolic degree budget: `SKEWDYN_BUDGET` when set, otherwise
/// [`DEFAULT_DEGREE_BUDGET`].
///
/// # Errors
/// Returns a configuration [`Failure`] when the variable is set but is not
/// a positive integer.
pub fn degree_budget() -> Result<usize, Failure> {
    match std::env::var("SKEWDYN_BUDGET") {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_DEGREE_BUDGET),
        Err(e) => Err(Failure::config(format!("SKEWDYN_BUDGET: {e}"))),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Failure::config(format!(
                "SKEWDYN_BUDGET must be a positive integer, found {raw:?}"
            ))),
        },
    }
}
