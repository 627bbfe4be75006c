//! JSON rendering of library values and small argument parsers.
//!
//! Conventions shared by every subcommand:
//! - rationals print in lowest terms (`"-3/2"`, `"7"`) exactly as the
//!   polynomial grammar accepts them, so outputs round-trip;
//! - complex numbers are `{ "re": …, "im": … }` objects;
//! - enums become objects with a `"type"` tag;
//! - `serde_json`'s map type keeps keys sorted, so identical inputs give
//!   byte-identical output.

use serde_json::{json, Value};
use skewdyn_core::algebra::{gpoly_string, parse_rat, upoly_string, GPoly, Rat, UPoly};
use skewdyn_core::green::{BifurcationRaster, DiscrepancyReport, GreenValue};
use skewdyn_core::prep::{
    PrepCertificate, PrepPolyOutcome, PrepPolynomialSet, RootKind, VerifiedRoot,
};
use skewdyn_core::skew::Complex64;

use crate::Failure;

// ---------------------------------------------------------------------------
// Argument parsers
// ---------------------------------------------------------------------------

/// Parses `"x0,y0,x1,y1"` into a raster window.
///
/// # Errors
/// Configuration [`Failure`] when the list does not have exactly four
/// finite entries or the window is empty.
pub fn parse_window(src: &str) -> Result<(f64, f64, f64, f64), Failure> {
    let parts: Vec<f64> = src
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::config(format!("--window {src:?}: {e}")))?;
    if parts.len() != 4 {
        return Err(Failure::config(format!(
            "--window expects x0,y0,x1,y1 (4 numbers), found {}",
            parts.len()
        )));
    }
    let (x0, y0, x1, y1) = (parts[0], parts[1], parts[2], parts[3]);
    if !(x0.is_finite() && y0.is_finite() && x1.is_finite() && y1.is_finite()) {
        return Err(Failure::config("--window entries must be finite".into()));
    }
    if x1 <= x0 || y1 <= y0 {
        return Err(Failure::config(format!(
            "--window {src:?} is empty: need x0 < x1 and y0 < y1"
        )));
    }
    Ok((x0, y0, x1, y1))
}

/// Parses `"W,H"` into a raster resolution.
///
/// # Errors
/// Configuration [`Failure`] unless both entries are positive integers.
pub fn parse_resolution(src: &str) -> Result<(usize, usize), Failure> {
    let parts: Vec<usize> = src
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::config(format!("--res {src:?}: {e}")))?;
    if parts.len() != 2 || parts[0] == 0 || parts[1] == 0 {
        return Err(Failure::config(format!(
            "--res expects W,H with positive entries, found {src:?}"
        )));
    }
    Ok((parts[0], parts[1]))
}

/// Parses `"re,im;re,im;…"` into a list of complex parameter samples.
///
/// # Errors
/// Configuration [`Failure`] when any entry is not a finite `re,im` pair
/// or the list is empty.
pub fn parse_samples(src: &str) -> Result<Vec<Complex64>, Failure> {
    let mut out = Vec::new();
    for chunk in src.split(';') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let parts: Vec<f64> = chunk
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::config(format!("--samples entry {chunk:?}: {e}")))?;
        if parts.len() != 2 || !parts[0].is_finite() || !parts[1].is_finite() {
            return Err(Failure::config(format!(
                "--samples entry {chunk:?}: expected a finite re,im pair"
            )));
        }
        out.push(Complex64::new(parts[0], parts[1]));
    }
    if out.is_empty() {
        return Err(Failure::config(
            "--samples must contain at least one re,im pair".into(),
        ));
    }
    Ok(out)
}

/// Parses a rational command-line argument.
///
/// # Errors
/// Configuration [`Failure`] when the text is not a rational number.
pub fn parse_rat_arg(flag: &str, src: &str) -> Result<Rat, Failure> {
    parse_rat(src).map_err(|e| Failure::config(format!("{flag} {src:?}: {e}")))
}

// ---------------------------------------------------------------------------
// Value renderers
// ---------------------------------------------------------------------------

/// `{ "re": …, "im": … }`.
pub fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// A univariate polynomial in `t` as a grammar string.
pub fn tpoly_json(p: &UPoly<Rat>) -> Value {
    Value::String(upoly_string(p, 't'))
}

fn certificate_json(c: &PrepCertificate) -> Value {
    match c {
        PrepCertificate::Cycle { m, n } => {
            json!({ "type": "cycle", "preperiod": m, "period": n })
        }
        PrepCertificate::Escape { step, witness } => {
            json!({ "type": "escape", "step": step, "witness": witness })
        }
        PrepCertificate::Inconclusive { budget } => {
            json!({ "type": "inconclusive", "budget": budget })
        }
    }
}

fn root_kind_json(k: &RootKind) -> Value {
    match k {
        RootKind::Rational(r) => json!({ "type": "rational", "value": r.to_string() }),
        RootKind::Cyclotomic { order } => json!({ "type": "cyclotomic", "order": order }),
        RootKind::Numeric { re, im } => json!({ "type": "numeric", "re": re, "im": im }),
    }
}

/// One classified parameter root with its per-point certificates.
pub fn verified_root_json(v: &VerifiedRoot) -> Value {
    json!({
        "kind": root_kind_json(&v.kind),
        "certificates": v.certificates.iter().map(certificate_json).collect::<Vec<_>>(),
        "verified": v.verified,
    })
}

/// The pattern sweep: per-pattern polynomials and the classified radical.
pub fn polynomial_set_json(set: &PrepPolynomialSet) -> Value {
    let patterns: Vec<Value> = set
        .patterns
        .iter()
        .map(|p| {
            let poly = match &p.outcome {
                PrepPolyOutcome::Poly(q) => tpoly_json(q),
                PrepPolyOutcome::ZeroIdentity => Value::Null,
            };
            json!({
                "preperiod": p.m,
                "period": p.n - p.m,
                "polynomial": poly,
                "zero_identity": matches!(p.outcome, PrepPolyOutcome::ZeroIdentity),
            })
        })
        .collect();
    json!({
        "patterns": patterns,
        "rational_roots": set.rational_roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "cyclotomic_orders": set.cyclotomic_orders,
        "remainder": tpoly_json(&set.remainder),
    })
}

/// An escape-rate estimate with its bounded-at-budget flag.
pub fn green_value_json(g: &GreenValue) -> Value {
    json!({
        "value": g.value,
        "bounded_at_budget": g.bounded_at_budget,
        "escape_step": g.escape_step,
    })
}

/// A fiberwise relation both as a grammar string and as an explicit
/// coefficient table `[{ "i", "j", "t": [c0, c1, …] }]`.
pub fn relation_json(q: &GPoly) -> Value {
    let coefficients: Vec<Value> = q
        .terms()
        .map(|(mono, c)| {
            let t: Vec<String> = c.coeffs().iter().map(|r| r.to_string()).collect();
            json!({ "i": mono.i, "j": mono.j, "t": t })
        })
        .collect();
    json!({
        "polynomial": gpoly_string(q),
        "coefficients": coefficients,
    })
}

/// Sidecar metadata for a PGM artifact.
pub fn raster_sidecar(raster: &BifurcationRaster, mode: &str, data_file: &str) -> Value {
    let (x0, y0, x1, y1) = raster.window;
    json!({
        "mode": mode,
        "window": [x0, y0, x1, y1],
        "resolution": [raster.width, raster.height],
        "budget": raster.budget,
        "boundary_pixels": raster.boundary_count(),
        "data": data_file,
    })
}

/// Per-cell discrepancy between root mass and boundary mass.
pub fn discrepancy_json(rep: &DiscrepancyReport) -> Value {
    let rows: Vec<Vec<f64>> = rep
        .cell_discrepancy
        .chunks(rep.boxes)
        .map(|row| row.to_vec())
        .collect();
    json!({
        "boxes": rep.boxes,
        "roots_inside": rep.roots_inside,
        "roots_outside": rep.roots_outside,
        "no_reference": rep.no_reference,
        "max_discrepancy": rep.max_discrepancy,
        "cell_discrepancy": rows,
    })
}

/// Renders the escape-rate estimates of a raster as an 8-bit PGM: bounded
/// pixels are black, escaping pixels scale linearly up to white at the
/// largest estimate in the frame. Returns the bytes and the scale maximum.
pub fn green_pgm(raster: &BifurcationRaster) -> (Vec<u8>, f64) {
    let vmax = raster.green.iter().cloned().fold(0.0_f64, f64::max);
    let mut bytes = format!("P5\n{} {}\n255\n", raster.width, raster.height).into_bytes();
    for row in (0..raster.height).rev() {
        for col in 0..raster.width {
            let g = raster.green[raster.index(col, row)];
            let shade = if vmax > 0.0 {
                (g / vmax * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                0
            };
            bytes.push(shade);
        }
    }
    (bytes, vmax)
}
