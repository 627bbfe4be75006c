//! Escape-rate (Green function) estimates, parameter-plane rasters, and
//! equidistribution diagnostics.
//!
//! Everything in this module is floating point and one-directional: exact
//! data flows in (families, marked points, root sets), numeric summaries
//! flow out, and nothing here feeds back into the exact layers. A Green
//! value of zero is always a *budget-relative* statement — the orbit stayed
//! inside the escape radius for every step we tried — and is flagged as
//! such; it is never a claim that the true Green function vanishes.
//!
//! ```
//! use skewdyn_core::green::{green_1d, GreenEvaluator};
//! use skewdyn_core::skew::Complex64;
//!
//! // Squaring map: the escape rate at x₀ = 4 is exactly log 4.
//! let f = [
//!     Complex64::new(0.0, 0.0),
//!     Complex64::new(0.0, 0.0),
//!     Complex64::new(1.0, 0.0),
//! ];
//! let eval = GreenEvaluator::for_polynomial(&f);
//! let g = green_1d(&f, Complex64::new(4.0, 0.0), &eval);
//! assert!((g.value - 4.0_f64.ln()).abs() < 1e-12);
//! assert!(!g.bounded_at_budget);
//! ```

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::prep::{RootKind, VerifiedRoot};
use crate::skew::{tpoly_eval_complex, Complex64, MarkedPair, NumericSkew};

/// Minimum norm an orbit must exceed before an escape-rate estimate is
/// read off. The estimator applies one extra scaled step after crossing,
/// so its truncation error is bounded by roughly
/// `(coefficient sum) / GREEN_ESCAPE_FLOOR` times the usual `d^{-n}`
/// damping; at `10⁶` this keeps desk-scale families comfortably below
/// [`DEFAULT_GREEN_TOL`].
pub const GREEN_ESCAPE_FLOOR: f64 = 1.0e6;

/// Default iteration budget for escape-rate queries.
pub const DEFAULT_GREEN_MAX_ITER: usize = 256;

/// Default tolerance for the truncated `d^{-n}` tail of an escape-rate
/// estimate; see [`GREEN_ESCAPE_FLOOR`] for where the bound comes from.
pub const DEFAULT_GREEN_TOL: f64 = 1.0e-6;

/// After a raster pixel crosses its coarse bailout, at most this many
/// further steps are taken to push the orbit past [`GREEN_ESCAPE_FLOOR`]
/// before the escape rate is estimated. Doubling exponents reach the floor
/// from any norm above 2 in a handful of steps, so the cap is generous.
const RASTER_REFINE_STEPS: usize = 64;

/// Escape-radius, budget, and tolerance bundle for the escape-rate
/// estimators.
#[derive(Clone, PartialEq, Debug)]
pub struct GreenEvaluator {
    /// Radius outside of which every orbit of the intended map grows;
    /// `max(2, 1 + Σ|non-leading coefficients|)`when derived from a map.
    pub escape_radius: f64,
    /// Maximum number of applications of the map before giving up and
    /// reporting the orbit as bounded-at-budget.
    pub max_iter: usize,
    /// Tolerance the caller wants on the reported value; estimates stop at
    /// [`GREEN_ESCAPE_FLOOR`] (or the escape radius, if larger), which is
    /// sized so that [`DEFAULT_GREEN_TOL`] always holds.
    pub tol: f64,
}

impl GreenEvaluator {
    pub fn new(escape_radius: f64, max_iter: usize, tol: f64) -> GreenEvaluator {
        GreenEvaluator { escape_radius, max_iter, tol }
    }

    /// Evaluator sized for one specialized skew product: the escape radius
    /// is `max(2, 1 + Σ|c|)` over the non-leading coefficients of both
    /// coordinates, outside of which the max-norm of a regular map grows.
    pub fn for_skew(skew: &NumericSkew) -> GreenEvaluator {
        GreenEvaluator::new(
            (1.0 + coefficient_spread(skew)).max(2.0),
            DEFAULT_GREEN_MAX_ITER,
            DEFAULT_GREEN_TOL,
        )
    }

    /// Evaluator sized for one monic complex polynomial given by its
    /// coefficients in increasing degree order.
    pub fn for_polynomial(coeffs: &[Complex64]) -> GreenEvaluator {
        let spread: f64 = coeffs
            .iter()
            .take(coeffs.len().saturating_sub(1))
            .map(|c| c.norm())
            .sum();
        GreenEvaluator::new((1.0 + spread).max(2.0), DEFAULT_GREEN_MAX_ITER, DEFAULT_GREEN_TOL)
    }

    /// Norm an orbit must exceed before the estimate is read off: the
    /// escape radius, but never less than [`GREEN_ESCAPE_FLOOR`] so the
    /// one-step correction meets the documented tolerance.
    pub fn threshold(&self) -> f64 {
        self.escape_radius.max(GREEN_ESCAPE_FLOOR)
    }
}

/// One escape-rate estimate. `value == 0.0` together with
/// `bounded_at_budget == true` means "did not escape within the budget",
/// never "the Green function is zero".
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct GreenValue {
    /// Estimated escape rate; `0.0` when the orbit never crossed the
    /// threshold.
    pub value: f64,
    /// True iff the orbit stayed inside the threshold for every step of
    /// the budget.
    pub bounded_at_budget: bool,
    /// First `n` with `‖Fⁿ(P)‖` above the threshold, when one exists.
    pub escape_step: Option<usize>,
}

impl GreenValue {
    fn bounded() -> GreenValue {
        GreenValue { value: 0.0, bounded_at_budget: true, escape_step: None }
    }
}

/// Sum of `|c|` over the non-leading coefficients of both coordinates:
/// every `f` coefficient below the monic `x^d` term and every `g` term
/// other than the monic `y^d` term.
fn coefficient_spread(skew: &NumericSkew) -> f64 {
    let d = skew.degree() as u32;
    let base: f64 = skew
        .f_coeffs()
        .iter()
        .take(skew.degree())
        .map(|c| c.norm())
        .sum();
    let fiber: f64 = skew
        .g_terms()
        .iter()
        .filter(|&&(i, j, _)| (i, j) != (0, d))
        .map(|&(_, _, c)| c.norm())
        .sum();
    base + fiber
}

fn max_norm(p: (Complex64, Complex64)) -> f64 {
    p.0.norm().max(p.1.norm())
}

/// Escape rate of `x₀` under one monic complex polynomial of degree at
/// least 2, given by its coefficients in increasing degree order.
///
/// The orbit is iterated until its norm first exceeds
/// [`GreenEvaluator::threshold`]; the estimate is
/// `d^{-n} log‖xₙ‖ + d^{-(n+1)} log(‖xₙ₊₁‖ / ‖xₙ‖^d)`, with the correction
/// ratio evaluated in scaled form so no intermediate overflows even when
/// `‖xₙ‖^d` would. Orbits that stay inside the threshold for the whole
/// budget come back as [`GreenValue::bounded_at_budget`].
///
/// # Panics
/// If fewer than three coefficients are supplied (degree below 2).
pub fn green_1d(f: &[Complex64], x0: Complex64, eval: &GreenEvaluator) -> GreenValue {
    assert!(f.len() >= 3, "escape rates need degree at least 2");
    let d = f.len() - 1;
    let threshold = eval.threshold();
    let mut z = x0;
    let mut n = 0usize;
    while z.norm() <= threshold {
        if n == eval.max_iter {
            return GreenValue::bounded();
        }
        let mut fz = Complex64::new(0.0, 0.0);
        for c in f.iter().rev() {
            fz = fz * z + c;
        }
        z = fz;
        n += 1;
    }
    let m = z.norm();
    let u = z / m;
    // f(z) / z^d = Σ f_j u^j m^{j-d}: every factor here is ≤ 1 in norm, so
    // the ratio is overflow-free; dropped underflow terms are O(1/m).
    let mut w = Complex64::new(0.0, 0.0);
    for (j, c) in f.iter().enumerate() {
        w += c * u.powu(j as u32) * m.powi(j as i32 - d as i32);
    }
    let dinv = 1.0 / d as f64;
    let value = dinv.powi(n as i32) * (m.ln() + dinv * w.norm().ln());
    GreenValue { value, bounded_at_budget: false, escape_step: Some(n) }
}

/// `‖F(P)‖ / ‖P‖^d` for a point of max-norm above the escape radius,
/// evaluated in scaled form: each monomial is split into unit-direction
/// powers and `1/‖P‖` powers, all of norm at most 1, so nothing overflows.
/// Regularity (`i + j ≤ d` in `g`) is what makes every exponent of
/// `1/‖P‖` nonnegative.
fn scaled_step_ratio(skew: &NumericSkew, p: (Complex64, Complex64)) -> f64 {
    let d = skew.degree() as i32;
    let m = max_norm(p);
    let ux = p.0 / m;
    let uy = p.1 / m;
    let minv = 1.0 / m;
    let mut xs = Complex64::new(0.0, 0.0);
    for (j, c) in skew.f_coeffs().iter().enumerate() {
        xs += c * ux.powu(j as u32) * minv.powi(d - j as i32);
    }
    let mut ys = Complex64::new(0.0, 0.0);
    for &(i, j, c) in skew.g_terms() {
        ys += c * ux.powu(i) * uy.powu(j) * minv.powi(d - (i + j) as i32);
    }
    xs.norm().max(ys.norm())
}

fn green_numeric(
    skew: &NumericSkew,
    p0: (Complex64, Complex64),
    threshold: f64,
    max_iter: usize,
) -> GreenValue {
    let mut p = p0;
    let mut n = 0usize;
    while max_norm(p) <= threshold {
        if n == max_iter {
            return GreenValue::bounded();
        }
        p = skew.apply(p);
        n += 1;
    }
    let m = max_norm(p);
    let dinv = 1.0 / skew.degree() as f64;
    let value = dinv.powi(n as i32) * (m.ln() + dinv * scaled_step_ratio(skew, p).ln());
    GreenValue { value, bounded_at_budget: false, escape_step: Some(n) }
}

/// Escape rate of `P₀` under one specialized skew product, in the max-norm
/// `‖(x, y)‖ = max(|x|, |y|)`.
///
/// Same stopping rule and one-step correction as [`green_1d`]; the scaled
/// correction relies on regularity to keep every intermediate below 1.
pub fn green_2d(
    skew: &NumericSkew,
    p0: (Complex64, Complex64),
    eval: &GreenEvaluator,
) -> GreenValue {
    green_numeric(skew, p0, eval.threshold(), eval.max_iter)
}

/// One parameter sample of the degree-weighted comparison between the base
/// escape rate and the fibered one.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct GreenRatioSample {
    pub t: Complex64,
    /// Escape rate of `a(t)` under the base map `f_t`.
    pub base_green: GreenValue,
    /// Escape rate of `(a(t), b(t))` under the full map `F_t`.
    pub pair_green: GreenValue,
    /// `|(m₁ + m₂)·G_base − m₁·G_pair|`.
    pub residual: f64,
}

/// Degree-weighted escape-rate comparison across a list of parameters.
///
/// For marked points with degree pattern `(m₁, m₂)` the expected identity
/// is `(m₁ + m₂)·G_base = m₁·G_pair`; families violating its hypotheses
/// (or points inside the boundedness locus) simply show up with large (or
/// vacuous) residuals. Which hypotheses hold is the caller's knowledge,
/// not something this numeric check can certify.
#[derive(Clone, PartialEq, Debug)]
pub struct GreenRatioReport {
    pub m1: usize,
    pub m2: usize,
    pub samples: Vec<GreenRatioSample>,
    /// Largest per-sample residual; `0.0` when `samples` is empty.
    pub max_residual: f64,
}

/// Compares base and fibered escape rates of a marked pair at each sample
/// parameter, weighted by the pair's degree pattern.
///
/// # Errors
/// [`Error::HypothesisViolated`] when the degree pattern `(m₁, m₂)` is
/// undefined (a constant marked coordinate, or `deg b < deg a`).
pub fn green_ratio_check(
    pair: &MarkedPair,
    samples: &[Complex64],
) -> Result<GreenRatioReport> {
    let (m1, m2) = pair.multiplier_degrees().ok_or_else(|| {
        Error::HypothesisViolated(
            "degree pattern (m1, m2) undefined: marked degrees are zero or decreasing".into(),
        )
    })?;
    let (pa, pb) = pair.point();
    let mut rows = Vec::with_capacity(samples.len());
    let mut max_residual = 0.0f64;
    for &t in samples {
        let skew = pair.family().specialize_numeric(t);
        let eval = GreenEvaluator::for_skew(&skew);
        let a = tpoly_eval_complex(&pa, t);
        let b = tpoly_eval_complex(&pb, t);
        let base_green = green_1d(skew.f_coeffs(), a, &eval);
        let pair_green = green_2d(&skew, (a, b), &eval);
        let residual =
            ((m1 + m2) as f64 * base_green.value - m1 as f64 * pair_green.value).abs();
        max_residual = max_residual.max(residual);
        rows.push(GreenRatioSample { t, base_green, pair_green, residual });
    }
    Ok(GreenRatioReport { m1, m2, samples: rows, max_residual })
}

/// Escape raster of a marked point over a rectangle in the parameter
/// plane.
///
/// Pixels are sampled at their centers, stored row-major with row 0 at the
/// *bottom* of the window (smallest imaginary part); [`Self::to_pgm_bytes`]
/// flips rows so the image reads with the imaginary axis pointing up. All
/// per-pixel data is a pure function of the pixel index, so rasters are
/// bit-identical across runs and thread counts.
#[derive(Clone, PartialEq, Debug)]
pub struct BifurcationRaster {
    /// `(re_min, im_min, re_max, im_max)`.
    pub window: (f64, f64, f64, f64),
    pub width: usize,
    pub height: usize,
    /// Iteration budget each pixel was given.
    pub budget: usize,
    /// First step past the pixel's bailout radius; `None` when the orbit
    /// stayed inside for the whole budget.
    pub escape_steps: Vec<Option<u32>>,
    /// Escape-rate estimate per pixel; `0.0` for bounded-at-budget pixels.
    pub green: Vec<f64>,
    /// True for pixels whose 4-neighborhood (plus the pixel itself) mixes
    /// bounded and escaping pixels.
    pub boundary: Vec<bool>,
}

impl BifurcationRaster {
    /// Row-major index of pixel `(col, row)`.
    pub fn index(&self, col: usize, row: usize) -> usize {
        row * self.width + col
    }

    /// Parameter value at the center of pixel `(col, row)`.
    pub fn pixel_center(&self, col: usize, row: usize) -> Complex64 {
        let (re_min, im_min, re_max, im_max) = self.window;
        Complex64::new(
            re_min + (col as f64 + 0.5) * (re_max - re_min) / self.width as f64,
            im_min + (row as f64 + 0.5) * (im_max - im_min) / self.height as f64,
        )
    }

    /// Number of pixels on the bounded/escaping interface.
    pub fn boundary_count(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }

    /// Binary 8-bit PGM (`P5`) of the escape steps: byte 255 for
    /// bounded-at-budget pixels, `⌊254·step/budget⌋` otherwise, rows
    /// flipped so the top of the image is the top of the window.
    pub fn to_pgm_bytes(&self) -> Vec<u8> {
        let mut out =
            format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.width * self.height);
        for row in (0..self.height).rev() {
            for col in 0..self.width {
                let byte = match self.escape_steps[self.index(col, row)] {
                    None => 255u8,
                    Some(s) => ((s as u64 * 254) / self.budget.max(1) as u64) as u8,
                };
                out.push(byte);
            }
        }
        out
    }
}

/// Per-pixel escape data for one parameter value.
fn raster_pixel(pair: &MarkedPair, t: Complex64, budget: usize) -> (Option<u32>, f64) {
    let skew = pair.family().specialize_numeric(t);
    let (pa, pb) = pair.point();
    let mut p = (tpoly_eval_complex(&pa, t), tpoly_eval_complex(&pb, t));
    let bailout = (1.0 + coefficient_spread(&skew)).max(2.0);
    let mut n = 0u32;
    while max_norm(p) <= bailout {
        if n as usize == budget {
            return (None, 0.0);
        }
        p = skew.apply(p);
        n += 1;
    }
    // Refine past the floor so the one-step correction is sharp; near a
    // bailout of 2 the raw crossing point would give only ~1 digit.
    let mut q = p;
    let mut steps = n as usize;
    for _ in 0..RASTER_REFINE_STEPS {
        let m = max_norm(q);
        if !m.is_finite() || m > GREEN_ESCAPE_FLOOR {
            break;
        }
        q = skew.apply(q);
        steps += 1;
    }
    let (q, steps) = if max_norm(q).is_finite() { (q, steps) } else { (p, n as usize) };
    let m = max_norm(q);
    let dinv = 1.0 / skew.degree() as f64;
    let value = dinv.powi(steps as i32) * (m.ln() + dinv * scaled_step_ratio(&skew, q).ln());
    (Some(n), value)
}

/// Rasters the escape behavior of a marked point over `window =
/// (re_min, im_min, re_max, im_max)` at `resolution = (width, height)`.
///
/// Rows are computed in parallel but assembled by index, so the result is
/// deterministic for any thread count. Each pixel iterates until it
/// crosses `max(2, 1 + Σ|coefficients of F_t|)` (recorded as the escape
/// step) and then coasts up to [`GREEN_ESCAPE_FLOOR`] for the escape-rate
/// estimate.
///
/// # Panics
/// On an empty or inverted window, a zero resolution, or a budget that
/// does not fit in `u32`.
pub fn bifurcation_raster(
    pair: &MarkedPair,
    window: (f64, f64, f64, f64),
    resolution: (usize, usize),
    budget: usize,
) -> BifurcationRaster {
    let (re_min, im_min, re_max, im_max) = window;
    let (width, height) = resolution;
    assert!(re_min < re_max && im_min < im_max, "window must be nonempty");
    assert!(width > 0 && height > 0, "resolution must be positive");
    assert!(u32::try_from(budget).is_ok(), "budget must fit in u32");

    let mut raster = BifurcationRaster {
        window,
        width,
        height,
        budget,
        escape_steps: Vec::new(),
        green: Vec::new(),
        boundary: vec![false; width * height],
    };
    let rows: Vec<Vec<(Option<u32>, f64)>> = (0..height)
        .into_par_iter()
        .map(|row| {
            (0..width)
                .map(|col| raster_pixel(pair, raster.pixel_center(col, row), budget))
                .collect()
        })
        .collect();
    for row in rows {
        for (step, value) in row {
            raster.escape_steps.push(step);
            raster.green.push(value);
        }
    }

    for row in 0..height {
        for col in 0..width {
            let mut bounded = false;
            let mut escaped = false;
            let mut mark = |idx: usize| match raster.escape_steps[idx] {
                None => bounded = true,
                Some(_) => escaped = true,
            };
            mark(raster.index(col, row));
            if col > 0 {
                mark(raster.index(col - 1, row));
            }
            if col + 1 < width {
                mark(raster.index(col + 1, row));
            }
            if row > 0 {
                mark(raster.index(col, row - 1));
            }
            if row + 1 < height {
                mark(raster.index(col, row + 1));
            }
            raster.boundary[row * width + col] = bounded && escaped;
        }
    }
    raster
}

/// Box-counting comparison between a finite root cloud and the boundary
/// pixels of a raster.
#[derive(Clone, PartialEq, Debug)]
pub struct DiscrepancyReport {
    /// The window was split into `boxes × boxes` congruent cells.
    pub boxes: usize,
    /// Roots that landed inside the window; the empirical measure puts
    /// mass `1/roots_inside` on each of them.
    pub roots_inside: usize,
    /// Roots outside the window, excluded from the comparison.
    pub roots_outside: usize,
    /// True when the raster has no boundary pixels at all; the reference
    /// measure is then empty and the discrepancies reduce to the empirical
    /// cell masses.
    pub no_reference: bool,
    /// `|empirical root mass − boundary pixel mass|` per cell, row-major
    /// with row 0 at the bottom of the window.
    pub cell_discrepancy: Vec<f64>,
    pub max_discrepancy: f64,
}

/// Compares the normalized counting measure of `roots` against the
/// normalized boundary-pixel measure of `raster`, cell by cell on a
/// `boxes × boxes` grid over the raster window.
///
/// Either side may be degenerate: with no boundary pixels the report is
/// flagged [`DiscrepancyReport::no_reference`], and with no in-window
/// roots the empirical side is identically zero.
///
/// # Panics
/// If `boxes` is zero.
pub fn equidist_compare(
    roots: &[Complex64],
    raster: &BifurcationRaster,
    boxes: usize,
) -> DiscrepancyReport {
    assert!(boxes > 0, "need at least one cell");
    let (re_min, im_min, re_max, im_max) = raster.window;
    let cell_of = |z: Complex64| -> Option<usize> {
        let fx = (z.re - re_min) / (re_max - re_min);
        let fy = (z.im - im_min) / (im_max - im_min);
        if !(0.0..=1.0).contains(&fx) || !(0.0..=1.0).contains(&fy) {
            return None;
        }
        let col = ((fx * boxes as f64) as usize).min(boxes - 1);
        let row = ((fy * boxes as f64) as usize).min(boxes - 1);
        Some(row * boxes + col)
    };

    let mut root_counts = vec![0usize; boxes * boxes];
    let mut outside = 0usize;
    for &r in roots {
        match cell_of(r) {
            Some(cell) => root_counts[cell] += 1,
            None => outside += 1,
        }
    }
    let inside = roots.len() - outside;

    let mut boundary_counts = vec![0usize; boxes * boxes];
    let mut boundary_total = 0usize;
    for row in 0..raster.height {
        for col in 0..raster.width {
            if raster.boundary[raster.index(col, row)] {
                if let Some(cell) = cell_of(raster.pixel_center(col, row)) {
                    boundary_counts[cell] += 1;
                    boundary_total += 1;
                }
            }
        }
    }

    let mut cell_discrepancy = Vec::with_capacity(boxes * boxes);
    let mut max_discrepancy = 0.0f64;
    for cell in 0..boxes * boxes {
        let emp = if inside == 0 { 0.0 } else { root_counts[cell] as f64 / inside as f64 };
        let reference = if boundary_total == 0 {
            0.0
        } else {
            boundary_counts[cell] as f64 / boundary_total as f64
        };
        let diff = (emp - reference).abs();
        max_discrepancy = max_discrepancy.max(diff);
        cell_discrepancy.push(diff);
    }
    DiscrepancyReport {
        boxes,
        roots_inside: inside,
        roots_outside: outside,
        no_reference: boundary_total == 0,
        cell_discrepancy,
        max_discrepancy,
    }
}

/// The complex parameter values named by a list of classified roots:
/// rational roots on the real axis, all primitive roots of unity of each
/// cyclotomic order, and numeric roots as given. This is the canonical way
/// to turn the output of [`crate::prep::prep_parameter_set`] into a point
/// cloud for [`equidist_compare`].
pub fn root_points(roots: &[VerifiedRoot]) -> Vec<Complex64> {
    let mut cloud = Vec::new();
    for root in roots {
        match &root.kind {
            RootKind::Rational(r) => {
                cloud.push(Complex64::new(crate::skew::rat_to_f64(r), 0.0));
            }
            RootKind::Cyclotomic { order } => {
                for k in 1..=*order {
                    if num::integer::gcd(k, *order) == 1 {
                        let theta = std::f64::consts::TAU * f64::from(k) / f64::from(*order);
                        cloud.push(Complex64::from_polar(1.0, theta));
                    }
                }
            }
            RootKind::Numeric { re, im } => cloud.push(Complex64::new(*re, *im)),
        }
    }
    cloud
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_gpoly, parse_tpoly, parse_xtpoly, rat, UPoly};
    use crate::prep::prep_parameter_set;
    use crate::skew::{SkewProduct, DEFAULT_DEGREE_BUDGET};
    use num::One;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn squares() -> SkewProduct {
        SkewProduct::quadratic(
            UPoly::zero(),
            UPoly::zero(),
            UPoly::zero(),
            UPoly::zero(),
        )
    }

    fn degree_eleven_family() -> SkewProduct {
        SkewProduct::check_regular(
            parse_xtpoly("x^11").unwrap(),
            parse_gpoly("y^11 + t*y^2 - t*x^11").unwrap(),
        )
        .unwrap()
    }

    fn circle_family() -> SkewProduct {
        SkewProduct::check_regular(
            parse_xtpoly("x^2").unwrap(),
            parse_gpoly("y^2 + t*x*y").unwrap(),
        )
        .unwrap()
    }

    fn marked(family: SkewProduct, a: &str, b: &str) -> MarkedPair {
        MarkedPair::new(family, parse_tpoly(a).unwrap(), parse_tpoly(b).unwrap())
    }

    fn square_coeffs() -> [Complex64; 3] {
        [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
    }

    #[test]
    fn squaring_map_green_is_the_log() {
        let f = square_coeffs();
        let eval = GreenEvaluator::for_polynomial(&f);
        let g = green_1d(&f, c(4.0, 0.0), &eval);
        assert!(!g.bounded_at_budget);
        assert!((g.value - 4.0f64.ln()).abs() < 1e-12);
        // Starting above the stopping threshold reads off log|x₀| directly.
        let huge = green_1d(&f, c(1.0e300, 0.0), &eval);
        assert_eq!(huge.escape_step, Some(0));
        assert!((huge.value - 1.0e300f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn pure_powers_have_exactly_logarithmic_green() {
        for d in [2usize, 3, 11] {
            let mut coeffs = vec![c(0.0, 0.0); d + 1];
            coeffs[d] = c(1.0, 0.0);
            let eval = GreenEvaluator::for_polynomial(&coeffs);
            for x0 in [4.0, 10.0, 1.0e3, 1.0e9] {
                let g = green_1d(&coeffs, c(x0, 0.0), &eval);
                assert!(
                    (g.value - x0.ln()).abs() < 1e-10,
                    "d = {d}, x0 = {x0}: {} vs {}",
                    g.value,
                    x0.ln()
                );
            }
        }
    }

    #[test]
    fn preperiodic_chebyshev_point_is_flagged_bounded() {
        // 1 → −1 → −1 under z² − 2: never escapes, so the report must say
        // "bounded at budget", not "Green value zero".
        let f = [c(-2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let eval = GreenEvaluator::for_polynomial(&f);
        let g = green_1d(&f, c(1.0, 0.0), &eval);
        assert!(g.bounded_at_budget);
        assert_eq!(g.value, 0.0);
        assert_eq!(g.escape_step, None);
    }

    #[test]
    fn escaping_critical_orbit_green_is_self_consistent() {
        let f = [c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let eval = GreenEvaluator::for_polynomial(&f);
        let g = green_1d(&f, c(0.0, 0.0), &eval);
        assert!(!g.bounded_at_budget);
        assert!(g.value > 0.0);
        // Cross-check against the raw d^{-n} log‖zₙ‖ sequence two steps
        // past the threshold crossing.
        let mut z = c(0.0, 0.0);
        let mut estimates = Vec::new();
        for n in 1..=9 {
            z = z * z + c(1.0, 0.0);
            if n >= 8 {
                estimates.push(z.norm().ln() / 2f64.powi(n));
            }
        }
        assert!((estimates[0] - estimates[1]).abs() < eval.tol);
        assert!((g.value - estimates[1]).abs() < eval.tol);
    }

    #[test]
    fn split_family_green_matches_the_base_log() {
        let skew = squares().specialize_numeric(c(0.0, 0.0));
        let eval = GreenEvaluator::for_skew(&skew);
        let g = green_2d(&skew, (c(4.0, 0.0), c(2.0, 0.0)), &eval);
        assert!((g.value - 4.0f64.ln()).abs() < 1e-12);
        let base = green_1d(skew.f_coeffs(), c(4.0, 0.0), &eval);
        assert!((g.value - base.value).abs() < 1e-12);
    }

    #[test]
    fn degree_eleven_marked_orbit_green_at_ten() {
        let pair = marked(degree_eleven_family(), "t^2", "t^11");
        let skew = pair.family().specialize_numeric(c(10.0, 0.0));
        let eval = GreenEvaluator::for_skew(&skew);
        let g = green_2d(&skew, (c(100.0, 0.0), c(1.0e11, 0.0)), &eval);
        assert_eq!(g.escape_step, Some(0));
        assert!((g.value - 11.0 * 10.0f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn unit_circle_marked_points_stay_bounded() {
        let family = circle_family();
        // t = i has norm exactly 1, so the orbit (t^{2ⁿ}, 0) sits on the
        // circle forever; the default budget is safe.
        let skew = family.specialize_numeric(c(0.0, 1.0));
        let eval = GreenEvaluator::for_skew(&skew);
        let g = green_2d(&skew, (c(0.0, 1.0), c(0.0, 0.0)), &eval);
        assert!(g.bounded_at_budget);
        // A generic angle only has |t| = 1 up to rounding; the doubling
        // exponent amplifies that epsilon past any radius at around 2⁵⁴,
        // so boundedness is only meaningful for budgets well below that.
        let modest = GreenEvaluator::new(2.0, 40, DEFAULT_GREEN_TOL);
        for theta in [0.3, 2.0, 4.4] {
            let t = Complex64::from_polar(1.0, theta);
            let skew = family.specialize_numeric(t);
            let g = green_2d(&skew, (t, c(0.0, 0.0)), &modest);
            assert!(g.bounded_at_budget, "theta = {theta}");
        }
        // Just outside the circle the same marked orbit escapes.
        let skew = family.specialize_numeric(c(2.0, 0.0));
        let g = green_2d(&skew, (c(2.0, 0.0), c(0.0, 0.0)), &eval);
        assert!(!g.bounded_at_budget);
        assert!((g.value - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn green_scales_by_the_degree_under_one_application() {
        // |G(F(P)) − d·G(P)| small at escaping points, across families.
        let cases = vec![
            (squares().specialize_numeric(c(0.0, 0.0)), (c(3.0, 0.0), c(2.0, 0.0))),
            (squares().specialize_numeric(c(0.0, 0.0)), (c(0.1, 0.0), c(7.0, 3.0))),
            (
                degree_eleven_family().specialize_numeric(c(2.0, 0.0)),
                (c(3.0, 0.0), c(1.5, 0.0)),
            ),
            (circle_family().specialize_numeric(c(1.7, 0.0)), (c(1.7, 0.0), c(0.4, 0.2))),
        ];
        for (skew, p) in cases {
            let eval = GreenEvaluator::for_skew(&skew);
            let g = green_2d(&skew, p, &eval);
            assert!(!g.bounded_at_budget);
            let gf = green_2d(&skew, skew.apply(p), &eval);
            let d = skew.degree() as f64;
            assert!(
                (gf.value - d * g.value).abs() < 10.0 * eval.tol,
                "residual {} at {:?}",
                (gf.value - d * g.value).abs(),
                p
            );
        }
    }

    #[test]
    fn ratio_identity_holds_on_the_degree_eleven_pair() {
        let pair = marked(degree_eleven_family(), "t^2", "t^11");
        let report = green_ratio_check(&pair, &[c(10.0, 0.0)]).unwrap();
        assert_eq!((report.m1, report.m2), (2, 9));
        assert!(report.max_residual < 1e-6, "residual {}", report.max_residual);
        let row = &report.samples[0];
        assert!((row.base_green.value - 2.0 * 10.0f64.ln()).abs() < 1e-9);
        assert!((row.pair_green.value - 11.0 * 10.0f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn ratio_identity_tightens_at_large_parameters() {
        let pair = marked(degree_eleven_family(), "t^2", "t^11");
        let samples: Vec<Complex64> = (0..4)
            .map(|k| {
                // Axis-aligned points of norm exactly 10³.
                let (re, im) = match k {
                    0 => (1.0e3, 0.0),
                    1 => (0.0, 1.0e3),
                    2 => (-1.0e3, 0.0),
                    _ => (0.0, -1.0e3),
                };
                c(re, im)
            })
            .collect();
        let report = green_ratio_check(&pair, &samples).unwrap();
        assert!(report.max_residual < 1e-8, "residual {}", report.max_residual);
        for row in &report.samples {
            assert!(!row.base_green.bounded_at_budget);
            assert!(!row.pair_green.bounded_at_budget);
        }
    }

    #[test]
    fn ratio_check_exposes_a_mismatched_marked_point() {
        // b = 2a has the right degree but the wrong leading coefficient;
        // the fibered rate picks up an extra log 2 that never cancels.
        let pair = marked(squares(), "t", "2*t");
        let report = green_ratio_check(&pair, &[c(3.0, 0.0)]).unwrap();
        assert_eq!((report.m1, report.m2), (1, 0));
        assert!((report.max_residual - 2.0f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn ratio_check_rejects_degenerate_degree_patterns() {
        let pair = marked(squares(), "1", "t");
        assert!(matches!(
            green_ratio_check(&pair, &[c(2.0, 0.0)]),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn raster_of_the_base_critical_point_matches_direct_iteration() {
        // Marked point (0, 0) under (x² + t, y²): the x-coordinate runs the
        // classical quadratic parameter recursion, y stays 0, so every
        // pixel must agree with a hand-rolled z ← z² + t loop using the
        // same bailout.
        let family = SkewProduct::check_regular(
            parse_xtpoly("x^2 + t").unwrap(),
            parse_gpoly("y^2").unwrap(),
        )
        .unwrap();
        let pair = marked(family, "0", "0");
        let window = (-2.2, -1.2, 0.8, 1.2);
        let (width, height, budget) = (48usize, 40usize, 60usize);
        let raster = bifurcation_raster(&pair, window, (width, height), budget);

        for row in 0..height {
            for col in 0..width {
                let t = raster.pixel_center(col, row);
                let bailout = (1.0 + t.norm()).max(2.0);
                let mut z = c(0.0, 0.0);
                let mut n = 0u32;
                let expected = loop {
                    if z.norm() > bailout {
                        break Some(n);
                    }
                    if n as usize == budget {
                        break None;
                    }
                    z = z * z + t;
                    n += 1;
                };
                assert_eq!(
                    raster.escape_steps[raster.index(col, row)],
                    expected,
                    "pixel ({col}, {row})"
                );
            }
        }
        let bounded = raster.escape_steps.iter().filter(|s| s.is_none()).count();
        assert!(bounded > 0 && bounded < width * height);
        assert!(raster.boundary_count() > 0);
        for (idx, step) in raster.escape_steps.iter().enumerate() {
            if step.is_some() {
                assert!(raster.green[idx] > 0.0);
            } else {
                assert_eq!(raster.green[idx], 0.0);
            }
        }
    }

    #[test]
    fn raster_is_identical_across_thread_counts() {
        let pair = marked(circle_family(), "t", "0");
        let window = (-1.5, -1.5, 1.5, 1.5);
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| bifurcation_raster(&pair, window, (32, 32), 40))
        };
        let serial = run(1);
        let parallel = run(3);
        assert_eq!(serial, parallel);
        assert_eq!(serial, run(1));
    }

    #[test]
    fn unit_disk_raster_boundary_hugs_the_circle() {
        // Marked orbit (t^{2ⁿ}, 0): bounded exactly on |t| ≤ 1, so the
        // interface must sit inside a thin annulus around the unit circle.
        let pair = marked(circle_family(), "t", "0");
        let raster = bifurcation_raster(&pair, (-1.5, -1.5, 1.5, 1.5), (64, 64), 50);
        assert!(raster.boundary_count() > 0);
        for row in 0..raster.height {
            for col in 0..raster.width {
                let t = raster.pixel_center(col, row);
                let idx = raster.index(col, row);
                if t.norm() <= 0.9 {
                    assert_eq!(raster.escape_steps[idx], None, "inside at {t}");
                }
                if t.norm() >= 1.15 {
                    assert!(raster.escape_steps[idx].is_some(), "outside at {t}");
                }
                if raster.boundary[idx] {
                    assert!(
                        (t.norm() - 1.0).abs() < 0.15,
                        "boundary pixel at norm {}",
                        t.norm()
                    );
                }
            }
        }
    }

    #[test]
    fn window_without_interface_has_empty_boundary() {
        let pair = marked(circle_family(), "t", "0");
        let raster = bifurcation_raster(&pair, (2.0, 0.5, 3.0, 1.5), (16, 16), 50);
        assert!(raster.escape_steps.iter().all(|s| s.is_some()));
        assert_eq!(raster.boundary_count(), 0);
        let report = equidist_compare(&[c(2.5, 1.0)], &raster, 4);
        assert!(report.no_reference);
        assert_eq!(report.roots_inside, 1);
        assert!((report.max_discrepancy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pgm_output_has_the_right_shape() {
        let pair = marked(circle_family(), "t", "0");
        let raster = bifurcation_raster(&pair, (-1.5, -1.5, 1.5, 1.5), (16, 16), 50);
        let bytes = raster.to_pgm_bytes();
        let header = b"P5\n16 16\n255\n";
        assert!(bytes.starts_with(header));
        assert_eq!(bytes.len(), header.len() + 16 * 16);
        let data = &bytes[header.len()..];
        // The window straddles the disk: both bounded (255) and escaping
        // (<255) pixels must appear, and the top-left image corner (far
        // from the disk) escapes.
        assert!(data.iter().any(|&b| b == 255));
        assert!(data.iter().any(|&b| b < 255));
        assert!(data[0] < 255);
    }

    /// Root cloud of the preperiodicity polynomials up to pattern depth
    /// `n_max`: exact rationals plus all primitive roots of the detected
    /// cyclotomic orders.
    fn preperiodic_root_cloud(pair: &MarkedPair, n_max: usize) -> Vec<Complex64> {
        let set = prep_parameter_set(pair, n_max, DEFAULT_DEGREE_BUDGET, 64).unwrap();
        assert!(
            set.polynomials.remainder.is_one(),
            "cloud must be fully classified"
        );
        root_points(&set.roots)
    }

    #[test]
    fn root_points_expands_cyclotomic_orders_to_primitive_roots() {
        let roots = vec![
            VerifiedRoot {
                kind: RootKind::Rational(rat(-2, 1)),
                certificates: Vec::new(),
                verified: true,
            },
            VerifiedRoot {
                kind: RootKind::Cyclotomic { order: 4 },
                certificates: Vec::new(),
                verified: true,
            },
            VerifiedRoot {
                kind: RootKind::Numeric { re: 0.25, im: -1.5 },
                certificates: Vec::new(),
                verified: false,
            },
        ];
        let cloud = root_points(&roots);
        // -2, then ±i (the two primitive fourth roots), then the numeric one.
        assert_eq!(cloud.len(), 4);
        assert_eq!(cloud[0], c(-2.0, 0.0));
        for z in &cloud[1..3] {
            assert!(z.re.abs() < 1e-12 && (z.im.abs() - 1.0).abs() < 1e-12);
        }
        assert_eq!(cloud[3], c(0.25, -1.5));
    }

    #[test]
    fn preperiodic_parameters_equidistribute_toward_the_boundary() {
        // Deeper pattern sweeps pile more roots of unity onto the unit
        // circle, which is exactly the bifurcation boundary of this
        // family, so the box discrepancy should shrink as the depth grows.
        let pair = marked(circle_family(), "t", "0");
        let raster = bifurcation_raster(&pair, (-1.5, -1.5, 1.5, 1.5), (96, 96), 50);
        let mut discrepancies = Vec::new();
        for n_max in [2usize, 3, 4] {
            let cloud = preperiodic_root_cloud(&pair, n_max);
            let report = equidist_compare(&cloud, &raster, 6);
            assert_eq!(report.roots_inside, cloud.len());
            assert_eq!(report.roots_outside, 0);
            assert!(!report.no_reference);
            discrepancies.push(report.max_discrepancy);
        }
        assert!(discrepancies[1] <= discrepancies[0] + 1e-12);
        assert!(discrepancies[2] <= discrepancies[1] + 1e-12);
        assert!(discrepancies[2] < discrepancies[0]);
    }

    #[test]
    fn point_mass_cloud_has_large_discrepancy() {
        let pair = marked(circle_family(), "t", "0");
        let raster = bifurcation_raster(&pair, (-1.5, -1.5, 1.5, 1.5), (96, 96), 50);
        let cloud = vec![c(0.9, 0.0); 8];
        let report = equidist_compare(&cloud, &raster, 6);
        assert!(report.max_discrepancy > 0.5);
    }

    #[test]
    fn evaluator_radius_comes_from_the_coefficients() {
        let skew = degree_eleven_family().specialize_numeric(c(10.0, 0.0));
        let eval = GreenEvaluator::for_skew(&skew);
        assert!((eval.escape_radius - 21.0).abs() < 1e-12);
        assert_eq!(eval.threshold(), GREEN_ESCAPE_FLOOR);
        let trivial = circle_family().specialize_numeric(c(0.0, 0.0));
        assert_eq!(GreenEvaluator::for_skew(&trivial).escape_radius, 2.0);
        let eval = GreenEvaluator::new(5.0e7, 10, 1e-9);
        assert_eq!(eval.threshold(), 5.0e7);
    }
}
