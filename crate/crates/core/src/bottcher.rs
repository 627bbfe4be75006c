//! Vertical Böttcher series machinery: the order-by-order coefficient
//! recursion for `Φ_x(y) = y + c₀(x) + Σ_{i≥1} c_i(x) y^{−i}` solving
//! `Φ_{f(x)}(g(x,y)) = Φ_x(y)^d`, the degree bounds
//! `deg_t c_i(a(t)) ≤ k₃(i+1) + i·k₁`, polynomial-part extraction of
//! `Φ_x(y)^{m₁}`, and the orbit-relation candidate `ξ′·P(aₙ,bₙ) = Q(aₙ)`
//! with exact root-of-unity detection for the leading-coefficient ratio.
//!
//! All series arithmetic is exact over `Q`: dividing by the dynamical
//! degree `d` stays in rational coefficients (the [`QAlgebra`] scaling
//! action), so the degree-in-`t` measurements the bounds are about are
//! never approximated. Truncation windows are tracked explicitly —
//! computing `c_n` requires carrying both sides of the functional
//! equation to `y`-order `d−1−n`, i.e. order `n+1` in `z = 1/y` after
//! normalizing by `y^d`.

use num::{One, ToPrimitive, Zero};

use crate::algebra::{
    poly_compose, rat, rint, GPoly, Mono, QAlgebra, Rat, Ring, TPoly, UPoly, XTPoly,
};
use crate::error::{Error, Result};
use crate::skew::{Complex64, MarkedPair, SkewProduct, DEFAULT_DEGREE_BUDGET};

// ---------------------------------------------------------------------------
// Truncated power series in z = 1/y
// ---------------------------------------------------------------------------

/// Power series in `z` truncated to a fixed window `z^0 .. z^{w−1}`, with
/// coefficients in an exact Q-algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Tail<C: QAlgebra> {
    co: Vec<C>,
}

impl<C: QAlgebra> Tail<C> {
    fn zero(window: usize) -> Tail<C> {
        Tail { co: vec![C::zero(); window] }
    }

    fn mul(&self, other: &Tail<C>) -> Tail<C> {
        let w = self.co.len();
        let mut out = Tail::<C>::zero(w);
        for (i, a) in self.co.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.co.iter().take(w - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.co[i + j] = out.co[i + j].clone() + a.clone() * b.clone();
            }
        }
        out
    }

    fn add(&self, other: &Tail<C>) -> Tail<C> {
        let mut out = self.clone();
        for (o, b) in out.co.iter_mut().zip(&other.co) {
            *o = o.clone() + b.clone();
        }
        out
    }

    fn scale(&self, r: &Rat) -> Tail<C> {
        Tail { co: self.co.iter().map(|c| c.scale(r)).collect() }
    }

    /// `(1 + self)^α` for rational `α`, via the generalized binomial
    /// series; requires a vanishing constant term. Integer `α ≥ 0`
    /// terminates naturally once the binomial coefficient hits zero.
    fn one_plus_pow(&self, alpha: &Rat) -> Tail<C> {
        debug_assert!(self.co[0].is_zero(), "series must be 1 + O(z)");
        let w = self.co.len();
        let mut out = Tail::zero(w);
        out.co[0] = C::one();
        let mut upow = out.clone();
        let mut binom = Rat::one();
        for k in 1..w {
            binom = binom * (alpha.clone() - rint(k as i64 - 1)) / rint(k as i64);
            if binom.is_zero() {
                break;
            }
            upow = upow.mul(self);
            out = out.add(&upow.scale(&binom));
        }
        out
    }
}

/// The monomial `c·x^i` as a polynomial in `x` over `Q[t]`.
fn x_monomial(i: u32, c: &TPoly) -> XTPoly {
    let mut v = vec![TPoly::zero(); i as usize + 1];
    v[i as usize] = c.clone();
    UPoly::from_coeffs(v)
}

/// `g/y^d − 1` as a series in `z = 1/y`: entry `j` holds `μ_j(x)`, the
/// coefficient of `y^{d−j}` in `g`.
fn fiber_tail(family: &SkewProduct, window: usize) -> Tail<XTPoly> {
    let d = family.degree() as u32;
    let mut v = Tail::<XTPoly>::zero(window);
    for (m, c) in family.fiber().terms() {
        if m.j == d {
            continue; // the monic y^d term
        }
        let j = (d - m.j) as usize;
        if j < window {
            v.co[j] = v.co[j].clone() + x_monomial(m.i, c);
        }
    }
    v
}

// ---------------------------------------------------------------------------
// Vertical Böttcher coefficients
// ---------------------------------------------------------------------------

/// The truncated vertical Böttcher coordinate of a regular skew product:
/// `Φ_x(y) = y + c₀(x) + Σ_{i=1}^{M} c_i(x) y^{−i}`, each `c_i` exactly a
/// polynomial in `x` over `Q[t]`.
///
/// The centering term `c₀ = μ₁/d` (from the `y^{d−1}` coefficient of `g`)
/// vanishes for every `y`-centered fiber polynomial, which covers all the
/// normal forms in this crate; it is carried so the functional equation
/// holds verbatim for uncentered input.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerticalBottcher {
    family: SkewProduct,
    order: usize,
    centering: XTPoly,
    coeffs: Vec<XTPoly>,
}

impl VerticalBottcher {
    pub fn family(&self) -> &SkewProduct {
        &self.family
    }

    /// The truncation order `M`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `c₀(x)`, zero for `y`-centered fibers.
    pub fn centering(&self) -> &XTPoly {
        &self.centering
    }

    /// `c_1 .. c_M` (index `i` holds `c_{i+1}`).
    pub fn coeffs(&self) -> &[XTPoly] {
        &self.coeffs
    }

    /// Coefficients of `z^0 .. z^{M+1}` of
    /// `Φ_{f(x)}(g(x,y))/y^d − (Φ_x(y)/y)^d · 1` — the functional-equation
    /// residual through the truncation window. All-zero certifies the
    /// computed coefficients.
    pub fn functional_equation_residual(&self) -> Vec<XTPoly> {
        let d = self.family.degree();
        let w = self.order + 2;
        let v = fiber_tail(&self.family, w);
        let u = self.series_tail(w);
        let rhs = u.one_plus_pow(&rint(d as i64));
        let mut lhs = v.clone();
        lhs.co[0] = XTPoly::one();
        let f = self.family.base();
        if d < w {
            lhs.co[d] = lhs.co[d].clone() + poly_compose(&self.centering, f);
        }
        for (j, cj) in self.coeffs.iter().enumerate() {
            let off = d * (j + 2);
            if off >= w {
                break;
            }
            let inv = v.one_plus_pow(&rint(-((j + 1) as i64)));
            let cjf = poly_compose(cj, f);
            for k in off..w {
                lhs.co[k] = lhs.co[k].clone() + cjf.clone() * inv.co[k - off].clone();
            }
        }
        (0..w).map(|k| lhs.co[k].clone() - rhs.co[k].clone()).collect()
    }

    /// `Φ_x(y)/y − 1` as a `z`-series: `c₀ z + c₁ z² + …`.
    fn series_tail(&self, window: usize) -> Tail<XTPoly> {
        let mut u = Tail::zero(window);
        if window > 1 {
            u.co[1] = self.centering.clone();
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + 2 < window {
                u.co[i + 2] = c.clone();
            }
        }
        u
    }
}

/// Solves the functional equation order by order: matching the
/// `y^{d−1−n}` coefficients of `Φ_{f(x)}(g(x,y))` and `Φ_x(y)^d` is
/// triangular in `n` — the unknown `c_n` appears exactly once, with
/// factor `d` — so each coefficient is one exact division by `d`.
///
/// # Panics
/// Panics when `order = 0`.
pub fn vertical_bottcher_coeffs(family: &SkewProduct, order: usize) -> VerticalBottcher {
    assert!(order >= 1, "truncation order must be at least 1");
    let d = family.degree();
    let f = family.base();
    let w = order + 2;
    let v = fiber_tail(family, w);
    let mut u = Tail::<XTPoly>::zero(w);
    let mut centering = XTPoly::zero();
    let mut centering_f = XTPoly::zero();
    let mut coeffs: Vec<XTPoly> = Vec::new();
    // c_j(f(x)) and (1+v)^{−j} for the j with d(j+1) inside the window.
    let mut composed: Vec<XTPoly> = Vec::new();
    let mut inv_pows: Vec<Tail<XTPoly>> = Vec::new();
    for n in 0..=order {
        let rhs = u.one_plus_pow(&rint(d as i64));
        let mut t_lhs = v.co[n + 1].clone();
        if n + 1 == d {
            t_lhs = t_lhs + centering_f.clone();
        }
        for (j, cjf) in composed.iter().enumerate() {
            let off = d * (j + 2);
            if off > n + 1 {
                break;
            }
            t_lhs = t_lhs + cjf.clone() * inv_pows[j].co[n + 1 - off].clone();
        }
        let cn = (t_lhs - rhs.co[n + 1].clone()).scale(&rat(1, d as i64));
        u.co[n + 1] = cn.clone();
        if n == 0 {
            centering_f = poly_compose(&cn, f);
            centering = cn;
        } else {
            if d * (n + 1) <= order + 1 {
                composed.push(poly_compose(&cn, f));
                inv_pows.push(v.one_plus_pow(&rint(-(n as i64))));
            }
            coeffs.push(cn);
        }
    }
    VerticalBottcher { family: family.clone(), order, centering, coeffs }
}

/// Classical one-variable Böttcher tail of a monic `f` of degree `d ≥ 2`:
/// coefficients `[c₀, c₁, …, c_M]` of `φ(y) = y + c₀ + Σ c_i y^{−i}`
/// solving `φ(f(y)) = φ(y)^d`, by the same order-matching recursion.
///
/// Generic over the coefficient algebra so the same routine serves plain
/// rational polynomials and `t`-dependent base maps.
///
/// # Panics
/// Panics unless `f` is monic of degree at least 2.
pub fn onedim_bottcher_coeffs<C: QAlgebra>(f: &UPoly<C>, order: usize) -> Vec<C> {
    let d = f.degree().expect("nonzero polynomial");
    assert!(d >= 2, "dynamical degree must be at least 2");
    assert!(f.coeff(d).is_one(), "polynomial must be monic");
    let w = order + 2;
    let mut v = Tail::<C>::zero(w);
    for j in 1..=d.min(w - 1) {
        v.co[j] = f.coeff(d - j);
    }
    let mut u = Tail::<C>::zero(w);
    let mut out: Vec<C> = Vec::new();
    let mut inv_pows: Vec<Tail<C>> = Vec::new();
    for n in 0..=order {
        let rhs = u.one_plus_pow(&rint(d as i64));
        let mut t_lhs = v.co[n + 1].clone();
        if n + 1 == d {
            t_lhs = t_lhs + out[0].clone();
        }
        for (idx, inv) in inv_pows.iter().enumerate() {
            let off = d * (idx + 2);
            if off > n + 1 {
                break;
            }
            t_lhs = t_lhs + out[idx + 1].clone() * inv.co[n + 1 - off].clone();
        }
        let cn = (t_lhs - rhs.co[n + 1].clone()).scale(&rat(1, d as i64));
        u.co[n + 1] = cn.clone();
        if n >= 1 && d * (n + 1) <= order + 1 {
            inv_pows.push(v.one_plus_pow(&rint(-(n as i64))));
        }
        out.push(cn);
    }
    out
}

// ---------------------------------------------------------------------------
// Degree bounds
// ---------------------------------------------------------------------------

/// One row of [`degree_bound_check`]: the measured `deg_t(c_i(a(t)))`
/// against the bound `k₃(i+1) + i·k₁` (`actual = None` when the
/// coefficient vanishes identically on the marked base point).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DegreeBoundRow {
    pub index: usize,
    pub actual: Option<usize>,
    pub bound: usize,
    pub pass: bool,
}

/// Per-index report of the linear degree bound, with the advisory flag
/// for the hypothesis `deg_t(a) > deg_t(f)` the bound's proof uses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeBoundReport {
    /// `deg_t(a) > deg_t(f)`; the rows are computed either way, flagged
    /// advisory when this fails.
    pub condition_one_holds: bool,
    pub k3: usize,
    pub k1: usize,
    pub base_parameter_degree: usize,
    pub rows: Vec<DegreeBoundRow>,
}

impl DegreeBoundReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Measures `deg_t(c_i(a(t)))` for `i = 1..M` against `k₃(i+1) + i·k₁`.
pub fn degree_bound_check(pair: &MarkedPair, order: usize) -> DegreeBoundReport {
    let vb = vertical_bottcher_coeffs(pair.family(), order);
    let (a, _) = pair.point();
    let (k3, k1) = (pair.k3(), pair.k1());
    let rows = vb
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, ci)| {
            let i = idx + 1;
            let actual = ci.eval(&a).degree();
            let bound = k3 * (i + 1) + i * k1;
            DegreeBoundRow { index: i, actual, bound, pass: actual.map_or(true, |v| v <= bound) }
        })
        .collect();
    DegreeBoundReport {
        condition_one_holds: k3 > pair.family().deg_t_base(),
        k3,
        k1,
        base_parameter_degree: pair.family().deg_t_base(),
        rows,
    }
}

// ---------------------------------------------------------------------------
// Polynomial part of Φ_x(y)^{m₁}
// ---------------------------------------------------------------------------

/// One dropped (negative `y`-exponent) term of the expansion, measured
/// after substituting the marked point.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TailTerm {
    pub y_exponent: i64,
    /// `deg_t` after substitution; `None` when the term vanishes
    /// identically.
    pub t_degree: Option<i64>,
    /// Strictly negative `t`-degree (vacuously true for vanished terms).
    pub negative: bool,
}

/// The dropped terms of the truncation window, lowest `z`-order first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TailReport {
    pub terms: Vec<TailTerm>,
    pub all_negative: bool,
}

/// Shared expansion: polynomial part of `Φ_x(y)^{m₁}` plus the measured
/// tail window. Exact for every reported order — the window stops where
/// uncomputed higher coefficients could first contribute.
fn expand_polynomial_part(
    family: &SkewProduct,
    m1: usize,
    a: &TPoly,
    l2: usize,
) -> (GPoly, TailReport) {
    let order_used = m1 + 1;
    let vb = vertical_bottcher_coeffs(family, order_used);
    let w = order_used + 2;
    let u = vb.series_tail(w);
    let exp = u.one_plus_pow(&rint(m1 as i64));
    let mut p = GPoly::zero();
    for (k, ck) in exp.co.iter().take(m1 + 1).enumerate() {
        for (xi, tp) in ck.coeffs().iter().enumerate() {
            if !tp.is_zero() {
                p.add_term(Mono::new(xi as u32, (m1 - k) as u32), tp.clone());
            }
        }
    }
    let mut terms = Vec::new();
    for (k, ck) in exp.co.iter().enumerate().skip(m1 + 1) {
        let q = ck.eval(a);
        let t_degree = q.degree().map(|dq| dq as i64 - ((k - m1) * l2) as i64);
        terms.push(TailTerm {
            y_exponent: m1 as i64 - k as i64,
            t_degree,
            negative: t_degree.map_or(true, |v| v < 0),
        });
    }
    let all_negative = terms.iter().all(|t| t.negative);
    (p, TailReport { terms, all_negative })
}

/// The exact polynomial part `P(x,y)` of `Φ_x(y)^{m₁}` for the marked
/// pair's exponent `m₁ = lcm(ℓ₂, k₃)/ℓ₂`, with the dropped-term report
/// substantiating the `o(1)` tail claim.
///
/// # Errors
/// [`Error::HypothesisViolated`] when the marked degrees are degenerate
/// (`k₃ = 0`, `ℓ₂ = 0` or `ℓ₂ < k₃`) or when
/// `ℓ₂ < (m₁ + 1)(k₃ + k₁)`, the hypothesis under which every dropped
/// term provably has negative `t`-degree.
pub fn polynomial_part(pair: &MarkedPair) -> Result<(GPoly, TailReport)> {
    let (m1, _) = pair.multiplier_degrees().ok_or_else(|| {
        Error::HypothesisViolated(format!(
            "marked degrees degenerate: deg a = {}, deg b = {}",
            pair.k3(),
            pair.l2()
        ))
    })?;
    let needed = (m1 + 1) * (pair.k3() + pair.k1());
    if pair.l2() < needed {
        return Err(Error::HypothesisViolated(format!(
            "deg b = {} < (m1+1)(k3+k1) = {}",
            pair.l2(),
            needed
        )));
    }
    let (a, _) = pair.point();
    Ok(expand_polynomial_part(pair.family(), m1, &a, pair.l2()))
}

// ---------------------------------------------------------------------------
// Orbit-relation candidate
// ---------------------------------------------------------------------------

/// Candidate exact relation `ξ′·P(aₙ, bₙ) = Q(aₙ)` along a marked orbit:
/// `P` is the polynomial part of `Φ_x(y)^{m₁}`, `Q` the one-variable
/// polynomial part of `φ(x)^{m₁+m₂}`, and `ξ = μ_b^{m₁}/μ_a^{m₁+m₂}` the
/// leading-coefficient ratio whose root-of-unity order (when it has one)
/// makes the relation exact.
#[derive(Clone, PartialEq, Debug)]
pub struct OrbitRelationCandidate {
    pub m1: usize,
    pub m2: usize,
    /// Polynomial part of `Φ_x(y)^{m₁}`.
    pub p: GPoly,
    /// Polynomial part of `φ(x)^{m₁+m₂}` for the base map.
    pub q: XTPoly,
    /// Numeric value of `ξ`.
    pub xi: Complex64,
    /// Order of `ξ` as a root of unity when certified (`1` or `2` for the
    /// rational leading coefficients this crate produces).
    pub xi_cyclotomic: Option<u32>,
    pub iterate_index: usize,
    /// Number of orbit points on which the identity was verified exactly.
    pub verified_points: usize,
    /// Whether the degree hypotheses backing the tail estimates hold for
    /// the shifted pair; the exact identity check runs either way.
    pub hypotheses_hold: bool,
}

/// Builds and exactly verifies the orbit relation, starting the orbit at
/// `F^{iterate_index}(P)` and checking `prefix` consecutive points.
///
/// # Errors
/// - [`Error::HypothesisViolated`] when the shifted marked degrees are
///   degenerate, so the exponents `m₁, m₂` are undefined.
/// - [`Error::NotRootOfUnity`] when `ξ` provably is not a root of unity
///   (for rational leading coefficients: `ξ ∉ {±1}`) — evidence against
///   the preperiodicity hypothesis.
/// - [`Error::RelationFails`] when the identity is not exact at some
///   orbit index (reported).
/// - [`Error::DegreeBudgetExceeded`] from the symbolic orbit.
///
/// # Panics
/// Panics when `prefix = 0`.
pub fn orbit_relation_candidate(
    pair: &MarkedPair,
    iterate_index: usize,
    prefix: usize,
) -> Result<OrbitRelationCandidate> {
    assert!(prefix >= 1, "need at least one orbit point to verify");
    let orbit = pair.orbit_symbolic(iterate_index + prefix - 1, DEFAULT_DEGREE_BUDGET)?;
    let (a_s, b_s) = orbit.points[iterate_index].clone();
    let shifted = MarkedPair::new(pair.family().clone(), a_s.clone(), b_s.clone());
    let (m1, m2) = shifted.multiplier_degrees().ok_or_else(|| {
        Error::HypothesisViolated(format!(
            "shifted marked degrees degenerate: deg a = {}, deg b = {}",
            shifted.k3(),
            shifted.l2()
        ))
    })?;
    let hyp = shifted.degree_hypothesis_check();
    let hypotheses_hold = hyp.condition1 && hyp.condition2;

    let (p, _tail) = expand_polynomial_part(pair.family(), m1, &a_s, shifted.l2());
    let q = onedim_polynomial_part(pair.family().base(), m1 + m2);

    let d = pair.family().degree();
    let mu_a = a_s.coeff(a_s.degree().expect("nonconstant"));
    let mu_b = b_s.coeff(b_s.degree().expect("nonconstant"));
    let xi = mu_b.pow_u(m1 as u32) / mu_a.pow_u((m1 + m2) as u32);
    let xi_cyclotomic = if xi.is_one() {
        Some(1)
    } else if (-xi.clone()).is_one() {
        Some(2)
    } else {
        return Err(Error::NotRootOfUnity { xi: xi.to_string() });
    };

    for (n, (an, bn)) in orbit.points[iterate_index..].iter().enumerate() {
        // ξ^{dⁿ} for ξ = ±1: −1 survives iff ξ = −1 and dⁿ is odd.
        let negative = xi_cyclotomic == Some(2) && (n == 0 || d % 2 == 1);
        let lhs = p.eval_pair(an, bn);
        let lhs = if negative { -lhs } else { lhs };
        if lhs - q.eval(an) != TPoly::zero() {
            return Err(Error::RelationFails { n: iterate_index + n });
        }
    }

    Ok(OrbitRelationCandidate {
        m1,
        m2,
        p,
        q,
        xi: Complex64::new(xi.to_f64().unwrap_or(f64::NAN), 0.0),
        xi_cyclotomic,
        iterate_index,
        verified_points: prefix,
        hypotheses_hold,
    })
}

/// Polynomial part of `φ(x)^{mexp}` where `φ` is the one-variable
/// Böttcher coordinate of the monic base map `f` — the `Q` side of the
/// orbit relation.
fn onedim_polynomial_part<C: QAlgebra>(f: &UPoly<C>, mexp: usize) -> UPoly<C> {
    assert!(mexp >= 1);
    let cs = onedim_bottcher_coeffs(f, mexp - 1);
    let w = mexp + 1;
    let mut u = Tail::<C>::zero(w);
    for (i, c) in cs.into_iter().enumerate() {
        if i + 1 < w {
            u.co[i + 1] = c;
        }
    }
    let exp = u.one_plus_pow(&rint(mexp as i64));
    let mut coeffs = vec![C::zero(); mexp + 1];
    for (k, ck) in exp.co.iter().enumerate() {
        coeffs[mexp - k] = ck.clone();
    }
    UPoly::from_coeffs(coeffs)
}
