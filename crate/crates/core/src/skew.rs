//! Regular polynomial skew products `F_t(x, y) = (f_t(x), g_t(x, y))` over
//! `Q[t]`, marked points, and exact iteration.
//!
//! Regularity — `f` monic of `x`-degree `d`, coefficient of `y^d` in `g`
//! equal to 1, and every monomial `x^i y^j` of `g` satisfying `i + j ≤ d` —
//! is enforced at construction, so a [`SkewProduct`] always extends to an
//! endomorphism of the projective plane. Non-monic inputs are rejected
//! rather than auto-conjugated: the monic conjugation involves `(d−1)`-th
//! roots and may leave `Q`.
//!
//! Iteration comes in two exact modes: symbolic (orbit points are pairs of
//! polynomials in `t`, guarded by a coefficient budget) and specialized
//! (orbit points are exact scalars after evaluating the family at some
//! `t₀`). A third, floating-point mode ([`NumericSkew`]) backs the escape
//! rate estimators and never feeds back into exact data.

use num::integer::lcm;
use num::{Complex, One, Zero};

use crate::algebra::{
    poly_compose, GPoly, MPoly, Mono, Rat, Scalar, TPoly, UPoly, XTPoly,
};
use crate::error::{Error, Result};

/// Default cap on the total number of stored `t`-coefficients in one
/// symbolic orbit. Degree-11 families iterated 4 times stay well below it.
pub const DEFAULT_DEGREE_BUDGET: usize = 2_000_000;

/// Complex double-precision scalar used by the numeric code paths.
pub type Complex64 = Complex<f64>;

/// A regular polynomial skew product of degree `d ≥ 2` over `Q[t]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SkewProduct {
    d: usize,
    f: XTPoly,
    g: GPoly,
}

impl SkewProduct {
    /// Validates the regularity invariants and wraps `(f, g)`.
    ///
    /// # Errors
    /// - [`Error::NotMonic`] — `f` not monic of degree ≥ 2 in `x`, or the
    ///   `y^d` coefficient of `g` differs from 1;
    /// - [`Error::BadYDegree`] — `deg_y(g) ≠ d`;
    /// - [`Error::DegreeOverflow`] — some monomial `x^i y^j` of `g` has
    ///   `i + j > d`.
    pub fn check_regular(f: XTPoly, g: GPoly) -> Result<SkewProduct> {
        let d = match f.degree() {
            Some(d) if d >= 2 => d,
            other => {
                return Err(Error::NotMonic(format!(
                    "base polynomial must have x-degree ≥ 2, found degree {other:?}"
                )))
            }
        };
        if f.coeff(d) != TPoly::one() {
            return Err(Error::NotMonic(format!(
                "base polynomial has leading x-coefficient {}, expected 1",
                crate::algebra::upoly_string(&f.coeff(d), 't')
            )));
        }
        let found = g.deg_y().unwrap_or(0) as usize;
        if found != d {
            return Err(Error::BadYDegree { expected: d, found });
        }
        if g.coeff(0, d as u32) != TPoly::one() {
            return Err(Error::NotMonic(format!(
                "fiber polynomial has y^{d} coefficient {}, expected 1",
                crate::algebra::upoly_string(&g.coeff(0, d as u32), 't')
            )));
        }
        for (m, _) in g.terms() {
            if (m.i + m.j) as usize > d {
                return Err(Error::DegreeOverflow { i: m.i, j: m.j, d });
            }
        }
        Ok(SkewProduct { d, f, g })
    }

    /// The quadratic normal form `(x² + d, y² + a x² + b x + c)`; always
    /// regular by construction.
    pub fn quadratic(a: TPoly, b: TPoly, c: TPoly, dd: TPoly) -> SkewProduct {
        let f = UPoly::from_coeffs(vec![dd, TPoly::zero(), TPoly::one()]);
        let mut g = MPoly::zero();
        g.add_term(Mono { i: 0, j: 2 }, TPoly::one());
        g.add_term(Mono { i: 2, j: 0 }, a);
        g.add_term(Mono { i: 1, j: 0 }, b);
        g.add_term(Mono { i: 0, j: 0 }, c);
        SkewProduct::check_regular(f, g).expect("quadratic normal form is regular")
    }

    /// Dynamical degree `d`.
    pub fn degree(&self) -> usize {
        self.d
    }

    /// Base polynomial `f`, as a polynomial in `x` over `Q[t]`.
    pub fn base(&self) -> &XTPoly {
        &self.f
    }

    /// Fiber polynomial `g`, as a polynomial in `x`, `y` over `Q[t]`.
    pub fn fiber(&self) -> &GPoly {
        &self.g
    }

    /// Parameter degree of the base polynomial (0 when `t`-free).
    pub fn deg_t_base(&self) -> usize {
        (0..=self.d).filter_map(|i| self.f.coeff(i).degree()).max().unwrap_or(0)
    }

    /// Parameter degree of the fiber polynomial (0 when `t`-free).
    pub fn deg_t_fiber(&self) -> usize {
        self.g.deg_t().unwrap_or(0)
    }

    /// One exact symbolic step: `F(p)` with `p = (a(t), b(t))`.
    pub fn apply_symbolic(&self, p: &(TPoly, TPoly)) -> (TPoly, TPoly) {
        let x = self.f.eval(&p.0);
        let y = self.g.eval_pair(&p.0, &p.1);
        (x, y)
    }

    /// Evaluates the family at an exact parameter `t₀`.
    pub fn specialize<S: Scalar>(&self, t0: &S) -> SpecializedSkew<S> {
        let f_coeffs = (0..=self.d).map(|i| self.f.coeff(i).eval_scalar(t0)).collect();
        let g_terms = self.g.eval_t(t0);
        SpecializedSkew { d: self.d, f_coeffs, g_terms }
    }

    /// Evaluates the family at a complex floating-point parameter.
    pub fn specialize_numeric(&self, t0: Complex64) -> NumericSkew {
        let f_coeffs =
            (0..=self.d).map(|i| tpoly_eval_complex(&self.f.coeff(i), t0)).collect();
        let g_terms = self
            .g
            .terms()
            .map(|(m, c)| (m.i, m.j, tpoly_eval_complex(c, t0)))
            .collect();
        NumericSkew { d: self.d, f_coeffs, g_terms }
    }

    /// The restriction of `F` to the line at infinity: `z ↦ g_d(1, z)`
    /// where `g_d` is the top homogeneous part of `g` in `(x, y)`. For the
    /// quadratic normal form this is `z² + a`.
    pub fn restrict_infinity(&self) -> UPoly<TPoly> {
        let top = self.g.homogeneous_part(self.d as u32);
        let mut coeffs = vec![TPoly::zero(); self.d + 1];
        for (m, c) in top.terms() {
            coeffs[m.j as usize] = c.clone();
        }
        UPoly::from_coeffs(coeffs)
    }

    /// Irreducible components of the critical locus `V(f′(x) · ∂g/∂y)`,
    /// each with a flag saying whether the limited factorizer certified it.
    ///
    /// The factorizer only knows content extraction, monomial split, and
    /// `t`-free univariate factorization over `Q` (rational roots plus
    /// cyclotomic detection); anything it cannot finish is returned whole
    /// and flagged [`ComponentStatus::FactorizationIncomplete`]. For the
    /// quadratic normal form the result is `{x, y}`.
    pub fn critical_components(&self) -> Vec<CriticalComponent> {
        let fx = xtpoly_to_gpoly(&self.f.derivative());
        let gy = dg_dy(&self.g);
        let mut out: Vec<CriticalComponent> = Vec::new();
        for factor in [fx, gy] {
            for comp in factor_limited(&factor) {
                if !out.iter().any(|c| c.poly == comp.poly) {
                    out.push(comp);
                }
            }
        }
        out.sort_by_key(|c| {
            (
                matches!(c.status, ComponentStatus::FactorizationIncomplete),
                c.poly.total_degree().unwrap_or(0),
                crate::algebra::gpoly_string(&c.poly),
            )
        });
        out
    }

    /// The `n`-fold composition `Fⁿ` as a skew product of degree `dⁿ`.
    ///
    /// # Errors
    /// [`Error::DegreeBudgetExceeded`] when the composed fiber polynomial
    /// would store more than [`DEFAULT_DEGREE_BUDGET`] coefficients.
    ///
    /// # Panics
    /// Panics if `n == 0` (the identity is not a degree ≥ 2 skew product).
    pub fn self_compose(&self, n: u32) -> Result<SkewProduct> {
        assert!(n >= 1, "self_compose requires n ≥ 1");
        let mut acc = self.clone();
        for _ in 1..n {
            let f = poly_compose(&self.f, &acc.f);
            let g = self.g.subst(&xtpoly_to_gpoly(&acc.f), &acc.g);
            let terms: usize = g
                .terms()
                .map(|(_, c)| c.degree().unwrap_or(0) + 1)
                .sum();
            if terms > DEFAULT_DEGREE_BUDGET {
                return Err(Error::DegreeBudgetExceeded {
                    needed: terms,
                    budget: DEFAULT_DEGREE_BUDGET,
                });
            }
            acc = SkewProduct::check_regular(f, g)?;
        }
        Ok(acc)
    }
}

/// Evaluates a polynomial in `Q[t]` at a complex double.
pub fn tpoly_eval_complex(p: &TPoly, t: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in (0..=p.degree().unwrap_or(0)).rev() {
        let c = p.coeff(i);
        acc = acc * t + Complex64::new(rat_to_f64(&c), 0.0);
    }
    acc
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::INFINITY)
}

fn xtpoly_to_gpoly(p: &XTPoly) -> GPoly {
    let mut out = MPoly::zero();
    for i in 0..=p.degree().unwrap_or(0) {
        let c = p.coeff(i);
        if !c.is_zero() {
            out.add_term(Mono { i: i as u32, j: 0 }, c);
        }
    }
    out
}

fn dg_dy(g: &GPoly) -> GPoly {
    let mut out = MPoly::zero();
    for (m, c) in g.terms() {
        if m.j == 0 {
            continue;
        }
        let mut n = TPoly::zero();
        for _ in 0..m.j {
            n = n + TPoly::one();
        }
        out.add_term(Mono { i: m.i, j: m.j - 1 }, c.clone() * n);
    }
    out
}

/// Whether the limited factorizer certified a critical component as
/// irreducible over `Q[t]`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComponentStatus {
    Irreducible,
    /// The component resisted the limited factorizer and may factor
    /// further; it is returned whole rather than guessed at.
    FactorizationIncomplete,
}

/// One component of the critical locus, in primitive integer form.
#[derive(Clone, PartialEq, Debug)]
pub struct CriticalComponent {
    pub poly: GPoly,
    pub status: ComponentStatus,
}

/// Splits one Jacobian factor into components: monomial split, content
/// drop, then `t`-free univariate factorization; leftovers are flagged.
fn factor_limited(p: &GPoly) -> Vec<CriticalComponent> {
    let mut out = Vec::new();
    if p.is_zero() {
        return out;
    }
    let min_i = p.terms().map(|(m, _)| m.i).min().unwrap_or(0);
    let min_j = p.terms().map(|(m, _)| m.j).min().unwrap_or(0);
    if min_i > 0 {
        out.push(CriticalComponent {
            poly: MPoly::monomial(1, 0, TPoly::one()),
            status: ComponentStatus::Irreducible,
        });
    }
    if min_j > 0 {
        out.push(CriticalComponent {
            poly: MPoly::monomial(0, 1, TPoly::one()),
            status: ComponentStatus::Irreducible,
        });
    }
    let mut rest = MPoly::zero();
    for (m, c) in p.terms() {
        rest.add_term(Mono { i: m.i - min_i, j: m.j - min_j }, c.clone());
    }
    if rest.total_degree().unwrap_or(0) == 0 {
        // Pure Q[t] content: no curve component in the (x, y) plane.
        return out;
    }
    let t_free = rest.deg_t() == Some(0) || rest.deg_t().is_none();
    let x_only = rest.deg_y() == Some(0);
    let y_only = rest.deg_x() == Some(0);
    if t_free && (x_only || y_only) {
        let var_is_x = x_only;
        let uni = gpoly_to_rat_upoly(&rest, var_is_x);
        for q in factor_univariate(&uni) {
            out.push(CriticalComponent {
                poly: rat_upoly_to_gpoly(&q.0, var_is_x),
                status: q.1,
            });
        }
    } else {
        out.push(CriticalComponent {
            poly: gpoly_primitive(&rest),
            status: ComponentStatus::FactorizationIncomplete,
        });
    }
    out
}

/// `t`-free, single-variable slice of a `GPoly` as a `UPoly<Rat>`.
fn gpoly_to_rat_upoly(p: &GPoly, var_is_x: bool) -> UPoly<Rat> {
    let deg = if var_is_x { p.deg_x() } else { p.deg_y() }.unwrap_or(0) as usize;
    let mut coeffs = vec![Rat::zero(); deg + 1];
    for (m, c) in p.terms() {
        let e = if var_is_x { m.i } else { m.j } as usize;
        coeffs[e] = c.coeff(0);
    }
    UPoly::from_coeffs(coeffs)
}

fn rat_upoly_to_gpoly(p: &UPoly<Rat>, var_is_x: bool) -> GPoly {
    let mut out = MPoly::zero();
    for e in 0..=p.degree().unwrap_or(0) {
        let c = p.coeff(e);
        if !c.is_zero() {
            let (i, j) = if var_is_x { (e as u32, 0) } else { (0, e as u32) };
            out.add_term(Mono { i, j }, TPoly::constant(c));
        }
    }
    out
}

/// Factors a `t`-free univariate polynomial over `Q` with the limited
/// toolbox: squarefree part, rational roots, cyclotomic detection. Returns
/// distinct factors (multiplicities dropped — these are set-theoretic
/// components).
fn factor_univariate(p: &UPoly<Rat>) -> Vec<(UPoly<Rat>, ComponentStatus)> {
    let mut out = Vec::new();
    let mut rest = p.squarefree_part();
    for (root, _) in crate::algebra::rational_roots(&rest) {
        let lin = primitive_linear(&root);
        out.push((lin.clone(), ComponentStatus::Irreducible));
        let monic_lin = UPoly::from_coeffs(vec![-root.clone(), Rat::one()]);
        while let Some(q) = rest.exact_div(&monic_lin) {
            rest = q;
        }
    }
    for (n, _) in crate::algebra::cyclotomic_detect(&rest, 64) {
        let phi = crate::algebra::cyclotomic_poly(n);
        out.push((phi.clone(), ComponentStatus::Irreducible));
        while let Some(q) = rest.exact_div(&phi) {
            rest = q;
        }
    }
    if rest.degree().unwrap_or(0) >= 1 {
        out.push((primitive_over_q(&rest), ComponentStatus::FactorizationIncomplete));
    }
    out
}

/// `v − p/q` as the primitive integer polynomial `q·v − p` (positive
/// leading coefficient).
fn primitive_linear(root: &Rat) -> UPoly<Rat> {
    let q = Rat::from(root.denom().clone());
    let p = Rat::from(root.numer().clone());
    UPoly::from_coeffs(vec![-p, q])
}

fn primitive_over_q(p: &UPoly<Rat>) -> UPoly<Rat> {
    use num::BigInt;
    let deg = p.degree().unwrap_or(0);
    let mut denom_lcm = BigInt::one();
    for e in 0..=deg {
        let c = p.coeff(e);
        if !c.is_zero() {
            denom_lcm = num::integer::lcm(denom_lcm, c.denom().clone());
        }
    }
    let mut numer_gcd = BigInt::zero();
    for e in 0..=deg {
        let c = p.coeff(e) * Rat::from(denom_lcm.clone());
        numer_gcd = num::integer::gcd(numer_gcd, c.numer().clone());
    }
    if numer_gcd.is_zero() {
        return p.clone();
    }
    let scale = Rat::new(denom_lcm, numer_gcd);
    let scaled = p.map_coeffs(|c| c * scale.clone());
    if scaled.leading().map(|l| l < &Rat::zero()).unwrap_or(false) {
        -scaled
    } else {
        scaled
    }
}

/// Primitive integer form of a bivariate polynomial over `Q[t]`: clears
/// denominators, divides by the integer content, normalizes the sign of
/// the leading term.
fn gpoly_primitive(p: &GPoly) -> GPoly {
    use num::BigInt;
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    for (_, c) in p.terms() {
        for e in 0..=c.degree().unwrap_or(0) {
            let r = c.coeff(e);
            if !r.is_zero() {
                denom_lcm = num::integer::lcm(denom_lcm, r.denom().clone());
            }
        }
    }
    for (_, c) in p.terms() {
        for e in 0..=c.degree().unwrap_or(0) {
            let r = c.coeff(e) * Rat::from(denom_lcm.clone());
            numer_gcd = num::integer::gcd(numer_gcd, r.numer().clone());
        }
    }
    if numer_gcd.is_zero() {
        return p.clone();
    }
    let scale = Rat::new(denom_lcm, numer_gcd);
    let scaled = p.map_coeffs(|c| c.map_coeffs(|r| r * scale.clone()));
    let lead_negative = scaled
        .terms()
        .last()
        .and_then(|(_, c)| c.leading().cloned())
        .map(|l| l < Rat::zero())
        .unwrap_or(false);
    if lead_negative {
        -scaled
    } else {
        scaled
    }
}

// ---------------------------------------------------------------------------
// Marked pairs and orbits
// ---------------------------------------------------------------------------

/// A family together with a marked point `P_t = (a(t), b(t))` and the
/// derived degree data of Theorem 1.6-type hypotheses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MarkedPair {
    family: SkewProduct,
    a: TPoly,
    b: TPoly,
}

impl MarkedPair {
    pub fn new(family: SkewProduct, a: TPoly, b: TPoly) -> MarkedPair {
        MarkedPair { family, a, b }
    }

    pub fn family(&self) -> &SkewProduct {
        &self.family
    }

    pub fn point(&self) -> (TPoly, TPoly) {
        (self.a.clone(), self.b.clone())
    }

    /// `k₃ = deg_t(a)` (0 for constant `a`).
    pub fn k3(&self) -> usize {
        self.a.degree().unwrap_or(0)
    }

    /// `ℓ₂ = deg_t(b)` (0 for constant `b`).
    pub fn l2(&self) -> usize {
        self.b.degree().unwrap_or(0)
    }

    /// `k₁ = deg_t(g)`.
    pub fn k1(&self) -> usize {
        self.family.deg_t_fiber()
    }

    /// `(m₁, m₂)` with `m₁ = lcm(ℓ₂, k₃)/ℓ₂` and
    /// `m₂ = lcm(ℓ₂, k₃)/k₃ − m₁`; `None` when either marked degree is 0 or
    /// when `ℓ₂ < k₃` (which would force `m₂ < 0`). When defined, always
    /// satisfies `m₁·ℓ₂ = (m₁ + m₂)·k₃` and `m₁ ≥ 1`, `m₂ ≥ 0`.
    pub fn multiplier_degrees(&self) -> Option<(usize, usize)> {
        let (k3, l2) = (self.k3(), self.l2());
        if k3 == 0 || l2 == 0 || l2 < k3 {
            return None;
        }
        let l = lcm(k3, l2);
        let m1 = l / l2;
        let m2 = l / k3 - m1;
        Some((m1, m2))
    }

    /// Reports the two degree hypotheses:
    /// (1) `deg_t(a) > deg_t(f)` (strict);
    /// (2) `deg_t(b) ≥ (m₁ + 1)(k₃ + k₁)`.
    pub fn degree_hypothesis_check(&self) -> DegreeHypothesisReport {
        let deg_t_f = self.family.deg_t_base();
        let k3 = self.k3();
        let cond1 = k3 > deg_t_f;
        let (cond2, rhs, m) = match self.multiplier_degrees() {
            Some((m1, m2)) => {
                let rhs = (m1 + 1) * (k3 + self.k1());
                (self.l2() >= rhs, Some(rhs), Some((m1, m2)))
            }
            None => (false, None, None),
        };
        DegreeHypothesisReport {
            condition1: cond1,
            marked_degree: k3,
            base_parameter_degree: deg_t_f,
            condition2: cond2,
            fiber_marked_degree: self.l2(),
            condition2_bound: rhs,
            multiplier_degrees: m,
        }
    }

    /// Exact symbolic orbit `[P, F(P), …, Fⁿ(P)]` with a per-orbit
    /// coefficient budget.
    ///
    /// # Errors
    /// [`Error::DegreeBudgetExceeded`] when the estimated size of the next
    /// point would push the stored coefficient count past `budget`.
    pub fn orbit_symbolic(&self, n: usize, budget: usize) -> Result<OrbitRecord> {
        let d = self.family.degree();
        let mut points = vec![(self.a.clone(), self.b.clone())];
        let mut total = orbit_point_size(&points[0]);
        for _ in 0..n {
            let last = points.last().expect("orbit is nonempty");
            let da = last.0.degree().unwrap_or(0);
            let db = last.1.degree().unwrap_or(0);
            let est = d * da + self.family.deg_t_base() + d * da.max(db)
                + self.family.deg_t_fiber()
                + 2;
            if total + est > budget {
                return Err(Error::DegreeBudgetExceeded {
                    needed: total + est,
                    budget,
                });
            }
            let next = self.family.apply_symbolic(last);
            total += orbit_point_size(&next);
            points.push(next);
        }
        let degree_log = points
            .iter()
            .map(|(a, b)| (a.degree().unwrap_or(0), b.degree().unwrap_or(0)))
            .collect();
        Ok(OrbitRecord { points, degree_log })
    }

    /// Exact orbit of the specialized point at `t₀`, length `n + 1`.
    pub fn orbit_at<S: Scalar>(&self, t0: &S, n: usize) -> Vec<(S, S)> {
        let spec = self.family.specialize(t0);
        let p0 = (self.a.eval_scalar(t0), self.b.eval_scalar(t0));
        spec.orbit(p0, n)
    }
}

fn orbit_point_size(p: &(TPoly, TPoly)) -> usize {
    p.0.degree().unwrap_or(0) + p.1.degree().unwrap_or(0) + 2
}

/// Report from the Theorem 1.6-type degree hypotheses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeHypothesisReport {
    /// `deg_t(a) > deg_t(f)`.
    pub condition1: bool,
    pub marked_degree: usize,
    pub base_parameter_degree: usize,
    /// `deg_t(b) ≥ (m₁ + 1)(deg_t(a) + deg_t(g))`; false when the
    /// multiplier degrees are undefined.
    pub condition2: bool,
    pub fiber_marked_degree: usize,
    pub condition2_bound: Option<usize>,
    pub multiplier_degrees: Option<(usize, usize)>,
}

impl DegreeHypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.condition1 && self.condition2
    }
}

/// A symbolic orbit: exact points and their parameter degrees per step.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitRecord {
    pub points: Vec<(TPoly, TPoly)>,
    pub degree_log: Vec<(usize, usize)>,
}

// ---------------------------------------------------------------------------
// Specializations
// ---------------------------------------------------------------------------

/// The family evaluated at an exact parameter: coefficient tables over a
/// [`Scalar`] field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpecializedSkew<S: Scalar> {
    d: usize,
    f_coeffs: Vec<S>,
    g_terms: Vec<(Mono, S)>,
}

impl<S: Scalar> SpecializedSkew<S> {
    pub fn degree(&self) -> usize {
        self.d
    }

    /// Base coefficients, ascending, length `d + 1`.
    pub fn f_coeffs(&self) -> &[S] {
        &self.f_coeffs
    }

    /// Surviving fiber terms after specialization.
    pub fn g_terms(&self) -> &[(Mono, S)] {
        &self.g_terms
    }

    /// One exact step `F_{t₀}(x, y)`.
    pub fn apply(&self, p: &(S, S)) -> (S, S) {
        let (x, y) = p;
        let mut fx = x.zero_like();
        for c in self.f_coeffs.iter().rev() {
            fx = fx.mul_ref(x).add_ref(c);
        }
        let mut gy = x.zero_like();
        for (m, c) in &self.g_terms {
            let term = x.pow_ref(m.i).mul_ref(&y.pow_ref(m.j)).mul_ref(c);
            gy = gy.add_ref(&term);
        }
        (fx, gy)
    }

    /// Exact orbit `[p, F(p), …, Fⁿ(p)]`.
    pub fn orbit(&self, p0: (S, S), n: usize) -> Vec<(S, S)> {
        let mut points = vec![p0];
        for _ in 0..n {
            let next = self.apply(points.last().expect("orbit is nonempty"));
            points.push(next);
        }
        points
    }
}

/// The family evaluated at a complex double parameter; used by the Green
/// function and raster estimators only.
#[derive(Clone, Debug)]
pub struct NumericSkew {
    d: usize,
    f_coeffs: Vec<Complex64>,
    g_terms: Vec<(u32, u32, Complex64)>,
}

impl NumericSkew {
    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn f_coeffs(&self) -> &[Complex64] {
        &self.f_coeffs
    }

    pub fn g_terms(&self) -> &[(u32, u32, Complex64)] {
        &self.g_terms
    }

    pub fn apply(&self, p: (Complex64, Complex64)) -> (Complex64, Complex64) {
        let (x, y) = p;
        let mut fx = Complex64::new(0.0, 0.0);
        for c in self.f_coeffs.iter().rev() {
            fx = fx * x + c;
        }
        let mut gy = Complex64::new(0.0, 0.0);
        for &(i, j, c) in &self.g_terms {
            gy += x.powu(i) * y.powu(j) * c;
        }
        (fx, gy)
    }
}
