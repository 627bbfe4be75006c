//! Post-critically finite (PCF) classification in the quadratic moduli
//! space `𝔸⁴ = {(a, b, c, d)}` of normal forms `F = (x²+d, y²+ax²+bx+c)`.
//!
//! Full PCF-ness of a skew product is not decidable at this toolkit's
//! scope; what ships here is the machinery the theory actually reduces
//! to: one-dimensional critical-orbit certificates for `z² + c`
//! ([`is_pcf_1d`]), the two σ-embeddings of the degenerate strata, a
//! four-condition necessary battery ([`necessary_pcf_conditions`]) in
//! which a single `Escape` *proves* non-PCF while all-`Cycle` is evidence
//! only, the exceptional-locus membership tests, the exact orbit curves of
//! the homogeneous family `(x², y² + bx)`, and the predicted leading
//! monomial of `F^{nk}(x, 0)` under a period-`k` base hypothesis.
//!
//! Everything exact runs over `Q` or a quadratic extension; numeric
//! variants exist only where the inputs themselves are numeric.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num::{One, Zero};

use crate::algebra::{
    complex_roots, rat, rational_roots, rint, NumberField, NumberFieldElem, Rat, Ring,
    Scalar, TPoly, UPoly,
};
use crate::error::Result;
use crate::prep::PrepCertificate;
use crate::skew::{Complex64, SkewProduct};

/// Bit-size cap before a 1-D exact orbit is declared inconclusive.
const SCALAR_BIT_BUDGET: usize = 1 << 16;

/// Matching tolerance when deduplicating numeric roots.
const NUMERIC_DEDUP_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Moduli points and fixed points of the base
// ---------------------------------------------------------------------------

/// A point of the quadratic moduli space: the family
/// `F = (x² + d, y² + ax² + bx + c)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadModuliPoint {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl QuadModuliPoint {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> QuadModuliPoint {
        QuadModuliPoint { a, b, c, d }
    }

    /// The corresponding (constant-in-`t`) skew product.
    pub fn family(&self) -> SkewProduct {
        SkewProduct::quadratic(
            TPoly::constant(self.a.clone()),
            TPoly::constant(self.b.clone()),
            TPoly::constant(self.c.clone()),
            TPoly::constant(self.d.clone()),
        )
    }
}

/// A rational number or an element of an explicit quadratic extension.
#[derive(Clone, PartialEq, Debug)]
pub enum ExactScalar {
    Rational(Rat),
    Quadratic(NumberFieldElem),
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => write!(f, "{r}"),
            ExactScalar::Quadratic(e) => {
                let terms: Vec<String> = e
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| match i {
                        0 => format!("{c}"),
                        1 => format!("{c}*z"),
                        _ => format!("{c}*z^{i}"),
                    })
                    .collect();
                write!(f, "{}", terms.join(" + "))
            }
        }
    }
}

/// The two fixed points `d₁, d₂ = 1 − d₁` of the base map `x² + d`,
/// satisfying `d₁·d₂ = d` exactly.
#[derive(Clone, PartialEq, Debug)]
pub struct FixedPointData {
    pub d1: ExactScalar,
    pub d2: ExactScalar,
}

/// Exact square root of a non-negative rational, if one exists.
fn rational_sqrt(q: &Rat) -> Option<Rat> {
    if q < &Rat::zero() {
        return None;
    }
    let ns = q.numer().sqrt();
    let ds = q.denom().sqrt();
    if &(&ns * &ns) == q.numer() && &(&ds * &ds) == q.denom() {
        Some(Rat::new(ns, ds))
    } else {
        None
    }
}

/// Solves `z² − z + d = 0` exactly: in `Q` when the discriminant `1 − 4d`
/// is a rational square, otherwise in `Q[z]/(z² − z + d)`.
pub fn fixed_points(d: &Rat) -> FixedPointData {
    let disc = Rat::one() - rat(4, 1) * d;
    if let Some(s) = rational_sqrt(&disc) {
        let d1 = (Rat::one() - s.clone()) / rat(2, 1);
        let d2 = (Rat::one() + s) / rat(2, 1);
        FixedPointData { d1: ExactScalar::Rational(d1), d2: ExactScalar::Rational(d2) }
    } else {
        let modulus = UPoly::from_coeffs(vec![d.clone(), -Rat::one(), Rat::one()]);
        let field = NumberField::new(modulus);
        let d1 = field.gen();
        let d2 = field.from_rat(&Rat::one()).sub_ref(&d1);
        FixedPointData { d1: ExactScalar::Quadratic(d1), d2: ExactScalar::Quadratic(d2) }
    }
}

// ---------------------------------------------------------------------------
// 1-D critical orbit certificates
// ---------------------------------------------------------------------------

/// Classifies the critical orbit of `0` under `z² + c` exactly: for this
/// family `Cycle` is equivalent to PCF.
///
/// Escape fires once `|z| > 1 + |c|` (certified in the chosen embedding;
/// in one variable the bound is sound with no extra lookahead).
pub fn is_pcf_1d<S: Scalar>(c: &S, max_iter: usize) -> PrepCertificate {
    let radius = Rat::one() + c.abs_upper();
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut orbit: Vec<S> = Vec::new();
    let mut z = c.zero_like();
    for step in 0..=max_iter {
        let fp = z.fingerprint();
        if let Some(bucket) = buckets.get(&fp) {
            if let Some(&m) = bucket.iter().find(|&&m| orbit[m] == z) {
                return PrepCertificate::Cycle { m, n: step };
            }
        }
        if z.approx_bits() > SCALAR_BIT_BUDGET {
            return PrepCertificate::Inconclusive { budget: max_iter };
        }
        if z.abs_gt(&radius) == Some(true) {
            return PrepCertificate::Escape { step, witness: z.abs_f64() };
        }
        if step == max_iter {
            break;
        }
        buckets.entry(fp).or_default().push(step);
        orbit.push(z.clone());
        z = z.mul_ref(&z).add_ref(c);
    }
    PrepCertificate::Inconclusive { budget: max_iter }
}

/// Floating-point analogue of [`is_pcf_1d`]: cycles are matched to `tol`
/// (so a `Cycle` is approximate evidence, not a certificate), escape uses
/// the same `|z| > 1 + |c|` bound.
pub fn is_pcf_1d_numeric(c: Complex64, max_iter: usize, tol: f64) -> PrepCertificate {
    let radius = 1.0 + c.norm();
    let mut orbit: Vec<Complex64> = Vec::new();
    let mut z = Complex64::new(0.0, 0.0);
    for step in 0..=max_iter {
        if let Some(m) = orbit.iter().position(|w| (z - w).norm() <= tol) {
            return PrepCertificate::Cycle { m, n: step };
        }
        if z.norm() > radius {
            return PrepCertificate::Escape { step, witness: z.norm() };
        }
        if step == max_iter {
            break;
        }
        orbit.push(z);
        z = z * z + c;
    }
    PrepCertificate::Inconclusive { budget: max_iter }
}

/// Exact proof that `0` is *not* preperiodic under `z² + c`, by
/// denominator growth: returns `(p, step)` where at `step` the orbit
/// value's denominator has `p`-adic valuation `v ≥ 1` with
/// `2v > v_p(den(c))`.
///
/// From such a step on, `v_p(den(zₙ₊₁)) = 2·v_p(den(zₙ))`: squaring
/// doubles the valuation and adding `c` cannot cancel it, so denominators
/// grow strictly forever and the orbit never repeats. (In particular any
/// non-integer rational `c` certifies at step 1.)
pub fn denominator_growth_certificate(c: &Rat, max_steps: usize) -> Option<(u64, usize)> {
    let den = c.denom().clone();
    if den == One::one() {
        return None;
    }
    // Small prime factors of den(c); the denominator of a moduli
    // coordinate is tiny in practice.
    let mut primes = Vec::new();
    let mut rest = den.clone();
    let mut p = num::BigInt::from(2);
    while &p * &p <= rest {
        if (&rest % &p).is_zero() {
            primes.push(p.clone());
            while (&rest % &p).is_zero() {
                rest = rest / &p;
            }
        }
        p += 1;
    }
    if rest > One::one() {
        primes.push(rest);
    }
    let val = |x: &num::BigInt, p: &num::BigInt| -> u32 {
        let mut v = 0;
        let mut x = x.clone();
        while !x.is_zero() && (&x % p).is_zero() {
            x = x / p;
            v += 1;
        }
        v
    };
    let mut z = Rat::zero();
    for step in 1..=max_steps {
        z = &z * &z + c;
        for p in &primes {
            let vc = val(c.denom(), p);
            let v = val(z.denom(), p);
            if v >= 1 && 2 * v > vc {
                use num::ToPrimitive;
                return Some((p.to_u64().unwrap_or(u64::MAX), step));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// 1-D parameter search
// ---------------------------------------------------------------------------

/// The critical-orbit polynomial `φₙ(c) = f_cⁿ(0)` as a polynomial in the
/// parameter (`φ₀ = 0`, `φₙ₊₁ = φₙ² + c`); `deg φₙ = 2ⁿ⁻¹`.
pub fn critical_orbit_poly(n: usize) -> TPoly {
    let c = UPoly::from_coeffs(vec![Rat::zero(), Rat::one()]);
    let mut phi = TPoly::zero();
    for _ in 0..n {
        phi = phi.clone() * phi + c.clone();
    }
    phi
}

/// Location of one 1-D PCF or preperiodic parameter.
#[derive(Clone, PartialEq, Debug)]
pub enum Pcf1dValue {
    Rational(Rat),
    Numeric { re: f64, im: f64 },
}

/// A deduplicated parameter with the first pattern `(m, n)` that produced
/// it.
#[derive(Clone, PartialEq, Debug)]
pub struct Pcf1dRoot {
    pub pattern: (usize, usize),
    pub value: Pcf1dValue,
}

/// All patterns and deduplicated roots from [`pcf_parameters_1d`].
#[derive(Clone, PartialEq, Debug)]
pub struct Pcf1dParameters {
    /// `(m, n, φₙ − φₘ)` in sweep order.
    pub patterns: Vec<(usize, usize, TPoly)>,
    pub roots: Vec<Pcf1dRoot>,
}

/// Sweeps the patterns `m < n ≤ N` of `φₙ(c) − φₘ(c)`: rational roots
/// exact, the rest numeric, each root labeled by the first pattern
/// containing it.
///
/// # Errors
/// [`crate::Error::NonConvergence`] from the numeric root finder.
///
/// # Panics
/// Panics when `N > 7` (degree `2^{N−1}` budget).
pub fn pcf_parameters_1d(n_max: usize) -> Result<Pcf1dParameters> {
    assert!(n_max <= 7, "pattern bound capped at 7 (degree 2^(N-1))");
    let phis: Vec<TPoly> = (0..=n_max).map(critical_orbit_poly).collect();
    let mut patterns = Vec::new();
    let mut roots: Vec<Pcf1dRoot> = Vec::new();
    let mut seen_rat: BTreeSet<Rat> = BTreeSet::new();
    let mut seen_num: Vec<Complex64> = Vec::new();
    for n in 1..=n_max {
        for m in 0..n {
            let poly = phis[n].clone() - phis[m].clone();
            let mut rest = poly.squarefree_part().monic();
            for (root, _) in rational_roots(&rest) {
                let lin = UPoly::from_coeffs(vec![-root.clone(), Rat::one()]);
                rest = rest.exact_div(&lin).expect("squarefree root divides");
                if seen_rat.insert(root.clone()) {
                    roots.push(Pcf1dRoot {
                        pattern: (m, n),
                        value: Pcf1dValue::Rational(root),
                    });
                }
            }
            if rest.degree().unwrap_or(0) >= 1 {
                for z in complex_roots(&rest, NUMERIC_DEDUP_TOL)? {
                    if seen_num.iter().all(|w| (z - w).norm() > NUMERIC_DEDUP_TOL) {
                        seen_num.push(z);
                        roots.push(Pcf1dRoot {
                            pattern: (m, n),
                            value: Pcf1dValue::Numeric { re: z.re, im: z.im },
                        });
                    }
                }
            }
            patterns.push((m, n, poly));
        }
    }
    Ok(Pcf1dParameters { patterns, roots })
}

// ---------------------------------------------------------------------------
// σ-embeddings of the degenerate strata
// ---------------------------------------------------------------------------

/// The finite map `σ(a, c, d₁) = (a, a·d₁² + c, a·(1−d₁)² + c, d₁ − d₁²)`
/// parametrizing the `b = 0` stratum by base fixed-point data.
pub fn sigma_embed_b0<S: Scalar>(a: &S, c: &S, d1: &S) -> (S, S, S, S) {
    let one = a.from_rat_like(&rint(1));
    let second = a.mul_ref(&d1.mul_ref(d1)).add_ref(c);
    let comp = one.sub_ref(d1);
    let third = a.mul_ref(&comp.mul_ref(&comp)).add_ref(c);
    let fourth = d1.sub_ref(&d1.mul_ref(d1));
    (a.clone(), second, third, fourth)
}

/// The embedding `σ(d₁, b, c) = (d₁ − d₁², d₁·b + c, (1−d₁)·b + c, b)`
/// parametrizing the `a = 0` stratum.
pub fn sigma_embed_a0<S: Scalar>(d1: &S, b: &S, c: &S) -> (S, S, S, S) {
    let one = d1.from_rat_like(&rint(1));
    let first = d1.sub_ref(&d1.mul_ref(d1));
    let second = d1.mul_ref(b).add_ref(c);
    let third = one.sub_ref(d1).mul_ref(b).add_ref(c);
    (first, second, third, b.clone())
}

// ---------------------------------------------------------------------------
// Necessary PCF conditions
// ---------------------------------------------------------------------------

/// Which one-dimensional reduction a condition certificate refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConditionLabel {
    /// Critical orbit of the base map `x² + d`.
    BaseCritical,
    /// Restriction to the fiber at infinity: `z² + a` when `a ≠ 0`, else
    /// the `z² + b` condition of the `a = 0` stratum.
    InfinityRestriction,
    /// Fiber family over the first base fixed point: `z² + (a·d₁² + b·d₁ + c)`.
    FiberFixedPoint1,
    /// Same over `d₂ = 1 − d₁`.
    FiberFixedPoint2,
}

/// One necessary condition: the 1-D parameter it reduces to and its
/// certificate.
#[derive(Clone, PartialEq, Debug)]
pub struct PcfCondition {
    pub label: ConditionLabel,
    pub parameter: ExactScalar,
    pub certificate: PrepCertificate,
}

/// The four-condition battery. A single `Escape` **proves** the moduli
/// point is not PCF; all-`Cycle` is necessary evidence only.
#[derive(Clone, PartialEq, Debug)]
pub struct PcfConditionReport {
    pub conditions: Vec<PcfCondition>,
}

impl PcfConditionReport {
    /// True iff some condition escaped: a proof of non-PCF.
    pub fn proves_not_pcf(&self) -> bool {
        self.conditions
            .iter()
            .any(|c| matches!(c.certificate, PrepCertificate::Escape { .. }))
    }

    /// True iff every condition certified a cycle (evidence, not proof).
    pub fn all_cycles(&self) -> bool {
        self.conditions.iter().all(|c| c.certificate.is_cycle())
    }
}

/// Runs the four 1-D reductions of a quadratic moduli point: the base
/// critical orbit, the fiber at infinity, and the two fiber families over
/// the base fixed points (evaluated exactly, in a quadratic extension when
/// the fixed points are irrational).
pub fn necessary_pcf_conditions(p: &QuadModuliPoint, max_iter: usize) -> PcfConditionReport {
    let mut conditions = Vec::new();
    conditions.push(PcfCondition {
        label: ConditionLabel::BaseCritical,
        parameter: ExactScalar::Rational(p.d.clone()),
        certificate: is_pcf_1d(&p.d, max_iter),
    });
    let infinity_param = if p.a.is_zero() { p.b.clone() } else { p.a.clone() };
    conditions.push(PcfCondition {
        label: ConditionLabel::InfinityRestriction,
        parameter: ExactScalar::Rational(infinity_param.clone()),
        certificate: is_pcf_1d(&infinity_param, max_iter),
    });
    let fixed = fixed_points(&p.d);
    for (label, point) in [
        (ConditionLabel::FiberFixedPoint1, &fixed.d1),
        (ConditionLabel::FiberFixedPoint2, &fixed.d2),
    ] {
        let (parameter, certificate) = match point {
            ExactScalar::Rational(d1) => {
                let param = &p.a * d1 * d1 + &p.b * d1 + &p.c;
                (ExactScalar::Rational(param.clone()), is_pcf_1d(&param, max_iter))
            }
            ExactScalar::Quadratic(d1) => {
                let a = d1.from_rat_like(&p.a);
                let b = d1.from_rat_like(&p.b);
                let c = d1.from_rat_like(&p.c);
                let param = a.mul_ref(&d1.mul_ref(d1)).add_ref(&b.mul_ref(d1)).add_ref(&c);
                (ExactScalar::Quadratic(param.clone()), is_pcf_1d(&param, max_iter))
            }
        };
        conditions.push(PcfCondition { label, parameter, certificate });
    }
    PcfConditionReport { conditions }
}

// ---------------------------------------------------------------------------
// Exceptional locus
// ---------------------------------------------------------------------------

/// The three components of the exceptional locus, named by which moduli
/// coordinates vanish: `AB = V(a) ∩ V(b)`, `ACD = V(a) ∩ V(c) ∩ V(d)`,
/// `BCD = V(b) ∩ V(c) ∩ V(d)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExceptionalComponent {
    AB,
    ACD,
    BCD,
}

/// Exact membership of a moduli point in each exceptional component.
pub fn exceptional_locus_member(p: &QuadModuliPoint) -> Vec<ExceptionalComponent> {
    let mut out = Vec::new();
    if p.a.is_zero() && p.b.is_zero() {
        out.push(ExceptionalComponent::AB);
    }
    if p.a.is_zero() && p.c.is_zero() && p.d.is_zero() {
        out.push(ExceptionalComponent::ACD);
    }
    if p.b.is_zero() && p.c.is_zero() && p.d.is_zero() {
        out.push(ExceptionalComponent::BCD);
    }
    out
}

/// Whether a parametrized curve of moduli points lies inside each
/// exceptional component (all defining coordinates vanish identically).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FamilyLocusCheck {
    pub ab: bool,
    pub acd: bool,
    pub bcd: bool,
}

/// Applies the component test to a one-parameter family
/// `s ↦ (a(s), b(s), c(s), d(s))`.
pub fn family_locus_check(a: &TPoly, b: &TPoly, c: &TPoly, d: &TPoly) -> FamilyLocusCheck {
    FamilyLocusCheck {
        ab: a.is_zero() && b.is_zero(),
        acd: a.is_zero() && c.is_zero() && d.is_zero(),
        bcd: b.is_zero() && c.is_zero() && d.is_zero(),
    }
}

// ---------------------------------------------------------------------------
// The homogeneous family (x², y² + bx)
// ---------------------------------------------------------------------------

/// Implicit equation of the image curve `Fⁿ(V(y))`.
#[derive(Clone, PartialEq, Debug)]
pub enum ImplicitCurve {
    /// `Y = 0` (the image collapses back into the fiber-critical line).
    FiberLine,
    /// `Y² = κ²·X`.
    Parabola { kappa_squared: Rat },
}

/// The exact image of the critical line `V(y)` under `Fⁿ` for
/// `F = (x², y² + bx)`: parametrized by `x ↦ (x^{2ⁿ}, κ·x^{2ⁿ⁻¹})` with
/// `κ = f_bⁿ(0)`.
#[derive(Clone, PartialEq, Debug)]
pub struct HomogeneousOrbitCurve {
    pub kappa: Rat,
    pub x_exponent: u64,
    pub y_exponent: u64,
    pub implicit: ImplicitCurve,
}

/// Computes the parametrization and implicit equation of `Fⁿ(V(y))`.
///
/// Eliminating `x` uses only exponent arithmetic: when `κ ≠ 0`,
/// `x^{2ⁿ⁻¹} = Y/κ` gives `Y² = κ²·X`; `κ = 0` collapses to `Y = 0`.
///
/// # Panics
/// Panics when `n = 0`.
pub fn homogeneous_orbit_curve(b: &Rat, n: u32) -> HomogeneousOrbitCurve {
    assert!(n >= 1, "image curve needs at least one iterate");
    let mut kappa = Rat::zero();
    for _ in 0..n {
        kappa = &kappa * &kappa + b;
    }
    let implicit = if kappa.is_zero() {
        ImplicitCurve::FiberLine
    } else {
        ImplicitCurve::Parabola { kappa_squared: &kappa * &kappa }
    };
    HomogeneousOrbitCurve {
        kappa,
        x_exponent: 1u64 << n,
        y_exponent: 1u64 << (n - 1),
        implicit,
    }
}

/// Preperiodicity of the curve `V(y)` under `(x², y² + bx)`, which reduces
/// exactly to the critical orbit of `0` under `z² + b`.
pub fn vy_preperiodic_homog(b: &Rat, max_iter: usize) -> PrepCertificate {
    is_pcf_1d(b, max_iter)
}

// ---------------------------------------------------------------------------
// Leading term of F^{nk}(x, 0) under a period-k base hypothesis
// ---------------------------------------------------------------------------

/// Predicted leading monomial of the second coordinate of `F^{nk}(x, 0)`
/// for `F = (x² + d, y² + ax² + bx + c)` when `0` has exact period `k`
/// under `z² + a`: coefficient
/// `b^{2ⁿ⁻¹} · 2^{(2ⁿ−1)(k−1)} · (∏_{i=1}^{k−1} f_aⁱ(0))^{2ⁿ−1}` on
/// `x^{2^{nk} − 2ⁿ⁻¹}`, with `a`, `b` formal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LeadingTermFormula {
    pub k: u32,
    pub n: u32,
    pub x_exponent: u64,
    pub b_exponent: u64,
    pub two_exponent: u64,
    /// Power applied to the orbit product `∏_{i=1}^{k−1} f_aⁱ(0)`.
    pub orbit_exponent: u64,
}

/// Builds the exponent data of the predicted leading monomial.
///
/// # Panics
/// Panics unless `k ≥ 1`, `n ≥ 1`, and `nk ≤ 20` (exponent budget).
pub fn leading_term_orbit_formula(k: u32, n: u32) -> LeadingTermFormula {
    assert!(k >= 1 && n >= 1, "leading-term formula needs k, n >= 1");
    assert!(n * k <= 20, "exponent 2^(nk) budget");
    let pow_n = 1u64 << n;
    LeadingTermFormula {
        k,
        n,
        x_exponent: (1u64 << (n * k)) - (1u64 << (n - 1)),
        b_exponent: 1u64 << (n - 1),
        two_exponent: (pow_n - 1) * u64::from(k - 1),
        orbit_exponent: pow_n - 1,
    }
}

impl LeadingTermFormula {
    /// The predicted coefficient as a monomial in `b` (degree
    /// `b_exponent`), with the orbit product evaluated at an exact base
    /// parameter `a`.
    pub fn coefficient_at(&self, a: &Rat) -> TPoly {
        let mut product = Rat::one();
        let mut orbit = Rat::zero();
        for _ in 1..self.k {
            orbit = &orbit * &orbit + a;
            product *= orbit.clone();
        }
        let mut coeff = product.pow_u(self.orbit_exponent as u32);
        coeff *= rint(2).pow_u(self.two_exponent as u32);
        let mut coeffs = vec![Rat::zero(); self.b_exponent as usize + 1];
        coeffs[self.b_exponent as usize] = coeff;
        UPoly::from_coeffs(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::XTPoly;
    use rand::{Rng, SeedableRng};

    #[test]
    fn critical_orbit_certificates() {
        assert_eq!(is_pcf_1d(&rint(0), 50), PrepCertificate::Cycle { m: 0, n: 1 });
        // 0 → −2 → 2 → 2.
        assert_eq!(is_pcf_1d(&rint(-2), 50), PrepCertificate::Cycle { m: 2, n: 3 });
        // 0 → −1 → 0.
        assert_eq!(is_pcf_1d(&rint(-1), 50), PrepCertificate::Cycle { m: 0, n: 2 });
        // 0 → 1 → 2 → 5 escapes.
        assert!(matches!(
            is_pcf_1d(&rint(1), 50),
            PrepCertificate::Escape { .. }
        ));
        // Parabolic boundary: bounded but aperiodic.
        assert_eq!(
            is_pcf_1d(&rat(1, 4), 60),
            PrepCertificate::Inconclusive { budget: 60 }
        );
    }

    #[test]
    fn denominator_growth_proves_quarter_not_preperiodic() {
        assert_eq!(denominator_growth_certificate(&rat(1, 4), 5), Some((2, 1)));
        assert_eq!(denominator_growth_certificate(&rat(1, 3), 5), Some((3, 1)));
        assert_eq!(denominator_growth_certificate(&rint(-2), 5), None);
    }

    #[test]
    fn critical_orbit_polys_are_the_classical_ones() {
        use crate::algebra::parse_tpoly;
        assert_eq!(critical_orbit_poly(1), parse_tpoly("t").unwrap());
        assert_eq!(critical_orbit_poly(2), parse_tpoly("t^2 + t").unwrap());
        assert_eq!(
            critical_orbit_poly(3),
            parse_tpoly("t^4 + 2*t^3 + t^2 + t").unwrap()
        );
    }

    #[test]
    fn onedim_parameter_sweep() {
        let params = pcf_parameters_1d(3).unwrap();
        // Root 0 enters at (0,1); −1 first appears in φ₂ − φ₀ = c² + c.
        assert_eq!(
            params.roots[0],
            Pcf1dRoot { pattern: (0, 1), value: Pcf1dValue::Rational(rint(0)) }
        );
        assert!(params.roots.contains(&Pcf1dRoot {
            pattern: (0, 2),
            value: Pcf1dValue::Rational(rint(-1)),
        }));
        // −2 (orbit 0 → −2 → 2 → 2) first divides φ₃ − φ₂.
        assert!(params.roots.contains(&Pcf1dRoot {
            pattern: (2, 3),
            value: Pcf1dValue::Rational(rint(-2)),
        }));
        // (0,3) contributes the real airplane parameter ≈ −1.7549 and a
        // complex pair ≈ −0.1226 ± 0.7449i.
        let numeric: Vec<(f64, f64)> = params
            .roots
            .iter()
            .filter_map(|r| match r.value {
                Pcf1dValue::Numeric { re, im } => Some((re, im)),
                _ => None,
            })
            .collect();
        assert!(numeric.iter().any(|&(re, im)| (re + 1.7549).abs() < 1e-3 && im.abs() < 1e-9));
        assert!(numeric
            .iter()
            .any(|&(re, im)| (re + 0.12256).abs() < 1e-3 && (im.abs() - 0.74486).abs() < 1e-3));
    }

    #[test]
    fn fixed_point_solutions() {
        let fp = fixed_points(&rint(0));
        assert_eq!(fp.d1, ExactScalar::Rational(rint(0)));
        assert_eq!(fp.d2, ExactScalar::Rational(rint(1)));

        let fp = fixed_points(&rint(-2));
        assert_eq!(fp.d1, ExactScalar::Rational(rint(-1)));
        assert_eq!(fp.d2, ExactScalar::Rational(rint(2)));

        let fp = fixed_points(&rint(1));
        match (&fp.d1, &fp.d2) {
            (ExactScalar::Quadratic(d1), ExactScalar::Quadratic(d2)) => {
                use crate::algebra::parse_tpoly;
                assert_eq!(
                    d1.field().modulus(),
                    &parse_tpoly("t^2 - t + 1").unwrap()
                );
                // d₁·d₂ = d and d₁ + d₂ = 1 exactly.
                let prod = d1.mul_ref(d2);
                assert_eq!(prod.as_rat(), Some(&rint(1)));
                let sum = d1.add_ref(d2);
                assert_eq!(sum.as_rat(), Some(&rint(1)));
            }
            other => panic!("expected quadratic fixed points, got {other:?}"),
        }
    }

    #[test]
    fn sigma_embeddings_match_hand_computations() {
        let t = |v: i64| rint(v);
        assert_eq!(
            sigma_embed_b0(&t(1), &t(0), &t(0)),
            (t(1), t(0), t(1), t(0))
        );
        assert_eq!(
            sigma_embed_b0(&t(1), &t(0), &t(1)),
            (t(1), t(1), t(0), t(0))
        );
        assert_eq!(
            sigma_embed_b0(&t(2), &t(-1), &t(-1)),
            (t(2), t(1), t(7), t(-2))
        );
        assert_eq!(
            sigma_embed_a0(&t(0), &t(5), &t(0)),
            (t(0), t(0), t(5), t(5))
        );
        assert_eq!(
            sigma_embed_a0(&t(1), &t(1), &t(1)),
            (t(0), t(2), t(1), t(1))
        );
        assert_eq!(
            sigma_embed_a0(&t(-1), &t(2), &t(3)),
            (t(-2), t(1), t(7), t(2))
        );
    }

    #[test]
    fn sigma_component_identities() {
        // First output of σ_b0 is a; last is d₁ − d₁², i.e. the d with
        // fixed point d₁. Random sweep.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let q = |rng: &mut rand_chacha::ChaCha8Rng| {
                rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))
            };
            let (a, c, d1) = (q(&mut rng), q(&mut rng), q(&mut rng));
            let out = sigma_embed_b0(&a, &c, &d1);
            assert_eq!(out.0, a);
            assert_eq!(out.3, &d1 - &d1 * &d1);
            // d₁ really is a fixed point of x² + d.
            assert_eq!(&d1 * &d1 + &out.3, d1);
            let (b, cc) = (q(&mut rng), q(&mut rng));
            let out = sigma_embed_a0(&d1, &b, &cc);
            assert_eq!(out.3, b);
            assert_eq!(out.0, &d1 - &d1 * &d1);
        }
    }

    #[test]
    fn condition_battery_on_moduli_points() {
        let all_zero = QuadModuliPoint::new(rint(0), rint(0), rint(0), rint(0));
        let report = necessary_pcf_conditions(&all_zero, 50);
        assert_eq!(report.conditions.len(), 4);
        assert!(report.all_cycles());
        assert!(!report.proves_not_pcf());

        // (0, 1, 0, 0): the a = 0 stratum condition is z² + 1, whose
        // critical orbit 0 → 1 → 2 → 5 escapes.
        let p = QuadModuliPoint::new(rint(0), rint(1), rint(0), rint(0));
        let report = necessary_pcf_conditions(&p, 50);
        assert!(report.proves_not_pcf());
        let infinity = &report.conditions[1];
        assert_eq!(infinity.label, ConditionLabel::InfinityRestriction);
        assert!(matches!(infinity.certificate, PrepCertificate::Escape { .. }));

        // Same stratum with b = −1: z² − 1 is PCF, battery passes.
        let p = QuadModuliPoint::new(rint(0), rint(-1), rint(0), rint(0));
        assert!(necessary_pcf_conditions(&p, 50).all_cycles());

        // (0, 0, 1, 0): both fiber conditions are z² + 1 → escape.
        let p = QuadModuliPoint::new(rint(0), rint(0), rint(1), rint(0));
        let report = necessary_pcf_conditions(&p, 50);
        assert!(report.proves_not_pcf());
        assert!(matches!(
            report.conditions[2].certificate,
            PrepCertificate::Escape { .. }
        ));

        // Split family at the preperiodic parameter −2: everything cycles.
        let p = QuadModuliPoint::new(rint(0), rint(0), rint(-2), rint(-2));
        assert!(necessary_pcf_conditions(&p, 50).all_cycles());

        // Irrational fixed points: d = 1 puts the fiber conditions in
        // Q[z]/(z² − z + 1); the battery still runs exactly.
        let p = QuadModuliPoint::new(rint(0), rint(0), rint(0), rint(1));
        let report = necessary_pcf_conditions(&p, 50);
        assert!(matches!(
            report.conditions[2].parameter,
            ExactScalar::Quadratic(_)
        ));
    }

    #[test]
    fn exceptional_locus_membership() {
        let p = QuadModuliPoint::new(rint(0), rint(1), rint(0), rint(0));
        assert_eq!(exceptional_locus_member(&p), vec![ExceptionalComponent::ACD]);
        let p = QuadModuliPoint::new(rint(3), rint(0), rint(0), rint(0));
        assert_eq!(exceptional_locus_member(&p), vec![ExceptionalComponent::BCD]);
        let p = QuadModuliPoint::new(rint(1), rint(1), rint(1), rint(1));
        assert!(exceptional_locus_member(&p).is_empty());
        // The origin lies in all three components.
        let p = QuadModuliPoint::new(rint(0), rint(0), rint(0), rint(0));
        assert_eq!(exceptional_locus_member(&p).len(), 3);
    }

    #[test]
    fn exceptional_locus_sampling_properties() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        // Points sampled from each component parametrization are members.
        for _ in 0..100 {
            let v = rat(rng.gen_range(1..=50), 1);
            let w = rat(rng.gen_range(1..=50), 1);
            assert!(!exceptional_locus_member(&QuadModuliPoint::new(
                rint(0), rint(0), v.clone(), w.clone()
            ))
            .is_empty());
            assert!(!exceptional_locus_member(&QuadModuliPoint::new(
                rint(0), v.clone(), rint(0), rint(0)
            ))
            .is_empty());
            assert!(!exceptional_locus_member(&QuadModuliPoint::new(
                v, rint(0), rint(0), rint(0)
            ))
            .is_empty());
        }
        // Empty on 10⁴ random points with all coordinates nonzero.
        for _ in 0..10_000 {
            let q = |rng: &mut rand_chacha::ChaCha8Rng| {
                let n = rng.gen_range(1..=40);
                let s = if rng.gen_bool(0.5) { 1 } else { -1 };
                rat(s * n, rng.gen_range(1..=6))
            };
            let p = QuadModuliPoint::new(q(&mut rng), q(&mut rng), q(&mut rng), q(&mut rng));
            assert!(exceptional_locus_member(&p).is_empty());
        }
    }

    #[test]
    fn family_locus_verdicts() {
        use crate::algebra::parse_tpoly;
        let s = parse_tpoly("t").unwrap();
        let zero = TPoly::zero();
        let check = family_locus_check(&zero, &s, &zero, &zero);
        assert_eq!(check, FamilyLocusCheck { ab: false, acd: true, bcd: false });
        let check = family_locus_check(&s, &s, &zero, &zero);
        assert_eq!(check, FamilyLocusCheck { ab: false, acd: false, bcd: false });
        let check = family_locus_check(&zero, &zero, &s, &s);
        assert_eq!(check, FamilyLocusCheck { ab: true, acd: false, bcd: false });
    }

    #[test]
    fn homogeneous_curve_images() {
        let curve = homogeneous_orbit_curve(&rint(-1), 1);
        assert_eq!(curve.kappa, rint(-1));
        assert_eq!((curve.x_exponent, curve.y_exponent), (2, 1));
        assert_eq!(curve.implicit, ImplicitCurve::Parabola { kappa_squared: rint(1) });

        // b = −1 has period 2: the second image collapses to V(y).
        let curve = homogeneous_orbit_curve(&rint(-1), 2);
        assert_eq!(curve.kappa, rint(0));
        assert_eq!(curve.implicit, ImplicitCurve::FiberLine);

        for n in 1..=4 {
            assert_eq!(
                homogeneous_orbit_curve(&rint(0), n).implicit,
                ImplicitCurve::FiberLine
            );
        }
    }

    #[test]
    fn homogeneous_parametrization_satisfies_implicit_equation() {
        // Substitute X = x^{2ⁿ}, Y = κ·x^{2ⁿ⁻¹} into the implicit equation
        // and check the polynomial identity in x.
        for b in [rint(-1), rint(1), rat(3, 2), rint(-2)] {
            for n in 1..=4u32 {
                let curve = homogeneous_orbit_curve(&b, n);
                let mut xq = vec![Rat::zero(); curve.x_exponent as usize + 1];
                xq[curve.x_exponent as usize] = Rat::one();
                let x_param = UPoly::from_coeffs(xq);
                let mut yq = vec![Rat::zero(); curve.y_exponent as usize + 1];
                yq[curve.y_exponent as usize] = curve.kappa.clone();
                let y_param = UPoly::from_coeffs(yq);
                match curve.implicit {
                    ImplicitCurve::FiberLine => assert!(y_param.is_zero()),
                    ImplicitCurve::Parabola { kappa_squared } => {
                        let lhs = y_param.clone() * y_param;
                        let rhs = x_param * UPoly::constant(kappa_squared);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn vy_certificates_match_critical_orbit() {
        assert!(vy_preperiodic_homog(&rint(0), 50).is_cycle());
        assert_eq!(
            vy_preperiodic_homog(&rint(-2), 50),
            PrepCertificate::Cycle { m: 2, n: 3 }
        );
        assert!(matches!(
            vy_preperiodic_homog(&rint(1), 50),
            PrepCertificate::Escape { .. }
        ));
    }

    /// Second coordinate of `F^steps(x, 0)` for `F = (x², y² + a·x² + b·x)`
    /// with exact rational `a` and symbolic `b` (carried in the inner
    /// polynomial slot).
    fn iterate_vy_symbolic(a: &Rat, steps: u32) -> XTPoly {
        let b = TPoly::from_coeffs(vec![Rat::zero(), Rat::one()]);
        let mut x_comp: XTPoly = UPoly::from_coeffs(vec![TPoly::zero(), TPoly::one()]);
        let mut y_comp: XTPoly = UPoly::zero();
        for _ in 0..steps {
            let x_sq = x_comp.clone() * x_comp.clone();
            let y_next = y_comp.clone() * y_comp
                + x_sq.map_coeffs(|c| c.clone() * TPoly::constant(a.clone()))
                + x_comp.map_coeffs(|c| c.clone() * b.clone());
            x_comp = x_sq;
            y_comp = y_next;
        }
        y_comp
    }

    #[test]
    fn leading_term_formula_exponent_arithmetic() {
        let f = leading_term_orbit_formula(2, 2);
        assert_eq!(f.x_exponent, 14);
        assert_eq!(f.b_exponent, 2);
        let f = leading_term_orbit_formula(2, 1);
        assert_eq!(f.x_exponent, 3);
        assert_eq!((f.b_exponent, f.two_exponent, f.orbit_exponent), (1, 1, 1));
    }

    #[test]
    fn leading_term_formula_matches_symbolic_iteration() {
        // k = 1 with a = 0 and k = 2 with a = −1 (exact periods of 0 under
        // z² + a); all nk ≤ 6.
        let cases: Vec<(u32, u32, Rat)> = (1..=6)
            .map(|n| (1u32, n, rint(0)))
            .chain((1..=3).map(|n| (2u32, n, rint(-1))))
            .collect();
        for (k, n, a) in cases {
            let formula = leading_term_orbit_formula(k, n);
            let orbit = iterate_vy_symbolic(&a, n * k);
            let deg = orbit.degree().expect("second coordinate nonzero") as u64;
            assert_eq!(deg, formula.x_exponent, "x-degree at (k,n)=({k},{n})");
            let top: TPoly = orbit.coeff(deg as usize);
            // The prediction is the leading b-monomial of the top
            // x-coefficient.
            let b_deg = top.degree().unwrap() as u64;
            let predicted = formula.coefficient_at(&a);
            assert_eq!(b_deg, formula.b_exponent, "b-degree at (k,n)=({k},{n})");
            assert_eq!(
                top.coeff(b_deg as usize),
                predicted.coeff(formula.b_exponent as usize),
                "leading coefficient at (k,n)=({k},{n})"
            );
        }
    }

    /// Roots of `φ_level` found by Newton's method on the orbit recursion
    /// (numerically stable even where the coefficient form is not), seeded
    /// on a grid covering the parameter region.
    fn newton_pcf_roots(level: u32, found: &mut Vec<Complex64>) {
        let eval = |c: Complex64| {
            // φ and dφ/dc along the orbit: φ₀ = 0, φ' = 0;
            // φₖ₊₁ = φₖ² + c, φ'ₖ₊₁ = 2·φₖ·φ'ₖ + 1.
            let mut phi = Complex64::new(0.0, 0.0);
            let mut dphi = Complex64::new(0.0, 0.0);
            for _ in 0..level {
                dphi = phi * dphi * 2.0 + Complex64::new(1.0, 0.0);
                phi = phi * phi + c;
            }
            (phi, dphi)
        };
        for gi in 0..60 {
            for gj in 0..30 {
                let mut c = Complex64::new(
                    -2.1 + 2.7 * (gi as f64 + 0.5) / 60.0,
                    1.3 * (gj as f64 + 0.5) / 30.0,
                );
                let mut converged = false;
                for _ in 0..80 {
                    let (phi, dphi) = eval(c);
                    if phi.norm() < 1e-12 {
                        converged = true;
                        break;
                    }
                    if dphi.norm() < 1e-300 {
                        break;
                    }
                    c -= phi / dphi;
                }
                if converged && c.norm() <= 2.0 {
                    for cand in [c, c.conj()] {
                        if found.iter().all(|w| (cand - w).norm() > 1e-7) {
                            found.push(cand);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn split_family_battery_never_escapes_on_pcf_parameters() {
        // Numeric roots of the critical-orbit polynomials are
        // superattracting parameters, so the floating-point battery on the
        // split family (a = b = 0, c = d = parameter) must never report a
        // false escape.
        let mut pool: Vec<Complex64> = Vec::new();
        for level in 1..=8 {
            newton_pcf_roots(level, &mut pool);
        }
        assert!(pool.len() >= 200, "parameter pool too small: {}", pool.len());
        for &c in pool.iter().take(400) {
            // All four split-family conditions reduce to z² + 0 or z² + c.
            for param in [Complex64::new(0.0, 0.0), c] {
                let cert = is_pcf_1d_numeric(param, 500, 1e-8);
                assert!(
                    !matches!(cert, PrepCertificate::Escape { .. }),
                    "false escape at parameter {c}"
                );
            }
        }
    }
}
