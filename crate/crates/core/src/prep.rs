//! Preperiodicity certificates at specialized parameters, preperiodicity
//! parameter polynomials over `Q[t]`, and intersection of the parameter
//! sets of two marked points.
//!
//! The exact side of the theory is computable: `t₀` lies in the
//! preperiodicity set of `P_t = (a(t), b(t))` for the pattern `(m, n)` iff
//! `t₀` is a common root of the two coordinates of
//! `F_t^n(P_t) − F_t^m(P_t)`. Sweeping all patterns `m < n ≤ N` yields a
//! finite truncation of the full parameter set, as exact polynomials whose
//! roots are classified (rational, cyclotomic, residual numeric) and
//! re-verified by exact orbit computation.
//!
//! Escape certification is two-phase. [`escape_radius`] returns the
//! classical bound `R = 1 + Σ |non-leading coefficients|`; once `|x| > R`
//! the base coordinate provably escapes. A point whose norm exceeds `R`
//! through the fiber coordinate alone can still collapse when `g` has
//! mixed monomials `x^i y^j` (i, j ≥ 1), so [`detect_preperiodic`] never
//! fires on the radius alone: it uses two certified criteria —
//!
//! - `|x| > 1 + C_f` with `|x| ≥ |y|` (the base coordinate dominates and
//!   grows monotonically), or
//! - `|y| > (1 + C_f + K)·max(|x|, 1)` with `K = 1 + Σ |g non-top|` (the
//!   fiber coordinate dominates every future base value and the bound is
//!   forward-invariant)
//!
//! — and additionally requires the next three max norms to increase, so
//! that every reported escape step starts a visibly monotone tail.

use std::collections::{BTreeSet, HashMap};

use num::{One, Zero};

use crate::algebra::ring::fnv_mix;
use crate::algebra::{
    complex_roots, cyclotomic_detect, cyclotomic_poly, rational_roots, NumberField, Rat,
    Scalar, TPoly, UPoly,
};
use crate::error::Result;
use crate::skew::{MarkedPair, SpecializedSkew};

/// Default pattern sweep bound `N` (all `m < n ≤ N`).
pub const DEFAULT_PATTERN_MAX: usize = 4;

/// Default iteration cap for [`detect_preperiodic`].
pub const DEFAULT_MAX_ITER: usize = 2000;

/// Bit-size cap on orbit coordinates before giving up as inconclusive;
/// escaping rational orbits square their size each step and blow past this
/// long before the iteration cap.
const SCALAR_BIT_BUDGET: usize = 1 << 16;

/// Steps of strictly increasing max norm required after an escape
/// criterion fires.
const ESCAPE_LOOKAHEAD: usize = 3;

/// Largest cyclotomic order probed when classifying parameter polynomials.
const CYCLOTOMIC_SEARCH_MAX: u32 = 256;

/// Residual tolerance for the numeric root fallback.
const NUMERIC_ROOT_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Certificates at a specialized parameter
// ---------------------------------------------------------------------------

/// Outcome of exact orbit analysis at one parameter.
#[derive(Clone, PartialEq, Debug)]
pub enum PrepCertificate {
    /// `Fⁿ(P) = Fᵐ(P)` exactly, with `m < n` minimal (first repetition of
    /// the hashed orbit): `m` is the preperiod, `n − m` the period.
    Cycle { m: usize, n: usize },
    /// A certified escape criterion fired at `step` and the next
    /// [`ESCAPE_LOOKAHEAD`] max norms strictly increase; `witness` is the
    /// max norm at `step` under the chosen embedding.
    Escape { step: usize, witness: f64 },
    /// Neither a cycle nor a certified escape within the budget.
    Inconclusive { budget: usize },
}

impl PrepCertificate {
    pub fn is_cycle(&self) -> bool {
        matches!(self, PrepCertificate::Cycle { .. })
    }
}

/// The classical monic escape bound `R = 1 + Σ |non-leading coefficients|`
/// over both coordinates (upper bounds valid in every complex embedding).
///
/// Guarantee: `|x| > R` forces the base coordinate to grow strictly
/// forever. The max norm itself is only guaranteed to grow when the fiber
/// polynomial has no mixed monomial `x^i y^j` with `i, j ≥ 1`; with mixed
/// terms a fiber-dominated point can collapse, which is why
/// [`detect_preperiodic`] uses the stronger two-sided criteria.
pub fn escape_radius<S: Scalar>(spec: &SpecializedSkew<S>) -> Rat {
    let d = spec.degree();
    let mut r = Rat::one();
    for (i, c) in spec.f_coeffs().iter().enumerate() {
        if i < d {
            r += c.abs_upper();
        }
    }
    for (m, c) in spec.g_terms() {
        if !(m.i == 0 && m.j as usize == d) {
            r += c.abs_upper();
        }
    }
    r
}

/// Classifies the exact orbit of `p0` under the specialized family:
/// [`PrepCertificate::Cycle`] at the first exact repetition,
/// [`PrepCertificate::Escape`] when a certified escape criterion fires, and
/// [`PrepCertificate::Inconclusive`] otherwise.
///
/// All cycle detection and escape thresholds are exact scalar arithmetic;
/// floating point appears only in the escape witness and the monotone
/// lookahead, never in a `Cycle` verdict.
pub fn detect_preperiodic<S: Scalar>(
    spec: &SpecializedSkew<S>,
    p0: (S, S),
    max_iter: usize,
) -> PrepCertificate {
    let d = spec.degree();
    // C_f and the fiber-coefficient mass K, exact.
    let mut c_f = Rat::zero();
    for (i, c) in spec.f_coeffs().iter().enumerate() {
        if i < d {
            c_f += c.abs_upper();
        }
    }
    let x0_bound = Rat::one() + c_f;
    let mut k = Rat::one();
    for (m, c) in spec.g_terms() {
        if !(m.i == 0 && m.j as usize == d) {
            k += c.abs_upper();
        }
    }
    let t_bound = x0_bound.clone() + k;

    // Buckets keyed by an iterative digest, confirmed by exact equality —
    // hashing the scalars themselves would recurse per continued-fraction
    // term (see [`Scalar::fingerprint`]).
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut orbit: Vec<(S, S)> = Vec::new();
    let mut p = p0;
    for step in 0..=max_iter {
        let fp = fnv_mix(p.0.fingerprint(), p.1.fingerprint());
        if let Some(bucket) = buckets.get(&fp) {
            if let Some(&m) = bucket.iter().find(|&&m| orbit[m] == p) {
                return PrepCertificate::Cycle { m, n: step };
            }
        }
        if p.0.approx_bits() + p.1.approx_bits() > SCALAR_BIT_BUDGET {
            return PrepCertificate::Inconclusive { budget: max_iter };
        }
        let (x, y) = &p;
        let base_escapes = x.abs_gt(&x0_bound) == Some(true)
            && matches!(
                x.abs_cmp(y),
                Some(std::cmp::Ordering::Greater | std::cmp::Ordering::Equal)
            );
        let fiber_escapes = y.abs_gt(&t_bound) == Some(true)
            && y.abs_gt(&(t_bound.clone() * x.abs_upper())) == Some(true);
        if (base_escapes || fiber_escapes) && lookahead_increases(spec, &p) {
            let witness = x.abs_f64().max(y.abs_f64());
            return PrepCertificate::Escape { step, witness };
        }
        if step == max_iter {
            break;
        }
        buckets.entry(fp).or_default().push(step);
        orbit.push(p.clone());
        p = spec.apply(&p);
    }
    PrepCertificate::Inconclusive { budget: max_iter }
}

fn lookahead_increases<S: Scalar>(spec: &SpecializedSkew<S>, p: &(S, S)) -> bool {
    let mut q = p.clone();
    let mut prev = q.0.abs_f64().max(q.1.abs_f64());
    for _ in 0..ESCAPE_LOOKAHEAD {
        q = spec.apply(&q);
        let norm = q.0.abs_f64().max(q.1.abs_f64());
        if !(norm > prev || norm.is_infinite()) {
            return false;
        }
        prev = norm;
    }
    true
}

// ---------------------------------------------------------------------------
// Pattern polynomials over Q[t]
// ---------------------------------------------------------------------------

/// Result of one `(m, n)` pattern: either the monic parameter polynomial
/// or the signal that the pattern identity holds for every `t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PrepPolyOutcome {
    Poly(TPoly),
    /// `Fⁿ(P_t) = Fᵐ(P_t)` identically in `t`: the marked point realizes
    /// the pattern generically. Reported, not an error.
    ZeroIdentity,
}

/// The parameter polynomial of the pattern `(m, n)`: the monic gcd over
/// `Q[t]` of the two coordinates of `F_t^n(P_t) − F_t^m(P_t)`. A
/// coordinate that is identically zero imposes no condition, so the gcd
/// convention returns the other coordinate; both zero gives
/// [`PrepPolyOutcome::ZeroIdentity`].
///
/// # Errors
/// [`crate::Error::DegreeBudgetExceeded`] from the symbolic orbit.
///
/// # Panics
/// Panics unless `m < n`.
pub fn prep_polynomials(
    pair: &MarkedPair,
    m: usize,
    n: usize,
    budget: usize,
) -> Result<PrepPolyOutcome> {
    assert!(m < n, "pattern requires m < n");
    let orbit = pair.orbit_symbolic(n, budget)?;
    Ok(pattern_from_orbit(&orbit.points, m, n))
}

fn pattern_from_orbit(points: &[(TPoly, TPoly)], m: usize, n: usize) -> PrepPolyOutcome {
    let dx = points[n].0.clone() - points[m].0.clone();
    let dy = points[n].1.clone() - points[m].1.clone();
    match (dx.is_zero(), dy.is_zero()) {
        (true, true) => PrepPolyOutcome::ZeroIdentity,
        (false, true) => PrepPolyOutcome::Poly(dx.monic()),
        (true, false) => PrepPolyOutcome::Poly(dy.monic()),
        (false, false) => PrepPolyOutcome::Poly(crate::algebra::upoly_gcd(&dx, &dy)),
    }
}

/// One pattern's polynomial in an aggregated sweep.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PatternPolynomial {
    pub m: usize,
    pub n: usize,
    pub outcome: PrepPolyOutcome,
}

/// Aggregated pattern sweep: per-pattern polynomials plus the classified
/// radical (distinct rational roots, distinct cyclotomic orders, and the
/// unclassified squarefree remainder).
///
/// Keeping the radical in factored form lets intersections be computed
/// factor-by-factor instead of through one large gcd whose Euclidean
/// remainders would swell.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrepPolynomialSet {
    pub patterns: Vec<PatternPolynomial>,
    pub rational_roots: Vec<Rat>,
    pub cyclotomic_orders: Vec<u32>,
    /// Monic squarefree product of the factors the classifier could not
    /// name; 1 when everything was classified.
    pub remainder: TPoly,
}

impl PrepPolynomialSet {
    /// Whether every pattern was a [`PrepPolyOutcome::ZeroIdentity`]
    /// (vacuously false when there are no patterns).
    pub fn generically_preperiodic(&self) -> bool {
        !self.patterns.is_empty()
            && self
                .patterns
                .iter()
                .all(|p| p.outcome == PrepPolyOutcome::ZeroIdentity)
    }

    /// The aggregated radical as one monic polynomial:
    /// `Π (t − r) · Π Φ_k · remainder`.
    pub fn radical(&self) -> TPoly {
        let mut acc = UPoly::one();
        for r in &self.rational_roots {
            acc = acc * UPoly::from_coeffs(vec![-r.clone(), Rat::one()]);
        }
        for &k in &self.cyclotomic_orders {
            acc = acc * cyclotomic_poly(k);
        }
        acc * self.remainder.clone()
    }
}

/// Sweeps all patterns `m < n ≤ n_max` on one symbolic orbit and
/// classifies the aggregate.
///
/// # Errors
/// [`crate::Error::DegreeBudgetExceeded`] from the symbolic orbit;
/// [`crate::Error::NonConvergence`] is *not* possible here (classification is
/// exact; numeric roots are extracted later).
pub fn prep_polynomial_set(
    pair: &MarkedPair,
    n_max: usize,
    budget: usize,
) -> Result<PrepPolynomialSet> {
    let orbit = pair.orbit_symbolic(n_max, budget)?;
    let mut patterns = Vec::new();
    let mut rationals: BTreeSet<Rat> = BTreeSet::new();
    let mut orders: BTreeSet<u32> = BTreeSet::new();
    let mut remainder = UPoly::one();
    for n in 1..=n_max {
        for m in 0..n {
            let outcome = pattern_from_orbit(&orbit.points, m, n);
            if let PrepPolyOutcome::Poly(p) = &outcome {
                let parts = classify_poly(p);
                rationals.extend(parts.rationals);
                orders.extend(parts.orders);
                if !parts.remainder.is_one() {
                    remainder = remainder * parts.remainder;
                }
            }
            patterns.push(PatternPolynomial { m, n, outcome });
        }
    }
    if remainder.degree().unwrap_or(0) >= 1 {
        remainder = remainder.squarefree_part();
    }
    Ok(PrepPolynomialSet {
        patterns,
        rational_roots: rationals.into_iter().collect(),
        cyclotomic_orders: orders.into_iter().collect(),
        remainder,
    })
}

struct ClassifiedParts {
    rationals: Vec<Rat>,
    orders: Vec<u32>,
    remainder: TPoly,
}

/// Squarefree part, then rational roots, then cyclotomic components, in
/// that order — so `Φ₁` and `Φ₂` surface as the rational roots `1`, `−1`
/// and only orders ≥ 3 remain cyclotomic.
fn classify_poly(p: &TPoly) -> ClassifiedParts {
    let mut rest = p.squarefree_part().monic();
    let mut rationals = Vec::new();
    for (root, _) in rational_roots(&rest) {
        let lin = UPoly::from_coeffs(vec![-root.clone(), Rat::one()]);
        rest = rest.exact_div(&lin).expect("squarefree rational root divides once");
        rationals.push(root);
    }
    let mut orders = Vec::new();
    for (k, mult) in cyclotomic_detect(&rest, CYCLOTOMIC_SEARCH_MAX) {
        let phi = cyclotomic_poly(k);
        for _ in 0..mult {
            rest = rest.exact_div(&phi).expect("detected cyclotomic divides");
        }
        orders.push(k);
    }
    ClassifiedParts { rationals, orders, remainder: rest.monic() }
}

// ---------------------------------------------------------------------------
// Root reports and verification
// ---------------------------------------------------------------------------

/// Exact or numeric location of one parameter in a preperiodicity set.
#[derive(Clone, PartialEq, Debug)]
pub enum RootKind {
    Rational(Rat),
    /// A full cyclotomic component `Φ_order`; covers every primitive root
    /// of that order (the verification at one primitive root transfers to
    /// its conjugates, the defining identities having rational
    /// coefficients).
    Cyclotomic { order: u32 },
    /// Residual numeric root; never asserted preperiodic.
    Numeric { re: f64, im: f64 },
}

/// One root with its re-verification certificates (one per marked pair it
/// was checked against).
#[derive(Clone, PartialEq, Debug)]
pub struct VerifiedRoot {
    pub kind: RootKind,
    pub certificates: Vec<PrepCertificate>,
    /// True iff every certificate is an exact cycle.
    pub verified: bool,
}

/// Finite truncation of one marked point's preperiodicity parameter set.
#[derive(Clone, PartialEq, Debug)]
pub struct PrepParameterSet {
    pub polynomials: PrepPolynomialSet,
    pub roots: Vec<VerifiedRoot>,
    /// Every pattern held identically: the point is preperiodic for all
    /// `t` and the root list carries no information.
    pub generically_preperiodic: bool,
}

/// Sweeps patterns up to `n_max`, classifies the aggregated roots, and
/// re-verifies every exact root by running [`detect_preperiodic`] at it.
///
/// # Errors
/// [`crate::Error::DegreeBudgetExceeded`] from iteration,
/// [`crate::Error::NonConvergence`] from the numeric residual root finder.
pub fn prep_parameter_set(
    pair: &MarkedPair,
    n_max: usize,
    budget: usize,
    max_iter: usize,
) -> Result<PrepParameterSet> {
    let set = prep_polynomial_set(pair, n_max, budget)?;
    let generically = set.generically_preperiodic();
    let roots = if generically {
        Vec::new()
    } else {
        verified_roots(
            &set.rational_roots,
            &set.cyclotomic_orders,
            &set.remainder,
            &[pair],
            max_iter,
        )?
    };
    Ok(PrepParameterSet { polynomials: set, roots, generically_preperiodic: generically })
}

/// Finite truncation of the intersection of two marked points' parameter
/// sets over the same family.
#[derive(Clone, PartialEq, Debug)]
pub struct PrepIntersection {
    /// Monic radical of the common parameter polynomial.
    pub common: TPoly,
    pub roots: Vec<VerifiedRoot>,
    /// Both points are preperiodic for every `t`: the intersection is the
    /// whole parameter line.
    pub both_generically_preperiodic: bool,
}

/// Intersects the truncated parameter sets of two marked points: common
/// rational roots, common cyclotomic components, plus the gcd of the two
/// unclassified remainders. Every exact common root is re-verified against
/// *both* pairs.
///
/// # Errors
/// As for [`prep_parameter_set`].
pub fn prep_intersection(
    pair_a: &MarkedPair,
    pair_b: &MarkedPair,
    n_max: usize,
    budget: usize,
    max_iter: usize,
) -> Result<PrepIntersection> {
    let set_a = prep_polynomial_set(pair_a, n_max, budget)?;
    let set_b = prep_polynomial_set(pair_b, n_max, budget)?;
    let gen_a = set_a.generically_preperiodic();
    let gen_b = set_b.generically_preperiodic();
    if gen_a && gen_b {
        return Ok(PrepIntersection {
            common: UPoly::one(),
            roots: Vec::new(),
            both_generically_preperiodic: true,
        });
    }
    // A generically preperiodic point intersects in the other point's set.
    let (rationals, orders, remainder) = if gen_a {
        (set_b.rational_roots, set_b.cyclotomic_orders, set_b.remainder)
    } else if gen_b {
        (set_a.rational_roots, set_a.cyclotomic_orders, set_a.remainder)
    } else {
        let rationals: Vec<Rat> = set_a
            .rational_roots
            .iter()
            .filter(|r| set_b.rational_roots.contains(r))
            .cloned()
            .collect();
        let orders: Vec<u32> = set_a
            .cyclotomic_orders
            .iter()
            .filter(|k| set_b.cyclotomic_orders.contains(k))
            .copied()
            .collect();
        let rem = if set_a.remainder.degree().unwrap_or(0) >= 1
            && set_b.remainder.degree().unwrap_or(0) >= 1
        {
            let g = crate::algebra::upoly_gcd(&set_a.remainder, &set_b.remainder);
            if g.degree().unwrap_or(0) >= 1 {
                g
            } else {
                UPoly::one()
            }
        } else {
            UPoly::one()
        };
        (rationals, orders, rem)
    };
    let roots =
        verified_roots(&rationals, &orders, &remainder, &[pair_a, pair_b], max_iter)?;
    let mut common = UPoly::one();
    for r in &rationals {
        common = common * UPoly::from_coeffs(vec![-r.clone(), Rat::one()]);
    }
    for &k in &orders {
        common = common * cyclotomic_poly(k);
    }
    common = common * remainder;
    Ok(PrepIntersection { common, roots, both_generically_preperiodic: false })
}

fn verified_roots(
    rationals: &[Rat],
    orders: &[u32],
    remainder: &TPoly,
    pairs: &[&MarkedPair],
    max_iter: usize,
) -> Result<Vec<VerifiedRoot>> {
    let mut out = Vec::new();
    for r in rationals {
        let certificates: Vec<PrepCertificate> = pairs
            .iter()
            .map(|pair| {
                let spec = pair.family().specialize(r);
                let (a, b) = pair.point();
                detect_preperiodic(&spec, (a.eval_scalar(r), b.eval_scalar(r)), max_iter)
            })
            .collect();
        let verified = certificates.iter().all(PrepCertificate::is_cycle);
        out.push(VerifiedRoot { kind: RootKind::Rational(r.clone()), certificates, verified });
    }
    for &k in orders {
        let field = NumberField::cyclotomic(k);
        let zeta = field.gen();
        let certificates: Vec<PrepCertificate> = pairs
            .iter()
            .map(|pair| {
                let spec = pair.family().specialize(&zeta);
                let (a, b) = pair.point();
                detect_preperiodic(
                    &spec,
                    (a.eval_scalar(&zeta), b.eval_scalar(&zeta)),
                    max_iter,
                )
            })
            .collect();
        let verified = certificates.iter().all(PrepCertificate::is_cycle);
        out.push(VerifiedRoot { kind: RootKind::Cyclotomic { order: k }, certificates, verified });
    }
    if remainder.degree().unwrap_or(0) >= 1 {
        for z in complex_roots(remainder, NUMERIC_ROOT_TOL)? {
            out.push(VerifiedRoot {
                kind: RootKind::Numeric { re: z.re, im: z.im },
                certificates: Vec::new(),
                verified: false,
            });
        }
    }
    Ok(out)
}
