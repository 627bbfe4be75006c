//! Number fields `Q[z]/(m(z))` with monic integer moduli, and their
//! elements.
//!
//! Fields are shared behind `Arc` handles; elements carry their handle and
//! a fixed-length rational coefficient vector. Arithmetic reduces modulo
//! the modulus. Equality of fields is structural (same modulus), so
//! independently constructed handles to the same field interoperate.
//!
//! Certified absolute-value queries (used by escape tests) work under one
//! fixed complex embedding — the root of the modulus with smallest positive
//! argument. They are exact for degree ≤ 2 moduli: imaginary quadratic
//! fields compare |e|² = e·ē ∈ Q, real quadratic fields use rational
//! square-root enclosures refined on demand. Higher-degree moduli answer
//! `None` (cycles never need an embedding; escape then stays inconclusive).

use std::sync::Arc;

use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};

use super::cyclotomic::cyclotomic_poly;
use super::ring::{rint, Rat, Scalar};
use super::upoly::{upoly_gcd, UPoly};

/// Precision ladder (in bits) for on-demand square-root refinement.
const SQRT_BITS: [u32; 4] = [64, 128, 256, 512];

/// `Q[z]/(m(z))` for a monic, squarefree, integer-coefficient `m` of degree
/// ≥ 2 with no rational root.
#[derive(Debug)]
pub struct NumberField {
    modulus: UPoly<Rat>,
    /// `Some(n)` when the modulus is the n-th cyclotomic polynomial.
    cyclotomic_order: Option<u32>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}
impl Eq for NumberField {}

impl NumberField {
    /// Builds a field with the given monic integer modulus.
    ///
    /// Irreducibility is enforced structurally: degree ≥ 2, squarefree, and
    /// no rational root — a complete test for degree ≤ 3, a necessary one
    /// above (general factorization is out of scope; every modulus the
    /// toolkit builds internally is cyclotomic or quadratic).
    ///
    /// # Panics
    /// Panics if the modulus is non-monic, has a non-integer coefficient,
    /// has degree < 2, has a rational root, or is not squarefree.
    pub fn new(modulus: UPoly<Rat>) -> Arc<NumberField> {
        let deg = modulus.degree().unwrap_or(0);
        assert!(deg >= 2, "modulus must have degree at least 2");
        assert_eq!(modulus.leading(), Some(&rint(1)), "modulus must be monic");
        assert!(
            modulus.coeffs().iter().all(|c| c.denom().is_one()),
            "modulus must have integer coefficients"
        );
        assert!(
            upoly_gcd(&modulus, &modulus.derivative()).degree() == Some(0),
            "modulus must be squarefree"
        );
        assert!(
            super::roots::rational_roots(&modulus).is_empty(),
            "modulus must have no rational root"
        );
        Arc::new(NumberField { modulus, cyclotomic_order: None })
    }

    /// The `n`-th cyclotomic field `Q(ζ_n)`.
    ///
    /// # Panics
    /// Panics if `n < 3` (those roots of unity are rational).
    pub fn cyclotomic(n: u32) -> Arc<NumberField> {
        assert!(n >= 3, "ζ_1 and ζ_2 are rational; no field needed");
        let modulus = cyclotomic_poly(n);
        Arc::new(NumberField { modulus, cyclotomic_order: Some(n) })
    }

    pub fn modulus(&self) -> &UPoly<Rat> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("modulus is nonzero")
    }

    pub fn cyclotomic_order(&self) -> Option<u32> {
        self.cyclotomic_order
    }

    /// The class of `z` — a generator of the field over `Q`.
    pub fn gen(self: &Arc<Self>) -> NumberFieldElem {
        let mut coeffs = vec![Rat::zero(); self.degree()];
        coeffs[1] = Rat::one();
        NumberFieldElem { field: Arc::clone(self), coeffs }
    }

    /// Embeds a rational number.
    pub fn from_rat(self: &Arc<Self>, r: &Rat) -> NumberFieldElem {
        let mut coeffs = vec![Rat::zero(); self.degree()];
        coeffs[0] = r.clone();
        NumberFieldElem { field: Arc::clone(self), coeffs }
    }

    /// Builds an element from low-to-high coefficients (length ≤ degree).
    ///
    /// # Panics
    /// Panics if more coefficients than the field degree are supplied.
    pub fn elem(self: &Arc<Self>, mut coeffs: Vec<Rat>) -> NumberFieldElem {
        assert!(coeffs.len() <= self.degree(), "too many coefficients");
        coeffs.resize(self.degree(), Rat::zero());
        NumberFieldElem { field: Arc::clone(self), coeffs }
    }

    /// Cauchy bound: every complex root of the modulus has |z| ≤ 1 + max|mᵢ|.
    fn root_bound(&self) -> Rat {
        let mut m = Rat::zero();
        let deg = self.degree();
        for (i, c) in self.modulus.coeffs().iter().enumerate() {
            if i < deg {
                let a = c.abs();
                if a > m {
                    m = a;
                }
            }
        }
        m + Rat::one()
    }
}

/// Element of a [`NumberField`]: a rational coefficient vector of length
/// exactly the field degree, reduced modulo the modulus.
#[derive(Clone, Debug)]
pub struct NumberFieldElem {
    field: Arc<NumberField>,
    coeffs: Vec<Rat>,
}

impl PartialEq for NumberFieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for NumberFieldElem {}

impl std::hash::Hash for NumberFieldElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for c in self.field.modulus.coeffs() {
            c.hash(state);
        }
        for c in &self.coeffs {
            c.hash(state);
        }
    }
}

impl NumberFieldElem {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Low-to-high coefficients, length = field degree.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rat(&self) -> Option<&Rat> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then_some(&self.coeffs[0])
    }

    fn assert_same_field(&self, other: &Self) {
        assert!(
            self.field == other.field,
            "mixed arithmetic between different number fields"
        );
    }

    /// For degree-2 moduli `z² + pz + q`, the data `(p, q, disc = p² − 4q)`.
    fn quadratic_data(&self) -> Option<(Rat, Rat, Rat)> {
        if self.field.degree() != 2 {
            return None;
        }
        let p = self.field.modulus.coeff(1);
        let q = self.field.modulus.coeff(0);
        let disc = p.clone() * p.clone() - rint(4) * q.clone();
        Some((p, q, disc))
    }

    /// |e|² as an exact rational, available in imaginary quadratic fields
    /// (where complex conjugation is the nontrivial automorphism).
    fn modulus_squared(&self) -> Option<Rat> {
        let (p, q, disc) = self.quadratic_data()?;
        if disc >= Rat::zero() {
            return None;
        }
        // e = a + bz, ē = a + b z̄ with z + z̄ = −p, z z̄ = q:
        // |e|² = a² − abp + b²q.
        let a = &self.coeffs[0];
        let b = &self.coeffs[1];
        Some(a * a - a * b * p + b * b * q)
    }

    /// Rational enclosure of the real value a + b·(−p+√disc)/2 at the given
    /// precision, for real quadratic fields.
    fn real_enclosure(&self, bits: u32) -> Option<(Rat, Rat)> {
        let (p, _, disc) = self.quadratic_data()?;
        if disc <= Rat::zero() {
            return None;
        }
        let (slo, shi) = sqrt_brackets(&disc, bits);
        let a = &self.coeffs[0];
        let b = &self.coeffs[1];
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        let v1 = a + b * (slo - p.clone()) * half.clone();
        let v2 = a + b * (shi - p) * half;
        Some(if v1 <= v2 { (v1, v2) } else { (v2, v1) })
    }
}

/// Rational brackets `lo ≤ √r ≤ hi` with gap `1/(denom·2^bits)`.
///
/// # Panics
/// Panics if `r < 0`.
pub fn sqrt_brackets(r: &Rat, bits: u32) -> (Rat, Rat) {
    assert!(*r >= Rat::zero(), "square root of a negative rational");
    let a = r.numer();
    let b = r.denom();
    // √(a/b) = √(a·b)/b; scale by 4^bits so the integer sqrt carries the
    // requested precision.
    let scaled: BigInt = a * b << (2 * bits);
    let i = scaled.sqrt();
    let den = Rat::from_integer(b << bits);
    let lo = Rat::from_integer(i.clone()) / den.clone();
    let hi = Rat::from_integer(i + BigInt::one()) / den;
    (lo, hi)
}

impl Scalar for NumberFieldElem {
    fn zero_like(&self) -> Self {
        self.field.from_rat(&Rat::zero())
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        self.field.from_rat(r)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        NumberFieldElem { field: Arc::clone(&self.field), coeffs }
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        NumberFieldElem { field: Arc::clone(&self.field), coeffs }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let prod = UPoly::from_coeffs(self.coeffs.clone())
            * UPoly::from_coeffs(other.coeffs.clone());
        let (_, rem) = prod.divrem(&self.field.modulus);
        let mut coeffs = rem.coeffs().to_vec();
        coeffs.resize(self.field.degree(), Rat::zero());
        NumberFieldElem { field: Arc::clone(&self.field), coeffs }
    }
    fn neg_ref(&self) -> Self {
        NumberFieldElem {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn vanishes(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn abs_upper(&self) -> Rat {
        // Σ |cᵢ| Bⁱ with B the Cauchy root bound — valid in every embedding.
        let b = self.field.root_bound();
        let mut pow = Rat::one();
        let mut acc = Rat::zero();
        for c in &self.coeffs {
            acc += c.abs() * pow.clone();
            pow *= b.clone();
        }
        acc
    }

    fn abs_gt(&self, q: &Rat) -> Option<bool> {
        if let Some(r) = self.as_rat() {
            return Some(r.abs() > *q);
        }
        if let Some(m2) = self.modulus_squared() {
            return Some(m2 > q * q);
        }
        for bits in SQRT_BITS {
            let (lo, hi) = self.real_enclosure(bits)?;
            let abs_lo = if lo > Rat::zero() {
                lo.clone()
            } else if hi < Rat::zero() {
                -hi.clone()
            } else {
                Rat::zero()
            };
            let abs_hi = lo.abs().max(hi.abs());
            if abs_lo > *q {
                return Some(true);
            }
            if abs_hi <= *q {
                return Some(false);
            }
        }
        None
    }

    fn abs_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.assert_same_field(other);
        if let (Some(a), Some(b)) = (self.as_rat(), other.as_rat()) {
            return Some(a.abs().cmp(&b.abs()));
        }
        if let (Some(a2), Some(b2)) = (self.modulus_squared(), other.modulus_squared()) {
            return Some(a2.cmp(&b2));
        }
        for bits in SQRT_BITS {
            let (alo, ahi) = abs_interval(self.real_enclosure(bits)?);
            let (blo, bhi) = abs_interval(other.real_enclosure(bits)?);
            if ahi < blo {
                return Some(std::cmp::Ordering::Less);
            }
            if bhi < alo {
                return Some(std::cmp::Ordering::Greater);
            }
        }
        None
    }

    fn approx_bits(&self) -> usize {
        self.coeffs
            .iter()
            .map(|c| (c.numer().bits() + c.denom().bits()) as usize)
            .sum()
    }

    fn abs_f64(&self) -> f64 {
        if let Some(r) = self.as_rat() {
            return r.abs().to_f64().unwrap_or(f64::INFINITY);
        }
        if let Some(m2) = self.modulus_squared() {
            return m2.to_f64().unwrap_or(f64::INFINITY).sqrt();
        }
        if let Some((lo, hi)) = self.real_enclosure(64) {
            let mid = (lo + hi) / rint(2);
            return mid.to_f64().unwrap_or(f64::INFINITY).abs();
        }
        // Degree ≥ 3: report the all-embeddings upper bound.
        self.abs_upper().to_f64().unwrap_or(f64::INFINITY)
    }

    fn fingerprint(&self) -> u64 {
        let mut h = 0x9e37_79b9_7f4a_7c15;
        for c in &self.coeffs {
            h = crate::algebra::ring::fnv_mix(h, Scalar::fingerprint(c));
        }
        h
    }
}

fn abs_interval((lo, hi): (Rat, Rat)) -> (Rat, Rat) {
    let abs_lo = if lo > Rat::zero() {
        lo.clone()
    } else if hi < Rat::zero() {
        -hi.clone()
    } else {
        Rat::zero()
    };
    let abs_hi = lo.abs().max(hi.abs());
    (abs_lo, abs_hi)
}
