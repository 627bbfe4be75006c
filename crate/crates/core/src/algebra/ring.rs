//! Coefficient-ring abstractions and the exact rational scalar type.
//!
//! Two traits split the roles that coefficients play in this crate:
//!
//! - [`Ring`] is the structural interface polynomials are generic over. Its
//!   constants are associated functions, so implementors must have a
//!   context-free zero and one — true for [`Rat`] and for polynomials over a
//!   ring, but *not* for number-field elements (whose constants depend on
//!   the field handle).
//! - [`Scalar`] is the interface for exact specialization values (rational
//!   or number-field parameters t₀): arithmetic by reference, exact zero
//!   tests, and certified absolute-value bounds used by escape tests.
//!
//! Floating-point numbers implement neither: numeric evaluation is a
//! separate code path that never mixes into exact polynomials.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::Ratio;
use num::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always reduced, denominator > 0.
///
/// `Ratio<BigInt>` canonicalizes on construction, which keeps `Eq` and
/// `Hash` consistent and makes 0/1 the unique zero.
pub type Rat = Ratio<BigInt>;

/// `n/d` as a [`Rat`].
///
/// # Panics
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

/// `n` as a [`Rat`].
pub fn rint(n: i64) -> Rat {
    Ratio::from_integer(BigInt::from(n))
}

/// Commutative ring with exact equality, used as polynomial coefficients.
///
/// Constants come from the [`Zero`]/[`One`] supertraits, so implementors
/// must have a context-free zero and one.
pub trait Ring:
    Clone
    + PartialEq
    + Eq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// `self^e` by binary exponentiation; `e = 0` gives one.
    fn pow_u(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut e = e;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Ring for Rat {}

/// Ring with an action of Q: exact scaling by a rational number.
///
/// The Böttcher recursion divides by the dynamical degree `d`; this trait
/// propagates that division through nested polynomial coefficients.
pub trait QAlgebra: Ring {
    fn scale(&self, r: &Rat) -> Self;
}

impl QAlgebra for Rat {
    fn scale(&self, r: &Rat) -> Self {
        self * r
    }
}

/// Exact scalar a family can be specialized at: `Q` itself or an element of
/// a number field.
///
/// Constants are built from an existing value (`zero_like`, `from_rat_like`)
/// because number-field elements need their field handle. The absolute-value
/// methods return *certified* answers: `None` means "not decidable at the
/// implementation's precision cap", never a guess.
pub trait Scalar: Clone + PartialEq + Eq + std::hash::Hash + Debug {
    /// Additive identity in `self`'s field.
    fn zero_like(&self) -> Self;
    /// The rational `r` viewed in `self`'s field.
    fn from_rat_like(&self, r: &Rat) -> Self;

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    /// Exact test against the field's zero. Named to avoid clashing with
    /// [`Zero::is_zero`] on types implementing both.
    fn vanishes(&self) -> bool;

    /// `self^e`; `e = 0` gives one. Named to avoid clashing with
    /// [`Ring::pow_u`] on types implementing both.
    fn pow_ref(&self, e: u32) -> Self {
        let one = self.from_rat_like(&rint(1));
        let mut base = self.clone();
        let mut e = e;
        let mut acc = one;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Rational upper bound for |self| valid in **every** complex embedding.
    fn abs_upper(&self) -> Rat;

    /// Certified comparison |self| > `q` under the field's chosen embedding
    /// (for `Rat`, the identity embedding). `q` must be ≥ 0.
    fn abs_gt(&self, q: &Rat) -> Option<bool>;

    /// Certified comparison of |self| and |other| under the chosen
    /// embedding.
    fn abs_cmp(&self, other: &Self) -> Option<Ordering>;

    /// Rough size in bits, used by iteration-budget guards.
    fn approx_bits(&self) -> usize;

    /// |self| as a float under the chosen embedding (diagnostic only).
    fn abs_f64(&self) -> f64;

    /// Iterative 64-bit digest, equal for equal values (canonical forms).
    ///
    /// Exists because the `Hash` impls of big rationals recurse once per
    /// continued-fraction term, which overflows the stack on the large
    /// dyadic rationals orbit iteration produces; hash-based lookups on
    /// scalars must go through this digest instead.
    fn fingerprint(&self) -> u64;
}

/// FNV-1a step for building [`Scalar::fingerprint`] digests.
pub(crate) fn fnv_mix(h: u64, v: u64) -> u64 {
    (h ^ v).wrapping_mul(0x100_0000_01b3)
}

impl Scalar for Rat {
    fn zero_like(&self) -> Self {
        Zero::zero()
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        r.clone()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs_upper(&self) -> Rat {
        self.abs()
    }
    // The comparisons cross-multiply instead of using `Ord for Ratio`,
    // whose continued-fraction recursion can overflow the stack on large
    // nearby operands. Denominators are positive in canonical form.
    fn abs_gt(&self, q: &Rat) -> Option<bool> {
        let lhs = self.numer().magnitude() * q.denom().magnitude();
        let rhs = q.numer().magnitude() * self.denom().magnitude();
        Some(lhs > rhs)
    }
    fn abs_cmp(&self, other: &Self) -> Option<Ordering> {
        let lhs = self.numer().magnitude() * other.denom().magnitude();
        let rhs = other.numer().magnitude() * self.denom().magnitude();
        Some(lhs.cmp(&rhs))
    }
    fn approx_bits(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
    fn abs_f64(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn fingerprint(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325;
        h = fnv_mix(h, (self.numer().sign() == num::bigint::Sign::Minus) as u64);
        h = fnv_mix(h, self.numer().bits());
        h = fnv_mix(h, self.numer().iter_u64_digits().next().unwrap_or(0));
        h = fnv_mix(h, self.denom().bits());
        h = fnv_mix(h, self.denom().iter_u64_digits().next().unwrap_or(0));
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_is_canonical() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(-3, -6), rat(1, 2));
        assert_eq!(rat(3, -6), rat(-1, 2));
        assert!(rat(0, 5).is_zero());
        assert_eq!(rat(0, 5), rint(0));
    }

    #[test]
    fn ring_pow_small_cases() {
        assert_eq!(rat(2, 3).pow_u(0), rint(1));
        assert_eq!(rat(2, 3).pow_u(1), rat(2, 3));
        assert_eq!(rat(2, 3).pow_u(4), rat(16, 81));
        assert_eq!(rint(-2).pow_u(5), rint(-32));
    }

    #[test]
    fn scalar_abs_queries_are_exact_for_rationals() {
        assert_eq!(rat(-7, 2).abs_upper(), rat(7, 2));
        assert_eq!(rat(-7, 2).abs_gt(&rint(3)), Some(true));
        assert_eq!(rat(-7, 2).abs_gt(&rint(4)), Some(false));
        assert_eq!(rat(-1, 2).abs_cmp(&rat(1, 3)), Some(Ordering::Greater));
    }
}
