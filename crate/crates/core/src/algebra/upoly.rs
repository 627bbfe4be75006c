//! Dense univariate polynomials over a coefficient ring.
//!
//! Coefficients are stored low-to-high with no trailing zeros, so the zero
//! polynomial is the empty vector and `degree()` returns `None` for it (a
//! distinguished sentinel — no −∞ arithmetic anywhere). Multiplication
//! skips zero coefficients, which keeps single-monomial orbit polynomials
//! like `t^14641` cheap despite the dense representation.
//!
//! ```
//! use skewdyn_core::algebra::{rint, UPoly};
//!
//! // t^2 - 1 composed with t + 1 is t^2 + 2t.
//! let p = UPoly::from_coeffs(vec![rint(-1), rint(0), rint(1)]);
//! let q = UPoly::from_coeffs(vec![rint(1), rint(1)]);
//! let c = skewdyn_core::algebra::poly_compose(&p, &q);
//! assert_eq!(c, UPoly::from_coeffs(vec![rint(0), rint(2), rint(1)]));
//! ```

use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use super::ring::{QAlgebra, Rat, Ring, Scalar};

/// Dense univariate polynomial over `R`, low-to-high, trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UPoly<R: Ring> {
    coeffs: Vec<R>,
}

impl<R: Ring> UPoly<R> {
    /// Builds a polynomial from low-to-high coefficients, trimming zeros.
    pub fn from_coeffs(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        UPoly::constant(R::one())
    }

    /// A constant polynomial.
    pub fn constant(c: R) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    /// The variable itself (degree-1 monic monomial).
    pub fn var() -> Self {
        UPoly::monomial(1, R::one())
    }

    /// `c · X^e`.
    pub fn monomial(e: usize, c: R) -> Self {
        if c.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![R::zero(); e + 1];
        coeffs[e] = c;
        UPoly { coeffs }
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient, or `None` for the zero polynomial.
    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    /// Coefficient of `X^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    /// Low-to-high coefficient slice (no trailing zeros).
    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Number of stored coefficients; the budget metric for symbolic
    /// iteration.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Applies `f` to every coefficient (trimming the result).
    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> UPoly<S> {
        UPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    /// Multiplies by `X^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly { coeffs }
    }

    /// Horner evaluation at a ring element.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UPoly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            // i · c via repeated addition is wasteful; build i as a ring sum
            // once per coefficient. Rings here are Q-algebras in practice,
            // but the generic path must not assume that.
            let mut n = R::zero();
            for _ in 0..i {
                n = n + R::one();
            }
            out.push(n * c.clone());
        }
        UPoly::from_coeffs(out)
    }
}

impl<R: Ring> num::Zero for UPoly<R> {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> num::One for UPoly<R> {
    fn one() -> Self {
        UPoly::one()
    }
}

impl<R: Ring> Ring for UPoly<R> {}

impl<R: QAlgebra> QAlgebra for UPoly<R> {
    fn scale(&self, r: &Rat) -> Self {
        self.map_coeffs(|c| c.scale(r))
    }
}

impl<R: Ring> Add for UPoly<R> {
    type Output = UPoly<R>;
    fn add(self, rhs: UPoly<R>) -> UPoly<R> {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (i, c) in short.into_iter().enumerate() {
            long[i] = long[i].clone() + c;
        }
        UPoly::from_coeffs(long)
    }
}

impl<R: Ring> Sub for UPoly<R> {
    type Output = UPoly<R>;
    fn sub(self, rhs: UPoly<R>) -> UPoly<R> {
        self + (-rhs)
    }
}

impl<R: Ring> Neg for UPoly<R> {
    type Output = UPoly<R>;
    fn neg(self) -> UPoly<R> {
        UPoly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<R: Ring> Mul for UPoly<R> {
    type Output = UPoly<R>;
    fn mul(self, rhs: UPoly<R>) -> UPoly<R> {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::from_coeffs(out)
    }
}

/// Composition `p ∘ q` by Horner's scheme.
///
/// When both are nonconstant, `deg(p∘q) = deg(p)·deg(q)`.
pub fn poly_compose<R: Ring>(p: &UPoly<R>, q: &UPoly<R>) -> UPoly<R> {
    let mut acc = UPoly::zero();
    for c in p.coeffs.iter().rev() {
        acc = acc * q.clone() + UPoly::constant(c.clone());
    }
    acc
}

impl UPoly<Rat> {
    /// Horner evaluation at an exact scalar (rational or number-field
    /// parameter), interpreting the rational coefficients in the scalar's
    /// field.
    pub fn eval_scalar<S: Scalar>(&self, x: &S) -> S {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x).add_ref(&x.from_rat_like(c));
        }
        acc
    }

    /// Divides by a nonzero divisor, returning `(quotient, remainder)`.
    ///
    /// # Panics
    /// Panics if `div` is zero.
    pub fn divrem(&self, div: &UPoly<Rat>) -> (UPoly<Rat>, UPoly<Rat>) {
        let dd = div.degree().expect("division by zero polynomial");
        let lead_inv = Rat::one() / div.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (UPoly::zero(), UPoly::from_coeffs(rem));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        while rem.len() >= dd + 1 {
            let k = rem.len() - 1;
            let q = rem[k].clone() * lead_inv.clone();
            let pos = k - dd;
            for (i, c) in div.coeffs.iter().enumerate() {
                rem[pos + i] = rem[pos + i].clone() - q.clone() * c.clone();
            }
            quot[pos] = q;
            // The top coefficient cancels exactly; trim it and any zeros
            // exposed underneath.
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (UPoly::from_coeffs(quot), UPoly::from_coeffs(rem))
    }

    /// Exact division; `None` when the remainder is nonzero.
    pub fn exact_div(&self, div: &UPoly<Rat>) -> Option<UPoly<Rat>> {
        let (q, r) = self.divrem(div);
        r.is_zero().then_some(q)
    }

    /// Scales so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> UPoly<Rat> {
        match self.leading() {
            None => UPoly::zero(),
            Some(l) => {
                let inv = Rat::one() / l.clone();
                self.map_coeffs(|c| c * inv.clone())
            }
        }
    }

    /// `p / gcd(p, p′)` — same roots, all simple.
    pub fn squarefree_part(&self) -> UPoly<Rat> {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = upoly_gcd(self, &self.derivative());
        self.exact_div(&g)
            .expect("gcd divides the polynomial exactly")
            .monic()
    }
}

/// Monic greatest common divisor over `Q[t]` by the Euclidean algorithm,
/// renormalizing remainders to monic at each step to control coefficient
/// growth.
///
/// # Panics
/// Panics if both inputs are zero.
pub fn upoly_gcd(p: &UPoly<Rat>, q: &UPoly<Rat>) -> UPoly<Rat> {
    assert!(!(p.is_zero() && q.is_zero()), "gcd of two zero polynomials");
    let mut a = p.monic();
    let mut b = q.monic();
    while !b.is_zero() {
        let (_, r) = a.divrem(&b);
        a = b;
        b = r.monic();
    }
    a
}
