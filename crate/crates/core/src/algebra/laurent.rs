//! Truncated Laurent tails in one variable over a coefficient ring.
//!
//! A [`LaurentTail`] stores coefficients for exponents `top, top−1, …` down
//! to a *certified floor*: `floor == None` means the value is exactly a
//! finite Laurent polynomial (everything below the stored range is zero);
//! `floor == Some(f)` means coefficients below `f` are unknown
//! (truncated away), and reading them is a programming error.
//!
//! Every operation propagates the certified window explicitly — this is the
//! bookkeeping the Böttcher recursion relies on: computing `c_n` requires
//! both sides of the functional equation to be valid at the `y`-exponent
//! `d−1−n`, and the window arithmetic here makes a silent under-truncation
//! impossible (it panics instead).

use num::One;

use super::ring::{QAlgebra, Rat, Ring};

/// Truncated Laurent series `Σ_{e ≤ top} c_e y^e` with a certified floor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentTail<R: Ring> {
    /// Exponent of the first stored coefficient (which may be zero).
    top: i64,
    /// Coefficients for exponents `top, top−1, …, top − (len−1)`.
    coeffs: Vec<R>,
    /// Lowest certified exponent; `None` when the series is exact.
    floor: Option<i64>,
}

impl<R: Ring> LaurentTail<R> {
    /// An exact finite series from descending coefficients starting at
    /// `top`.
    pub fn exact(top: i64, coeffs: Vec<R>) -> Self {
        let mut s = LaurentTail { top, coeffs, floor: None };
        s.normalize();
        s
    }

    /// A truncated series certified down to `floor` (inclusive).
    ///
    /// # Panics
    /// Panics if the stored range does not reach the floor.
    pub fn truncated(top: i64, coeffs: Vec<R>, floor: i64) -> Self {
        assert!(
            top - (coeffs.len() as i64 - 1) <= floor || coeffs.is_empty(),
            "stored coefficients must reach the certified floor"
        );
        let mut s = LaurentTail { top, coeffs, floor: Some(floor) };
        s.normalize();
        s
    }

    /// The exact zero series.
    pub fn zero() -> Self {
        LaurentTail { top: 0, coeffs: Vec::new(), floor: None }
    }

    /// `c · y^e`, exact.
    pub fn monomial(e: i64, c: R) -> Self {
        LaurentTail::exact(e, vec![c])
    }

    fn normalize(&mut self) {
        // Drop leading zeros, keep anything at or below a Some floor.
        while let Some(first) = self.coeffs.first() {
            if first.is_zero() {
                self.coeffs.remove(0);
                self.top -= 1;
            } else {
                break;
            }
        }
        if let Some(f) = self.floor {
            // Drop stored coefficients below the floor (uncertified).
            let keep = (self.top - f + 1).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        if self.coeffs.is_empty() {
            self.top = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the leading stored term, `None` when no term is stored.
    pub fn top_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.top)
    }

    /// Certified floor; `None` for exact series.
    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    /// Coefficient of `y^e`.
    ///
    /// # Panics
    /// Panics when `e` lies below the certified floor.
    pub fn coeff(&self, e: i64) -> R {
        if let Some(f) = self.floor {
            assert!(e >= f, "coefficient {e} below certified floor {f}");
        }
        if self.coeffs.is_empty() || e > self.top {
            return R::zero();
        }
        let idx = self.top - e;
        if idx as usize >= self.coeffs.len() {
            return R::zero();
        }
        self.coeffs[idx as usize].clone()
    }

    /// Raises the floor to `f` (drops lower coefficients). A no-op when the
    /// series is already certified no deeper than `f`.
    pub fn truncate_below(&self, f: i64) -> Self {
        let new_floor = match self.floor {
            None => Some(f),
            Some(old) => Some(old.max(f)),
        };
        let mut out =
            LaurentTail { top: self.top, coeffs: self.coeffs.clone(), floor: new_floor };
        out.normalize();
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let floor = match (self.floor, other.floor) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(a.max(b)),
        };
        let hi_a = self.top_exponent().unwrap_or(i64::MIN / 2);
        let hi_b = other.top_exponent().unwrap_or(i64::MIN / 2);
        let top = hi_a.max(hi_b);
        if self.is_zero() && other.is_zero() {
            return LaurentTail { top: 0, coeffs: Vec::new(), floor };
        }
        let lo_a = self.low_exponent();
        let lo_b = other.low_exponent();
        let lo = match floor {
            Some(f) => f,
            None => lo_a.min(lo_b),
        };
        let mut coeffs = Vec::with_capacity((top - lo + 1).max(0) as usize);
        let mut e = top;
        while e >= lo {
            coeffs.push(self.coeff_unchecked(e) + other.coeff_unchecked(e));
            e -= 1;
        }
        let mut s = LaurentTail { top, coeffs, floor };
        s.normalize();
        s
    }

    pub fn neg(&self) -> Self {
        LaurentTail {
            top: self.top,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            floor: self.floor,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let floor = match (self.floor, other.floor) {
            (None, None) => None,
            // Unknown tail of one factor times the top of the other bounds
            // what the product can be trusted down to.
            (Some(fa), None) => Some(fa + other.top_exponent().unwrap_or(0)),
            (None, Some(fb)) => Some(fb + self.top_exponent().unwrap_or(0)),
            (Some(fa), Some(fb)) => Some(
                (fa + other.top_exponent().unwrap_or(0))
                    .max(fb + self.top_exponent().unwrap_or(0)),
            ),
        };
        if self.is_zero() || other.is_zero() {
            return LaurentTail { top: 0, coeffs: Vec::new(), floor };
        }
        let top = self.top + other.top;
        let lo = match floor {
            Some(f) => f,
            None => self.low_exponent() + other.low_exponent(),
        };
        let len = (top - lo + 1).max(0) as usize;
        let mut coeffs = vec![R::zero(); len];
        for (ia, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.top - ia as i64;
            for (ib, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let eb = other.top - ib as i64;
                let e = ea + eb;
                if e < lo {
                    continue;
                }
                let idx = (top - e) as usize;
                coeffs[idx] = coeffs[idx].clone() + a.clone() * b.clone();
            }
        }
        let mut s = LaurentTail { top, coeffs, floor };
        s.normalize();
        s
    }

    pub fn mul_coeff(&self, c: &R) -> Self {
        let mut out = LaurentTail {
            top: self.top,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
            floor: self.floor,
        };
        out.normalize();
        out
    }

    /// `self^e` by binary exponentiation (`e = 0` gives the exact constant
    /// 1).
    pub fn pow_u(&self, e: u32) -> Self {
        let mut acc = LaurentTail::monomial(0, R::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Reciprocal of a series with leading coefficient 1, certified down to
    /// `floor`: `(y^top (1+u))^{-1} = y^{-top} Σ (−u)^k`.
    ///
    /// # Panics
    /// Panics if the series is zero or its leading coefficient is not 1.
    pub fn recip_monic(&self, floor: i64) -> Self {
        let top = self.top_exponent().expect("reciprocal of zero series");
        assert!(self.coeff(top) == R::one(), "leading coefficient must be 1");
        // u = y^{-top}·self − 1, exponents ≤ −1.
        let shifted = self.shift(-top);
        let u = shifted.sub(&LaurentTail::monomial(0, R::one()));
        // Relative window for the Σ(−u)^k expansion.
        let rel_floor = floor + top;
        let mut acc = LaurentTail::monomial(0, R::one());
        let mut term = LaurentTail::monomial(0, R::one());
        let neg_u = u.neg().truncate_below(rel_floor);
        let steps = (-rel_floor).max(0) as usize;
        for _ in 0..steps {
            term = term.mul(&neg_u).truncate_below(rel_floor);
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        acc.truncate_below(rel_floor).shift(-top)
    }

    /// Shifts every exponent by `k` (multiplication by `y^k`).
    pub fn shift(&self, k: i64) -> Self {
        LaurentTail {
            top: self.top + k,
            coeffs: self.coeffs.clone(),
            floor: self.floor.map(|f| f + k),
        }
    }

    fn low_exponent(&self) -> i64 {
        if self.coeffs.is_empty() {
            0
        } else {
            self.top - (self.coeffs.len() as i64 - 1)
        }
    }

    fn coeff_unchecked(&self, e: i64) -> R {
        if self.coeffs.is_empty() || e > self.top {
            return R::zero();
        }
        let idx = self.top - e;
        if idx as usize >= self.coeffs.len() {
            return R::zero();
        }
        self.coeffs[idx as usize].clone()
    }
}

impl<R: QAlgebra> LaurentTail<R> {
    /// Scales every coefficient by a rational.
    pub fn scale(&self, r: &Rat) -> Self {
        let mut out = LaurentTail {
            top: self.top,
            coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect(),
            floor: self.floor,
        };
        out.normalize();
        out
    }

    /// `d`-th root of a series with leading term `y^top`, `d | top`,
    /// leading coefficient 1, certified down to `floor`:
    /// `(y^top (1+u))^{1/d} = y^{top/d} Σ C(1/d, k) u^k`.
    ///
    /// # Panics
    /// Panics if the series is zero, `d` does not divide `top`, or the
    /// leading coefficient is not 1.
    pub fn nth_root_monic(&self, d: u32, floor: i64) -> Self {
        let top = self.top_exponent().expect("root of zero series");
        assert!(d >= 1 && top % d as i64 == 0, "degree must divide the top exponent");
        assert!(self.coeff(top) == R::one(), "leading coefficient must be 1");
        let shifted = self.shift(-top);
        let u = shifted.sub(&LaurentTail::monomial(0, R::one()));
        let new_top = top / d as i64;
        let rel_floor = floor - new_top;
        let u = u.truncate_below(rel_floor);
        // Binomial series: Σ_k C(1/d, k) u^k with
        // C(1/d, k) = ∏_{j<k} (1/d − j) / k!.
        let mut acc = LaurentTail::monomial(0, R::one());
        let mut upow = LaurentTail::monomial(0, R::one());
        let mut binom = Rat::one();
        let inv_d = Rat::one() / super::ring::rint(d as i64);
        let steps = (-rel_floor).max(0) as usize;
        for k in 1..=steps as i64 {
            upow = upow.mul(&u).truncate_below(rel_floor);
            if upow.is_zero() {
                break;
            }
            binom = binom * (inv_d.clone() - super::ring::rint(k - 1))
                / super::ring::rint(k);
            acc = acc.add(&upow.scale(&binom));
        }
        acc.truncate_below(rel_floor).shift(new_top)
    }
}
