//! Sparse bivariate polynomials in `(x, y)` over a coefficient ring.
//!
//! Terms live in a `BTreeMap` keyed by exponent pairs under a graded
//! lexicographic order with `y` weighted before `x`, which fixes a
//! deterministic term order for printing, hashing, and the echelon forms in
//! the closure module. No zero coefficient is ever stored.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num::Zero;

use super::ring::{QAlgebra, Rat, Ring, Scalar};
use super::upoly::UPoly;

/// Exponent pair for the monomial `x^i y^j`.
///
/// Ordered by total degree, then `y`-exponent, then `x`-exponent (graded
/// lexicographic with `y` before `x`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    pub i: u32,
    pub j: u32,
}

impl Mono {
    pub fn new(i: u32, j: u32) -> Self {
        Mono { i, j }
    }

    pub fn total(&self) -> u32 {
        self.i + self.j
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total(), self.j, self.i).cmp(&(other.total(), other.j, other.i))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `x, y` with coefficients in `R`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly<R: Ring> {
    terms: BTreeMap<Mono, R>,
}

impl<R: Ring> Default for MPoly<R> {
    fn default() -> Self {
        MPoly::zero()
    }
}

impl<R: Ring> MPoly<R> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        MPoly::constant(R::one())
    }

    pub fn constant(c: R) -> Self {
        let mut p = MPoly::zero();
        p.add_term(Mono::new(0, 0), c);
        p
    }

    /// `c · x^i y^j`.
    pub fn monomial(i: u32, j: u32, c: R) -> Self {
        let mut p = MPoly::zero();
        p.add_term(Mono::new(i, j), c);
        p
    }

    /// The variable `x`.
    pub fn x() -> Self {
        MPoly::monomial(1, 0, R::one())
    }

    /// The variable `y`.
    pub fn y() -> Self {
        MPoly::monomial(0, 1, R::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · x^i y^j` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Mono, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    /// Coefficient of `x^i y^j` (zero if absent).
    pub fn coeff(&self, i: u32, j: u32) -> R {
        self.terms.get(&Mono::new(i, j)).cloned().unwrap_or_else(R::zero)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree in `(x, y)`, or `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::total).max()
    }

    /// Degree in `x` alone, or `None` for zero.
    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.i).max()
    }

    /// Degree in `y` alone, or `None` for zero.
    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.j).max()
    }

    /// The terms of exact `y`-exponent `j`, as a polynomial (in `x` only).
    pub fn y_slice(&self, j: u32) -> MPoly<R> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            if m.j == j {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    /// The terms of exact total degree `k` (the homogeneous part).
    pub fn homogeneous_part(&self, k: u32) -> MPoly<R> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            if m.total() == k {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> MPoly<S> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Multiplies every term by `x^i y^j`.
    pub fn mul_mono(&self, i: u32, j: u32) -> Self {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(Mono::new(m.i + i, m.j + j), c.clone());
        }
        out
    }

    /// `self^e` by binary exponentiation.
    pub fn pow_u(&self, e: u32) -> Self {
        Ring::pow_u(self, e)
    }

    /// Evaluates at a pair of ring elements by substituting `x ↦ px`,
    /// `y ↦ py`, with powers cached across terms.
    pub fn eval_pair(&self, px: &R, py: &R) -> R {
        let mut xpow: Vec<R> = vec![R::one()];
        let mut ypow: Vec<R> = vec![R::one()];
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            while xpow.len() <= m.i as usize {
                let last = xpow.last().unwrap().clone();
                xpow.push(last * px.clone());
            }
            while ypow.len() <= m.j as usize {
                let last = ypow.last().unwrap().clone();
                ypow.push(last * py.clone());
            }
            acc = acc + c.clone() * xpow[m.i as usize].clone() * ypow[m.j as usize].clone();
        }
        acc
    }

    /// Substitutes polynomials for both variables.
    pub fn subst(&self, sx: &MPoly<R>, sy: &MPoly<R>) -> MPoly<R> {
        let mut xpow: Vec<MPoly<R>> = vec![MPoly::one()];
        let mut ypow: Vec<MPoly<R>> = vec![MPoly::one()];
        let mut acc = MPoly::zero();
        for (m, c) in &self.terms {
            while xpow.len() <= m.i as usize {
                let last = xpow.last().unwrap().clone();
                xpow.push(last * sx.clone());
            }
            while ypow.len() <= m.j as usize {
                let last = ypow.last().unwrap().clone();
                ypow.push(last * sy.clone());
            }
            let term = xpow[m.i as usize].clone() * ypow[m.j as usize].clone();
            acc = acc + term.map_coeffs(|t| c.clone() * t.clone());
        }
        acc
    }
}

impl<R: Ring> num::Zero for MPoly<R> {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: Ring> num::One for MPoly<R> {
    fn one() -> Self {
        MPoly::one()
    }
}

impl<R: Ring> Ring for MPoly<R> {}

impl<R: QAlgebra> QAlgebra for MPoly<R> {
    fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return MPoly::zero();
        }
        self.map_coeffs(|c| c.scale(r))
    }
}

impl<R: Ring> Add for MPoly<R> {
    type Output = MPoly<R>;
    fn add(mut self, rhs: MPoly<R>) -> MPoly<R> {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<R: Ring> Sub for MPoly<R> {
    type Output = MPoly<R>;
    fn sub(self, rhs: MPoly<R>) -> MPoly<R> {
        self + (-rhs)
    }
}

impl<R: Ring> Neg for MPoly<R> {
    type Output = MPoly<R>;
    fn neg(mut self) -> MPoly<R> {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl<R: Ring> Mul for MPoly<R> {
    type Output = MPoly<R>;
    fn mul(self, rhs: MPoly<R>) -> MPoly<R> {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(
                    Mono::new(ma.i + mb.i, ma.j + mb.j),
                    ca.clone() * cb.clone(),
                );
            }
        }
        out
    }
}

impl MPoly<UPoly<Rat>> {
    /// Degree in `t` across all coefficients, or `None` when constant-free.
    pub fn deg_t(&self) -> Option<usize> {
        self.terms.values().filter_map(UPoly::degree).max()
    }

    /// Specializes the `t`-coefficients at an exact scalar, returning the
    /// surviving terms.
    pub fn eval_t<S: Scalar>(&self, t0: &S) -> Vec<(Mono, S)> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let v = c.eval_scalar(t0);
            if !v.vanishes() {
                out.push((*m, v));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::rint;

    fn xy(i: u32, j: u32, c: i64) -> MPoly<Rat> {
        MPoly::monomial(i, j, rint(c))
    }

    #[test]
    fn term_order_is_graded_y_before_x() {
        // y^2 > x y > x^2 > y > x > 1 under (total, j, i).
        let mut monos = [
            Mono::new(0, 0),
            Mono::new(1, 0),
            Mono::new(0, 1),
            Mono::new(2, 0),
            Mono::new(1, 1),
            Mono::new(0, 2),
        ];
        monos.sort();
        assert_eq!(
            monos.to_vec(),
            vec![
                Mono::new(0, 0),
                Mono::new(1, 0),
                Mono::new(0, 1),
                Mono::new(2, 0),
                Mono::new(1, 1),
                Mono::new(0, 2),
            ]
        );
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = xy(1, 1, 3) + xy(1, 1, -3);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn multiplication_and_degrees() {
        // (x + y)^2 = x^2 + 2xy + y^2
        let s = xy(1, 0, 1) + xy(0, 1, 1);
        let sq = s.clone() * s;
        assert_eq!(sq.coeff(2, 0), rint(1));
        assert_eq!(sq.coeff(1, 1), rint(2));
        assert_eq!(sq.coeff(0, 2), rint(1));
        assert_eq!(sq.total_degree(), Some(2));
        assert_eq!(sq.deg_x(), Some(2));
        assert_eq!(sq.deg_y(), Some(2));
    }

    #[test]
    fn eval_pair_matches_direct_substitution() {
        // g = y^2 + 3x y - x^3 at (x, y) = (2, -1): 1 - 6 - 8 = -13.
        let g = xy(0, 2, 1) + xy(1, 1, 3) + xy(3, 0, -1);
        assert_eq!(g.eval_pair(&rint(2), &rint(-1)), rint(-13));
    }

    #[test]
    fn subst_composes() {
        // q = y^2 - x, substitute x ↦ x^2, y ↦ xy: x^2 y^2 - x^2.
        let q = xy(0, 2, 1) + xy(1, 0, -1);
        let out = q.subst(&xy(2, 0, 1), &xy(1, 1, 1));
        assert_eq!(out, xy(2, 2, 1) + xy(2, 0, -1));
    }

    #[test]
    fn homogeneous_part_extraction() {
        // Remark-family shape: y^3 + t y + x, top part is y^3.
        let g = xy(0, 3, 1) + xy(0, 1, 5) + xy(1, 0, 1);
        assert_eq!(g.homogeneous_part(3), xy(0, 3, 1));
        assert_eq!(g.homogeneous_part(1), xy(0, 1, 5) + xy(1, 0, 1));
    }

    #[test]
    fn eval_t_drops_vanishing_coefficients() {
        use crate::algebra::upoly::UPoly;
        // (t-1)·x + y over Q[t] at t = 1 leaves just y.
        let mut g: MPoly<UPoly<Rat>> = MPoly::zero();
        g.add_term(Mono::new(1, 0), UPoly::from_coeffs(vec![rint(-1), rint(1)]));
        g.add_term(Mono::new(0, 1), UPoly::one());
        let vals = g.eval_t(&rint(1));
        assert_eq!(vals, vec![(Mono::new(0, 1), rint(1))]);
    }
}
