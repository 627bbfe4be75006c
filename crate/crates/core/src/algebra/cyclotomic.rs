//! Cyclotomic polynomials and detection of cyclotomic factors.
//!
//! `Φ_n` is computed exactly by the recursive identity
//! `t^n − 1 = ∏_{d | n} Φ_d(t)`, dividing out the proper-divisor factors.
//! Detection reports, for each `n` up to a caller-supplied bound, the exact
//! multiplicity of `Φ_n` in a rational polynomial.


use super::ring::{rint, Rat};
use super::upoly::UPoly;

/// Euler's totient by trial factorization (inputs here are tiny).
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            phi -= phi / p;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// The `n`-th cyclotomic polynomial `Φ_n` over `Q`, exactly.
///
/// # Panics
/// Panics if `n == 0`.
pub fn cyclotomic_poly(n: u32) -> UPoly<Rat> {
    assert!(n >= 1, "cyclotomic index must be positive");
    // t^n - 1
    let mut num = UPoly::monomial(n as usize, rint(1));
    num = num - UPoly::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = num
                .exact_div(&phi_d)
                .expect("Φ_d divides t^n − 1 for every divisor d of n");
        }
    }
    num
}

/// Reports `(n, multiplicity)` for every `n ≤ nmax` with `Φ_n` dividing `p`,
/// by repeated exact division.
///
/// Indices with `φ(n)` exceeding `deg p` are skipped outright.
///
/// # Panics
/// Panics if `p` is zero.
pub fn cyclotomic_detect(p: &UPoly<Rat>, nmax: u32) -> Vec<(u32, u32)> {
    let deg = p.degree().expect("cyclotomic_detect on the zero polynomial");
    let mut out = Vec::new();
    for n in 1..=nmax {
        if euler_phi(n) as usize > deg {
            continue;
        }
        let phi = cyclotomic_poly(n);
        let mut mult = 0u32;
        let mut rest = p.clone();
        while let Some(q) = rest.exact_div(&phi) {
            mult += 1;
            rest = q;
            if rest.degree().is_none() {
                break;
            }
        }
        if mult > 0 {
            out.push((n, mult));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::rint;

    fn upoly(cs: &[i64]) -> UPoly<Rat> {
        UPoly::from_coeffs(cs.iter().map(|&c| rint(c)).collect())
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), upoly(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), upoly(&[1, 1]));
        assert_eq!(cyclotomic_poly(3), upoly(&[1, 1, 1]));
        assert_eq!(cyclotomic_poly(4), upoly(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), upoly(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), upoly(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn phi_divides_t_n_minus_one() {
        for n in 1..=24u32 {
            let tn = UPoly::monomial(n as usize, rint(1)) - UPoly::one();
            assert!(
                tn.exact_div(&cyclotomic_poly(n)).is_some(),
                "Φ_{n} must divide t^{n} − 1"
            );
        }
    }

    #[test]
    fn detect_phi3_in_its_own_polynomial() {
        assert_eq!(cyclotomic_detect(&upoly(&[1, 1, 1]), 8), vec![(3, 1)]);
    }

    #[test]
    fn detect_in_t4_minus_t2() {
        // t^4 − t^2 = t^2 (t−1)(t+1) → Φ₁ and Φ₂ once each.
        let p = upoly(&[0, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_detect(&p, 8), vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn detect_in_t8_minus_t2() {
        // t^8 − t^2 = t^2 (t^6 − 1): Φ₁, Φ₂, Φ₃, Φ₆ once each.
        let p = upoly(&[0, 0, -1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(
            cyclotomic_detect(&p, 12),
            vec![(1, 1), (2, 1), (3, 1), (6, 1)]
        );
    }

    #[test]
    fn multiplicity_counted() {
        // (t−1)^2 (t+1) → Φ₁ twice, Φ₂ once.
        let p = upoly(&[-1, 1]) * upoly(&[-1, 1]) * upoly(&[1, 1]);
        assert_eq!(cyclotomic_detect(&p, 4), vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn totient_values() {
        let vals: Vec<u32> = (1..=12).map(euler_phi).collect();
        assert_eq!(vals, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }
}
