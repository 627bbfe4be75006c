//! Root extraction for rational polynomials: exact rational roots by
//! rational-root-theorem candidates, and numeric complex roots by
//! simultaneous iteration.

use num::bigint::BigInt;
use num::complex::Complex64;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

use super::ring::Rat;
use super::upoly::UPoly;

/// Trial-division bound for factoring divisor candidates. Any cofactor left
/// over is additionally offered as a candidate divisor itself, so a root is
/// only ever missed if its numerator or denominator carries two distinct
/// prime factors above this bound — far beyond anything the toolkit's
/// polynomials produce.
const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// All exact rational roots of `p` with multiplicity, ascending.
///
/// Candidates are `±p/q` with `p` dividing the trailing and `q` the leading
/// coefficient of the primitive integer form; each hit is deflated out to
/// count multiplicity exactly.
///
/// # Panics
/// Panics if `p` is zero.
pub fn rational_roots(p: &UPoly<Rat>) -> Vec<(Rat, usize)> {
    assert!(!p.is_zero(), "rational_roots of the zero polynomial");
    let mut out: Vec<(Rat, usize)> = Vec::new();

    // Strip t^v: roots at 0.
    let mut coeffs = to_primitive_integer(p);
    let v = coeffs.iter().take_while(|c| c.is_zero()).count();
    if v > 0 {
        coeffs.drain(..v);
        out.push((Rat::zero(), v));
    }
    if coeffs.len() <= 1 {
        out.sort_by(|a, b| a.0.cmp(&b.0));
        return out;
    }

    let trailing = coeffs.first().expect("nonempty").clone();
    let leading = coeffs.last().expect("nonempty").clone();
    let mut reduced = UPoly::from_coeffs(
        coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect(),
    );

    let nums = divisors(&trailing.abs());
    let dens = divisors(&leading.abs());
    let mut candidates: Vec<Rat> = Vec::new();
    for n in &nums {
        for d in &dens {
            let r = Rat::new(n.clone(), d.clone());
            candidates.push(r.clone());
            candidates.push(-r);
        }
    }
    candidates.sort();
    candidates.dedup();

    for cand in candidates {
        let mut mult = 0usize;
        while reduced.degree().unwrap_or(0) >= 1 && reduced.eval(&cand).is_zero() {
            // Deflate by (t − cand).
            let lin = UPoly::from_coeffs(vec![-cand.clone(), Rat::one()]);
            reduced = reduced.exact_div(&lin).expect("root divides exactly");
            mult += 1;
        }
        if mult > 0 {
            out.push((cand, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Clears denominators and content: integer coefficients with gcd 1.
fn to_primitive_integer(p: &UPoly<Rat>) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for c in p.coeffs() {
        den = num::integer::lcm(den, c.denom().clone());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = num::integer::gcd(content, c.clone());
    }
    if content.is_zero() || content.is_one() {
        return ints;
    }
    ints.into_iter().map(|c| c / &content).collect()
}

/// All positive divisors of `n > 0`, from trial division up to
/// [`TRIAL_DIVISION_BOUND`] plus the unfactored cofactor.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut d = BigInt::from(2u32);
    let bound = BigInt::from(TRIAL_DIVISION_BOUND);
    while &d * &d <= rest && d <= bound {
        let mut e = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += if d == BigInt::from(2u32) { BigInt::one() } else { BigInt::from(2u32) };
    }
    if rest > BigInt::one() {
        factors.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let prior = divs.clone();
        let mut pw = BigInt::one();
        for _ in 0..e {
            pw *= &p;
            divs.extend(prior.iter().map(|d| d * &pw));
        }
    }
    divs
}

/// Fixed, documented seed for simultaneous iteration: initial guesses are
/// powers of this point just off the unit circle, which breaks symmetry
/// deterministically (no RNG anywhere in the root finder).
const SEED: Complex64 = Complex64::new(0.4, 0.9);

/// Iteration budget for [`complex_roots`].
const MAX_SWEEPS: usize = 1000;

/// Numeric approximations to all complex roots of `p` (Durand–Kerner
/// simultaneous iteration from perturbed unit-circle seeds).
///
/// The caller should pass a squarefree polynomial; clustered roots slow or
/// stall convergence. On success every returned `z` satisfies
/// `|p(z)| < tol·(1 + Σ|cᵢ|)` for the monic-normalized coefficients, and
/// roots are sorted by real part, then imaginary part.
///
/// # Errors
/// [`Error::NonConvergence`] if the residual target is not met within the
/// iteration budget.
///
/// # Panics
/// Panics if `p` is zero.
pub fn complex_roots(p: &UPoly<Rat>, tol: f64) -> Result<Vec<Complex64>> {
    let deg = p.degree().expect("complex_roots of the zero polynomial");
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = p.leading().expect("nonzero").clone();
    let monic: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| (c / lead.clone()).to_f64().unwrap_or(0.0))
        .collect();
    let coeff_norm: f64 = monic.iter().map(|c| c.abs()).sum();

    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| SEED.powu(k as u32 + 1))
        .collect();
    let eval = |w: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * w + c;
        }
        acc
    };

    for _sweep in 0..MAX_SWEEPS {
        let mut moved = 0.0f64;
        for k in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // Collided guesses: nudge deterministically and continue.
                z[k] += SEED * 1e-6;
                continue;
            }
            let step = eval(z[k]) / denom;
            z[k] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }

    let ok = z.iter().all(|w| eval(*w).norm() < tol * (1.0 + coeff_norm));
    if !ok {
        return Err(Error::NonConvergence { iterations: MAX_SWEEPS });
    }
    z.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("finite root approximations")
    });
    Ok(z)
}
