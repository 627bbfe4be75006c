//! Two marked points of `F_t(x, y) = (x², y² + t·x·y)` and the
//! intersection of their preperiodicity parameter sets.
//!
//! The point `P = (t, 0)` has orbit `(t^{2ⁿ}, 0)`, so it is preperiodic
//! exactly when `t = 0` or `t` is a root of unity; `Q = (t + 1, 0)` shifts
//! that set by `−1`. Intersecting the depth-4 truncations of the two sets
//! leaves `{−1, 0}` and the primitive cube roots of unity — the only
//! parameters where both points are simultaneously preperiodic — and each
//! survivor is re-verified with an exact cycle certificate against both
//! points.
//!
//! Run with `cargo run --example two_point_intersection`.

use anyhow::{ensure, Result};
use skewdyn_core::algebra::{
    parse_gpoly, parse_tpoly, parse_xtpoly, poly_compose, rint, upoly_string, Rat, TPoly,
};
use skewdyn_core::prep::{
    prep_intersection, prep_parameter_set, prep_polynomial_set, RootKind,
};
use skewdyn_core::skew::{MarkedPair, SkewProduct, DEFAULT_DEGREE_BUDGET};

fn marked_point(a: &str) -> Result<MarkedPair> {
    let family = SkewProduct::check_regular(
        parse_xtpoly("x^2")?,
        parse_gpoly("y^2 + t*x*y")?,
    )?;
    Ok(MarkedPair::new(family, parse_tpoly(a)?, TPoly::zero()))
}

fn main() -> Result<()> {
    let pair_p = marked_point("t")?;
    let pair_q = marked_point("t + 1")?;

    // Depth-3 truncation of the single-point set of P: the rational roots
    // {−1, 0, 1} plus the cyclotomic components Φ₃, Φ₄, Φ₆, Φ₇ (orders
    // dividing some 2ⁿ − 2ᵐ with n ≤ 3), everything classified exactly.
    let set_p = prep_parameter_set(&pair_p, 3, DEFAULT_DEGREE_BUDGET, 200)?;
    let rationals: Vec<Rat> = set_p.polynomials.rational_roots.clone();
    ensure!(
        rationals == vec![rint(-1), rint(0), rint(1)],
        "P rational roots: got {rationals:?}"
    );
    ensure!(
        set_p.polynomials.cyclotomic_orders == vec![3, 4, 6, 7],
        "P cyclotomic orders: got {:?}",
        set_p.polynomials.cyclotomic_orders
    );
    ensure!(set_p.polynomials.remainder.is_one(), "unclassified remainder");
    ensure!(set_p.roots.iter().all(|r| r.verified), "unverified P root");
    println!(
        "P = (t, 0) at depth 3: rational roots {{-1, 0, 1}}, cyclotomic orders {:?}, all {} roots cycle-verified",
        set_p.polynomials.cyclotomic_orders,
        set_p.roots.len()
    );

    // Shift equivariance: the parameter set of Q is the set of P moved by
    // −1, i.e. radical_Q(t) = radical_P(t + 1) as monic polynomials.
    let set_q = prep_polynomial_set(&pair_q, 3, DEFAULT_DEGREE_BUDGET)?;
    let shifted = poly_compose(&set_p.polynomials.radical(), &parse_tpoly("t + 1")?).monic();
    ensure!(
        set_q.radical() == shifted,
        "shift equivariance: radical_Q != radical_P(t + 1)"
    );
    println!(
        "shift equivariance: radical_Q(t) = radical_P(t + 1) = {}",
        upoly_string(&shifted, 't')
    );

    // The two-point intersection at depth 4.
    let result = prep_intersection(&pair_p, &pair_q, 4, DEFAULT_DEGREE_BUDGET, 200)?;
    let mut rationals = Vec::new();
    let mut orders = Vec::new();
    for root in &result.roots {
        match &root.kind {
            RootKind::Rational(q) => rationals.push(q.clone()),
            RootKind::Cyclotomic { order } => orders.push(*order),
            RootKind::Numeric { re, im } => {
                anyhow::bail!("unexpected numeric root ({re}, {im})")
            }
        }
        ensure!(
            root.certificates.len() == 2,
            "expected one certificate per marked point"
        );
        ensure!(root.verified, "root {:?} failed re-verification", root.kind);
    }
    ensure!(rationals == vec![rint(-1), rint(0)], "intersection rationals: {rationals:?}");
    ensure!(orders == vec![3], "intersection cyclotomic orders: {orders:?}");

    // The common radical in closed form: t(t + 1)(t² + t + 1).
    let expected = parse_tpoly("t^4 + 2*t^3 + 2*t^2 + t")?;
    ensure!(
        result.common == expected,
        "common radical: got {}",
        upoly_string(&result.common, 't')
    );
    println!(
        "intersection at depth 4: {{-1, 0}} and the primitive cube roots of unity; common radical {}",
        upoly_string(&result.common, 't')
    );
    println!("every intersection root carries two exact cycle certificates");

    println!("ok");
    Ok(())
}
