//! End-to-end orbit closure for the degree-eleven family
//! `F_t(x, y) = (x¹¹, y¹¹ + t·y² − t·x¹¹)` with marked point
//! `P_t = (t², t¹¹)`.
//!
//! The degree hypotheses hold with room to spare (`deg_t b = 11 ≥ 9`), the
//! orbit of `P_t` satisfies the single exact relation `x¹¹ − y² = 0`, that
//! curve is invariant under the family, and the specializations at
//! `t₀ = ±1` land on exact cycles — so the bounded Zariski closure of the
//! orbit is the invariant curve `V(y² − x¹¹)`.
//!
//! Run with `cargo run --example orbit_closure_degree_eleven`.

use anyhow::{ensure, Result};
use skewdyn_core::algebra::{gpoly_string, parse_gpoly, parse_tpoly, parse_xtpoly, rint};
use skewdyn_core::closure::{invariance_check, verify_specialization_prep, ClosureProblem, InvarianceVerdict};
use skewdyn_core::prep::PrepCertificate;
use skewdyn_core::skew::{MarkedPair, SkewProduct};

fn main() -> Result<()> {
    let family = SkewProduct::check_regular(
        parse_xtpoly("x^11")?,
        parse_gpoly("y^11 + t*y^2 - t*x^11")?,
    )?;
    let pair = MarkedPair::new(family, parse_tpoly("t^2")?, parse_tpoly("t^11")?);

    // Degree hypotheses: deg_t(a) = 2 exceeds the base parameter degree,
    // and deg_t(b) = 11 meets the threshold k₃(l₂ + 1) − l₂·k₁ = 9.
    let hyp = pair.degree_hypothesis_check();
    ensure!(hyp.condition1, "condition (1) fails");
    ensure!(hyp.fiber_marked_degree == 11, "deg_t(b) = {}", hyp.fiber_marked_degree);
    ensure!(hyp.condition2_bound == Some(9), "threshold {:?}", hyp.condition2_bound);
    ensure!(hyp.condition2, "condition (2) fails");
    println!(
        "degree hypotheses: deg_t(b) = {} >= {} (condition 2), deg_t(a) = 2 > 0 (condition 1)",
        hyp.fiber_marked_degree,
        hyp.condition2_bound.unwrap()
    );

    // Relation search at total (x, y)-degree 11 with constant t-coefficients,
    // plus cycle certificates at the specializations t₀ = ±1.
    let problem = ClosureProblem::new(pair.clone(), 11, 0, 2);
    let report = verify_specialization_prep(&problem, &[rint(1), rint(-1)], 64)?;

    let expected = parse_gpoly("x^11 - y^2")?;
    ensure!(
        report.basis.relations == vec![expected.clone()],
        "relation basis: got {:?}",
        report.basis.relations.iter().map(gpoly_string).collect::<Vec<_>>()
    );
    println!(
        "relation basis at degree 11: exactly {{ {} }}",
        gpoly_string(&expected)
    );

    for row in &report.rows {
        ensure!(
            matches!(row.certificate, PrepCertificate::Cycle { .. }),
            "t0 = {} gave {:?}",
            row.t0,
            row.certificate
        );
        println!(
            "specialization t0 = {:>2}: point ({}, {}) certified {:?}",
            row.t0.to_string(),
            row.point.0,
            row.point.1,
            row.certificate
        );
    }

    // The curve is genuinely invariant: g ≡ 0 modulo (x¹¹ − y², applied
    // after one step of the dynamics).
    let verdict = invariance_check(pair.family(), &expected)?;
    ensure!(
        verdict == InvarianceVerdict::Invariant,
        "invariance check returned {verdict:?}"
    );
    println!("invariance: F maps V(x^11 - y^2) into itself");

    println!("ok");
    Ok(())
}
