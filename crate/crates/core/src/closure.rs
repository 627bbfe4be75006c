//! Exact polynomial relations along a marked symbolic orbit — the Zariski
//! closure at bounded degree — and invariance checking for the curves they
//! cut out.
//!
//! A relation here is a polynomial `Q(x, y)` with `Q[t]` coefficients that
//! vanishes *identically in `t`* at every orbit point used; finding all of
//! them at fixed degree bounds is exact linear algebra over `Q`. Returned
//! relations are additionally re-verified on held-out orbit points, so an
//! underdetermined system never leaks spurious relations. An empty basis
//! is an answer ("no relation at these bounds"), not an error.

use num::integer::Integer;
use num::{BigInt, One, Zero};
use rayon::prelude::*;

use crate::algebra::{GPoly, MPoly, QAlgebra, Rat, Scalar, TPoly, UPoly};
use crate::error::{Error, Result};
use crate::prep::{detect_preperiodic, PrepCertificate};
use crate::skew::{MarkedPair, SkewProduct, DEFAULT_DEGREE_BUDGET};

/// Number of orbit points past the system, used to re-verify every
/// candidate relation before it is returned. Reduced when the degree
/// budget cannot reach that far.
const HELD_OUT_POINTS: usize = 2;

/// Degree bounds and point count for one relation search.
#[derive(Clone, Debug)]
pub struct ClosureProblem {
    pub pair: MarkedPair,
    /// Bound on the total `(x, y)`-degree of a relation.
    pub dxy: usize,
    /// Bound on the `t`-degree of each relation coefficient.
    pub dt: usize,
    /// Orbit points `P₀, …` fed into the linear system.
    pub n_points: usize,
}

impl ClosureProblem {
    /// # Panics
    /// If `dxy` or `n_points` is zero.
    pub fn new(pair: MarkedPair, dxy: usize, dt: usize, n_points: usize) -> ClosureProblem {
        assert!(dxy >= 1, "need a positive (x, y)-degree bound");
        assert!(n_points >= 1, "need at least one orbit point");
        ClosureProblem { pair, dxy, dt, n_points }
    }
}

/// Reduced basis of the relations found at the problem's bounds.
///
/// Basis elements are scaled to primitive integer coefficients with the
/// highest monomial (graded, `y` before `x` on ties) positive, and come
/// out of a reduced row echelon computation under a fixed monomial order —
/// identical across runs and thread counts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelationBasis {
    /// Relations that vanish on every system point *and* every held-out
    /// point. Empty means no relation exists at these bounds.
    pub relations: Vec<GPoly>,
    /// Nullspace dimension of the linear system alone, before held-out
    /// pruning; a gap to `relations.len()` means the system was
    /// underdetermined.
    pub nullspace_dimension: usize,
    /// Unknown coefficients `x^i y^j t^k` at the problem's bounds.
    pub unknowns: usize,
    /// Nonzero linear constraints extracted from the orbit points.
    pub constraints: usize,
    /// Heuristic "enough constraints" flag: `constraints ≥ unknowns`.
    /// A false value warns that even the held-out check may not have had
    /// the data to prune everything spurious.
    pub heuristically_sufficient: bool,
    /// How many extra orbit points the survivors were re-verified on.
    pub held_out_points: usize,
}

impl RelationBasis {
    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}

/// Monomials `x^i y^j` with `i + j ≤ dxy`, ascending in the order
/// (total degree, then `y`-degree, then `x`-degree). The nullspace
/// construction pins the *latest* monomial of each basis element, so this
/// order is what makes `y − x` come out as `y − x` and not `x − y`.
fn monomials_up_to(dxy: usize) -> Vec<(u32, u32)> {
    let mut monos = Vec::with_capacity((dxy + 1) * (dxy + 2) / 2);
    for total in 0..=dxy {
        for j in 0..=total {
            monos.push(((total - j) as u32, j as u32));
        }
    }
    monos
}

/// Constraint rows contributed by one orbit point: one row per `t`-degree
/// appearing in `Q(aₙ, bₙ)`, with the all-zero rows dropped.
fn point_rows(
    point: &(TPoly, TPoly),
    monos: &[(u32, u32)],
    dxy: usize,
    dt: usize,
) -> Vec<Vec<Rat>> {
    let (a, b) = point;
    let mut a_pows: Vec<TPoly> = vec![UPoly::one()];
    let mut b_pows: Vec<TPoly> = vec![UPoly::one()];
    for i in 1..=dxy {
        a_pows.push(a_pows[i - 1].clone() * a.clone());
        b_pows.push(b_pows[i - 1].clone() * b.clone());
    }
    let products: Vec<TPoly> = monos
        .iter()
        .map(|&(i, j)| a_pows[i as usize].clone() * b_pows[j as usize].clone())
        .collect();
    let max_deg = products
        .iter()
        .filter_map(|p| p.degree())
        .max()
        .unwrap_or(0)
        + dt;
    let width = monos.len() * (dt + 1);
    let mut rows = vec![vec![Rat::zero(); width]; max_deg + 1];
    for (midx, prod) in products.iter().enumerate() {
        for (deg, coeff) in prod.coeffs().iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for k in 0..=dt {
                rows[deg + k][midx * (dt + 1) + k] = coeff.clone();
            }
        }
    }
    rows.retain(|row| row.iter().any(|e| !e.is_zero()));
    rows
}

/// In-place reduced row echelon form over `Q` with first-nonzero pivoting;
/// returns the pivot columns. Deterministic by construction.
fn reduced_echelon(matrix: &mut Vec<Vec<Rat>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot_row) = (rank..matrix.len()).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(rank, pivot_row);
        let inv = matrix[rank][col].clone();
        for entry in &mut matrix[rank] {
            if !entry.is_zero() {
                *entry = &*entry / &inv;
            }
        }
        let lead = matrix[rank].clone();
        for (r, row) in matrix.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (j, l) in lead.iter().enumerate().skip(col) {
                if !l.is_zero() {
                    row[j] = &row[j] - &(l * &factor);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == matrix.len() {
            break;
        }
    }
    matrix.truncate(rank);
    pivots
}

/// Nullspace basis from a reduced echelon form: one vector per free
/// column, with a 1 in the free slot.
fn nullspace(matrix: &[Vec<Rat>], pivots: &[usize], cols: usize) -> Vec<Vec<Rat>> {
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -matrix[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Scales a coefficient vector to primitive integers with its last
/// nonzero entry (the highest monomial under the fixed order) positive,
/// then assembles the relation polynomial.
fn vector_to_relation(v: &[Rat], monos: &[(u32, u32)], dt: usize) -> GPoly {
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for e in v.iter().filter(|e| !e.is_zero()) {
        den_lcm = den_lcm.lcm(e.denom());
        num_gcd = num_gcd.gcd(e.numer());
    }
    let mut scale = Rat::new(den_lcm, num_gcd);
    if let Some(last) = v.iter().rfind(|e| !e.is_zero()) {
        if (last * &scale) < Rat::zero() {
            scale = -scale;
        }
    }
    let mut relation = MPoly::zero();
    for (midx, &(i, j)) in monos.iter().enumerate() {
        let coeffs: Vec<Rat> =
            (0..=dt).map(|k| &v[midx * (dt + 1) + k] * &scale).collect();
        let tc = UPoly::from_coeffs(coeffs);
        if !tc.is_zero() {
            relation = relation + MPoly::monomial(i, j, tc);
        }
    }
    relation
}

/// Relations at the given bounds using the orbit points with these
/// indices, re-verified on `held_out` further indices.
fn relations_on_points(
    pair: &MarkedPair,
    dxy: usize,
    dt: usize,
    system: &[usize],
    held_out: &[usize],
) -> Result<RelationBasis> {
    let deepest = system
        .iter()
        .chain(held_out.iter())
        .copied()
        .max()
        .expect("at least one system point");
    let orbit = pair.orbit_symbolic(deepest, DEFAULT_DEGREE_BUDGET)?;
    let monos = monomials_up_to(dxy);
    let cols = monos.len() * (dt + 1);

    let blocks: Vec<Vec<Vec<Rat>>> = system
        .par_iter()
        .map(|&n| point_rows(&orbit.points[n], &monos, dxy, dt))
        .collect();
    let mut matrix: Vec<Vec<Rat>> = blocks.into_iter().flatten().collect();
    let constraints = matrix.len();

    let pivots = reduced_echelon(&mut matrix, cols);
    let kernel = nullspace(&matrix, &pivots, cols);
    let nullspace_dimension = kernel.len();

    let mut relations = Vec::new();
    for v in &kernel {
        let q = vector_to_relation(v, &monos, dt);
        let survives = held_out.iter().all(|&n| {
            let (a, b) = &orbit.points[n];
            q.eval_pair(a, b).is_zero()
        });
        if survives {
            relations.push(q);
        }
    }
    Ok(RelationBasis {
        relations,
        nullspace_dimension,
        unknowns: cols,
        constraints,
        heuristically_sufficient: constraints >= cols,
        held_out_points: held_out.len(),
    })
}

/// Indices `start, start + step, …` (`count` of them).
fn arithmetic_indices(start: usize, step: usize, count: usize) -> Vec<usize> {
    (0..count).map(|k| start + k * step).collect()
}

/// Runs one relation search on indices `system`, with held-out indices
/// continuing the same arithmetic progression; the held-out depth is
/// backed off when the orbit outgrows the degree budget.
fn search_with_backoff(
    pair: &MarkedPair,
    dxy: usize,
    dt: usize,
    system: &[usize],
    step: usize,
) -> Result<RelationBasis> {
    let last = *system.last().expect("nonempty system");
    for extra in (0..=HELD_OUT_POINTS).rev() {
        let held_out = arithmetic_indices(last + step, step, extra);
        match relations_on_points(pair, dxy, dt, system, &held_out) {
            Err(Error::DegreeBudgetExceeded { .. }) if extra > 0 => continue,
            other => return other,
        }
    }
    unreachable!("extra = 0 returns unconditionally")
}

/// Finds all relations `Q(x, y)` (coefficients in `Q[t]`, total
/// `(x, y)`-degree ≤ `dxy`, coefficient `t`-degree ≤ `dt`) vanishing
/// identically on the first `n_points` orbit points of the marked pair,
/// then prunes any that fail on held-out points.
///
/// # Errors
/// [`Error::DegreeBudgetExceeded`] when even the system points are not
/// computable within the symbolic degree budget.
pub fn find_relation(prob: &ClosureProblem) -> Result<RelationBasis> {
    let system: Vec<usize> = (0..prob.n_points).collect();
    search_with_backoff(&prob.pair, prob.dxy, prob.dt, &system, 1)
}

/// [`find_relation`] with `dt = 0` first, escalating once to
/// `deg_t(g)` when no constant-coefficient relation exists; returns the
/// basis together with the `t`-degree bound that produced it.
///
/// # Errors
/// As [`find_relation`].
pub fn find_relation_escalating(
    pair: &MarkedPair,
    dxy: usize,
    n_points: usize,
) -> Result<(RelationBasis, usize)> {
    let flat = find_relation(&ClosureProblem::new(pair.clone(), dxy, 0, n_points))?;
    let fiber_depth = pair.family().deg_t_fiber();
    if !flat.is_empty() || fiber_depth == 0 {
        return Ok((flat, 0));
    }
    let deep =
        find_relation(&ClosureProblem::new(pair.clone(), dxy, fiber_depth, n_points))?;
    Ok((deep, fiber_depth))
}

/// One arithmetic subsequence of the orbit carrying a relation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubsequenceHit {
    pub modulus: usize,
    pub residue: usize,
    pub basis: RelationBasis,
}

/// Relation searches over arithmetic subsequences `n ≡ residue
/// (mod modulus)` of the orbit, for every modulus up to `max_modulus`.
///
/// The full-orbit search is the `modulus = 1` row. Only subsequences whose
/// pruned basis is nonempty are reported as hits; residue classes whose
/// orbit points outgrow the degree budget are listed in `skipped` rather
/// than silently dropped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubsequenceSweep {
    pub hits: Vec<SubsequenceHit>,
    /// `(modulus, residue)` classes skipped for budget reasons.
    pub skipped: Vec<(usize, usize)>,
}

/// Sweeps residue classes mod `1, …, max_modulus`, searching each
/// subsequence of the orbit for relations at the problem's bounds. Each
/// class uses the problem's points with matching index (at least two are
/// required for a class to be searched).
///
/// # Errors
/// [`Error::DegreeBudgetExceeded`] only for the full orbit
/// (`modulus = 1`); deeper classes that exceed the budget are recorded in
/// [`SubsequenceSweep::skipped`].
pub fn subsequence_sweep(prob: &ClosureProblem, max_modulus: usize) -> Result<SubsequenceSweep> {
    let mut hits = Vec::new();
    let mut skipped = Vec::new();
    for modulus in 1..=max_modulus.max(1) {
        for residue in 0..modulus {
            let system: Vec<usize> = (residue..prob.n_points).step_by(modulus).collect();
            if system.len() < 2 {
                continue;
            }
            match search_with_backoff(&prob.pair, prob.dxy, prob.dt, &system, modulus) {
                Ok(basis) => {
                    if !basis.is_empty() {
                        hits.push(SubsequenceHit { modulus, residue, basis });
                    }
                }
                Err(Error::DegreeBudgetExceeded { .. }) if modulus > 1 => {
                    skipped.push((modulus, residue));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(SubsequenceSweep { hits, skipped })
}

/// Outcome of the exact invariance test `Q ∘ F ≡ 0 mod Q`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum InvarianceVerdict {
    /// `Q(f(x), g(x, y))` reduces to zero under division by `Q` in `y`:
    /// the curve `V(Q)` maps into itself.
    Invariant,
    /// The division left this nonzero remainder (of `y`-degree below
    /// `deg_y Q`).
    NotInvariant { remainder: GPoly },
}

impl InvarianceVerdict {
    pub fn is_invariant(&self) -> bool {
        matches!(self, InvarianceVerdict::Invariant)
    }
}

/// The coefficient of `y^j` in `p`, as a polynomial in `x` alone.
fn y_coefficient(p: &GPoly, j: u32) -> GPoly {
    let mut out = MPoly::zero();
    for (mono, c) in p.y_slice(j).terms() {
        out = out + MPoly::monomial(mono.i, 0, c.clone());
    }
    out
}

fn base_as_mpoly(family: &SkewProduct) -> GPoly {
    let mut out = MPoly::zero();
    for (i, c) in family.base().coeffs().iter().enumerate() {
        if !c.is_zero() {
            out = out + MPoly::monomial(i as u32, 0, c.clone());
        }
    }
    out
}

/// Tests whether `V(Q)` is invariant under the family, by exact division:
/// `Q(f(x), g(x, y))` is reduced modulo `Q` with respect to `y` and the
/// verdict is whether the remainder vanishes.
///
/// Division in `y` is only sound when the `y`-leading coefficient of `Q`
/// is a unit of `Q[t][x]`, i.e. a nonzero rational; `Q` is then scaled
/// monic. Anything else is reported, not guessed around.
///
/// # Errors
/// [`Error::NotMonicizable`] when `Q` has no `y` term or its `y`-leading
/// coefficient is non-constant.
pub fn invariance_check(family: &SkewProduct, q: &GPoly) -> Result<InvarianceVerdict> {
    let m = q.deg_y().ok_or_else(|| {
        Error::NotMonicizable("the zero polynomial cuts out no curve".into())
    })?;
    if m == 0 {
        return Err(Error::NotMonicizable(
            "relation has no y term; division by y-degree is vacuous".into(),
        ));
    }
    let lead = q.y_slice(m);
    let unit = if lead.num_terms() == 1 {
        lead.terms()
            .next()
            .filter(|(mono, c)| mono.i == 0 && c.degree() == Some(0))
            .map(|(_, c)| c.coeff(0))
    } else {
        None
    };
    let Some(unit) = unit else {
        return Err(Error::NotMonicizable(
            "y-leading coefficient is not a nonzero rational".into(),
        ));
    };
    let inv = Rat::one() / unit;
    let monic = q.map_coeffs(|c| c.scale(&inv));

    let mut remainder = monic.subst(&base_as_mpoly(family), family.fiber());
    while let Some(dy) = remainder.deg_y() {
        if dy < m {
            break;
        }
        let top = y_coefficient(&remainder, dy);
        remainder = remainder - top.mul_mono(0, dy - m) * monic.clone();
    }
    if remainder.is_zero() {
        Ok(InvarianceVerdict::Invariant)
    } else {
        Ok(InvarianceVerdict::NotInvariant { remainder })
    }
}

/// One exact specialization of the marked point, with its orbit
/// certificate.
#[derive(Clone, PartialEq, Debug)]
pub struct SpecializationRow<S: Scalar> {
    pub t0: S,
    pub point: (S, S),
    pub certificate: PrepCertificate,
}

/// A relation basis bundled with exact preperiodicity certificates at
/// chosen parameters: the orbit lies on the curves *and* specializes to
/// preperiodic points where claimed.
#[derive(Clone, PartialEq, Debug)]
pub struct SpecializationReport<S: Scalar> {
    pub basis: RelationBasis,
    pub rows: Vec<SpecializationRow<S>>,
}

/// Runs [`find_relation`] and then classifies the exact orbit of the
/// marked point at each given parameter value.
///
/// # Errors
/// As [`find_relation`].
pub fn verify_specialization_prep<S: Scalar>(
    prob: &ClosureProblem,
    t0s: &[S],
    max_iter: usize,
) -> Result<SpecializationReport<S>> {
    let basis = find_relation(prob)?;
    let (pa, pb) = prob.pair.point();
    let rows = t0s
        .iter()
        .map(|t0| {
            let spec = prob.pair.family().specialize(t0);
            let point = (pa.eval_scalar(t0), pb.eval_scalar(t0));
            let certificate = detect_preperiodic(&spec, point.clone(), max_iter);
            SpecializationRow { t0: t0.clone(), point, certificate }
        })
        .collect();
    Ok(SpecializationReport { basis, rows })
}
