//! `skewdyn` — command-line front end for the skew-product dynamics
//! library.
//!
//! Every subcommand reads a family file (see [`family`]), runs one library
//! operation, and prints a JSON document with sorted keys, so identical
//! invocations produce byte-identical output. Raster subcommands write a
//! binary PGM plus a JSON sidecar instead.
//!
//! Exit codes: `0` success, `1` computational failure (an operation
//! reported an error), `2` configuration error (bad flags, bad files, bad
//! polynomials). On failure a JSON payload
//! `{"error":{"kind":…,"message":…}}` is printed to stderr.

mod family;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use serde_json::{json, Value};
use skewdyn_core::algebra::parse_tpoly;
use skewdyn_core::bottcher::{degree_bound_check, vertical_bottcher_coeffs};
use skewdyn_core::closure::{
    find_relation, find_relation_escalating, invariance_check, subsequence_sweep,
    ClosureProblem, InvarianceVerdict, RelationBasis,
};
use skewdyn_core::green::{bifurcation_raster, equidist_compare, green_ratio_check, root_points};
use skewdyn_core::pcf::{
    exceptional_locus_member, family_locus_check, necessary_pcf_conditions, ConditionLabel,
    ExceptionalComponent, QuadModuliPoint,
};
use skewdyn_core::prep::{prep_intersection, prep_parameter_set};
use skewdyn_core::skew::MarkedPair;

use render::{
    complex_json, discrepancy_json, green_pgm, green_value_json, parse_rat_arg,
    parse_resolution, parse_samples, parse_window, polynomial_set_json, raster_sidecar,
    relation_json, tpoly_json, verified_root_json,
};

// ---------------------------------------------------------------------------
// Failure handling
// ---------------------------------------------------------------------------

/// What went wrong, mapped onto the exit-code contract.
#[derive(Debug)]
pub struct Failure {
    kind: FailureKind,
    message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FailureKind {
    /// Bad flags, files, or polynomials — exit code 2.
    Config,
    /// A validated computation reported an error — exit code 1.
    Compute,
}

impl Failure {
    /// A configuration error (exit code 2).
    pub fn config(message: String) -> Failure {
        Failure { kind: FailureKind::Config, message }
    }

    /// A computational error (exit code 1).
    pub fn compute(err: skewdyn_core::Error) -> Failure {
        Failure { kind: FailureKind::Compute, message: err.to_string() }
    }

    fn exit_code(&self) -> ExitCode {
        match self.kind {
            FailureKind::Config => ExitCode::from(2),
            FailureKind::Compute => ExitCode::from(1),
        }
    }

    fn report(&self) {
        let kind = match self.kind {
            FailureKind::Config => "config",
            FailureKind::Compute => "compute",
        };
        let payload = json!({ "error": { "kind": kind, "message": self.message } });
        eprintln!("{payload}");
    }
}

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "skewdyn",
    version,
    about = "Dynamics of one-parameter families of regular polynomial skew products"
)]
struct Cli {
    /// Cap the worker threads used by parallel maps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the primary artifact here instead of stdout. Required for
    /// PGM outputs; their JSON sidecar lands next to the file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the marked point: symbolically in t, or at a rational t0.
    Iterate {
        /// Family file (JSON with fields f, g, a, b).
        #[arg(long)]
        family: PathBuf,
        /// Number of iterations; the orbit has points+1 entries.
        #[arg(long, default_value_t = 3)]
        points: usize,
        /// Rational parameter value; omit for the symbolic orbit.
        #[arg(long, allow_hyphen_values = true)]
        t0: Option<String>,
    },
    /// Sweep preperiodicity patterns of the marked point and classify the
    /// resulting parameter roots.
    Prep {
        #[arg(long)]
        family: PathBuf,
        /// Largest pattern period n; all preperiods m < n are swept.
        #[arg(long, default_value_t = 3)]
        pattern_max: usize,
        /// Iteration cap for per-root certificates.
        #[arg(long, default_value_t = 64)]
        max_iter: usize,
    },
    /// Intersect the preperiodicity parameter sets of two marked points.
    PrepIntersect {
        /// Family file carrying the first marked point.
        #[arg(long)]
        family: PathBuf,
        /// Second marked point, x-coordinate in Q[t].
        #[arg(long, allow_hyphen_values = true)]
        a2: String,
        /// Second marked point, y-coordinate in Q[t].
        #[arg(long, allow_hyphen_values = true)]
        b2: String,
        #[arg(long, default_value_t = 3)]
        pattern_max: usize,
        #[arg(long, default_value_t = 64)]
        max_iter: usize,
    },
    /// Run the necessary post-critical finiteness tests at one point of
    /// the quadratic moduli space.
    Pcf {
        /// Moduli coordinates of x^2 + d, y^2 + a x^2 + b x + c.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, default_value_t = 64)]
        max_iter: usize,
    },
    /// Test a one-parameter quadratic family against the exceptional
    /// locus components.
    LocusCheck {
        /// Family coordinates in Q[t] for x^2 + d(t), y^2 + a(t) x^2 + b(t) x + c(t).
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// Expand the vertical Böttcher coordinate at infinity.
    Bottcher {
        #[arg(long)]
        family: PathBuf,
        /// Number of expansion coefficients c_1 … c_order.
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// Also verify the per-coefficient parameter-degree bounds.
        #[arg(long, action = ArgAction::SetTrue)]
        check_bounds: bool,
    },
    /// Escape rates: compare base and fiber rates at sample parameters,
    /// or render the rate over a parameter window as a PGM.
    Green {
        #[arg(long)]
        family: PathBuf,
        /// Sample parameters "re,im;re,im;…" for the rate comparison.
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["window", "res"])]
        samples: Option<String>,
        /// Parameter window "x0,y0,x1,y1" for the raster mode.
        #[arg(long, allow_hyphen_values = true, requires = "res")]
        window: Option<String>,
        /// Raster resolution "W,H".
        #[arg(long, requires = "window")]
        res: Option<String>,
        /// Iteration budget per pixel (raster mode).
        #[arg(long, default_value_t = 100)]
        budget: usize,
    },
    /// Render escape counts over a parameter window as a PGM.
    Raster {
        #[arg(long)]
        family: PathBuf,
        /// Parameter window "x0,y0,x1,y1".
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// Resolution "W,H".
        #[arg(long)]
        res: String,
        #[arg(long, default_value_t = 100)]
        budget: usize,
    },
    /// Compare preperiodic parameter roots against the bifurcation
    /// boundary of a raster, cell by cell.
    Equidist {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long)]
        res: String,
        #[arg(long, default_value_t = 100)]
        budget: usize,
        /// The window is split into boxes × boxes congruent cells.
        #[arg(long, default_value_t = 8)]
        boxes: usize,
        #[arg(long, default_value_t = 3)]
        pattern_max: usize,
        #[arg(long, default_value_t = 64)]
        max_iter: usize,
    },
    /// Search for polynomial relations satisfied by the marked orbit.
    Closure {
        #[arg(long)]
        family: PathBuf,
        /// Total-degree bound in (x, y).
        #[arg(long)]
        dxy: usize,
        /// Degree bound in t for the relation coefficients.
        #[arg(long, default_value_t = 0, conflicts_with = "escalate")]
        dt: usize,
        /// Number of orbit points to constrain against.
        #[arg(long)]
        points: usize,
        /// Retry with the fiber t-degree when nothing is found at dt = 0.
        #[arg(long, action = ArgAction::SetTrue)]
        escalate: bool,
        /// Also search residue classes n ≡ r (mod k) for k up to this.
        #[arg(long)]
        sweep: Option<usize>,
        /// Reduce each relation against the family to test invariance.
        #[arg(long, action = ArgAction::SetTrue)]
        check_invariance: bool,
    },
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let failure = Failure::config(e.to_string());
            failure.report();
            return failure.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            failure.report();
            failure.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::config(format!("--threads: {e}")))?;
    }
    let output = cli.output.as_deref();
    match cli.command {
        Command::Iterate { family, points, t0 } => {
            let pair = family::load_pair(&family)?;
            emit_json(&cmd_iterate(&pair, points, t0.as_deref())?, output)
        }
        Command::Prep { family, pattern_max, max_iter } => {
            let pair = family::load_pair(&family)?;
            emit_json(&cmd_prep(&pair, pattern_max, max_iter)?, output)
        }
        Command::PrepIntersect { family, a2, b2, pattern_max, max_iter } => {
            let pair = family::load_pair(&family)?;
            emit_json(&cmd_prep_intersect(&pair, &a2, &b2, pattern_max, max_iter)?, output)
        }
        Command::Pcf { a, b, c, d, max_iter } => emit_json(&cmd_pcf(&a, &b, &c, &d, max_iter)?, output),
        Command::LocusCheck { a, b, c, d } => emit_json(&cmd_locus_check(&a, &b, &c, &d)?, output),
        Command::Bottcher { family, order, check_bounds } => {
            let pair = family::load_pair(&family)?;
            emit_json(&cmd_bottcher(&pair, order, check_bounds)?, output)
        }
        Command::Green { family, samples, window, res, budget } => {
            let pair = family::load_pair(&family)?;
            match (samples, window) {
                (Some(samples), None) => emit_json(&cmd_green_samples(&pair, &samples)?, output),
                (None, Some(window)) => {
                    let res = res.expect("clap enforces --res with --window");
                    cmd_green_raster(&pair, &window, &res, budget, output)
                }
                _ => Err(Failure::config(
                    "green needs exactly one of --samples or --window/--res".into(),
                )),
            }
        }
        Command::Raster { family, window, res, budget } => {
            let pair = family::load_pair(&family)?;
            cmd_raster(&pair, &window, &res, budget, output)
        }
        Command::Equidist { family, window, res, budget, boxes, pattern_max, max_iter } => {
            let pair = family::load_pair(&family)?;
            emit_json(
                &cmd_equidist(&pair, &window, &res, budget, boxes, pattern_max, max_iter)?,
                output,
            )
        }
        Command::Closure { family, dxy, dt, points, escalate, sweep, check_invariance } => {
            let pair = family::load_pair(&family)?;
            emit_json(
                &cmd_closure(&pair, dxy, dt, points, escalate, sweep, check_invariance)?,
                output,
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

fn emit_json(value: &Value, output: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::config(format!("serialization: {e}")))?;
    text.push('\n');
    match output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display()))),
    }
}

/// Writes PGM bytes to `--output` and the sidecar next to it, then prints
/// the sidecar to stdout.
fn emit_pgm(bytes: &[u8], sidecar: &Value, path: &Path) -> Result<(), Failure> {
    std::fs::write(path, bytes)
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))?;
    let sidecar_path = path.with_extension("json");
    emit_json(sidecar, Some(&sidecar_path))?;
    emit_json(sidecar, None)
}

fn require_output<'a>(output: Option<&'a Path>, what: &str) -> Result<&'a Path, Failure> {
    output.ok_or_else(|| Failure::config(format!("{what} requires --output FILE.pgm")))
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn cmd_iterate(pair: &MarkedPair, points: usize, t0: Option<&str>) -> Result<Value, Failure> {
    match t0 {
        None => {
            let budget = family::degree_budget()?;
            let record = pair.orbit_symbolic(points, budget).map_err(Failure::compute)?;
            let orbit: Vec<Value> = record
                .points
                .iter()
                .map(|(a, b)| json!({ "a": tpoly_json(a), "b": tpoly_json(b) }))
                .collect();
            let degrees: Vec<Value> = record
                .degree_log
                .iter()
                .map(|(da, db)| json!({ "a": da, "b": db }))
                .collect();
            Ok(json!({ "mode": "symbolic", "points": orbit, "degrees": degrees }))
        }
        Some(src) => {
            let t0 = parse_rat_arg("--t0", src)?;
            let orbit: Vec<Value> = pair
                .orbit_at(&t0, points)
                .into_iter()
                .map(|(a, b)| json!({ "a": a.to_string(), "b": b.to_string() }))
                .collect();
            Ok(json!({ "mode": "specialized", "t0": t0.to_string(), "points": orbit }))
        }
    }
}

fn cmd_prep(pair: &MarkedPair, pattern_max: usize, max_iter: usize) -> Result<Value, Failure> {
    let budget = family::degree_budget()?;
    let set = prep_parameter_set(pair, pattern_max, budget, max_iter).map_err(Failure::compute)?;
    Ok(json!({
        "generically_preperiodic": set.generically_preperiodic,
        "polynomials": polynomial_set_json(&set.polynomials),
        "roots": set.roots.iter().map(verified_root_json).collect::<Vec<_>>(),
    }))
}

fn cmd_prep_intersect(
    pair: &MarkedPair,
    a2: &str,
    b2: &str,
    pattern_max: usize,
    max_iter: usize,
) -> Result<Value, Failure> {
    let a2 = parse_tpoly(a2).map_err(|e| Failure::config(format!("--a2: {e}")))?;
    let b2 = parse_tpoly(b2).map_err(|e| Failure::config(format!("--b2: {e}")))?;
    let pair_b = MarkedPair::new(pair.family().clone(), a2, b2);
    let budget = family::degree_budget()?;
    let inter =
        prep_intersection(pair, &pair_b, pattern_max, budget, max_iter).map_err(Failure::compute)?;
    Ok(json!({
        "common": tpoly_json(&inter.common),
        "both_generically_preperiodic": inter.both_generically_preperiodic,
        "roots": inter.roots.iter().map(verified_root_json).collect::<Vec<_>>(),
    }))
}

fn condition_label(label: ConditionLabel) -> &'static str {
    match label {
        ConditionLabel::BaseCritical => "base-critical",
        ConditionLabel::InfinityRestriction => "infinity-restriction",
        ConditionLabel::FiberFixedPoint1 => "fiber-fixed-point-1",
        ConditionLabel::FiberFixedPoint2 => "fiber-fixed-point-2",
    }
}

fn cmd_pcf(a: &str, b: &str, c: &str, d: &str, max_iter: usize) -> Result<Value, Failure> {
    let point = QuadModuliPoint::new(
        parse_rat_arg("--a", a)?,
        parse_rat_arg("--b", b)?,
        parse_rat_arg("--c", c)?,
        parse_rat_arg("--d", d)?,
    );
    let report = necessary_pcf_conditions(&point, max_iter);
    let conditions: Vec<Value> = report
        .conditions
        .iter()
        .map(|cond| {
            json!({
                "label": condition_label(cond.label),
                "parameter": cond.parameter.to_string(),
                "certificate": match &cond.certificate {
                    skewdyn_core::prep::PrepCertificate::Cycle { m, n } =>
                        json!({ "type": "cycle", "preperiod": m, "period": n }),
                    skewdyn_core::prep::PrepCertificate::Escape { step, witness } =>
                        json!({ "type": "escape", "step": step, "witness": witness }),
                    skewdyn_core::prep::PrepCertificate::Inconclusive { budget } =>
                        json!({ "type": "inconclusive", "budget": budget }),
                },
            })
        })
        .collect();
    let components: Vec<&str> = exceptional_locus_member(&point)
        .into_iter()
        .map(|c| match c {
            ExceptionalComponent::AB => "ab",
            ExceptionalComponent::ACD => "acd",
            ExceptionalComponent::BCD => "bcd",
        })
        .collect();
    Ok(json!({
        "conditions": conditions,
        "all_cycles": report.all_cycles(),
        "proves_not_pcf": report.proves_not_pcf(),
        "exceptional_components": components,
    }))
}

fn cmd_locus_check(a: &str, b: &str, c: &str, d: &str) -> Result<Value, Failure> {
    let parse = |flag: &str, src: &str| {
        parse_tpoly(src).map_err(|e| Failure::config(format!("{flag}: {e}")))
    };
    let a = parse("--a", a)?;
    let b = parse("--b", b)?;
    let c = parse("--c", c)?;
    let d = parse("--d", d)?;
    let check = family_locus_check(&a, &b, &c, &d);
    Ok(json!({
        "ab": check.ab,
        "acd": check.acd,
        "bcd": check.bcd,
        "member": check.ab || check.acd || check.bcd,
    }))
}

fn cmd_bottcher(pair: &MarkedPair, order: usize, check_bounds: bool) -> Result<Value, Failure> {
    use skewdyn_core::algebra::xtpoly_string;
    let vb = vertical_bottcher_coeffs(pair.family(), order);
    let coefficients: Vec<Value> = vb
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| json!({ "index": i + 1, "value": xtpoly_string(c, 'x') }))
        .collect();
    let mut out = json!({
        "order": vb.order(),
        "centering": xtpoly_string(vb.centering(), 'x'),
        "coefficients": coefficients,
    });
    if check_bounds {
        let report = degree_bound_check(pair, order);
        let rows: Vec<Value> = report
            .rows
            .iter()
            .map(|r| json!({ "index": r.index, "actual": r.actual, "bound": r.bound, "pass": r.pass }))
            .collect();
        out["bounds"] = json!({
            "condition_one_holds": report.condition_one_holds,
            "base_parameter_degree": report.base_parameter_degree,
            "all_pass": report.all_pass(),
            "rows": rows,
        });
    }
    Ok(out)
}

fn cmd_green_samples(pair: &MarkedPair, samples: &str) -> Result<Value, Failure> {
    let samples = parse_samples(samples)?;
    let report = green_ratio_check(pair, &samples).map_err(Failure::compute)?;
    let rows: Vec<Value> = report
        .samples
        .iter()
        .map(|s| {
            json!({
                "t": complex_json(s.t),
                "base": green_value_json(&s.base_green),
                "pair": green_value_json(&s.pair_green),
                "residual": s.residual,
            })
        })
        .collect();
    Ok(json!({
        "m1": report.m1,
        "m2": report.m2,
        "max_residual": report.max_residual,
        "samples": rows,
    }))
}

fn cmd_green_raster(
    pair: &MarkedPair,
    window: &str,
    res: &str,
    budget: usize,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let path = require_output(output, "green --window")?;
    let window = parse_window(window)?;
    let res = parse_resolution(res)?;
    let raster = bifurcation_raster(pair, window, res, budget);
    let (bytes, vmax) = green_pgm(&raster);
    let mut sidecar = raster_sidecar(&raster, "green", &path.display().to_string());
    sidecar["scale_max"] = json!(vmax);
    emit_pgm(&bytes, &sidecar, path)
}

fn cmd_raster(
    pair: &MarkedPair,
    window: &str,
    res: &str,
    budget: usize,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let path = require_output(output, "raster")?;
    let window = parse_window(window)?;
    let res = parse_resolution(res)?;
    let raster = bifurcation_raster(pair, window, res, budget);
    let sidecar = raster_sidecar(&raster, "escape", &path.display().to_string());
    emit_pgm(&raster.to_pgm_bytes(), &sidecar, path)
}

#[allow(clippy::too_many_arguments)]
fn cmd_equidist(
    pair: &MarkedPair,
    window: &str,
    res: &str,
    budget: usize,
    boxes: usize,
    pattern_max: usize,
    max_iter: usize,
) -> Result<Value, Failure> {
    if boxes == 0 {
        return Err(Failure::config("--boxes must be positive".into()));
    }
    let window = parse_window(window)?;
    let res = parse_resolution(res)?;
    let degree_budget = family::degree_budget()?;
    let set =
        prep_parameter_set(pair, pattern_max, degree_budget, max_iter).map_err(Failure::compute)?;
    let cloud = root_points(&set.roots);
    let raster = bifurcation_raster(pair, window, res, budget);
    let report = equidist_compare(&cloud, &raster, boxes);
    let mut out = discrepancy_json(&report);
    out["root_count"] = json!(cloud.len());
    out["generically_preperiodic"] = json!(set.generically_preperiodic);
    Ok(out)
}

fn basis_json(basis: &RelationBasis) -> Value {
    json!({
        "relations": basis.relations.iter().map(relation_json).collect::<Vec<_>>(),
        "nullspace_dimension": basis.nullspace_dimension,
        "unknowns": basis.unknowns,
        "constraints": basis.constraints,
        "heuristically_sufficient": basis.heuristically_sufficient,
        "held_out_points": basis.held_out_points,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_closure(
    pair: &MarkedPair,
    dxy: usize,
    dt: usize,
    points: usize,
    escalate: bool,
    sweep: Option<usize>,
    check_invariance: bool,
) -> Result<Value, Failure> {
    if dxy == 0 {
        return Err(Failure::config("--dxy must be positive".into()));
    }
    if points == 0 {
        return Err(Failure::config("--points must be positive".into()));
    }
    let (basis, dt_used) = if escalate {
        find_relation_escalating(pair, dxy, points).map_err(Failure::compute)?
    } else {
        let prob = ClosureProblem::new(pair.clone(), dxy, dt, points);
        (find_relation(&prob).map_err(Failure::compute)?, dt)
    };
    let mut out = basis_json(&basis);
    out["dxy"] = json!(dxy);
    out["dt"] = json!(dt_used);
    out["points"] = json!(points);
    if let Some(max_modulus) = sweep {
        if max_modulus == 0 {
            return Err(Failure::config("--sweep must be positive".into()));
        }
        let prob = ClosureProblem::new(pair.clone(), dxy, dt_used, points);
        let swept = subsequence_sweep(&prob, max_modulus).map_err(Failure::compute)?;
        let hits: Vec<Value> = swept
            .hits
            .iter()
            .map(|h| {
                json!({
                    "modulus": h.modulus,
                    "residue": h.residue,
                    "basis": basis_json(&h.basis),
                })
            })
            .collect();
        let skipped: Vec<Value> = swept
            .skipped
            .iter()
            .map(|(m, r)| json!({ "modulus": m, "residue": r }))
            .collect();
        out["sweep"] = json!({ "hits": hits, "skipped": skipped });
    }
    if check_invariance {
        let verdicts: Vec<Value> = basis
            .relations
            .iter()
            .map(|q| {
                let name = skewdyn_core::algebra::gpoly_string(q);
                match invariance_check(pair.family(), q) {
                    Ok(InvarianceVerdict::Invariant) => {
                        json!({ "polynomial": name, "invariant": true })
                    }
                    Ok(InvarianceVerdict::NotInvariant { remainder }) => json!({
                        "polynomial": name,
                        "invariant": false,
                        "remainder": skewdyn_core::algebra::gpoly_string(&remainder),
                    }),
                    Err(e) => json!({
                        "polynomial": name,
                        "invariant": Value::Null,
                        "error": e.to_string(),
                    }),
                }
            })
            .collect();
        out["invariance"] = json!(verdicts);
    }
    Ok(out)
}
