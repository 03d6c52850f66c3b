use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::input::{self, parse};
use super::{batch, CliError, Command, GlobalOpts, MetricCmd, PointsCmd, SlopeCmd};
use crate::flow::{conserved_drift, flow_to_zero, FlowConfig, FlowError, FlowResult, MomentProblem};
use crate::gallery::{
    classify_points, expected_outcome, points_suite, AdjointProblem, FlowOutcome, GalleryError, HomProblem, Hyperbola,
    PointsProblem,
};
use crate::metrics::{
    balance_iterate, bergman, distance_mod_aut, expansion_check, futaki_derivative, gram, grid_for, k_energy,
    k_energy_closed_form, linear_path, MetricError, MetricPotential, PotentialSpec,
};
use crate::polytope::{brute_force_1ps, hm_classify, hypersurface_newton, PolytopeError, WeightSystem};
use crate::rational::{self, Rational};
use crate::slope::{
    chow_compare, df_from_family, df_invariant, mu, mu_c, mu_c_series, sheaf_verdict, slope_classify,
    trapezium_asymptotics, weights_sequence, weights_table, Family, HilbertData, SheafData, SlopeError,
    TestConfigWeights,
};

const DEFAULT_BALANCE_TOL: f64 = 1e-10;
/// Degree whose default grid is used for the K-energy integrals.
const ENERGY_GRID_DEGREE: usize = 16;

/// Result of one command: the JSON payload and an optional CSV series.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub result: Value,
    pub csv: Option<String>,
}

impl Output {
    fn json(result: Value) -> Self {
        Self { result, csv: None }
    }

    fn with_csv(result: Value, csv: String) -> Self {
        Self { result, csv: Some(csv) }
    }
}

impl From<PolytopeError> for CliError {
    fn from(e: PolytopeError) -> Self {
        CliError::input(e)
    }
}

impl From<GalleryError> for CliError {
    fn from(e: GalleryError) -> Self {
        match e {
            GalleryError::NonFinite => CliError::Numerical(e.to_string()),
            _ => CliError::input(e),
        }
    }
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::InvalidConfig(_) | FlowError::Unsupported => CliError::input(e),
            FlowError::NonFinite { .. } | FlowError::WrongDirection { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::IllConditioned { .. }
            | MetricError::NotConverged { .. }
            | MetricError::NonFinite
            | MetricError::NotPositive => CliError::Numerical(e.to_string()),
            _ => CliError::input(e),
        }
    }
}

impl From<SlopeError> for CliError {
    fn from(e: SlopeError) -> Self {
        match e {
            SlopeError::Underdetermined | SlopeError::NotPolynomial => CliError::Numerical(e.to_string()),
            _ => CliError::input(e),
        }
    }
}

/// A command that consumes one JSON document. These are the commands a batch
/// manifest can name.
#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Hm { brute_force: Option<i64> },
    Hypersurface,
    PointsClassify,
    PointsBalance { max_iters: Option<usize> },
    Flow { max_iters: Option<usize> },
    MetricBalance { r: usize, max_iter: usize },
    MetricExpansion { degrees: Vec<usize> },
    MetricEnergy { steps: usize },
    SlopeClassify,
    SlopeMu { c: String },
    SlopeChow { c: u32 },
    SlopeSheaf,
    SlopeSeries { steps: usize },
    Weights { c: String, r_min: i64, r_max: i64, k: Vec<i64> },
    Df { c: String },
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Hm { .. } => "hm",
            Job::Hypersurface => "hypersurface",
            Job::PointsClassify => "points classify",
            Job::PointsBalance { .. } => "points balance",
            Job::Flow { .. } => "flow",
            Job::MetricBalance { .. } => "metric balance",
            Job::MetricExpansion { .. } => "metric expansion",
            Job::MetricEnergy { .. } => "metric energy",
            Job::SlopeClassify => "slope classify",
            Job::SlopeMu { .. } => "slope mu",
            Job::SlopeChow { .. } => "slope chow",
            Job::SlopeSheaf => "slope sheaf",
            Job::SlopeSeries { .. } => "slope series",
            Job::Weights { .. } => "weights",
            Job::Df { .. } => "df",
        }
    }
}

pub fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Points { action: PointsCmd::Suite { .. } } => "points suite",
        Command::Batch { .. } => "batch",
        Command::Df(_) | Command::Slope { action: SlopeCmd::Df(_) } => "df",
        other => job_of(other).map(|(j, _)| j.name()).unwrap_or("unknown"),
    }
}

fn weights_job(a: &super::WeightsArgs) -> Job {
    Job::Weights { c: a.c.clone(), r_min: a.r_min, r_max: a.r_max, k: a.k.clone() }
}

/// The job and its input file, for commands that have one.
fn job_of(cmd: &Command) -> Option<(Job, &std::path::Path)> {
    Some(match cmd {
        Command::Hm { input, brute_force } => (Job::Hm { brute_force: *brute_force }, input),
        Command::Hypersurface { input } => (Job::Hypersurface, input),
        Command::Points { action } => match action {
            PointsCmd::Classify { input } => (Job::PointsClassify, input),
            PointsCmd::Balance { input, max_iters } => (Job::PointsBalance { max_iters: *max_iters }, input),
            PointsCmd::Suite { .. } => return None,
        },
        Command::Flow { input, max_iters } => (Job::Flow { max_iters: *max_iters }, input),
        Command::Metric { action } => match action {
            MetricCmd::Balance { r, phi, max_iter } => (Job::MetricBalance { r: *r, max_iter: *max_iter }, phi),
            MetricCmd::Expansion { phi, degrees } => (Job::MetricExpansion { degrees: degrees.clone() }, phi),
            MetricCmd::Energy { phi, steps } => (Job::MetricEnergy { steps: *steps }, phi),
        },
        Command::Slope { action } => match action {
            SlopeCmd::Classify { family } => (Job::SlopeClassify, family),
            SlopeCmd::Mu { family, c } => (Job::SlopeMu { c: c.clone() }, family),
            SlopeCmd::Chow { family, c } => (Job::SlopeChow { c: *c }, family),
            SlopeCmd::Sheaf { input } => (Job::SlopeSheaf, input),
            SlopeCmd::Series { family, steps } => (Job::SlopeSeries { steps: *steps }, family),
            SlopeCmd::Weights(a) => (weights_job(a), &a.family),
            SlopeCmd::Df(a) => (Job::Df { c: a.c.clone() }, a.family.as_deref().or(a.weights.as_deref())?),
        },
        Command::Weights(a) => (weights_job(a), &a.family),
        Command::Df(a) => (Job::Df { c: a.c.clone() }, a.family.as_deref().or(a.weights.as_deref())?),
        Command::Batch { .. } => return None,
    })
}

pub fn dispatch(cmd: &Command, global: &GlobalOpts) -> Result<Output, CliError> {
    match cmd {
        Command::Points { action: PointsCmd::Suite { count, max_total } } => suite(*count, *max_total, global),
        Command::Batch { manifest } => batch::run_manifest_file(manifest, global),
        other => {
            let (job, path) = job_of(other).ok_or_else(|| CliError::input("missing input file"))?;
            execute(&job, input::read_value(path)?, global)
        }
    }
}

/// Runs `job` on an already loaded JSON document.
pub fn execute(job: &Job, input: Value, global: &GlobalOpts) -> Result<Output, CliError> {
    match job {
        Job::Hm { brute_force } => hm(input, *brute_force),
        Job::Hypersurface => hypersurface(input),
        Job::PointsClassify => points_classify(input),
        Job::PointsBalance { max_iters } => points_balance(input, flow_config(global, *max_iters)),
        Job::Flow { max_iters } => flow(input, flow_config(global, *max_iters)),
        Job::MetricBalance { r, max_iter } => metric_balance(input, *r, *max_iter, global),
        Job::MetricExpansion { degrees } => metric_expansion(input, degrees),
        Job::MetricEnergy { steps } => metric_energy(input, *steps),
        Job::SlopeClassify => slope_classify_cmd(input),
        Job::SlopeMu { c } => slope_mu(input, c),
        Job::SlopeChow { c } => {
            let (h, hs) = parse::<Family>(input)?.build()?;
            Ok(Output::json(to_value(&chow_compare(&h, &hs, *c)?)))
        }
        Job::SlopeSheaf => Ok(Output::json(to_value(&sheaf_verdict(&parse::<SheafData>(input)?)?))),
        Job::SlopeSeries { steps } => slope_series(input, *steps),
        Job::Weights { c, r_min, r_max, k } => weights(input, c, *r_min, *r_max, k),
        Job::Df { c } => df(input, c),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize to JSON")
}

pub(super) fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory CSV write");
    for row in rows {
        w.write_record(&row).expect("in-memory CSV write");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
}

fn parse_c(c: &str) -> Result<Rational, CliError> {
    rational::parse(c).map_err(|e| CliError::Input { pointer: String::new(), message: format!("--c: {}", e.0) })
}

fn flow_config(global: &GlobalOpts, max_iters: Option<usize>) -> FlowConfig {
    let mut cfg = FlowConfig::default();
    if let Some(t) = global.tol {
        cfg.tol = t;
    }
    if let Some(m) = max_iters {
        cfg.max_iters = m;
    }
    cfg
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightInput {
    dim: usize,
    weights: Vec<Vec<i64>>,
    #[serde(default)]
    support: Option<Vec<usize>>,
}

/// Locates a validation failure in the input document.
fn polytope_pointer(e: &PolytopeError, list: &str) -> String {
    match e {
        PolytopeError::ZeroDimension => "/dim".into(),
        PolytopeError::TooFewVariables => "/nvars".into(),
        PolytopeError::NoWeights => format!("/{list}"),
        PolytopeError::WrongLength { index, .. }
        | PolytopeError::DuplicateWeight { index, .. }
        | PolytopeError::WrongDegree { index, .. }
        | PolytopeError::NegativeExponent { index }
        | PolytopeError::WrongVariableCount { index, .. } => format!("/{list}/{index}"),
        PolytopeError::EmptySupport | PolytopeError::SupportOutOfRange(_) | PolytopeError::DuplicateSupport(_) => {
            "/support".into()
        }
        PolytopeError::ZeroOnePs | PolytopeError::NotPrimitive(_) | PolytopeError::ZeroBound => String::new(),
    }
}

fn hm(input: Value, brute_force: Option<i64>) -> Result<Output, CliError> {
    let raw: WeightInput = parse(input)?;
    let support = raw.support.unwrap_or_else(|| (0..raw.weights.len()).collect());
    let ws = WeightSystem::new(raw.dim, raw.weights, support)
        .map_err(|e| CliError::input_at(polytope_pointer(&e, "weights"), e))?;
    let v = hm_classify(&ws);
    let mut out = to_value(&v);
    if let Some(b) = brute_force {
        let bf = brute_force_1ps(&ws, b).map_err(|e| CliError::input_at("", format!("--brute-force: {e}")))?;
        out["brute_force"] = json!({"bound": b, "class": bf.class, "witness": bf.witness, "weight": bf.weight});
        out["agrees"] = json!(bf.class == v.class);
    }
    Ok(Output::json(out))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypersurfaceInput {
    degree: i64,
    nvars: usize,
    monomials: Vec<Vec<i64>>,
}

fn hypersurface(input: Value) -> Result<Output, CliError> {
    let h: HypersurfaceInput = parse(input)?;
    let v = hypersurface_newton(h.degree, h.nvars, &h.monomials)
        .map_err(|e| CliError::input_at(polytope_pointer(&e, "monomials"), e))?;
    let mut out = to_value(&v);
    // Pairing of every monomial with the witness, so the certificate can be read off directly.
    let pairings: Option<Vec<i64>> = v
        .witness
        .as_ref()
        .map(|w| h.monomials.iter().map(|a| a.iter().zip(w.as_slice()).map(|(x, y)| x * y).sum()).collect());
    out["pairings"] = json!(pairings);
    Ok(Output::json(out))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsInput {
    points: Vec<[f64; 3]>,
    multiplicities: Vec<u32>,
}

fn points_classify(input: Value) -> Result<Output, CliError> {
    let p: PointsInput = parse(input)?;
    PointsProblem::new(&p.points, &p.multiplicities)?;
    let v = classify_points(&p.multiplicities);
    let total: u32 = p.multiplicities.iter().sum();
    Ok(Output::json(json!({"class": v.class, "witness": v.witness, "total": total})))
}

fn trace_csv<P>(r: &FlowResult<P>) -> String {
    csv_rows(
        &["iter", "moment_norm", "step"],
        r.trace.iter().map(|t| vec![t.iter.to_string(), t.moment_norm.to_string(), t.step.to_string()]),
    )
}

fn points_balance(input: Value, cfg: FlowConfig) -> Result<Output, CliError> {
    let p: PointsInput = parse(input)?;
    let problem = PointsProblem::new(&p.points, &p.multiplicities)?
        .with_collision_threshold(PointsProblem::collision_threshold_for(cfg.tol));
    let class = classify_points(&p.multiplicities).class;
    let r = flow_to_zero(&problem, &cfg)?;
    let outcome = FlowOutcome::of(&r);
    let result = json!({
        "class": class,
        "status": r.status,
        "outcome": outcome,
        "agrees": outcome == expected_outcome(class),
        "iterations": r.iterations,
        "final_moment_norm": r.final_norm(),
        "min_separation": r.state.min_separation(),
        "points": r.state.points(),
    });
    Ok(Output::with_csv(result, trace_csv(&r)))
}

fn suite(count: usize, max_total: u32, global: &GlobalOpts) -> Result<Output, CliError> {
    let cfg = flow_config(global, None);
    let rows = points_suite(global.seed, count, max_total, &cfg)?;
    let agreed = rows.iter().filter(|r| r.agrees).count();
    let csv = csv_rows(
        &["index", "multiplicities", "class", "outcome", "iterations", "final_moment_norm", "agrees"],
        rows.iter().map(|r| {
            vec![
                r.index.to_string(),
                r.multiplicities.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(";"),
                format!("{:?}", r.class),
                format!("{:?}", r.outcome),
                r.iterations.to_string(),
                r.final_moment_norm.to_string(),
                r.agrees.to_string(),
            ]
        }),
    );
    let result = json!({
        "count": rows.len(),
        "max_total": max_total,
        "tol": cfg.tol,
        "agreed": agreed,
        "all_agree": agreed == rows.len(),
        "rows": rows,
    });
    Ok(Output::with_csv(result, csv))
}

/// Flow instances, tagged by `kind`. Complex numbers are `[re, im]` pairs and
/// matrices are row-major.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Instance {
    Hyperbola { x: [f64; 2], y: [f64; 2], a: f64 },
    Points { points: Vec<[f64; 3]>, multiplicities: Vec<u32> },
    Hom { rows: usize, cols: usize, entries: Vec<[f64; 2]> },
    Adjoint { n: usize, entries: Vec<[f64; 2]> },
}

fn complex(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|z| Complex64::new(z[0], z[1])).collect()
}

fn matrix_json(m: &nalgebra::DMatrix<Complex64>) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
    json!(rows)
}

fn run_flow<P: MomentProblem + Clone>(
    kind: &str,
    p: &P,
    cfg: &FlowConfig,
    state: impl Fn(&P) -> Value,
) -> Result<Output, CliError> {
    let r = flow_to_zero(p, cfg)?;
    let result = json!({
        "kind": kind,
        "status": r.status,
        "outcome": FlowOutcome::of(&r),
        "iterations": r.iterations,
        "final_moment_norm": r.final_norm(),
        "orbit_escape": r.orbit_escape,
        "conserved_drift": conserved_drift(p, &r.state),
        "state": state(&r.state),
    });
    Ok(Output::with_csv(result, trace_csv(&r)))
}

fn flow(input: Value, cfg: FlowConfig) -> Result<Output, CliError> {
    match parse::<Instance>(input)? {
        Instance::Hyperbola { x, y, a } => {
            let p = Hyperbola::new(Complex64::new(x[0], x[1]), Complex64::new(y[0], y[1]), a);
            run_flow("hyperbola", &p, &cfg, |s| json!({"x": [s.x.re, s.x.im], "y": [s.y.re, s.y.im], "tau": s.tau()}))
        }
        Instance::Points { points, multiplicities } => {
            let p = PointsProblem::new(&points, &multiplicities)?
                .with_collision_threshold(PointsProblem::collision_threshold_for(cfg.tol));
            run_flow("points", &p, &cfg, |s| json!({"points": s.points(), "min_separation": s.min_separation()}))
        }
        Instance::Hom { rows, cols, entries } => {
            let p = HomProblem::new(rows, cols, &complex(&entries))?;
            run_flow("hom", &p, &cfg, |s| json!({"matrix": matrix_json(s.matrix())}))
        }
        Instance::Adjoint { n, entries } => {
            let p = AdjointProblem::new(n, &complex(&entries))?;
            run_flow("adjoint", &p, &cfg, |s| json!({"matrix": matrix_json(s.matrix()), "defective": s.defective()}))
        }
    }
}

fn potential(input: Value) -> Result<MetricPotential, CliError> {
    Ok(MetricPotential::try_from(parse::<PotentialSpec>(input)?)?)
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

fn metric_balance(input: Value, r: usize, max_iter: usize, global: &GlobalOpts) -> Result<Output, CliError> {
    let phi = potential(input)?;
    let tol = global.tol.unwrap_or(DEFAULT_BALANCE_TOL);
    let grid = grid_for(&phi, r);
    let initial = bergman(&phi, &gram(&phi, r)?, &grid)?;
    let res = balance_iterate(&phi, r, tol, max_iter)?;
    let dist = distance_mod_aut(&res.potential, &grid);
    let (lo, hi) = min_max(&initial.values);
    let potential_values: Vec<f64> = initial.w.iter().zip(&initial.theta).map(|(&w, &t)| res.potential.value(w, t)).collect();
    let result = json!({
        "r": r,
        "tol": tol,
        "iterations": res.iterations,
        "residual": res.residual,
        "log_det": res.gram.log_det(),
        "initial_bergman": {"min": lo, "max": hi, "integral": initial.integral},
        "distance_to_round": dist,
        "history": res.history,
    });
    let csv = csv_rows(
        &["w", "theta", "bergman", "potential"],
        (0..initial.values.len()).map(|i| {
            vec![
                initial.w[i].to_string(),
                initial.theta[i].to_string(),
                initial.values[i].to_string(),
                potential_values[i].to_string(),
            ]
        }),
    );
    Ok(Output::with_csv(result, csv))
}

fn metric_expansion(input: Value, degrees: &[usize]) -> Result<Output, CliError> {
    let phi = potential(input)?;
    let top = degrees.iter().copied().max().unwrap_or(1);
    let fit = expansion_check(&phi, degrees, &grid_for(&phi, top))?;
    let result = json!({
        "degrees": fit.degrees,
        "c0_min": fit.c0_min,
        "c0_max": fit.c0_max,
        "c1_rel_error": fit.c1_rel_error,
    });
    let csv = csv_rows(
        &["w", "theta", "c0", "c1", "predicted_c1"],
        (0..fit.w.len()).map(|i| {
            vec![
                fit.w[i].to_string(),
                fit.theta[i].to_string(),
                fit.c0[i].to_string(),
                fit.c1[i].to_string(),
                fit.predicted_c1[i].to_string(),
            ]
        }),
    );
    Ok(Output::with_csv(result, csv))
}

fn metric_energy(input: Value, steps: usize) -> Result<Output, CliError> {
    let phi = potential(input)?;
    let grid = grid_for(&phi, ENERGY_GRID_DEGREE);
    let path = linear_path(&phi, steps)?;
    let partial: Vec<f64> = (1..=path.len()).map(|k| k_energy(&path[..k], &grid)).collect::<Result<_, _>>()?;
    let energy = *partial.last().expect("path has at least two potentials");
    let result = json!({
        "steps": path.len() - 1,
        "k_energy": energy,
        "closed_form": k_energy_closed_form(&phi, &grid)?,
        "derivative_at_end": futaki_derivative(&phi, &phi, &grid)?,
    });
    let n = (path.len() - 1) as f64;
    let csv = csv_rows(&["t", "k_energy"], partial.iter().enumerate().map(|(k, e)| vec![(k as f64 / n).to_string(), e.to_string()]));
    Ok(Output::with_csv(result, csv))
}

fn slope_classify_cmd(input: Value) -> Result<Output, CliError> {
    let (h, hs) = parse::<Family>(input)?.build()?;
    let v = slope_classify(&h, &hs)?;
    let mut out = to_value(&v);
    out["hilbert"] = to_value(&h);
    Ok(Output::with_csv(out, series_csv(&mu_c_series(&hs, 32)?)))
}

fn series_csv(series: &[(Rational, Rational)]) -> String {
    csv_rows(
        &["c", "mu_c", "c_exact", "mu_c_exact"],
        series.iter().map(|(c, m)| {
            vec![rational::to_f64(c).to_string(), rational::to_f64(m).to_string(), rational::format(c), rational::format(m)]
        }),
    )
}

fn slope_mu(input: Value, c: &str) -> Result<Output, CliError> {
    let c = parse_c(c)?;
    let (h, hs) = parse::<Family>(input)?.build()?;
    let m = mu_c(&hs, &c)?;
    let mx = mu(&h)?;
    Ok(Output::json(json!({
        "c": rational::format(&c),
        "mu_c": rational::format(&m),
        "mu_x": rational::format(&mx),
        "destabilizes": m > mx,
    })))
}

fn slope_series(input: Value, steps: usize) -> Result<Output, CliError> {
    let (h, hs) = parse::<Family>(input)?.build()?;
    let s = mu_c_series(&hs, steps)?;
    let rows: Vec<[String; 2]> = s.iter().map(|(c, m)| [rational::format(c), rational::format(m)]).collect();
    let result = json!({"mu_x": rational::format(&mu(&h)?), "series": rows});
    Ok(Output::with_csv(result, series_csv(&s)))
}

fn weights(input: Value, c: &str, r_min: i64, r_max: i64, ks: &[i64]) -> Result<Output, CliError> {
    let c = parse_c(c)?;
    if r_min < 1 || r_max < r_min {
        return Err(CliError::input("need 1 <= r-min <= r-max"));
    }
    let (h, hs) = parse::<Family>(input)?.build()?;
    let rs: Vec<i64> = (r_min..=r_max).collect();
    let w = if ks.is_empty() { weights_sequence(&hs, &c, &rs)? } else { weights_table(&hs, &c, &rs, ks)? };
    let pred = trapezium_asymptotics(&hs, &c);
    let rows: Vec<(i64, Option<i64>, String, Rational, Rational)> = w
        .entries()
        .iter()
        .map(|e| {
            let p = pred.eval(h.n, e.r * e.k.unwrap_or(1));
            let d = Rational::from_integer(e.w.clone()) - &p;
            (e.r, e.k, e.w.to_string(), p, d)
        })
        .collect();
    let entries: Vec<Value> = rows
        .iter()
        .map(|(r, k, w, p, d)| json!({"r": r, "k": k, "w": w, "predicted": rational::format(p), "difference": rational::format(d)}))
        .collect();
    let mode = match w {
        TestConfigWeights::Sequence { .. } => "sequence",
        TestConfigWeights::Table { .. } => "table",
    };
    let result = json!({"mode": mode, "c": rational::format(&c), "n": h.n, "prediction": pred, "entries": entries});
    let csv = csv_rows(
        &["r", "k", "w", "predicted", "difference"],
        rows.iter().map(|(r, k, w, p, d)| {
            vec![
                r.to_string(),
                k.map(|k| k.to_string()).unwrap_or_default(),
                w.clone(),
                rational::to_f64(p).to_string(),
                rational::to_f64(d).to_string(),
            ]
        }),
    );
    Ok(Output::with_csv(result, csv))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DfInput {
    hilbert: HilbertData,
    weights: TestConfigWeights,
}

fn df(input: Value, c: &str) -> Result<Output, CliError> {
    if input.get("family").is_none() {
        let d: DfInput = parse(input)?;
        let v = df_invariant(&d.weights, &d.hilbert)?;
        return Ok(Output::json(json!({"df": rational::format(&v)})));
    }
    let c = parse_c(c)?;
    let (h, hs) = parse::<Family>(input)?.build()?;
    let (v, _) = df_from_family(&h, &hs, &c)?;
    let margin = mu_c(&hs, &c)? - mu(&h)?;
    Ok(Output::json(json!({
        "c": rational::format(&c),
        "df": rational::format(&v),
        "mu_c_minus_mu_x": rational::format(&margin),
    })))
}
