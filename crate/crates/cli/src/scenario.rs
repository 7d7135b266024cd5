//! One runner per scenario kind. Each parses its params, computes, writes
//! `<out>/<kind>.csv` and `<out>/<kind>.json`, and returns the outcome.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use kplus::convex::{bundle_measure, width, NormalSelector};
use kplus::curvature::{cgr_inequality_check, cgr_stability_check, kplus_paired};
use kplus::isoprofile::{
    candidate_profile, estimate_lambda, half_space_profile, profile_monotone_lipschitz_check, solve_profile_2d,
    weak_young_check, ProfilePoint,
};
use kplus::sphere::{cap_measure, Direction};
use kplus::stability::{calibrate_delta, slab_family, DeltaTable};
use kplus::willmore::{supporting_halfspace, willmore_check};
use kplus::McPlan;

use crate::config::*;
use crate::output::{write_pair, Header, Report};
use crate::verify::{parallel_map, Suite, VerifyOptions};
use crate::{CliError, Outcome};

/// Global flags shared by every kind.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub name: Option<String>,
    pub seed: u64,
    /// Overrides the kind's default sample count.
    pub samples: Option<u64>,
    pub out: PathBuf,
    pub workers: usize,
}

/// Where a kind's params come from.
#[derive(Debug, Clone)]
pub enum Params {
    Defaults,
    File(PathBuf),
    Value(serde_json::Value),
}

impl Params {
    fn get<T: DeserializeOwned + Default>(&self) -> Result<T, CliError> {
        match self {
            Self::Defaults => Ok(T::default()),
            Self::File(p) => load(p),
            Self::Value(serde_json::Value::Null) => Ok(T::default()),
            Self::Value(v) => parse(&serde_json::to_string_pretty(v)?, "params"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub outcome: Outcome,
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
}

/// Band below the cap accepted for meshed surfaces: `3·stderr + MESH_BAND·h`.
pub const MESH_BAND: f64 = 4.0;
/// Relative tolerance of profile lower bounds.
pub const PROFILE_TOL: f64 = 1e-3;

pub fn run(kind: Kind, params: &Params, opts: &RunOptions) -> Result<RunSummary, CliError> {
    match kind {
        Kind::CapMeasure => cap_measure_run(params.get()?, opts),
        Kind::Bundle => bundle_run(params.get()?, opts),
        Kind::Kplus => kplus_run(params.get()?, opts),
        Kind::CgrCheck => cgr_check_run(params.get()?, opts),
        Kind::CgrStability => cgr_stability_run(params.get()?, opts),
        Kind::Willmore => willmore_run(params.get()?, opts),
        Kind::Profile => profile_run(params.get()?, opts),
        Kind::VerifyAll => verify_all_run(opts),
        Kind::Calibrate => calibrate_run(params.get()?, opts),
    }
}

/// Runs a scenario file; its `seed` and `out` override the flags.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<RunSummary, CliError> {
    let opts = RunOptions {
        name: Some(s.name.clone()),
        seed: s.seed.unwrap_or(opts.seed),
        out: s.out.clone().unwrap_or_else(|| opts.out.clone()),
        ..opts.clone()
    };
    run(s.kind, &Params::Value(s.params.clone()), &opts)
}

fn finish<P: Serialize, R: Serialize>(
    kind: Kind,
    opts: &RunOptions,
    samples: Option<u64>,
    params: &P,
    rows: &[R],
    passed: bool,
    lines: Vec<String>,
) -> Result<RunSummary, CliError> {
    finish_with(kind, opts, samples, params, rows, &rows, passed, lines)
}

/// As `finish`, with JSON `results` richer than the CSV rows.
#[allow(clippy::too_many_arguments)]
fn finish_with<P: Serialize, R: Serialize, J: Serialize>(
    kind: Kind,
    opts: &RunOptions,
    samples: Option<u64>,
    params: &P,
    rows: &[R],
    results: &J,
    passed: bool,
    mut lines: Vec<String>,
) -> Result<RunSummary, CliError> {
    let header = Header::new(kind.name(), opts.name.as_deref().unwrap_or(kind.name()), opts.seed, samples);
    let report = Report { header: &header, params, passed, results };
    let (c, j) = write_pair(&opts.out, kind.name(), rows, &report)?;
    lines.push(format!("{}: {}", kind.name(), if passed { "pass" } else { "VIOLATION" }));
    Ok(RunSummary { outcome: Outcome::from_pass(passed), lines, files: vec![c, j] })
}

fn plan(opts: &RunOptions, samples: u64) -> McPlan {
    McPlan::new(samples, opts.seed).with_workers(opts.workers)
}

#[derive(Serialize)]
struct CapRow {
    dim: usize,
    theta: f64,
    cap_measure: f64,
}

fn cap_measure_run(p: CapMeasureParams, opts: &RunOptions) -> Result<RunSummary, CliError> {
    let mut rows = Vec::new();
    for &dim in &p.dims {
        for &theta in &p.thetas {
            rows.push(CapRow { dim, theta, cap_measure: cap_measure(dim, theta)? });
        }
    }
    let lines = vec![format!("{} cap measures", rows.len())];
    finish(Kind::CapMeasure, opts, None, &p, &rows, true, lines)
}

#[derive(Serialize)]
struct BundleRow {
    theta: f64,
    bundle: f64,
    stderr: f64,
    cap: f64,
    excess: f64,
    width: f64,
}

fn bundle_run(p: BundleParams, opts: &RunOptions) -> Result<RunSummary, CliError> {
    let (cloud, sigma) = p.cloud.build()?;
    let dir = |v: &[f64]| Direction::normalize(v);
    let sigma = match sigma {
        Some(s) => s,
        None => match &p.sigma_rule {
            SigmaRule::ConeCenters { fallback } => NormalSelector::cone_centers(&cloud, &dir(fallback)?)?,
            SigmaRule::Toward { direction } => NormalSelector::toward(&cloud, &dir(direction)?)?,
            SigmaRule::Constant { direction } => NormalSelector::constant(&cloud, dir(direction)?)?,
        },
    };
    let samples = opts.samples.unwrap_or(p.samples);
    let w = width(&cloud, 16, 1e-12).value;
    let mut rows = Vec::new();
    let mut ok = true;
    for &theta in &p.thetas {
        let e = bundle_measure(&cloud, &sigma, theta, &plan(opts, samples))?;
        let cap = cap_measure(cloud.dim, theta)?;
        ok &= e.value >= cap - 3.0 * e.stderr;
        rows.push(BundleRow { theta, bundle: e.value, stderr: e.stderr, cap, excess: e.value - cap, width: w });
    }
    let lines = rows.iter().map(|r| format!("θ {:.4}: bundle {:.5} ± {:.5}, cap {:.5}", r.theta, r.bundle, r.stderr, r.cap)).collect();
    finish(Kind::Bundle, opts, Some(samples), &p, &rows, ok, lines)
}

#[derive(Serialize)]
struct KplusRow {
    scene: String,
    vertices: usize,
    h: f64,
    theta0: f64,
    kplus: f64,
    stderr: f64,
    cap: f64,
    diff: f64,
    diff_stderr: f64,
}

fn kplus_run(p: KplusParams, opts: &RunOptions) -> Result<RunSummary, CliError> {
    let scene = p.surface.build()?;
    let theta0 = p.theta0.unwrap_or(scene.theta0);
    let samples = opts.samples.or(p.samples).unwrap_or(1_000_000);
    let cos0 = theta0.cos();
    let dim = scene.surface.dim;
    let e = kplus_paired(&scene.surface, |nu| nu[dim - 1] >= cos0, &plan(opts, samples));
    let row = KplusRow {
        scene: scene.name.clone(),
        vertices: scene.surface.vertices.len(),
        h: scene.h,
        theta0,
        kplus: e.kplus.value,
        stderr: e.kplus.stderr,
        cap: cap_measure(dim, theta0)?,
        diff: e.diff,
        diff_stderr: e.diff_stderr,
    };
    let lines = vec![format!("{}: K+ {:.5} ± {:.5}, cap {:.5}", row.scene, row.kplus, row.stderr, row.cap)];
    finish(Kind::Kplus, opts, Some(samples), &p, &[row], true, lines)
}

#[derive(Serialize)]
struct CgrRow {
    scene: String,
    h: f64,
    theta0: f64,
    kplus: f64,
    stderr: f64,
    bound: f64,
    margin: f64,
    gate_margin: f64,
    band: f64,
}

fn cgr_check_run(p: CgrCheckParams, opts: &RunOptions) -> Result<RunSummary, CliError> {
    let scene = p.surface.build()?;
    let theta0 = p.theta0.unwrap_or(scene.theta0);
    let samples = opts.samples.or(p.samples).unwrap_or(1_000_000);
    let r = cgr_inequality_check(&scene.surface, theta0, p.gate_tol.unwrap_or(scene.h), &plan(opts, samples))?;
    let band = 3.0 * r.kplus.stderr + MESH_BAND * scene.h;
    let row = CgrRow {
        scene: scene.name.clone(),
        h: scene.h,
        theta0,
        kplus: r.kplus.value,
        stderr: r.kplus.stderr,
        bound: r.bound,
        margin: r.margin,
        gate_margin: r.gate.margin,
        band,
    };
    let ok = r.margin >= -band;
    let lines = vec![format!("{}: K+ − bound = {:.5} (band {:.5})", row.scene, row.margin, band)];
    finish(Kind::CgrCheck, opts, Some(samples), &p, &[row], ok, lines)
}

fn table_path(p: &CgrStabilityParams, out: &Path) -> PathBuf {
    p.delta_table.clone().unwrap_or_else(|| out.join("calibrate.json"))
}

fn cgr_stability_run(p: CgrStabilityParams, opts: &RunOptions) -> Result<RunSummary, CliError> {
    let delta = match p.delta {
        Some(d) => d,
        None => {
            let path = table_path(&p, &opts.out);
            let report: serde_json::Value = load(&path)
                .map_err(|e| CliError::Config(format!("no delta given and no calibration table: {e}")))?;
            let table: DeltaTable = serde_json::from_value(report["table"].clone())?;
            table.delta(p.epsilon)
        }
    };
    let scene = p.surface.build()?;
    let theta0 = p.theta0.unwrap_or(scene.theta0);
    let samples = opts.samples.or(p.samples).unwrap_or(1_000_000);
    let r = cgr_stability_check(&scene.surface, theta0, p.epsilon, delta, &plan(opts, samples))?;
    let ok = r.consistent();
    let lines = vec![format!(
        "{}: excess {:.5}, slab width {:.5} (ε {}, δ {:.5}); hypothesis {}, conclusion {}",
        scene.name, r.delta_measured, r.slab_width, p.epsilon, delta, r.hypothesis, r.conclusion
    )];
    let row = StabilityRow {
        scene: scene.name.clone(),
        kplus: r.kplus.value,
        stderr: r.kplus.stderr,
        cap: r.cap,
        delta_measured: r.delta_measured,
        slab_width: r.slab_width,
        contact_width: r.contact_width,
        epsilon: r.epsilon,
        delta: r.delta,
        hypothesis: r.hypothesis,
        conclusion: r.conclusion,
    };
    finish_with(Kind::CgrStability, opts, Some(samples), &p, &[row], &[r], ok, lines)
}

#[derive(Serialize)]
struct StabilityRow {
    scene: String,
    kplus: f64,
    stderr: f64,
    cap: f64,
    delta_measured: f64,
    slab_width: f64,
    contact_width: f64,
    epsilon: f64,
    delta: f64,
    hypothesis: bool,
    conclusion: bool,
}

#[derive(Serialize)]
struct WillmoreRow {
    energy: f64,
    refined: f64,
    rel_change: f64,
    bound: f64,
    margin: f64,
    gate_margin: f64,
    umbilical: bool,
}

fn willmore_run(p: WillmoreParams, opts: &RunOptions) -> Result<RunSummary, CliError> {
    let dim = p.parts.first().ok_or_else(|| CliError::Config("willmore: `parts` is empty".into()))?.dim;
    let obstacle = p.obstacle.clone().unwrap_or_else(|| supporting_halfspace(dim));
    let r = willmore_check(&p.parts, &obstacle, p.theta0, p.gate_tol)?;
    let row = WillmoreRow {
        energy: r.energy.energy,
        refined: r.energy.refined,
        rel_change: r.energy.rel_change,
        bound: r.bound,
        margin: r.margin,
        gate_margin: r.gate.margin,
        umbilical: r.umbilical,
    };
    let ok = r.margin >= -crate::verify::WILLMORE_TOL * r.bound;
    let lines = vec![format!("energy {:.10}, bound {:.10}, margin {:.3e}", row.energy, row.bound, row.margin)];
    finish(Kind::Willmore, opts, None, &p, &[row], ok, lines)
}

/// Profile CSV row; the column set is fixed.
#[derive(Serialize)]
struct ProfileRow {
    m: f64,
    #[serde(rename = "I_H(m)")]
    i_h: f64,
    #[serde(rename = "I_candidate(m)")]
    i_candidate: f64,
    #[serde(rename = "I_solver(m)")]
    i_solver: f64,
    method: String,
    wet_length: f64,
    young_violation: f64,
}

fn profile_run(p: ProfileParams, opts: &RunOptions) -> Result<RunSummary, CliError> {
    if p.masses.is_empty() {
        return Err(CliError::Config("profile: `masses` is empty".into()));
    }
    let solver = kplus::isoprofile::SolverOptions { seed: opts.seed, ..p.solver.clone() };
    let points = parallel_map(&p.masses, opts.workers, |&m| solve_profile_2d(&p.obstacle, m, &solver))
        .into_iter()
        .collect::<kplus::Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut ok = true;
    for q in &points {
        let i_h = half_space_profile(2, q.mass)?;
        let i_candidate = candidate_profile(&p.obstacle, q.mass)?.value;
        let young = if q.minimizer.is_attached() { weak_young_check(&q.minimizer)?.violation } else { f64::NEG_INFINITY };
        ok &= q.value >= i_h * (1.0 - PROFILE_TOL) && q.value >= i_candidate * (1.0 - PROFILE_TOL);
        let method = serde_json::to_value(q.method)?.as_str().unwrap_or_default().to_string();
        rows.push(ProfileRow {
            m: q.mass,
            i_h,
            i_candidate,
            i_solver: q.value,
            method,
            wet_length: q.minimizer.wet_length,
            young_violation: young,
        });
    }
    let lines: Vec<String> = rows
        .iter()
        .map(|r| format!("m {:.4}: I_H {:.6}, candidate {:.6}, solver {:.6}", r.m, r.i_h, r.i_candidate, r.i_solver))
        .collect();
    let check = if points.len() >= 3 {
        let samples: Vec<(f64, f64)> = points.iter().map(|q| (q.mass, q.value)).collect();
        Some(profile_monotone_lipschitz_check(&samples, estimate_lambda(&points), 0.0)?)
    } else {
        None
    };
    let header = Header::new(Kind::Profile.name(), opts.name.as_deref().unwrap_or("profile"), opts.seed, None);
    #[derive(Serialize)]
    struct Full<'a> {
        header: &'a Header,
        params: &'a ProfileParams,
        passed: bool,
        results: &'a [ProfilePoint],
        monotone_lipschitz: Option<kplus::isoprofile::ProfileCheck>,
    }
    let report = Full { header: &header, params: &p, passed: ok, results: &points, monotone_lipschitz: check };
    let (c, j) = write_pair(&opts.out, Kind::Profile.name(), &rows, &report)?;
    let mut lines = lines;
    lines.push(format!("profile: {}", if ok { "pass" } else { "VIOLATION" }));
    Ok(RunSummary { outcome: Outcome::from_pass(ok), lines, files: vec![c, j] })
}

fn verify_all_run(opts: &RunOptions) -> Result<RunSummary, CliError> {
    let suite = Suite::new(VerifyOptions { seed: opts.seed, workers: opts.workers });
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for id in 1..=10 {
        let r = suite.run(id);
        eprintln!("{r}");
        lines.push(r.to_string());
        rows.push(r);
    }
    let ok = rows.iter().all(|r| r.passed);
    finish(Kind::VerifyAll, opts, None, &serde_json::json!({}), &rows, ok, lines)
}

#[derive(Serialize)]
struct CalibrationReport<'a> {
    header: &'a Header,
    params: &'a CalibrateParams,
    passed: bool,
    samples_per_instance: u64,
    observations: Vec<(f64, f64)>,
    table: &'a DeltaTable,
}

fn calibrate_run(p: CalibrateParams, opts: &RunOptions) -> Result<RunSummary, CliError> {
    let instances = (p.heights.len() * p.clouds_per_height) as u64;
    if instances == 0 {
        return Err(CliError::Config("calibrate: no heights or clouds".into()));
    }
    let budget = opts.samples.map_or(p.budget, |s| s * instances);
    let per = budget / instances;
    if per < MIN_CALIBRATION_SAMPLES {
        return Err(CliError::Config(format!(
            "calibrate: insufficient budget, {per} samples per instance (need {MIN_CALIBRATION_SAMPLES})"
        )));
    }
    let seeds: Vec<u64> = (0..p.clouds_per_height as u64).map(|j| opts.seed.wrapping_add(j)).collect();
    let families = parallel_map(&seeds, opts.workers, |&s| {
        slab_family(p.dim, p.points, p.radius, &p.heights, p.theta0, &McPlan::new(per, s), s)
    });
    let mut obs = Vec::new();
    for f in families {
        obs.extend(f?.iter().map(|r| (r.width, r.excess)));
    }
    let table = calibrate_delta(&obs, &p.epsilons);
    let ok = table.is_monotone() && table.violations(&obs) == 0;
    let lines = table.rows.iter().map(|r| format!("ε {:.4}: δ {:.5} ({} supporting)", r.epsilon, r.delta, r.supported_by)).collect();
    let header = Header::new(Kind::Calibrate.name(), opts.name.as_deref().unwrap_or("calibrate"), opts.seed, Some(per));
    let report = CalibrationReport { header: &header, params: &p, passed: ok, samples_per_instance: per, observations: obs, table: &table };
    let (c, j) = write_pair(&opts.out, Kind::Calibrate.name(), &table.rows, &report)?;
    let mut lines: Vec<String> = lines;
    lines.push(format!("calibrate: {}", if ok { "pass" } else { "VIOLATION" }));
    Ok(RunSummary { outcome: Outcome::from_pass(ok), lines, files: vec![c, j] })
}
