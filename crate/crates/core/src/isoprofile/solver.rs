//! Polygonal local search for planar relative isoperimetric problems.
//!
//! State: the free chain `P_0 … P_K` with `P_0 = γ(s_A)`, `P_K = γ(s_B)`
//! sliding on `∂C` and free interior vertices, or a closed polygon away
//! from `C`. The objective is the free length; the area is held at `m` by
//! Newton projection after every move, and moves that leave `R² ∖ C` (or
//! the container) are rejected by the line search.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use super::geom2::{add, cross, dist, dot, norm, polygon_area, scale, sub, P2};
use super::{candidate_profile, open_shoelace, BoundaryCurve, Family, Method, ProfilePoint, Region2D};
use crate::convex::ConvexObstacle;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Edges of the final free chain.
    pub resolution: usize,
    /// Random attached starts; one detached start is added when no
    /// container is active.
    pub restarts: usize,
    pub seed: u64,
    /// Competitors live in `B_R`.
    pub radius: f64,
    /// Line-search iterations per refinement level.
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { resolution: 96, restarts: 8, seed: 0, radius: 100.0, max_iter: 20_000 }
    }
}

/// Projected gradient norm accepted as stationary.
const GRAD_TOL: f64 = 1e-9;
/// When the length stops decreasing over `STALL_WINDOW` iterations, a
/// gradient below `STALL_GRAD_TOL` still counts as converged.
const STALL_WINDOW: usize = 50;
const STALL_GRAD_TOL: f64 = 1e-6;

struct Problem<'a> {
    curve: &'a BoundaryCurve,
    obstacle: &'a ConvexObstacle,
    mass: f64,
    radius: f64,
    /// Convex counter-clockwise polygon containing every competitor.
    container: Option<&'a [P2]>,
    tol: f64,
}

#[derive(Debug, Clone)]
struct Run {
    attached: bool,
    v: Vec<f64>,
    length: f64,
    converged: bool,
}

struct Eval {
    length: f64,
    area: f64,
    gl: Vec<f64>,
    ga: Vec<f64>,
}

fn pairs(v: &[f64]) -> impl Iterator<Item = P2> + '_ {
    v.chunks_exact(2).map(|c| [c[0], c[1]])
}

fn unit(a: P2, b: P2) -> P2 {
    let d = sub(b, a);
    scale(d, 1.0 / norm(d))
}

impl Problem<'_> {
    fn points(&self, attached: bool, v: &[f64]) -> Vec<P2> {
        if attached {
            let mut p = vec![self.curve.point(v[0])];
            p.extend(pairs(&v[2..]));
            p.push(self.curve.point(v[1]));
            p
        } else {
            pairs(v).collect()
        }
    }

    fn area(&self, attached: bool, v: &[f64]) -> f64 {
        let p = self.points(attached, v);
        if attached {
            open_shoelace(&p) - self.curve.area_integral(v[0], v[1])
        } else {
            polygon_area(&p)
        }
    }

    fn length(&self, attached: bool, v: &[f64]) -> f64 {
        let p = self.points(attached, v);
        let open: f64 = p.windows(2).map(|w| dist(w[0], w[1])).sum();
        if attached {
            open
        } else {
            open + dist(p[p.len() - 1], p[0])
        }
    }

    fn eval(&self, attached: bool, v: &[f64]) -> Eval {
        let p = self.points(attached, v);
        let n = p.len();
        let mut gl = vec![0.0; v.len()];
        let mut ga = vec![0.0; v.len()];
        if attached {
            let k = n - 1;
            let u: Vec<P2> = p.windows(2).map(|w| unit(w[0], w[1])).collect();
            let (ta, tb) = (self.curve.tangent(v[0]), self.curve.tangent(v[1]));
            gl[0] = -dot(u[0], ta);
            gl[1] = dot(u[k - 1], tb);
            ga[0] = -0.5 * cross(sub(p[1], p[0]), ta);
            ga[1] = 0.5 * cross(sub(p[k - 1], p[k]), tb);
            for i in 1..k {
                let j = 2 + 2 * (i - 1);
                gl[j] = u[i - 1][0] - u[i][0];
                gl[j + 1] = u[i - 1][1] - u[i][1];
                ga[j] = 0.5 * (p[i + 1][1] - p[i - 1][1]);
                ga[j + 1] = 0.5 * (p[i - 1][0] - p[i + 1][0]);
            }
            let length = p.windows(2).map(|w| dist(w[0], w[1])).sum();
            let area = open_shoelace(&p) - self.curve.area_integral(v[0], v[1]);
            Eval { length, area, gl, ga }
        } else {
            let u: Vec<P2> = (0..n).map(|i| unit(p[i], p[(i + 1) % n])).collect();
            for i in 0..n {
                let (prev, next) = ((i + n - 1) % n, (i + 1) % n);
                gl[2 * i] = u[prev][0] - u[i][0];
                gl[2 * i + 1] = u[prev][1] - u[i][1];
                ga[2 * i] = 0.5 * (p[next][1] - p[prev][1]);
                ga[2 * i + 1] = 0.5 * (p[prev][0] - p[next][0]);
            }
            let length = (0..n).map(|i| dist(p[i], p[(i + 1) % n])).sum();
            Eval { length, area: polygon_area(&p), gl, ga }
        }
    }

    /// Newton steps along `∇A` until `|A − m| ≤ 1e-13 m`.
    fn fix_area(&self, attached: bool, v: &mut [f64]) -> bool {
        if v.iter().any(|x| !x.is_finite()) {
            return false;
        }
        for _ in 0..12 {
            let e = self.eval(attached, v);
            let r = self.mass - e.area;
            if r.abs() <= 1e-13 * self.mass {
                return true;
            }
            let g2: f64 = e.ga.iter().map(|x| x * x).sum();
            if g2 == 0.0 {
                return false;
            }
            for (x, g) in v.iter_mut().zip(&e.ga) {
                *x += r / g2 * g;
            }
            if v.iter().any(|x| !x.is_finite()) || (attached && !(v[1] > v[0])) {
                return false;
            }
        }
        (self.area(attached, v) - self.mass).abs() <= 1e-10 * self.mass
    }

    fn inside_container(&self, p: P2) -> bool {
        let Some(c) = self.container else { return true };
        let n = c.len();
        (0..n).all(|i| cross(sub(c[(i + 1) % n], c[i]), sub(p, c[i])) >= -self.tol)
    }

    fn feasible(&self, attached: bool, v: &[f64]) -> bool {
        if attached {
            let w = v[1] - v[0];
            if !(w > 0.0 && w < self.curve.length() * (1.0 - 1e-9)) {
                return false;
            }
        }
        let p = self.points(attached, v);
        let n = p.len();
        let interior = p.iter().enumerate().filter(|(i, _)| !(attached && (*i == 0 || *i == n - 1)));
        if interior.map(|(_, q)| self.curve.signed_distance(*q)).any(|s| s < -self.tol) {
            return false;
        }
        if p.iter().any(|q| norm(*q) > self.radius || !self.inside_container(*q)) {
            return false;
        }
        let edges = if attached { n - 1 } else { n };
        (0..edges).all(|i| self.curve.segment_clear(p[i], p[(i + 1) % n], self.tol))
    }

    /// Projected gradient descent with Barzilai–Borwein trial steps and
    /// Armijo backtracking.
    fn descend(&self, attached: bool, v: &mut Vec<f64>, max_iter: usize) -> bool {
        let mut e = self.eval(attached, v);
        let mut alpha = 1e-2 * self.mass.sqrt();
        let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
        let mut history = std::collections::VecDeque::with_capacity(STALL_WINDOW + 1);
        for _ in 0..max_iter {
            let gg: f64 = e.ga.iter().map(|x| x * x).sum();
            let c = e.gl.iter().zip(&e.ga).map(|(a, b)| a * b).sum::<f64>() / gg;
            let g: Vec<f64> = e.gl.iter().zip(&e.ga).map(|(a, b)| a - c * b).collect();
            let gn2: f64 = g.iter().map(|x| x * x).sum();
            if gn2.sqrt() < GRAD_TOL {
                return true;
            }
            history.push_back(e.length);
            if history.len() > STALL_WINDOW {
                let old = history.pop_front().expect("nonempty");
                if old - e.length <= 1e-15 * e.length {
                    return gn2.sqrt() < STALL_GRAD_TOL;
                }
            }
            if let Some((pv, pg)) = &prev {
                let s: Vec<f64> = v.iter().zip(pv).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = g.iter().zip(pg).map(|(a, b)| a - b).collect();
                let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
                let ss: f64 = s.iter().map(|x| x * x).sum();
                if sy > 0.0 {
                    alpha = ss / sy;
                }
            }
            let mut a = alpha;
            let mut next = None;
            for _ in 0..60 {
                let mut trial: Vec<f64> = v.iter().zip(&g).map(|(x, d)| x - a * d).collect();
                if self.fix_area(attached, &mut trial) && self.feasible(attached, &trial) {
                    let t = self.eval(attached, &trial);
                    if t.length <= e.length - 1e-4 * a * gn2 {
                        next = Some((trial, t));
                        break;
                    }
                }
                a *= 0.5;
            }
            let Some((trial, t)) = next else {
                return gn2.sqrt() < STALL_GRAD_TOL;
            };
            prev = Some((std::mem::replace(v, trial), g));
            e = t;
        }
        false
    }

    /// Doubles the resolution by inserting edge midpoints; area and
    /// feasibility are unchanged.
    fn refine(&self, attached: bool, v: &[f64]) -> Vec<f64> {
        let p = self.points(attached, v);
        let n = p.len();
        let mut out = Vec::with_capacity(2 * v.len());
        if attached {
            out.extend_from_slice(&v[..2]);
            for i in 0..n - 1 {
                if i > 0 {
                    out.extend_from_slice(&p[i]);
                }
                out.extend_from_slice(&scale(add(p[i], p[i + 1]), 0.5));
            }
        } else {
            for i in 0..n {
                out.extend_from_slice(&p[i]);
                out.extend_from_slice(&scale(add(p[i], p[(i + 1) % n]), 0.5));
            }
        }
        out
    }

    fn solve_from(&self, attached: bool, mut v: Vec<f64>, levels: usize, max_iter: usize) -> Option<Run> {
        if !(self.fix_area(attached, &mut v) && self.feasible(attached, &v)) {
            return None;
        }
        let mut converged = false;
        for level in 0..levels {
            if level > 0 {
                v = self.refine(attached, &v);
            }
            converged = self.descend(attached, &mut v, max_iter);
        }
        let length = self.length(attached, &v);
        Some(Run { attached, v, length, converged })
    }

    /// Normal graph of height `h sin(πτ)` over `γ([s_a, s_a + w])`.
    fn bump(&self, s_a: f64, w: f64, h: f64, k: usize) -> Vec<f64> {
        let mut v = vec![s_a, s_a + w];
        for i in 1..k {
            let tau = i as f64 / k as f64;
            let s = s_a + w * tau;
            v.extend_from_slice(&add(self.curve.point(s), scale(self.curve.normal(s), h * (std::f64::consts::PI * tau).sin())));
        }
        v
    }

    fn region(&self, run: &Run) -> Region2D {
        let p = self.points(run.attached, &run.v);
        if run.attached {
            Region2D::attached(self.curve, self.obstacle, p, run.v[0], run.v[1], self.curve.length() / 4096.0)
        } else {
            Region2D::detached(self.obstacle, p)
        }
    }
}

fn levels(resolution: usize) -> (usize, usize) {
    let mut k = resolution.max(4);
    let mut levels = 1;
    while k > 16 && k.is_multiple_of(2) {
        k /= 2;
        levels += 1;
    }
    (k, levels)
}

fn restart_rng(seed: u64, j: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(j as u64 + 1))
}

/// Runs every start and keeps the minimum by `(length, start index)`.
fn best_run(problem: &Problem, starts: Vec<(bool, Vec<f64>)>, opts: &SolverOptions) -> Option<Run> {
    let (_, levels) = levels(opts.resolution);
    starts
        .into_iter()
        .filter_map(|(attached, v)| problem.solve_from(attached, v, levels, opts.max_iter))
        .fold(None, |best: Option<Run>, r| match best {
            Some(b) if b.length <= r.length => Some(b),
            _ => Some(r),
        })
}

fn random_starts(problem: &Problem, window: Option<(f64, f64)>, opts: &SolverOptions) -> Vec<(bool, Vec<f64>)> {
    let (k0, _) = levels(opts.resolution);
    let rho = (2.0 * problem.mass / std::f64::consts::PI).sqrt();
    let total = problem.curve.length();
    (0..opts.restarts)
        .map(|j| {
            let mut rng = restart_rng(opts.seed, j);
            let u = Uniform::new(0.0f64, 1.0).expect("range");
            let (w, s_a) = match window {
                Some((a, b)) => {
                    let w = (2.0 * rho * (0.5 + u.sample(&mut rng))).min(0.95 * (b - a));
                    (w, a + (b - a - w) * u.sample(&mut rng))
                }
                None => {
                    let w = (2.0 * rho * (0.5 + u.sample(&mut rng))).min(0.9 * total);
                    (w, total * u.sample(&mut rng))
                }
            };
            let h = std::f64::consts::PI * problem.mass / (2.0 * w);
            (true, problem.bump(s_a, w, h, k0))
        })
        .collect()
}

/// Local-search profile value at mass `m` outside the planar obstacle `c`,
/// compared against the closed-form candidates.
pub fn solve_profile_2d(c: &ConvexObstacle, m: f64, opts: &SolverOptions) -> Result<ProfilePoint> {
    if !(m > 0.0) {
        return Err(Error::NegativeMass(m));
    }
    let curve = BoundaryCurve::new(c)?;
    let problem = Problem { curve: &curve, obstacle: c, mass: m, radius: opts.radius, container: None, tol: 1e-12 * m.sqrt().max(1.0) };
    let mut starts = random_starts(&problem, None, opts);
    // Bumps centred on each edge: random starts straddling a corner can
    // stall there, since the objective has a kink when an endpoint crosses it.
    let (k0, _) = levels(opts.resolution);
    let rho = (2.0 * m / std::f64::consts::PI).sqrt();
    for (s0, len) in curve.segments() {
        let w = (2.0 * rho).min(0.9 * len);
        starts.push((true, problem.bump(s0 + 0.5 * (len - w), w, std::f64::consts::PI * m / (2.0 * w), k0)));
    }
    // Detached starts: a regular polygon one radius away from C, and one at
    // the centre of B_R for scenes where C is out of reach.
    let r = (m / std::f64::consts::PI).sqrt();
    for centre in [add(curve.point(0.0), scale(curve.normal(0.0), 2.0 * r)), [0.0, 0.0]] {
        let mut disk = Vec::with_capacity(2 * k0);
        for i in 0..k0 {
            let (s, co) = (std::f64::consts::TAU * i as f64 / k0 as f64).sin_cos();
            disk.extend_from_slice(&[centre[0] + r * co, centre[1] + r * s]);
        }
        starts.push((false, disk));
    }
    let run = best_run(&problem, starts, opts).ok_or_else(|| Error::InvalidParameter(format!("no feasible start for mass {m}")))?;
    let candidate = candidate_profile(c, m)?;
    let gap = run.length - candidate.value;
    let family = match () {
        _ if !run.attached => Family::Disk,
        _ if gap.abs() <= 1e-3 * candidate.value => candidate.family,
        _ => Family::Chain,
    };
    Ok(ProfilePoint {
        mass: m,
        value: run.length,
        minimizer: problem.region(&run),
        method: Method::LocalSearch,
        family,
        candidate: candidate.value,
        gap: Some(gap),
        converged: run.converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaPoint {
    pub eta: f64,
    pub mass: f64,
    /// `|Ω_0 ∖ C_η|`.
    pub m_eta: f64,
    pub value: f64,
    /// Whether `m ≥ m_η − tol`, so that the minimizer is `Ω_0 ∖ C_η` itself.
    pub saturated: bool,
    pub region: Region2D,
    pub converged: bool,
}

/// Parameter of the point where segment `pq` crosses `∂C` (`sd(p) ≤ 0 <
/// sd(q)` or the reverse), by bisection.
fn crossing(c: &ConvexObstacle, p: P2, q: P2) -> P2 {
    let (mut a, mut b) = (p, q);
    let inside_a = c.signed_distance(&a) <= 0.0;
    for _ in 0..200 {
        let mid = scale(add(a, b), 0.5);
        if (c.signed_distance(&mid) <= 0.0) == inside_a {
            a = mid;
        } else {
            b = mid;
        }
        if dist(a, b) < 1e-15 {
            break;
        }
    }
    scale(add(a, b), 0.5)
}

/// `Ω_0 ∖ C_η` for a convex container whose boundary leaves `C_η` along a
/// single run.
fn saturated_region(curve: &BoundaryCurve, c_eta: &ConvexObstacle, container: &[P2]) -> Result<Region2D> {
    let n = container.len();
    let tol = 1e-12;
    let out: Vec<bool> = container.iter().map(|p| c_eta.signed_distance(p) > tol).collect();
    let starts: Vec<usize> = (0..n).filter(|&i| out[i] && !out[(i + n - 1) % n]).collect();
    if starts.len() != 1 {
        return Err(Error::InvalidParameter(format!(
            "container boundary leaves the dilated obstacle in {} runs; exactly one is supported",
            starts.len()
        )));
    }
    let i0 = starts[0];
    let mut chain = vec![crossing(c_eta, container[(i0 + n - 1) % n], container[i0])];
    let mut i = i0;
    while out[i] {
        chain.push(container[i]);
        i = (i + 1) % n;
    }
    chain.push(crossing(c_eta, container[(i + n - 1) % n], container[i]));
    let s_a = curve.nearest(chain[0]);
    let k = chain.len() - 1;
    chain[0] = curve.point(s_a);
    let s_b_raw = curve.nearest(chain[k]);
    chain[k] = curve.point(s_b_raw);
    let s_b = s_a + (s_b_raw - s_a).rem_euclid(curve.length());
    Ok(Region2D::attached(curve, c_eta, chain, s_a, s_b, curve.length() / 8192.0))
}

/// `m_η = |Ω_0 ∖ C_η|` for a convex container `Ω_0`.
pub fn eta_mass(c: &ConvexObstacle, omega0: &Region2D, eta: f64) -> Result<f64> {
    let c_eta = ConvexObstacle::dilation(c.clone(), eta)?;
    let curve = BoundaryCurve::new(&c_eta)?;
    Ok(saturated_region(&curve, &c_eta, &omega0.boundary)?.area)
}

/// `I_η(m)`: least free length outside `C_η = C + B_η` among regions of
/// area `m` inside the convex container `Ω_0`.
pub fn eta_profile(c: &ConvexObstacle, omega0: &Region2D, eta: f64, m: f64, opts: &SolverOptions) -> Result<EtaPoint> {
    if !(m > 0.0) {
        return Err(Error::NegativeMass(m));
    }
    if !(eta >= 0.0) {
        return Err(Error::InvalidParameter("dilation must be nonnegative".into()));
    }
    let container = omega0.boundary.as_slice();
    let n = container.len();
    let convex = (0..n).all(|i| {
        cross(sub(container[(i + 1) % n], container[i]), sub(container[(i + 2) % n], container[(i + 1) % n])) >= -1e-12
    });
    if !convex {
        return Err(Error::InvalidParameter("container must be convex".into()));
    }
    let c_eta = ConvexObstacle::dilation(c.clone(), eta)?;
    let curve = BoundaryCurve::new(&c_eta)?;
    let full = saturated_region(&curve, &c_eta, container)?;
    let m_eta = full.area;
    let tol = 1e-9 * m_eta;
    if m > m_eta + tol {
        return Err(Error::InfeasibleMass { mass: m, available: m_eta });
    }
    if m >= m_eta - tol {
        return Ok(EtaPoint { eta, mass: m, m_eta, value: full.free_length, saturated: true, region: full, converged: true });
    }
    let problem = Problem {
        curve: &curve,
        obstacle: &c_eta,
        mass: m,
        radius: opts.radius,
        container: Some(container),
        tol: 1e-12 * m.sqrt().max(1.0),
    };
    let (k0, _) = levels(opts.resolution);
    let s_a = curve.nearest(full.free_chain[0]);
    let s_b = s_a + full.wet_length;
    let mut starts = random_starts(&problem, Some((s_a, s_b)), opts);
    starts.insert(0, (true, shrunk_start(&problem, &full, s_a, s_b, k0)));
    let run = best_run(&problem, starts, opts).ok_or_else(|| Error::InvalidParameter(format!("no feasible start for mass {m}")))?;
    Ok(EtaPoint {
        eta,
        mass: m,
        m_eta,
        value: run.length,
        saturated: false,
        region: problem.region(&run),
        converged: run.converged,
    })
}

/// The saturated chain pulled toward `∂C_η` along normals until its area is
/// `m`; convex combinations keep it inside the container.
fn shrunk_start(problem: &Problem, full: &Region2D, s_a: f64, s_b: f64, k: usize) -> Vec<f64> {
    let chain = &full.free_chain;
    let total: f64 = chain.windows(2).map(|w| dist(w[0], w[1])).sum();
    // Resample the saturated chain at k + 1 points by arclength.
    let mut q = Vec::with_capacity(k + 1);
    let mut acc = 0.0;
    let mut seg = 0;
    for i in 0..=k {
        let target = total * i as f64 / k as f64;
        while seg + 1 < chain.len() - 1 && acc + dist(chain[seg], chain[seg + 1]) < target {
            acc += dist(chain[seg], chain[seg + 1]);
            seg += 1;
        }
        let l = dist(chain[seg], chain[seg + 1]);
        let t = ((target - acc) / l).clamp(0.0, 1.0);
        q.push(add(chain[seg], scale(sub(chain[seg + 1], chain[seg]), t)));
    }
    let base: Vec<P2> = q.iter().map(|p| problem.curve.point(problem.curve.nearest(*p))).collect();
    let make = |lam: f64| {
        let mut v = vec![s_a, s_b];
        for i in 1..k {
            v.extend_from_slice(&add(base[i], scale(sub(q[i], base[i]), lam)));
        }
        v
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if problem.area(true, &make(mid)) < problem.mass {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    make(0.5 * (lo + hi))
}
