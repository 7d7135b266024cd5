//! Total positive curvature `K^+(Σ)` of polytopal surfaces outside a convex
//! obstacle, the contact-angle gate and the inequality/stability checks.
//!
//! A surface is handled through its vertex set only: a direction `ν` is a
//! support direction at some point of `Σ ∖ C` iff the support set of the
//! vertices in direction `ν` contains a vertex off the obstacle, up to a null
//! set of directions with ties.

pub mod mesh;
pub mod scenes;
mod support;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::convex::hull::Hull3;
use crate::convex::{self, width, ConvexObstacle, PointCloud};
use crate::linalg::{dot, norm, solve, sub};
use crate::mc::{self, McEstimate, McPlan, Tally};
use crate::sphere::{cap_measure, sphere_measure, Direction};
use crate::{Error, Result};

pub use mesh::Mesh;
use support::SupportIndex;

/// Relative contact tolerance: vertices within `1e-7·r` of `∂C` are contact.
pub const CONTACT_TOL_REL: f64 = 1e-7;

/// `Σ = closure(∂Ω ∖ C)` given by a simplicial mesh of `∂Ω` and the obstacle.
#[derive(Clone)]
pub struct Surface {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<Vec<usize>>,
    pub contact: Vec<bool>,
    pub obstacle: ConvexObstacle,
    pub radius_bound: f64,
    pub contact_tol: f64,
    hull: Option<Arc<Hull3>>,
    index: Arc<SupportIndex>,
}

impl std::fmt::Debug for Surface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Surface")
            .field("dim", &self.dim)
            .field("vertices", &self.vertices.len())
            .field("facets", &self.facets.len())
            .field("contact", &self.contact.iter().filter(|c| **c).count())
            .finish()
    }
}

impl Surface {
    /// Validates the mesh, flags contact vertices and builds the support
    /// index. Vertices deeper than the contact tolerance inside `C` are
    /// rejected.
    pub fn new(
        dim: usize,
        vertices: Vec<Vec<f64>>,
        facets: Vec<Vec<usize>>,
        obstacle: ConvexObstacle,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if vertices.is_empty() {
            return Err(Error::Empty("surface vertices"));
        }
        if obstacle.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: obstacle.dim() });
        }
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
            }
        }
        for (fi, f) in facets.iter().enumerate() {
            if f.len() != dim || f.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::BadFacet { facet: fi });
            }
        }
        let r = vertices.iter().map(|v| norm(v)).fold(0.0, f64::max);
        let contact_tol = CONTACT_TOL_REL * r.max(f64::MIN_POSITIVE);
        let mut contact = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            let sd = obstacle.signed_distance(v);
            if sd < -contact_tol {
                return Err(Error::VertexInsideObstacle { index: i, depth: -sd });
            }
            contact.push(sd <= contact_tol);
        }
        let hull = if dim == 3 { Hull3::new(&vertices).map(Arc::new) } else { None };
        let tie = 1e-9 * r.max(1.0);
        let index = Arc::new(SupportIndex::new(&vertices, &contact, tie, hull.as_deref()));
        Ok(Self { dim, vertices, facets, contact, obstacle, radius_bound: r, contact_tol, hull, index })
    }

    pub fn from_mesh(mesh: Mesh, obstacle: ConvexObstacle) -> Result<Self> {
        let dim = mesh.vertices.first().map_or(0, |v| v.len());
        Self::new(dim, mesh.vertices, mesh.facets, obstacle)
    }

    pub fn mesh(&self) -> Mesh {
        Mesh { vertices: self.vertices.clone(), facets: self.facets.clone() }
    }

    /// The image of `(Σ, C)` under `x ↦ λx`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::from_mesh(self.mesh().scaled(lambda), self.obstacle.scaled(lambda))
    }

    pub fn contact_indices(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&i| self.contact[i]).collect()
    }

    pub fn has_contact(&self) -> bool {
        self.contact.iter().any(|c| *c)
    }

    /// Indices of the support set of the vertex set in direction `ν`.
    pub fn support(&self, nu: &[f64]) -> Vec<usize> {
        self.index.support(nu)
    }

    /// Whether `ν` is a support direction at a vertex off the obstacle.
    pub fn accepts(&self, nu: &[f64]) -> bool {
        self.index.accepts(nu)
    }

    /// Generators of the normal cone of the vertex hull at vertex `i`; empty
    /// if `i` is interior to the hull.
    fn cone_generators(&self, i: usize) -> Vec<Vec<f64>> {
        let x = &self.vertices[i];
        if let Some(h) = &self.hull {
            let tol = 1e-9 * self.radius_bound.max(1.0);
            let faces: Vec<usize> = if h.incident[i].is_empty() {
                (0..h.faces.len()).collect()
            } else {
                h.incident[i].clone()
            };
            let mut out: Vec<Vec<f64>> = Vec::new();
            for fi in faces {
                let n = h.normals[fi];
                if dot(&n, x) >= h.offsets[fi] - tol && !out.iter().any(|g| dot(g, &n) > 1.0 - 1e-12) {
                    out.push(n.to_vec());
                }
            }
            return out;
        }
        let cloud = PointCloud::from_points(self.dim, self.vertices.clone())
            .expect("validated vertices");
        let g = convex::normal_cone(&cloud, i);
        let mut out = g.rays;
        for l in g.lineality {
            out.push(l.iter().map(|v| -v).collect());
            out.push(l);
        }
        out
    }
}

/// JSON form `{"dim", "vertices", "facets", "obstacle"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDoc {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<Vec<usize>>,
    pub obstacle: ConvexObstacle,
}

impl SurfaceDoc {
    pub fn build(self) -> Result<Surface> {
        Surface::new(self.dim, self.vertices, self.facets, self.obstacle)
    }

    pub fn from_surface(s: &Surface) -> Self {
        Self {
            dim: s.dim,
            vertices: s.vertices.clone(),
            facets: s.facets.clone(),
            obstacle: s.obstacle.clone(),
        }
    }
}

/// Monte Carlo `K^+(Σ)`.
pub fn total_positive_curvature(s: &Surface, plan: &McPlan) -> McEstimate {
    let total = sphere_measure(s.dim).expect("validated dimension");
    let hits = mc::count_hits(plan, s.dim, |nu| s.accepts(nu));
    McEstimate::from_hits(hits, plan.samples, plan.seed, total)
}

#[derive(Default)]
struct PairTally {
    a: u64,
    b: u64,
    ab: u64,
}

impl Tally for PairTally {
    fn merge(&mut self, o: Self) {
        self.a += o.a;
        self.b += o.b;
        self.ab += o.ab;
    }
}

/// `K^+` and the measure of a reference set estimated on the same samples,
/// with the standard error of their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedEstimate {
    pub kplus: McEstimate,
    pub reference: McEstimate,
    /// `kplus − reference`.
    pub diff: f64,
    pub diff_stderr: f64,
}

pub fn kplus_paired<F>(s: &Surface, reference: F, plan: &McPlan) -> PairedEstimate
where
    F: Fn(&[f64]) -> bool + Sync,
{
    let total = sphere_measure(s.dim).expect("validated dimension");
    let t = mc::accumulate::<PairTally, _>(plan, s.dim, |t, nu| {
        let a = s.accepts(nu);
        let b = reference(nu);
        t.a += u64::from(a);
        t.b += u64::from(b);
        t.ab += u64::from(a && b);
    });
    let n = plan.samples as f64;
    let (pa, pb, pab) = (t.a as f64 / n, t.b as f64 / n, t.ab as f64 / n);
    let mean = pa - pb;
    let var = (pa + pb - 2.0 * pab - mean * mean).max(0.0);
    PairedEstimate {
        kplus: McEstimate::from_hits(t.a, plan.samples, plan.seed, total),
        reference: McEstimate::from_hits(t.b, plan.samples, plan.seed, total),
        diff: mean * total,
        diff_stderr: (var / n).sqrt() * total,
    }
}

/// `max ν·c` over unit `ν` in the cone spanned by `gens`, exact when the
/// cone's boundary is made of two-dimensional faces (`N ≤ 3`).
fn cone_max(gens: &[Vec<f64>], c: &[f64], c_in_cone: bool) -> f64 {
    if c_in_cone {
        return 1.0;
    }
    let mut best = f64::NEG_INFINITY;
    for (i, a) in gens.iter().enumerate() {
        best = best.max(dot(a, c));
        for b in &gens[i + 1..] {
            let ab = dot(a, b);
            if ab < -1.0 + 1e-12 {
                continue;
            }
            let gram = vec![vec![1.0, ab], vec![ab, 1.0]];
            if let Some(w) = solve(&gram, &[dot(a, c), dot(b, c)], 1e-14) {
                if w[0] >= 0.0 && w[1] >= 0.0 {
                    let p: Vec<f64> = a.iter().zip(b).map(|(x, y)| w[0] * x + w[1] * y).collect();
                    let l = norm(&p);
                    if l > 0.0 {
                        best = best.max(dot(&p, c) / l);
                    }
                }
            }
        }
    }
    best
}

/// Result of the contact-angle gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub has_contact: bool,
    /// `max (ν·ν_C(x) − cos θ0)` over contact vertices `x` and unit
    /// `ν ∈ N_xΣ`; `−∞` without contact.
    pub margin: f64,
    pub worst_vertex: Option<usize>,
    /// The same maximum over the cone generators and `cone_samples` random
    /// conic combinations per vertex (never above `margin`).
    pub sampled_margin: f64,
}

impl GateReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.margin <= tol
    }
}

/// Largest violation of `ν·ν_C(x) ≤ cos θ0` over contact vertices. Normal
/// cones come from the incident hull facets (exact in `N = 3`) or from ray
/// enumeration; at non-smooth obstacle points every extreme obstacle normal
/// is tested.
pub fn contact_angle_margin(s: &Surface, theta0: f64, cone_samples: usize, seed: u64) -> GateReport {
    let cos0 = theta0.cos();
    let mut margin = f64::NEG_INFINITY;
    let mut sampled = f64::NEG_INFINITY;
    let mut worst = None;
    let contact = s.contact_indices();
    let mut weights = mc::directions(s.dim.max(2), (cone_samples * contact.len().max(1)) as u64, seed)
        .into_iter();
    let tie = 1e-9 * s.radius_bound.max(1.0);
    for &i in &contact {
        let x = &s.vertices[i];
        let gens = s.cone_generators(i);
        let obst = s
            .obstacle
            .normal_generators(x, s.contact_tol * 2.0)
            .unwrap_or_default();
        for c in &obst {
            let c = c.as_slice();
            let inside = !gens.is_empty() && s.vertices.iter().all(|y| dot(&sub(y, x), c) <= tie);
            if gens.is_empty() {
                continue;
            }
            let m = cone_max(&gens, c, inside) - cos0;
            if m > margin {
                margin = m;
                worst = Some(i);
            }
            for g in &gens {
                sampled = sampled.max(dot(g, c) - cos0);
            }
            for _ in 0..cone_samples {
                let w = weights.next().unwrap_or_default();
                let mut v = vec![0.0; s.dim];
                for (k, g) in gens.iter().enumerate() {
                    let wk = w.get(k % w.len().max(1)).copied().unwrap_or(1.0).abs();
                    for (vi, gi) in v.iter_mut().zip(g) {
                        *vi += wk * gi;
                    }
                }
                if let Some(u) = crate::linalg::normalized(&v) {
                    sampled = sampled.max(dot(&u, c) - cos0);
                }
            }
        }
    }
    GateReport { has_contact: !contact.is_empty(), margin, worst_vertex: worst, sampled_margin: sampled }
}

/// Report of `K^+(Σ) ≥ H^{N-1}(S_{θ0})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CgrReport {
    pub kplus: McEstimate,
    pub bound: f64,
    /// `kplus − bound`.
    pub margin: f64,
    pub violated: bool,
    pub gate: GateReport,
}

/// Runs the inequality check after the gate `contact_angle_margin ≤ gate_tol`.
pub fn cgr_inequality_check(s: &Surface, theta0: f64, gate_tol: f64, plan: &McPlan) -> Result<CgrReport> {
    let gate = contact_angle_margin(s, theta0, 8, plan.seed ^ 0x9a7e);
    if !gate.passes(gate_tol) {
        return Err(Error::GateFailed { margin: gate.margin, tolerance: gate_tol });
    }
    let bound = cap_measure(s.dim, theta0)?;
    let kplus = total_positive_curvature(s, plan);
    let margin = kplus.value - bound;
    Ok(CgrReport { kplus, bound, margin, violated: margin < -3.0 * kplus.stderr, gate })
}

/// Report of the stability statement: small excess of `K^+` over the cap
/// forces the contact set into a thin slab orthogonal to an obstacle normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub kplus: McEstimate,
    pub cap: f64,
    /// `kplus − cap`.
    pub delta_measured: f64,
    pub witness_x: Vec<f64>,
    pub witness_normal: Direction,
    /// Extent of the contact set along `witness_normal`.
    pub slab_width: f64,
    /// `width(Σ ∩ C)`.
    pub contact_width: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// `kplus ≤ cap + δ`.
    pub hypothesis: bool,
    /// `slab_width ≤ ε`.
    pub conclusion: bool,
}

impl StabilityReport {
    /// False only for a counterexample: hypothesis met, conclusion not.
    pub fn consistent(&self) -> bool {
        !self.hypothesis || self.conclusion
    }
}

/// Interior directions scanned per pair of obstacle normal generators.
const CONE_SCAN: usize = 64;

/// Stability check with gate relaxed to `δ`. The witness normal minimizes
/// the contact extent over generators and a scan of their pairwise arcs.
pub fn cgr_stability_check(
    s: &Surface,
    theta0: f64,
    epsilon: f64,
    delta: f64,
    plan: &McPlan,
) -> Result<StabilityReport> {
    let gate = contact_angle_margin(s, theta0, 0, 0);
    if !gate.passes(delta) {
        return Err(Error::GateFailed { margin: gate.margin, tolerance: delta });
    }
    let contact = s.contact_indices();
    if contact.is_empty() {
        return Err(Error::Empty("contact set"));
    }
    let cap = cap_measure(s.dim, theta0)?;
    let kplus = total_positive_curvature(s, plan);
    let pts: Vec<Vec<f64>> = contact.iter().map(|&i| s.vertices[i].clone()).collect();
    let mut best: Option<(f64, usize, Direction)> = None;
    let mut consider = |n: Direction, i: usize| {
        let e = convex::extent(&pts, n.as_slice());
        if best.as_ref().is_none_or(|b| e < b.0) {
            best = Some((e, i, n));
        }
    };
    for &i in &contact {
        let gens = s.obstacle.normal_generators(&s.vertices[i], s.contact_tol * 2.0)?;
        // Cone interiors matter at edges: scan each pair of generators.
        for (k, a) in gens.iter().enumerate() {
            consider(a.clone(), i);
            for b in &gens[k + 1..] {
                for j in 1..CONE_SCAN {
                    let w = j as f64 / CONE_SCAN as f64;
                    let v: Vec<f64> =
                        a.as_slice().iter().zip(b.as_slice()).map(|(p, q)| (1.0 - w) * p + w * q).collect();
                    if let Ok(d) = Direction::normalize(&v) {
                        consider(d, i);
                    }
                }
            }
        }
    }
    let (slab_width, wi, witness_normal) = best.expect("contact set is nonempty");
    let cloud = PointCloud::from_points(s.dim, pts)?;
    let contact_width = width(&cloud, 16, 1e-10).value;
    let delta_measured = kplus.value - cap;
    let hypothesis = kplus.value <= cap + delta;
    Ok(StabilityReport {
        kplus,
        cap,
        delta_measured,
        witness_x: s.vertices[wi].clone(),
        witness_normal,
        slab_width,
        contact_width,
        epsilon,
        delta,
        hypothesis,
        conclusion: slab_width <= epsilon,
    })
}

/// Directions of the restricted bundle `N^{σ,θ}(Σ∩C)` (with `σ = ν_C`) that
/// are not support directions at vertices off the obstacle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub in_bundle: u64,
    pub violations: u64,
    pub samples: u64,
    /// False when the contact-angle gate fails; counts are still reported.
    pub applicable: bool,
    pub gate: GateReport,
}

#[derive(Default)]
struct InclusionTally {
    in_bundle: u64,
    violations: u64,
}

impl Tally for InclusionTally {
    fn merge(&mut self, o: Self) {
        self.in_bundle += o.in_bundle;
        self.violations += o.violations;
    }
}

pub fn bundle_inclusion_check(
    s: &Surface,
    theta: f64,
    theta0: f64,
    gate_tol: f64,
    plan: &McPlan,
) -> Result<InclusionReport> {
    if !(theta >= 0.0 && theta < theta0) {
        return Err(Error::InvalidAngle(theta));
    }
    let gate = contact_angle_margin(s, theta0, 0, 0);
    let contact = s.contact_indices();
    if contact.is_empty() {
        return Ok(InclusionReport { in_bundle: 0, violations: 0, samples: plan.samples, applicable: true, gate });
    }
    let pts: Vec<Vec<f64>> = contact.iter().map(|&i| s.vertices[i].clone()).collect();
    let sigma: Vec<Direction> = contact
        .iter()
        .map(|&i| s.obstacle.normal(&s.vertices[i], s.contact_tol * 2.0).map(|n| n.normal))
        .collect::<Result<_>>()?;
    let cloud = PointCloud::from_points(s.dim, pts)?;
    let tie = 1e-9 * s.radius_bound.max(1.0);
    let cos_t = theta.cos();
    let t = mc::accumulate::<InclusionTally, _>(plan, s.dim, |t, nu| {
        let mut m = f64::NEG_INFINITY;
        for p in &cloud.points {
            m = m.max(dot(p, nu));
        }
        let inb = cloud
            .points
            .iter()
            .zip(&sigma)
            .any(|(p, sg)| dot(p, nu) >= m - tie && dot(nu, sg.as_slice()) >= cos_t);
        if inb {
            t.in_bundle += 1;
            if !s.accepts(nu) {
                t.violations += 1;
            }
        }
    });
    Ok(InclusionReport {
        in_bundle: t.in_bundle,
        violations: t.violations,
        samples: plan.samples,
        applicable: gate.passes(gate_tol),
        gate,
    })
}
