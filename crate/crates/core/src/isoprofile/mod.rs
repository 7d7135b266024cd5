//! Relative isoperimetric profiles outside convex obstacles.
//!
//! Everything numerical is planar: regions are polygons whose boundary is a
//! free chain `A → B` (counter-clockwise around the region) followed by the
//! wet part of `∂C` traversed backwards from `B` to `A`. In any dimension
//! the half-space profile is available in closed form.

mod boundary;
mod candidates;
mod checks;
pub mod geom2;
mod solver;

use serde::{Deserialize, Serialize};

pub use boundary::BoundaryCurve;
pub use candidates::{arc_family_gap, candidate_profile, orthogonal_arc_value, Candidate};
pub use checks::{
    default_radii, density_check, half_disk_density_constant, normal_graph_region, perconv_check, random_region,
    weak_young_check, DensityReport, PerconvReport, YoungReport,
};
pub use solver::{eta_mass, eta_profile, solve_profile_2d, EtaPoint, SolverOptions};

use crate::convex::ConvexObstacle;
use crate::sphere::unit_ball_volume;
use crate::{Error, Result};
use geom2::{cross, dist, P2};

/// `I_H(m) = N (ω_N/2)^{1/N} m^{(N−1)/N}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceProfile {
    pub dim: usize,
}

impl HalfSpaceProfile {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self { dim })
    }

    pub fn value(&self, m: f64) -> Result<f64> {
        if !(m >= 0.0) {
            return Err(Error::NegativeMass(m));
        }
        let n = self.dim as f64;
        Ok(n * (unit_ball_volume(self.dim)? / 2.0).powf(1.0 / n) * m.powf((n - 1.0) / n))
    }

    /// `I_H′(m)`, the mean curvature `(N−1)/ρ` of the half ball of mass `m`.
    pub fn derivative(&self, m: f64) -> Result<f64> {
        if !(m > 0.0) {
            return Err(Error::NegativeMass(m));
        }
        let n = self.dim as f64;
        Ok(self.value(m)? * (n - 1.0) / (n * m))
    }

    /// Radius of the half ball of mass `m`.
    pub fn radius(&self, m: f64) -> Result<f64> {
        if !(m >= 0.0) {
            return Err(Error::NegativeMass(m));
        }
        Ok((2.0 * m / unit_ball_volume(self.dim)?).powf(1.0 / self.dim as f64))
    }
}

pub fn half_space_profile(dim: usize, m: f64) -> Result<f64> {
    HalfSpaceProfile::new(dim)?.value(m)
}

/// A bounded planar region outside a convex obstacle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region2D {
    /// Counter-clockwise polygon; the closing edge is implicit.
    pub boundary: Vec<P2>,
    /// Edges `boundary[i] → boundary[i + 1]` lying on `∂C`.
    pub contact_edges: Vec<usize>,
    /// Exact area of the represented region (wet part on `∂C`, not its
    /// polygonal trace).
    pub area: f64,
    pub obstacle: ConvexObstacle,
    /// The free boundary `Σ`: open from `A` to `B` when the region touches
    /// `C`, closed (first point repeated) otherwise.
    pub free_chain: Vec<P2>,
    pub free_length: f64,
    pub wet_length: f64,
}

fn polyline_length(p: &[P2]) -> f64 {
    p.windows(2).map(|w| dist(w[0], w[1])).sum()
}

/// `½ Σ cross(P_i, P_{i+1})` over an open chain.
pub(crate) fn open_shoelace(p: &[P2]) -> f64 {
    0.5 * p.windows(2).map(|w| cross(w[0], w[1])).sum::<f64>()
}

impl Region2D {
    /// Region bounded by `chain` (from `γ(s_a)` to `γ(s_b)`) and the wet arc
    /// `γ([s_a, s_b])`, sampled with spacing `h` in the polygon.
    pub fn attached(curve: &BoundaryCurve, obstacle: &ConvexObstacle, chain: Vec<P2>, s_a: f64, s_b: f64, h: f64) -> Self {
        let wet = curve.sample(s_a, s_b, h);
        let mut boundary = chain.clone();
        let k = boundary.len() - 1;
        boundary.extend(wet[1..wet.len() - 1].iter().rev());
        let contact_edges = (k..boundary.len()).collect();
        Self {
            area: open_shoelace(&chain) - curve.area_integral(s_a, s_b),
            free_length: polyline_length(&chain),
            wet_length: s_b - s_a,
            boundary,
            contact_edges,
            obstacle: obstacle.clone(),
            free_chain: chain,
        }
    }

    /// A region not touching `C`, from a counter-clockwise polygon.
    pub fn detached(obstacle: &ConvexObstacle, polygon: Vec<P2>) -> Self {
        let mut chain = polygon.clone();
        chain.push(polygon[0]);
        Self {
            area: geom2::polygon_area(&polygon),
            free_length: polyline_length(&chain),
            wet_length: 0.0,
            boundary: polygon,
            contact_edges: Vec::new(),
            obstacle: obstacle.clone(),
            free_chain: chain,
        }
    }

    pub fn is_attached(&self) -> bool {
        !self.contact_edges.is_empty()
    }

    /// Whether the polygon is simple and its vertices avoid the interior of
    /// `C` up to `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        let n = self.boundary.len();
        let outside = self.boundary.iter().all(|p| self.obstacle.signed_distance(p) >= -tol);
        let seg_cross = |a: P2, b: P2, c: P2, d: P2| {
            let o = |p: P2, q: P2, r: P2| cross(geom2::sub(q, p), geom2::sub(r, p));
            o(a, b, c) * o(a, b, d) < 0.0 && o(c, d, a) * o(c, d, b) < 0.0
        };
        let simple = (0..n).all(|i| {
            (i + 2..n).all(|j| {
                if i == 0 && j == n - 1 {
                    return true;
                }
                !seg_cross(self.boundary[i], self.boundary[(i + 1) % n], self.boundary[j], self.boundary[(j + 1) % n])
            })
        });
        outside && simple && self.area > 0.0
    }

    /// Largest curvature of the free chain, from circumradii through
    /// vertices at quarter, half and three-quarter index.
    pub fn free_curvature(&self) -> f64 {
        let c = &self.free_chain;
        let k = c.len() - 1;
        if k < 4 {
            return 0.0;
        }
        let (a, b, d) = (c[k / 4], c[k / 2], c[3 * k / 4]);
        geom2::circumcenter(a, b, d).map_or(0.0, |o| 1.0 / dist(o, a))
    }
}

/// Closed-form family behind a profile value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Half-disk centred on an edge.
    Facet,
    /// Arc meeting a round obstacle orthogonally.
    Arc,
    /// Circular sector around a polygon vertex.
    Sector,
    /// Full disk away from the obstacle.
    Disk,
    /// Polygonal chain without a closed form.
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    CandidateFamily,
    LocalSearch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub mass: f64,
    pub value: f64,
    pub minimizer: Region2D,
    pub method: Method,
    /// The family the minimizer resembles (closest candidate for local
    /// search).
    pub family: Family,
    /// Best closed-form candidate value, `∞` if none is feasible.
    pub candidate: f64,
    /// `value − candidate` when both ran.
    pub gap: Option<f64>,
    /// Whether the local search met its stopping rule.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCheck {
    pub strictly_increasing: bool,
    /// Largest `|ΔI / Δm|` between neighbouring samples.
    pub max_slope: f64,
    pub lambda: f64,
    pub lipschitz: bool,
    /// Indices `i` where the step `i → i + 1` fails either test.
    pub flagged: Vec<usize>,
}

impl ProfileCheck {
    pub fn passes(&self) -> bool {
        self.strictly_increasing && self.lipschitz
    }
}

/// Strict increase and `Λ′`-Lipschitz bound on `(m, I(m))` samples sorted by
/// mass, both up to `tol`.
pub fn profile_monotone_lipschitz_check(samples: &[(f64, f64)], lambda: f64, tol: f64) -> Result<ProfileCheck> {
    if samples.len() < 3 {
        return Err(Error::InvalidParameter("at least 3 profile samples are required".into()));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::InvalidParameter("masses must be strictly increasing".into()));
    }
    let mut flagged = Vec::new();
    let mut inc = true;
    let mut lip = true;
    let mut max_slope = 0.0f64;
    for (i, w) in samples.windows(2).enumerate() {
        let (dm, di) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        max_slope = max_slope.max(di.abs() / dm);
        let up = di > -tol;
        let lp = di.abs() <= lambda * dm + tol;
        inc &= up;
        lip &= lp;
        if !(up && lp) {
            flagged.push(i);
        }
    }
    Ok(ProfileCheck { strictly_increasing: inc, max_slope, lambda, lipschitz: lip, flagged })
}

/// `Λ′` as the largest free-boundary curvature over a profile.
pub fn estimate_lambda(points: &[ProfilePoint]) -> f64 {
    points.iter().map(|p| p.minimizer.free_curvature()).fold(0.0, f64::max)
}
