//! Invariants of minimizers: weak Young's law, density bounds and the
//! wet-versus-free length inequality.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use super::geom2::{add, circumcenter, disk_polygon_area, dot, norm, scale, segment_in_disk, sub, P2};
use super::{BoundaryCurve, Region2D};
use crate::convex::ConvexObstacle;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YoungReport {
    /// `max ν·ν_C` over both endpoints and all obstacle normals there.
    pub violation: f64,
    /// Angle in radians between `Σ` and `∂C` inside the region, per endpoint.
    pub angles: Vec<f64>,
}

/// Unit tangent of the chain at `p[0]` pointing into the chain, from the
/// circle through `p[0..3]`.
fn end_tangent(p0: P2, p1: P2, p2: P2) -> P2 {
    let chord = sub(p1, p0);
    let t = match circumcenter(p0, p1, p2) {
        Some(c) => {
            let r = sub(p0, c);
            [-r[1], r[0]]
        }
        None => chord,
    };
    let t = scale(t, 1.0 / norm(t));
    if dot(t, chord) < 0.0 {
        scale(t, -1.0)
    } else {
        t
    }
}

/// Weak Young's law `ν·ν_C ≤ 0` at the endpoints of the free boundary, with
/// `ν` the outer normal of the region. Detached regions report `−∞`.
pub fn weak_young_check(region: &Region2D) -> Result<YoungReport> {
    let c = &region.free_chain;
    if !region.is_attached() || c.len() < 3 {
        return Ok(YoungReport { violation: f64::NEG_INFINITY, angles: Vec::new() });
    }
    let k = c.len() - 1;
    // Travel directions: leaving A, arriving at B.
    let ta = end_tangent(c[0], c[1], c[2]);
    let tb = scale(end_tangent(c[k], c[k - 1], c[k - 2]), -1.0);
    let mut violation = f64::NEG_INFINITY;
    let mut angles = Vec::new();
    for (p, t) in [(c[0], ta), (c[k], tb)] {
        let nu = [t[1], -t[0]];
        let tol = 1e-9 * norm(p).max(1.0);
        for g in region.obstacle.normal_generators(&p, tol)? {
            let g = [g.as_slice()[0], g.as_slice()[1]];
            let v = dot(nu, g);
            violation = violation.max(v);
            angles.push(std::f64::consts::FRAC_PI_2 - v.clamp(-1.0, 1.0).asin());
        }
    }
    Ok(YoungReport { violation, angles })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    /// `min |Ω ∩ B_r(x)| / r²` over free-boundary vertices `x` and radii.
    pub min_density: f64,
    /// `max P(Ω; B_r(x) ∖ C) / r` over the same samples.
    pub max_perimeter_ratio: f64,
    pub radii: Vec<f64>,
    pub samples: usize,
}

impl DensityReport {
    pub fn passes(&self, c1: f64, tol: f64) -> bool {
        self.min_density >= c1 - tol && self.max_perimeter_ratio <= 2.0 * std::f64::consts::PI + tol
    }
}

/// Default radii `ρ·{1/16, 1/8, 1/4, 1/2}` with `ρ = √(2m/π)`.
pub fn default_radii(area: f64) -> Vec<f64> {
    let rho = (2.0 * area / std::f64::consts::PI).sqrt();
    [16.0, 8.0, 4.0, 2.0].iter().map(|d| rho / d).collect()
}

/// Density ratios at the free-boundary vertices, exact for the polygon.
pub fn density_check(region: &Region2D, radii: &[f64]) -> DensityReport {
    let chain = &region.free_chain;
    let mut min_density = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    for &x in chain {
        for &r in radii {
            min_density = min_density.min(disk_polygon_area(x, r, &region.boundary) / (r * r));
            let free: f64 = chain.windows(2).map(|w| segment_in_disk(w[0], w[1], x, r)).sum();
            max_ratio = max_ratio.max(free / r);
        }
    }
    DensityReport { min_density, max_perimeter_ratio: max_ratio, radii: radii.to_vec(), samples: chain.len() }
}

/// `c_1` for planar minimizers: the density constant of the half-disk of
/// mass `m` on a long edge, with `k` free vertices and the default radii.
pub fn half_disk_density_constant(m: f64, k: usize) -> Result<f64> {
    let rho = (2.0 * m / std::f64::consts::PI).sqrt();
    let c = ConvexObstacle::aabb(&[-4.0 * rho, -4.0 * rho], &[4.0 * rho, 0.0])?;
    let curve = BoundaryCurve::new(&c)?;
    let sc = curve.nearest([0.0, 0.0]);
    let chain: Vec<P2> = (0..=k)
        .map(|i| {
            let (s, co) = (std::f64::consts::PI * i as f64 / k as f64).sin_cos();
            [rho * co, rho * s]
        })
        .collect();
    let region = Region2D::attached(&curve, &c, chain, sc - rho, sc + rho, rho / k as f64);
    Ok(density_check(&region, &default_radii(m)).min_density)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerconvReport {
    pub wet: f64,
    pub free: f64,
}

impl PerconvReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.wet <= self.free + tol
    }
}

pub fn perconv_check(region: &Region2D) -> PerconvReport {
    PerconvReport { wet: region.wet_length, free: region.free_length }
}

/// `{γ(s) + t ν(s) : s ∈ [s_a, s_a + w], 0 ≤ t ≤ h(s)}` with `h` given on a
/// uniform grid of `τ = (s − s_a)/w ∈ [0, 1]`, `h(0) = h(1) = 0`. At corners
/// of `∂C` the chain fans around the normal cone at the interpolated height,
/// so it never cuts into `C`. The wet length is the exact arc length of `∂C`.
pub fn normal_graph_region(c: &ConvexObstacle, s_a: f64, w: f64, heights: &[f64]) -> Result<Region2D> {
    let curve = BoundaryCurve::new(c)?;
    let n = heights.len() - 1;
    let total = curve.length();
    let eps = 1e-12 * total.max(1.0);
    let mut corners: Vec<f64> = Vec::new();
    let base = (s_a / total).floor() * total;
    for lap in [base - total, base, base + total, base + 2.0 * total] {
        for (sc, ..) in curve.corners() {
            let s = lap + sc;
            if s > s_a + eps && s < s_a + w - eps {
                corners.push(s);
            }
        }
    }
    corners.sort_by(f64::total_cmp);
    let height = |s: f64| {
        let x = (s - s_a) / w * n as f64;
        let i = (x.floor() as usize).min(n - 1);
        let f = x - i as f64;
        (1.0 - f) * heights[i] + f * heights[i + 1]
    };
    let mut chain = Vec::with_capacity(n + 1 + FAN * corners.len());
    let mut next = corners.iter().peekable();
    for i in 0..=n {
        let s = s_a + w * i as f64 / n as f64;
        while let Some(&&sc) = next.peek() {
            if sc > s + eps {
                break;
            }
            next.next();
            let (n0, n1) = (curve.normal(sc - eps), curve.normal(sc));
            let (a0, mut a1) = (n0[1].atan2(n0[0]), n1[1].atan2(n1[0]));
            // The outer normal turns counterclockwise at a convex corner.
            while a1 < a0 {
                a1 += std::f64::consts::TAU;
            }
            let (p, h) = (curve.point(sc), height(sc));
            for k in 0..=FAN {
                let a = a0 + (a1 - a0) * k as f64 / FAN as f64;
                chain.push(add(p, scale([a.cos(), a.sin()], h)));
            }
        }
        if corners.iter().any(|&sc| (sc - s).abs() <= eps) {
            continue;
        }
        chain.push(add(curve.point(s), scale(curve.normal(s), heights[i])));
    }
    Ok(Region2D::attached(&curve, c, chain, s_a, s_a + w, w / n as f64))
}

/// Points per corner fan in [`normal_graph_region`].
const FAN: usize = 16;

/// A random normal-graph region: smooth positive bump, or a thin sliver
/// along a long stretch of `∂C` when `sliver` is set.
pub fn random_region(c: &ConvexObstacle, seed: u64, sliver: bool) -> Result<Region2D> {
    let curve = BoundaryCurve::new(c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = Uniform::new(0.0f64, 1.0).expect("range");
    let total = curve.length();
    let s_a = total * u.sample(&mut rng);
    let w = total * if sliver { 0.5 + 0.45 * u.sample(&mut rng) } else { 0.05 + 0.6 * u.sample(&mut rng) };
    let amp = if sliver { 1e-4 * w } else { w * (0.05 + 0.5 * u.sample(&mut rng)) };
    let modes: Vec<f64> = (0..4).map(|_| u.sample(&mut rng)).collect();
    let n = 2048;
    let heights: Vec<f64> = (0..=n)
        .map(|i| {
            let tau = i as f64 / n as f64;
            let base = (std::f64::consts::PI * tau).sin();
            let wiggle: f64 = modes
                .iter()
                .enumerate()
                .map(|(k, a)| 0.3 * a * ((k + 2) as f64 * std::f64::consts::PI * tau).sin().powi(2) / (k + 1) as f64)
                .sum();
            amp * base * (1.0 + wiggle)
        })
        .collect();
    normal_graph_region(c, s_a, w, &heights)
}
