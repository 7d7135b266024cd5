//! Closed-form competitors: half-disks on edges, sectors at vertices,
//! arcs orthogonal to round obstacles, and free disks.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::geom2::{add, scale, sub, P2};
use super::{BoundaryCurve, Family, Region2D};
use crate::convex::ConvexObstacle;
use crate::{Error, Result};

/// Vertices on each closed-form free curve.
const CANDIDATE_RESOLUTION: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub family: Family,
    pub value: f64,
    pub region: Region2D,
}

/// Centre and radius when `C` is a disk (possibly dilated).
pub(crate) fn as_disk(c: &ConvexObstacle) -> Option<(P2, f64)> {
    match c {
        ConvexObstacle::Ball { center, radius } => Some(([center[0], center[1]], *radius)),
        ConvexObstacle::Dilation { base, eta } => as_disk(base).map(|(o, r)| (o, r + eta)),
        ConvexObstacle::Polytope(_) => None,
    }
}

fn arc_points(center: P2, r: f64, phi0: f64, sweep: f64, k: usize) -> Vec<P2> {
    (0..=k)
        .map(|i| {
            let (s, c) = (phi0 + sweep * i as f64 / k as f64).sin_cos();
            [center[0] + r * c, center[1] + r * s]
        })
        .collect()
}

/// Area outside a disk of radius `a` enclosed by a circle of radius `rho`
/// crossing it orthogonally, and the free length.
fn orthogonal_arc(a: f64, rho: f64) -> (f64, f64) {
    let alpha = (a / rho).atan();
    // a²(atan x − x) with x = ρ/a, by series when cancellation would bite.
    let x = rho / a;
    let defect = if x < 1e-2 {
        let x2 = x * x;
        -x * x2 * (1.0 / 3.0 - x2 * (1.0 / 5.0 - x2 * (1.0 / 7.0 - x2 / 9.0)))
    } else {
        x.atan() - x
    };
    let area = rho * rho * (PI - alpha) - a * a * defect;
    (area, rho * (2.0 * PI - 2.0 * alpha))
}

/// Radius of the orthogonal arc of mass `m` on a disk of radius `a`.
fn orthogonal_radius(a: f64, m: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, (m / PI).sqrt().max(1e-300));
    while orthogonal_arc(a, hi).0 < m {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if orthogonal_arc(a, mid).0 < m {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Free length of the orthogonal-arc region of mass `m` on a disk of radius
/// `a`.
pub fn orthogonal_arc_value(a: f64, m: f64) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::NegativeMass(m));
    }
    if !(a > 0.0) {
        return Err(Error::InvalidParameter("disk radius must be positive".into()));
    }
    Ok(orthogonal_arc(a, orthogonal_radius(a, m)).1)
}

/// `value_arc(m) − I_H(m)` on a disk of radius `a`, strictly positive.
pub fn arc_family_gap(a: f64, m: f64) -> Result<f64> {
    Ok(orthogonal_arc_value(a, m)? - super::half_space_profile(2, m)?)
}

fn facet(curve: &BoundaryCurve, c: &ConvexObstacle, m: f64, h: f64) -> Option<Candidate> {
    let rho = (2.0 * m / PI).sqrt();
    // The first longest edge that fits.
    let (s0, len) = curve
        .segments()
        .into_iter()
        .filter(|(_, l)| 2.0 * rho <= *l)
        .fold(None, |best: Option<(f64, f64)>, e| if best.is_none_or(|b| e.1 > b.1) { Some(e) } else { best })?;
    let sc = s0 + 0.5 * len;
    let (o, t, nu) = (curve.point(sc), curve.tangent(sc), curve.normal(sc));
    let chain = (0..=CANDIDATE_RESOLUTION)
        .map(|i| {
            let (s, co) = (PI * i as f64 / CANDIDATE_RESOLUTION as f64).sin_cos();
            add(o, add(scale(t, -rho * co), scale(nu, rho * s)))
        })
        .collect();
    let region = Region2D::attached(curve, c, chain, sc - rho, sc + rho, h);
    Some(Candidate { family: Family::Facet, value: PI * rho, region })
}

fn sectors(curve: &BoundaryCurve, c: &ConvexObstacle, m: f64, h: f64) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for (sv, angle, before, after) in curve.corners() {
        let sweep = 2.0 * PI - angle;
        let rho = (2.0 * m / sweep).sqrt();
        if rho > before.min(after) {
            continue;
        }
        let v = curve.point(sv);
        let start = sub(curve.point(sv - rho), v);
        let phi0 = start[1].atan2(start[0]);
        let chain = arc_points(v, rho, phi0, sweep, CANDIDATE_RESOLUTION);
        let value = sweep * rho;
        if best.as_ref().is_none_or(|b| value < b.value) {
            let region = Region2D::attached(curve, c, chain, sv - rho, sv + rho, h);
            best = Some(Candidate { family: Family::Sector, value, region });
        }
    }
    best
}

fn orthogonal(curve: &BoundaryCurve, c: &ConvexObstacle, m: f64, h: f64) -> Option<Candidate> {
    let (o, a) = as_disk(c)?;
    let rho = orthogonal_radius(a, m);
    let (_, value) = orthogonal_arc(a, rho);
    let alpha = (a / rho).atan();
    let beta = 0.5 * PI - alpha;
    // Arc centred on the +x side of the obstacle.
    let q = [o[0] + a.hypot(rho), o[1]];
    let a_pt = [o[0] + a * beta.cos(), o[1] - a * beta.sin()];
    let d = sub(a_pt, q);
    let chain = arc_points(q, rho, d[1].atan2(d[0]), 2.0 * PI - 2.0 * alpha, CANDIDATE_RESOLUTION);
    let s_a = curve.nearest(a_pt);
    let region = Region2D::attached(curve, c, chain, s_a, s_a + 2.0 * a * beta, h);
    Some(Candidate { family: Family::Arc, value, region })
}

fn free_disk(curve: &BoundaryCurve, c: &ConvexObstacle, m: f64) -> Candidate {
    let r = (m / PI).sqrt();
    let p = curve.point(0.0);
    let nu = curve.normal(0.0);
    let center = add(p, scale(nu, r * 1.5 + 1e-9));
    let mut poly = arc_points(center, r, 0.0, 2.0 * PI, CANDIDATE_RESOLUTION);
    poly.pop();
    Candidate { family: Family::Disk, value: 2.0 * (PI * m).sqrt(), region: Region2D::detached(c, poly) }
}

/// Best closed-form competitor for mass `m` outside the planar obstacle `c`.
/// Within `1e-12` relative, earlier families win (facet, arc, sector, disk).
pub fn candidate_profile(c: &ConvexObstacle, m: f64) -> Result<Candidate> {
    if !(m > 0.0) {
        return Err(Error::NegativeMass(m));
    }
    let curve = BoundaryCurve::new(c)?;
    let h = curve.length() / 4096.0;
    let mut all: Vec<Candidate> = [facet(&curve, c, m, h), orthogonal(&curve, c, m, h), sectors(&curve, c, m, h)]
        .into_iter()
        .flatten()
        .collect();
    all.push(free_disk(&curve, c, m));
    let best = all.iter().map(|k| k.value).fold(f64::INFINITY, f64::min);
    Ok(all.into_iter().find(|k| k.value <= best * (1.0 + 1e-12)).expect("disk is always feasible"))
}
