use serde::{Deserialize, Serialize};

use super::hull::{hull2, Hull3};
use super::PointCloud;
use crate::linalg::{affine_complement, cross3, dot, norm, normalized, sub};
use crate::mc;
use crate::sphere::Direction;

/// Width of a point set with its minimising direction.
///
/// `lower_bound ≤ true width ≤ value`. In `N ≤ 3` and for sets contained in
/// a hyperplane the result is exact and `gap = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Width {
    pub value: f64,
    pub direction: Direction,
    pub exact: bool,
    pub lower_bound: f64,
    pub gap: f64,
}

impl Width {
    fn exact(value: f64, direction: Direction) -> Self {
        Self { value, direction, exact: true, lower_bound: value, gap: 0.0 }
    }
}

/// `max_j x_j·ν − min_j x_j·ν`.
pub fn extent(points: &[Vec<f64>], nu: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in points {
        let v = dot(p, nu);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    hi - lo
}

/// Minimal distance between two parallel hyperplanes enclosing `X`.
///
/// `N = 2`: rotating calipers on the hull. `N = 3`: hull facet normals and
/// directions orthogonal to antipodal edge pairs. `N ≥ 4`: compass search on
/// the sphere from `restarts` random starts and the best node of a
/// cube-surface grid; the grid also gives the Lipschitz lower bound. `tol`
/// is the compass step at which local search stops.
pub fn width(x: &PointCloud, restarts: usize, tol: f64) -> Width {
    let n = x.dim;
    let pts = &x.points;
    if n == 1 {
        return Width::exact(extent(pts, &[1.0]), Direction::axis(1, 0));
    }
    let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
    let scale = x.radius_bound.max(1e-300);
    let comp = affine_complement(&refs, n, 1e-12 * scale);
    if let Some(c) = comp.first() {
        let d = Direction::normalize(c).expect("orthonormal");
        return Width::exact(extent(pts, d.as_slice()), d);
    }
    match n {
        2 => width2(pts),
        3 => width3(pts),
        _ => width_search(pts, x.radius_bound, restarts, tol),
    }
}

fn width2(pts: &[Vec<f64>]) -> Width {
    let h = hull2(pts);
    let m = h.len();
    let line_dist = |a: &[f64], b: &[f64], p: &[f64]| {
        let e = sub(b, a);
        ((e[0] * (p[1] - a[1]) - e[1] * (p[0] - a[0])) / norm(&e)).abs()
    };
    let mut best = f64::INFINITY;
    let mut best_dir = vec![1.0, 0.0];
    let mut j = 1;
    for i in 0..m {
        let a = &pts[h[i]];
        let b = &pts[h[(i + 1) % m]];
        // Advance the antipodal pointer while the distance grows.
        while (j + 1) % m != i && line_dist(a, b, &pts[h[(j + 1) % m]]) > line_dist(a, b, &pts[h[j]]) {
            j = (j + 1) % m;
        }
        let d = line_dist(a, b, &pts[h[j]]);
        if d < best {
            best = d;
            let e = sub(b, a);
            best_dir = vec![e[1], -e[0]];
        }
    }
    let dir = Direction::normalize(&best_dir).expect("nonzero edge");
    Width::exact(extent(pts, dir.as_slice()), dir)
}

fn on_arc(a: &[f64], b: &[f64], d: &[f64]) -> bool {
    let ab = cross3(a, b);
    let tol = 1e-12;
    dot(&cross3(a, d), &ab) >= -tol && dot(&cross3(d, b), &ab) >= -tol
}

fn width3(pts: &[Vec<f64>]) -> Width {
    let h = Hull3::new(pts).expect("full-dimensional after complement test");
    let mut best = f64::INFINITY;
    let mut best_dir = vec![0.0, 0.0, 1.0];
    let mut consider = |d: &[f64]| {
        let w = extent(pts, d);
        if w < best {
            best = w;
            best_dir = d.to_vec();
        }
    };
    for n in &h.normals {
        consider(n);
    }
    let edges = h.edges();
    for (i, &(u1, v1, f1, g1)) in edges.iter().enumerate() {
        let e1 = sub(&pts[v1], &pts[u1]);
        let (a1, b1) = (h.normals[f1], h.normals[g1]);
        for &(u2, v2, f2, g2) in &edges[i + 1..] {
            let e2 = sub(&pts[v2], &pts[u2]);
            let Some(d) = normalized(&cross3(&e1, &e2)) else {
                continue;
            };
            let (a2, b2) = (h.normals[f2], h.normals[g2]);
            for s in [1.0, -1.0] {
                let dp: Vec<f64> = d.iter().map(|v| v * s).collect();
                let dm: Vec<f64> = d.iter().map(|v| -v * s).collect();
                if on_arc(&a1, &b1, &dp) && on_arc(&a2, &b2, &dm) {
                    consider(&dp);
                }
            }
        }
    }
    let dir = Direction::normalize(&best_dir).expect("unit candidate");
    Width::exact(extent(pts, dir.as_slice()), dir)
}

/// Nodes of the surface of `[-1, 1]^n` on a grid of spacing `s`, each
/// normalised to the sphere; only one of `±u` is kept since the extent is
/// even.
fn cube_grid(n: usize, s: f64) -> Vec<Vec<f64>> {
    let per = (2.0 / s).ceil() as usize + 1;
    let step = 2.0 / (per - 1) as f64;
    let mut out = Vec::new();
    for face in 0..n {
        let total = per.pow((n - 1) as u32);
        for code in 0..total {
            let mut c = code;
            let mut v = vec![0.0; n];
            v[face] = 1.0;
            for k in 0..n {
                if k == face {
                    continue;
                }
                v[k] = -1.0 + step * (c % per) as f64;
                c /= per;
            }
            out.push(normalized(&v).expect("cube node"));
        }
    }
    out
}

/// Grid spacing used for the `N ≥ 4` lower bound.
pub const GRID_SPACING: f64 = 0.1;

fn compass(pts: &[Vec<f64>], start: &[f64], tol: f64) -> (f64, Vec<f64>) {
    let n = start.len();
    let mut u = start.to_vec();
    let mut f = extent(pts, &u);
    let mut step = 0.25;
    while step > tol {
        let mut improved = false;
        for k in 0..n {
            for s in [step, -step] {
                let mut v = u.clone();
                v[k] += s;
                let Some(v) = normalized(&v) else { continue };
                let fv = extent(pts, &v);
                if fv < f - 1e-15 {
                    f = fv;
                    u = v;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (f, u)
}

fn width_search(pts: &[Vec<f64>], radius: f64, restarts: usize, tol: f64) -> Width {
    let n = pts[0].len();
    let s = GRID_SPACING;
    let grid = cube_grid(n, s);
    let mut grid_best = f64::INFINITY;
    let mut grid_dir = grid[0].clone();
    for g in &grid {
        let w = extent(pts, g);
        if w < grid_best {
            grid_best = w;
            grid_dir = g.clone();
        }
    }
    let lower = (grid_best - 2.0 * radius * s * ((n - 1) as f64).sqrt() / 2.0).max(0.0);
    let mut starts = vec![grid_dir];
    starts.extend(mc::directions(n, restarts as u64, 0x005e_ed0f_5eed));
    let tol = tol.max(1e-12);
    let mut best = (f64::INFINITY, starts[0].clone());
    for st in &starts {
        let r = compass(pts, st, tol);
        if r.0 < best.0 {
            best = r;
        }
    }
    let dir = Direction::normalize(&best.1).expect("unit");
    let value = extent(pts, dir.as_slice());
    Width { value, direction: dir, exact: false, lower_bound: lower, gap: value - lower }
}
