//! Arclength parametrisation of the boundary of a planar convex obstacle.

use super::geom2::{add, closest_on_segment, cross, dist, dot, norm, scale, sub, P2};
use crate::convex::ConvexObstacle;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Piece {
    Seg { a: P2, b: P2 },
    /// Counter-clockwise arc `c + r(cos φ, sin φ)`, `φ ∈ [a0, a1]`.
    Arc { c: P2, r: f64, a0: f64, a1: f64 },
}

impl Piece {
    fn len(&self) -> f64 {
        match *self {
            Self::Seg { a, b } => dist(a, b),
            Self::Arc { r, a0, a1, .. } => r * (a1 - a0),
        }
    }

    fn point(&self, u: f64) -> P2 {
        match *self {
            Self::Seg { a, b } => {
                let l = dist(a, b);
                add(a, scale(sub(b, a), u / l))
            }
            Self::Arc { c, r, a0, .. } => {
                let (s, co) = (a0 + u / r).sin_cos();
                [c[0] + r * co, c[1] + r * s]
            }
        }
    }

    fn tangent(&self, u: f64) -> P2 {
        match *self {
            Self::Seg { a, b } => scale(sub(b, a), 1.0 / dist(a, b)),
            Self::Arc { r, a0, .. } => {
                let (s, co) = (a0 + u / r).sin_cos();
                [-s, co]
            }
        }
    }

    /// `∫ ½ cross(γ, γ′)` over `[u0, u1]`.
    fn area_integral(&self, u0: f64, u1: f64) -> f64 {
        match *self {
            Self::Seg { .. } => 0.5 * cross(self.point(u0), self.point(u1)),
            Self::Arc { c, r, a0, .. } => {
                let (p, q) = (a0 + u0 / r, a0 + u1 / r);
                0.5 * (r * c[0] * (q.sin() - p.sin()) - r * c[1] * (q.cos() - p.cos()) + r * r * (q - p))
            }
        }
    }
}

/// `∂C` as a closed counter-clockwise curve `γ(s)`, `s ∈ [0, L)`, made of
/// segments and circular arcs; `γ` is 1-Lipschitz with `|γ′| = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pieces: Vec<Piece>,
    start: Vec<f64>,
    total: f64,
    shape: Shape,
}

/// Closed-form description of `C` for distance queries.
#[derive(Debug, Clone, PartialEq)]
enum Shape {
    /// Counter-clockwise vertices.
    Polygon(Vec<P2>),
    Disk(P2, f64),
    /// Polygon dilated by `η`.
    Rounded(Vec<P2>, f64),
}

fn polygon_sd(v: &[P2], p: P2) -> f64 {
    let n = v.len();
    let mut inside = true;
    let mut depth = f64::INFINITY;
    let mut outside = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let e = sub(b, a);
        let h = cross(e, sub(p, a)) / norm(e);
        inside &= h >= 0.0;
        depth = depth.min(h);
        outside = outside.min(dist(p, closest_on_segment(p, a, b)));
    }
    if inside {
        -depth
    } else {
        outside
    }
}

/// Whether `pq` meets the polygon shrunk inwards by `tol` (Cyrus–Beck).
fn segment_hits_polygon(v: &[P2], p: P2, q: P2, tol: f64) -> bool {
    let n = v.len();
    let d = sub(q, p);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let e = sub(b, a);
        let l = norm(e);
        // Inside the shrunk half-plane: f0 + f1 t ≥ 0.
        let f0 = cross(e, sub(p, a)) / l - tol;
        let f1 = cross(e, d) / l;
        if f1 == 0.0 {
            if f0 < 0.0 {
                return false;
            }
        } else if f1 > 0.0 {
            lo = lo.max(-f0 / f1);
        } else {
            hi = hi.min(-f0 / f1);
        }
        if lo > hi {
            return false;
        }
    }
    hi - lo > 0.0
}

fn segment_polygon_distance(v: &[P2], p: P2, q: P2) -> f64 {
    if segment_hits_polygon(v, p, q, 0.0) {
        return 0.0;
    }
    let a = polygon_sd(v, p).min(polygon_sd(v, q));
    v.iter().map(|&w| dist(w, closest_on_segment(w, p, q))).fold(a, f64::min)
}

fn polygon_vertices(normals: &[Vec<f64>], offsets: &[f64]) -> Result<Vec<P2>> {
    let m = normals.len();
    let scale_ref = offsets.iter().fold(1.0f64, |a, b| a.max(b.abs()));
    let tol = 1e-10 * scale_ref;
    let mut v: Vec<P2> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = (&normals[i], &normals[j]);
            let det = a[0] * b[1] - a[1] * b[0];
            if det.abs() < 1e-12 {
                continue;
            }
            let p = [
                (offsets[i] * b[1] - offsets[j] * a[1]) / det,
                (a[0] * offsets[j] - b[0] * offsets[i]) / det,
            ];
            let ok = normals.iter().zip(offsets).all(|(n, o)| n[0] * p[0] + n[1] * p[1] <= o + tol);
            if ok && !v.iter().any(|q| dist(*q, p) <= tol) {
                v.push(p);
            }
        }
    }
    if v.len() < 3 {
        return Err(Error::InvalidParameter("planar obstacle must be a bounded polygon".into()));
    }
    let c = v.iter().fold([0.0, 0.0], |acc, p| add(acc, scale(*p, 1.0 / v.len() as f64)));
    v.sort_by(|p, q| {
        let (ap, aq) = ((p[1] - c[1]).atan2(p[0] - c[0]), (q[1] - c[1]).atan2(q[0] - c[0]));
        ap.total_cmp(&aq)
    });
    Ok(v)
}

fn outward(a: P2, b: P2) -> P2 {
    let t = scale(sub(b, a), 1.0 / dist(a, b));
    [t[1], -t[0]]
}

impl BoundaryCurve {
    /// Boundary of a bounded planar polygon, disk, or their dilation.
    pub fn new(c: &ConvexObstacle) -> Result<Self> {
        if c.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: c.dim() });
        }
        let (pieces, shape) = match c {
            ConvexObstacle::Polytope(p) => {
                let v = polygon_vertices(&p.normals, &p.offsets)?;
                let pieces = (0..v.len()).map(|i| Piece::Seg { a: v[i], b: v[(i + 1) % v.len()] }).collect();
                (pieces, Shape::Polygon(v))
            }
            ConvexObstacle::Ball { center, radius } => (
                vec![Piece::Arc { c: [center[0], center[1]], r: *radius, a0: 0.0, a1: std::f64::consts::TAU }],
                Shape::Disk([center[0], center[1]], *radius),
            ),
            ConvexObstacle::Dilation { base, eta } => match base.as_ref() {
                _ if *eta == 0.0 => return Self::new(base),
                ConvexObstacle::Ball { center, radius } => (
                    vec![Piece::Arc { c: [center[0], center[1]], r: radius + eta, a0: 0.0, a1: std::f64::consts::TAU }],
                    Shape::Disk([center[0], center[1]], radius + eta),
                ),
                ConvexObstacle::Polytope(p) => {
                    let v = polygon_vertices(&p.normals, &p.offsets)?;
                    let k = v.len();
                    let mut out = Vec::with_capacity(2 * k);
                    for i in 0..k {
                        let (a, b, c2) = (v[i], v[(i + 1) % k], v[(i + 2) % k]);
                        let n0 = outward(a, b);
                        let n1 = outward(b, c2);
                        out.push(Piece::Seg { a: add(a, scale(n0, *eta)), b: add(b, scale(n0, *eta)) });
                        let a0 = n0[1].atan2(n0[0]);
                        let mut a1 = n1[1].atan2(n1[0]);
                        while a1 <= a0 {
                            a1 += std::f64::consts::TAU;
                        }
                        out.push(Piece::Arc { c: b, r: *eta, a0, a1 });
                    }
                    (out, Shape::Rounded(v, *eta))
                }
                ConvexObstacle::Dilation { .. } => {
                    return Err(Error::InvalidParameter("nested dilation in the plane".into()))
                }
            },
        };
        let mut start = Vec::with_capacity(pieces.len());
        let mut total = 0.0;
        for p in &pieces {
            start.push(total);
            total += p.len();
        }
        Ok(Self { pieces, start, total, shape })
    }

    /// Signed distance to `C` (negative inside).
    pub fn signed_distance(&self, p: P2) -> f64 {
        match &self.shape {
            Shape::Polygon(v) => polygon_sd(v, p),
            Shape::Disk(c, r) => dist(p, *c) - r,
            Shape::Rounded(v, eta) => polygon_sd(v, p) - eta,
        }
    }

    /// Whether the segment `pq` stays outside `C` shrunk by `tol`.
    pub fn segment_clear(&self, p: P2, q: P2, tol: f64) -> bool {
        match &self.shape {
            Shape::Polygon(v) => !segment_hits_polygon(v, p, q, tol),
            Shape::Disk(c, r) => dist(*c, closest_on_segment(*c, p, q)) >= r - tol,
            Shape::Rounded(v, eta) => segment_polygon_distance(v, p, q) >= eta - tol,
        }
    }

    pub fn length(&self) -> f64 {
        self.total
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        // `+ 0.0` turns `-0.0` into `0.0`, which sorts before every start.
        let s = s.rem_euclid(self.total) + 0.0;
        let i = match self.start.binary_search_by(|x| x.total_cmp(&s)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (i, (s - self.start[i]).min(self.pieces[i].len()))
    }

    pub fn point(&self, s: f64) -> P2 {
        let (i, u) = self.locate(s);
        self.pieces[i].point(u)
    }

    /// Unit tangent, one-sided (forward) at corners.
    pub fn tangent(&self, s: f64) -> P2 {
        let (i, u) = self.locate(s);
        self.pieces[i].tangent(u)
    }

    /// Outer unit normal of `C`, one-sided at corners.
    pub fn normal(&self, s: f64) -> P2 {
        let t = self.tangent(s);
        [t[1], -t[0]]
    }

    /// `∫_{s0}^{s1} ½ cross(γ, γ′) ds` for `s0 ≤ s1 ≤ s0 + L`.
    pub fn area_integral(&self, s0: f64, s1: f64) -> f64 {
        let (mut i, mut u) = self.locate(s0);
        let mut rest = s1 - s0;
        let mut acc = 0.0;
        while rest > 0.0 {
            let take = (self.pieces[i].len() - u).max(0.0).min(rest);
            acc += self.pieces[i].area_integral(u, u + take);
            rest -= take;
            i = (i + 1) % self.pieces.len();
            u = 0.0;
        }
        acc
    }

    /// Arclength parameter of the boundary point nearest to `p`.
    pub fn nearest(&self, p: P2) -> f64 {
        let mut best = (f64::INFINITY, 0.0);
        for (i, pc) in self.pieces.iter().enumerate() {
            let u = match *pc {
                Piece::Seg { a, b } => {
                    let d = sub(b, a);
                    (dot(sub(p, a), d) / dot(d, d)).clamp(0.0, 1.0) * dist(a, b)
                }
                Piece::Arc { c, r, a0, a1 } => {
                    let mut phi = (p[1] - c[1]).atan2(p[0] - c[0]);
                    while phi < a0 {
                        phi += std::f64::consts::TAU;
                    }
                    if phi <= a1 {
                        r * (phi - a0)
                    } else if (phi - a1) < (a0 + std::f64::consts::TAU - phi) {
                        r * (a1 - a0)
                    } else {
                        0.0
                    }
                }
            };
            let d = dist(pc.point(u), p);
            if d < best.0 {
                best = (d, self.start[i] + u);
            }
        }
        best.1
    }

    /// `(start, length)` of the straight pieces.
    pub fn segments(&self) -> Vec<(f64, f64)> {
        self.pieces
            .iter()
            .zip(&self.start)
            .filter(|(p, _)| matches!(p, Piece::Seg { .. }))
            .map(|(p, &s)| (s, p.len()))
            .collect()
    }

    /// `(start, length, radius, centre)` of the arcs.
    pub fn arcs(&self) -> Vec<(f64, f64, f64, P2)> {
        self.pieces
            .iter()
            .zip(&self.start)
            .filter_map(|(p, &s)| match *p {
                Piece::Arc { c, r, .. } => Some((s, p.len(), r, c)),
                Piece::Seg { .. } => None,
            })
            .collect()
    }

    /// Polygon corners as `(s, interior angle, incoming length, outgoing
    /// length)`; arcs count as smooth.
    pub fn corners(&self) -> Vec<(f64, f64, f64, f64)> {
        let k = self.pieces.len();
        (0..k)
            .filter_map(|i| {
                let prev = &self.pieces[(i + k - 1) % k];
                let t0 = prev.tangent(prev.len());
                let t1 = self.pieces[i].tangent(0.0);
                let turn = cross(t0, t1).atan2(dot(t0, t1));
                (turn > 1e-12).then(|| (self.start[i], std::f64::consts::PI - turn, prev.len(), self.pieces[i].len()))
            })
            .collect()
    }

    /// Points `γ(s)` for `s` from `s0` to `s1 ≥ s0` with spacing at most
    /// `h`, including every corner in between.
    pub fn sample(&self, s0: f64, s1: f64, h: f64) -> Vec<P2> {
        let mut ss = vec![s0];
        let n = ((s1 - s0) / h).ceil().max(1.0) as usize;
        for k in 1..n {
            ss.push(s0 + (s1 - s0) * k as f64 / n as f64);
        }
        let base = (s0 / self.total).floor() * self.total;
        for lap in [base - self.total, base, base + self.total] {
            for &st in &self.start {
                let s = lap + st;
                if s > s0 && s < s1 {
                    ss.push(s);
                }
            }
        }
        ss.push(s1);
        ss.sort_by(f64::total_cmp);
        ss.dedup_by(|a, b| (*a - *b).abs() < 1e-14 * self.total);
        ss.into_iter().map(|s| self.point(s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn square_and_rounded_square() {
        let sq = ConvexObstacle::cube(&[0.0, 0.0], 1.0).unwrap();
        let b = BoundaryCurve::new(&sq).unwrap();
        assert!((b.length() - 8.0).abs() < 1e-14);
        assert!((b.area_integral(0.0, b.length()) - 4.0).abs() < 1e-14);
        assert!((b.area_integral(3.0, 3.0 + b.length()) - 4.0).abs() < 1e-13);
        assert_eq!(b.corners().len(), 4);
        let r = BoundaryCurve::new(&ConvexObstacle::dilation(sq, 0.5).unwrap()).unwrap();
        assert!((r.length() - (8.0 + PI)).abs() < 1e-13);
        assert!((r.area_integral(0.0, r.length()) - (4.0 + 4.0 + PI * 0.25)).abs() < 1e-13);
        let s = r.nearest([3.0, 0.2]);
        assert!((r.point(s)[0] - 1.5).abs() < 1e-14);
        let d = BoundaryCurve::new(&ConvexObstacle::ball(vec![0.5, 0.0], 2.0).unwrap()).unwrap();
        assert!((d.area_integral(0.0, d.length()) - 4.0 * PI).abs() < 1e-13);
    }
}
