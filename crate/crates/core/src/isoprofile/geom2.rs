//! Planar primitives: areas, exact disk intersections, distances.

pub type P2 = [f64; 2];

#[inline]
pub fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: P2, b: P2) -> P2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale(a: P2, s: f64) -> P2 {
    [a[0] * s, a[1] * s]
}

#[inline]
pub fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm(a: P2) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn dist(a: P2, b: P2) -> f64 {
    norm(sub(a, b))
}

/// Signed (counter-clockwise positive) area of a closed polygon.
pub fn polygon_area(p: &[P2]) -> f64 {
    let n = p.len();
    (0..n).map(|i| cross(p[i], p[(i + 1) % n])).sum::<f64>() * 0.5
}

/// Nearest point of segment `ab` to `p`.
pub fn closest_on_segment(p: P2, a: P2, b: P2) -> P2 {
    let d = sub(b, a);
    let l2 = dot(d, d);
    if l2 == 0.0 {
        return a;
    }
    let t = (dot(sub(p, a), d) / l2).clamp(0.0, 1.0);
    add(a, scale(d, t))
}

/// Distance from `p` to an open polyline.
pub fn dist_to_polyline(p: P2, line: &[P2]) -> f64 {
    if line.len() == 1 {
        return dist(p, line[0]);
    }
    line.windows(2)
        .map(|w| dist(p, closest_on_segment(p, w[0], w[1])))
        .fold(f64::INFINITY, f64::min)
}

/// Symmetric Hausdorff distance between two polylines, evaluated at the
/// vertices of each against the other (exact for the vertex sets).
pub fn hausdorff(a: &[P2], b: &[P2]) -> f64 {
    let ab = a.iter().map(|&p| dist_to_polyline(p, b)).fold(0.0, f64::max);
    let ba = b.iter().map(|&p| dist_to_polyline(p, a)).fold(0.0, f64::max);
    ab.max(ba)
}

/// Centre of the circle through three points; `None` if collinear.
pub fn circumcenter(a: P2, b: P2, c: P2) -> Option<P2> {
    let (ab, ac) = (sub(b, a), sub(c, a));
    let d = 2.0 * cross(ab, ac);
    let scale_ref = dot(ab, ab).max(dot(ac, ac));
    if d.abs() <= 1e-14 * scale_ref {
        return None;
    }
    let (b2, c2) = (dot(ab, ab), dot(ac, ac));
    Some(add(a, [(ac[1] * b2 - ab[1] * c2) / d, (ab[0] * c2 - ac[0] * b2) / d]))
}

/// Signed area of `B_r(0) ∩ triangle(0, a, b)` (sign of `cross(a, b)`).
fn disk_triangle(a: P2, b: P2, r: f64) -> f64 {
    let sector = |u: P2, v: P2| 0.5 * r * r * cross(u, v).atan2(dot(u, v));
    let (ra, rb) = (norm(a), norm(b));
    let d = sub(b, a);
    // Intersections of the segment with the circle: |a + t d| = r.
    let qa = dot(d, d);
    if qa == 0.0 {
        return 0.0;
    }
    let qb = dot(a, d);
    let qc = dot(a, a) - r * r;
    let disc = qb * qb - qa * qc;
    let inside_a = ra <= r;
    let inside_b = rb <= r;
    if inside_a && inside_b {
        return 0.5 * cross(a, b);
    }
    if disc <= 0.0 {
        return sector(a, b);
    }
    let s = disc.sqrt();
    let t1 = (-qb - s) / qa;
    let t2 = (-qb + s) / qa;
    let pt = |t: f64| add(a, scale(d, t));
    match (inside_a, inside_b) {
        (true, false) => {
            let p = pt(t2);
            0.5 * cross(a, p) + sector(p, b)
        }
        (false, true) => {
            let p = pt(t1);
            sector(a, p) + 0.5 * cross(p, b)
        }
        _ => {
            if t1 >= 1.0 || t2 <= 0.0 || t1 >= t2 {
                sector(a, b)
            } else {
                let (p, q) = (pt(t1.max(0.0)), pt(t2.min(1.0)));
                sector(a, p) + 0.5 * cross(p, q) + sector(q, b)
            }
        }
    }
}

/// Area of `B_r(c) ∩ P` for a closed counter-clockwise simple polygon `P`.
pub fn disk_polygon_area(c: P2, r: f64, poly: &[P2]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| disk_triangle(sub(poly[i], c), sub(poly[(i + 1) % n], c), r))
        .sum()
}

/// Length of the part of segment `ab` inside `B_r(c)`.
pub fn segment_in_disk(a: P2, b: P2, c: P2, r: f64) -> f64 {
    let (a, b) = (sub(a, c), sub(b, c));
    let d = sub(b, a);
    let qa = dot(d, d);
    if qa == 0.0 {
        return 0.0;
    }
    let qb = dot(a, d);
    let disc = qb * qb - qa * (dot(a, a) - r * r);
    if disc <= 0.0 {
        return 0.0;
    }
    let s = disc.sqrt();
    let t1 = ((-qb - s) / qa).max(0.0);
    let t2 = ((-qb + s) / qa).min(1.0);
    (t2 - t1).max(0.0) * qa.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disk_polygon_intersections() {
        let sq = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        assert!((disk_polygon_area([0.0, 0.0], 0.5, &sq) - PI * 0.25).abs() < 1e-14);
        assert!((disk_polygon_area([0.0, 0.0], 10.0, &sq) - 4.0).abs() < 1e-13);
        // Disk centred on an edge midpoint, and at a corner.
        assert!((disk_polygon_area([1.0, 0.0], 0.5, &sq) - PI * 0.125).abs() < 1e-14);
        assert!((disk_polygon_area([1.0, 1.0], 0.5, &sq) - PI * 0.0625).abs() < 1e-14);
        // Chord case: disk of radius 1 at (1.5, 0) against the square.
        let lens = 2.0 * (0.5f64).acos() * 0.5 - 0.5 * (0.75f64).sqrt();
        assert!((disk_polygon_area([1.5, 0.0], 1.0, &sq) - lens).abs() < 1e-13);
        assert!((segment_in_disk([-2.0, 0.0], [2.0, 0.0], [0.0, 0.0], 1.0) - 2.0).abs() < 1e-15);
        let c = circumcenter([1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]).unwrap();
        assert!(norm(c) < 1e-15);
    }
}
