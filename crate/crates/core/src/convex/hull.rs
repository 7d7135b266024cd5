//! Convex hulls in the plane (monotone chain) and in space (quickhull with
//! conflict lists).

use std::collections::HashMap;

use crate::linalg::cross3;

fn cross2(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Indices of the hull vertices of planar points in counter-clockwise order,
/// collinear boundary points removed. Fewer than three distinct points yield
/// the distinct extreme points.
pub fn hull2(points: &[Vec<f64>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
    });
    idx.dedup_by(|a, b| points[*a][0] == points[*b][0] && points[*a][1] == points[*b][1]);
    if idx.len() < 3 {
        return idx;
    }
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let eps = 1e-14 * scale * scale;
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && cross2(&points[lower[lower.len() - 2]], &points[lower[lower.len() - 1]], &points[i]) <= eps
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && cross2(&points[upper[upper.len() - 2]], &points[upper[upper.len() - 1]], &points[i]) <= eps
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A triangulated convex hull in `R^3`. Faces are oriented with outward
/// normals; all indices refer to the input point list.
#[derive(Debug, Clone)]
pub struct Hull3 {
    pub faces: Vec<[usize; 3]>,
    pub normals: Vec<[f64; 3]>,
    pub offsets: Vec<f64>,
    /// Hull vertices in increasing index order.
    pub vertices: Vec<usize>,
    /// Neighbouring hull vertices of each input point (empty for non-hull
    /// points).
    pub neighbors: Vec<Vec<usize>>,
    /// Faces incident to each input point.
    pub incident: Vec<Vec<usize>>,
}

struct Face {
    v: [usize; 3],
    n: [f64; 3],
    d: f64,
    outside: Vec<usize>,
    alive: bool,
}

fn p3(p: &[f64]) -> [f64; 3] {
    [p[0], p[1], p[2]]
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn make_face(pts: &[[f64; 3]], v: [usize; 3]) -> Face {
    let c = cross3(&sub3(pts[v[1]], pts[v[0]]), &sub3(pts[v[2]], pts[v[0]]));
    let l = dot3(c, c).sqrt();
    let n = if l > 0.0 { [c[0] / l, c[1] / l, c[2] / l] } else { [0.0; 3] };
    Face { v, n, d: dot3(n, pts[v[0]]), outside: Vec::new(), alive: true }
}

impl Hull3 {
    /// Quickhull. Points within `1e-10·extent` of a face plane count as
    /// coplanar and are not hull vertices. `None` for coplanar input.
    pub fn new(points: &[Vec<f64>]) -> Option<Self> {
        let pts: Vec<[f64; 3]> = points.iter().map(|p| p3(p)).collect();
        let n = pts.len();
        if n < 4 {
            return None;
        }
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        let mut lo_i = [0usize; 3];
        let mut hi_i = [0usize; 3];
        for (i, p) in pts.iter().enumerate() {
            for k in 0..3 {
                if p[k] < lo[k] {
                    lo[k] = p[k];
                    lo_i[k] = i;
                }
                if p[k] > hi[k] {
                    hi[k] = p[k];
                    hi_i[k] = i;
                }
            }
        }
        let extent = (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max);
        if extent <= 0.0 {
            return None;
        }
        let eps = 1e-10 * extent.max(lo.iter().chain(&hi).fold(0.0f64, |m, v| m.max(v.abs())));
        // Initial tetrahedron.
        let k = (0..3).max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b]))).unwrap();
        let (a, b) = (lo_i[k], hi_i[k]);
        let ab = sub3(pts[b], pts[a]);
        let c = (0..n).max_by(|&i, &j| {
            let ci = cross3(&ab, &sub3(pts[i], pts[a]));
            let cj = cross3(&ab, &sub3(pts[j], pts[a]));
            dot3(ci, ci).total_cmp(&dot3(cj, cj))
        })?;
        let cc = cross3(&ab, &sub3(pts[c], pts[a]));
        if dot3(cc, cc).sqrt() <= eps * extent {
            return None;
        }
        let base = make_face(&pts, [a, b, c]);
        let d = (0..n).max_by(|&i, &j| {
            (dot3(base.n, pts[i]) - base.d)
                .abs()
                .total_cmp(&(dot3(base.n, pts[j]) - base.d).abs())
        })?;
        if (dot3(base.n, pts[d]) - base.d).abs() <= eps {
            return None;
        }
        let centroid = {
            let mut s = [0.0; 3];
            for &i in &[a, b, c, d] {
                for k in 0..3 {
                    s[k] += pts[i][k] / 4.0;
                }
            }
            s
        };
        let mut faces: Vec<Face> = Vec::new();
        for tri in [[a, b, c], [a, b, d], [a, c, d], [b, c, d]] {
            let mut f = make_face(&pts, tri);
            if dot3(f.n, centroid) > f.d {
                f = make_face(&pts, [tri[0], tri[2], tri[1]]);
            }
            faces.push(f);
        }
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for e in 0..3 {
                edges.insert((f.v[e], f.v[(e + 1) % 3]), fi);
            }
        }
        for i in 0..n {
            if [a, b, c, d].contains(&i) {
                continue;
            }
            for f in faces.iter_mut() {
                if dot3(f.n, pts[i]) - f.d > eps {
                    f.outside.push(i);
                    break;
                }
            }
        }
        let mut stack: Vec<usize> = (0..4).collect();
        while let Some(fi) = stack.pop() {
            if !faces[fi].alive || faces[fi].outside.is_empty() {
                continue;
            }
            let f = &faces[fi];
            let apex = *f
                .outside
                .iter()
                .max_by(|&&i, &&j| {
                    (dot3(f.n, pts[i]) - f.d)
                        .total_cmp(&(dot3(f.n, pts[j]) - f.d))
                        .then(j.cmp(&i))
                })
                .unwrap();
            let ap = pts[apex];
            // Visible region by flood fill across shared edges.
            let mut visible = vec![fi];
            let mut seen = std::collections::HashSet::from([fi]);
            let mut q = 0;
            while q < visible.len() {
                let g = visible[q];
                q += 1;
                let v = faces[g].v;
                for e in 0..3 {
                    if let Some(&h) = edges.get(&(v[(e + 1) % 3], v[e])) {
                        if !seen.contains(&h) && dot3(faces[h].n, ap) - faces[h].d > eps {
                            seen.insert(h);
                            visible.push(h);
                        }
                    }
                }
            }
            let mut horizon = Vec::new();
            for &g in &visible {
                let v = faces[g].v;
                for e in 0..3 {
                    let (u, w) = (v[e], v[(e + 1) % 3]);
                    let across = edges.get(&(w, u)).copied();
                    if across.is_none_or(|h| !seen.contains(&h)) {
                        horizon.push((u, w));
                    }
                }
            }
            let mut orphans: Vec<usize> = Vec::new();
            for &g in &visible {
                faces[g].alive = false;
                orphans.append(&mut faces[g].outside);
                let v = faces[g].v;
                for e in 0..3 {
                    edges.remove(&(v[e], v[(e + 1) % 3]));
                }
            }
            let first_new = faces.len();
            for (u, w) in horizon {
                let nf = make_face(&pts, [u, w, apex]);
                let id = faces.len();
                for e in 0..3 {
                    edges.insert((nf.v[e], nf.v[(e + 1) % 3]), id);
                }
                faces.push(nf);
            }
            for p in orphans {
                if p == apex {
                    continue;
                }
                for g in first_new..faces.len() {
                    if dot3(faces[g].n, pts[p]) - faces[g].d > eps {
                        faces[g].outside.push(p);
                        break;
                    }
                }
            }
            stack.extend(first_new..faces.len());
        }
        let live: Vec<&Face> = faces.iter().filter(|f| f.alive).collect();
        let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut out_faces = Vec::with_capacity(live.len());
        let mut normals = Vec::with_capacity(live.len());
        let mut offsets = Vec::with_capacity(live.len());
        for (fi, f) in live.iter().enumerate() {
            out_faces.push(f.v);
            normals.push(f.n);
            offsets.push(f.d);
            for e in 0..3 {
                let (u, w) = (f.v[e], f.v[(e + 1) % 3]);
                neighbors[u].push(w);
                neighbors[w].push(u);
                incident[u].push(fi);
            }
        }
        let mut vertices = Vec::new();
        for (i, nb) in neighbors.iter_mut().enumerate() {
            nb.sort_unstable();
            nb.dedup();
            if !nb.is_empty() {
                vertices.push(i);
            }
        }
        Some(Self { faces: out_faces, normals, offsets, vertices, neighbors, incident })
    }

    /// Undirected hull edges `(u, v)` with `u < v` and their two faces.
    pub fn edges(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut map: HashMap<(usize, usize), usize> = HashMap::new();
        let mut out = Vec::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for e in 0..3 {
                let (u, w) = (f[e], f[(e + 1) % 3]);
                if let Some(g) = map.remove(&(w, u)) {
                    out.push((u.min(w), u.max(w), g, fi));
                } else {
                    map.insert((u, w), fi);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_interior_and_collinear_points() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.5, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.4, 0.6],
        ];
        assert_eq!(hull2(&pts), vec![0, 1, 3, 4]);
    }

    #[test]
    fn cube_hull() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        pts.push(vec![0.5, 0.5, 0.5]);
        pts.push(vec![0.5, 0.5, 1.0]);
        let h = Hull3::new(&pts).unwrap();
        assert_eq!(h.vertices, (0..8).collect::<Vec<_>>());
        assert_eq!(h.faces.len(), 12);
        assert_eq!(h.edges().len(), 18);
        for (f, n) in h.faces.iter().zip(&h.normals) {
            for p in &pts {
                assert!(dot3(*n, p3(p)) <= dot3(*n, p3(&pts[f[0]])) + 1e-12);
            }
        }
        assert!(Hull3::new(&[vec![0.0; 3], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]])
            .is_none());
    }
}
