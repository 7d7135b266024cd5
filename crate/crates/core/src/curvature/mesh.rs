//! Named triangle-mesh constructors for the test scenes.

use serde::{Deserialize, Serialize};

use crate::linalg::{dot, normalized};

/// Vertices and simplicial facets (vertex index lists).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<Vec<usize>>,
}

impl Mesh {
    /// Disjoint union.
    pub fn union(&self, other: &Mesh) -> Mesh {
        let off = self.vertices.len();
        let mut m = self.clone();
        m.vertices.extend(other.vertices.iter().cloned());
        m.facets
            .extend(other.facets.iter().map(|f| f.iter().map(|i| i + off).collect()));
        m
    }

    pub fn translated(&self, t: &[f64]) -> Mesh {
        Mesh {
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect())
                .collect(),
            facets: self.facets.clone(),
        }
    }

    /// Applies the row-major `3 × 3` matrix `r`.
    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> Mesh {
        Mesh {
            vertices: self
                .vertices
                .iter()
                .map(|v| r.iter().map(|row| dot(row, v)).collect())
                .collect(),
            facets: self.facets.clone(),
        }
    }

    pub fn scaled(&self, s: f64) -> Mesh {
        Mesh {
            vertices: self.vertices.iter().map(|v| v.iter().map(|a| a * s).collect()).collect(),
            facets: self.facets.clone(),
        }
    }

    pub fn map_vertices(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Mesh {
        Mesh { vertices: self.vertices.iter().map(|v| f(v)).collect(), facets: self.facets.clone() }
    }

    /// Longest facet edge.
    pub fn max_edge(&self) -> f64 {
        let mut h = 0.0f64;
        for f in &self.facets {
            for k in 0..f.len() {
                let a = &self.vertices[f[k]];
                let b = &self.vertices[f[(k + 1) % f.len()]];
                h = h.max(crate::linalg::dist(a, b));
            }
        }
        h
    }
}

/// Rotation by `angle` about the unit `axis` (Rodrigues).
pub fn rotation(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let (s, c) = angle.sin_cos();
    let [x, y, z] = axis;
    let t = 1.0 - c;
    [
        [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
        [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
        [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
    ]
}

/// Concentric-ring triangulation of the unit disk: ring `k` (`1 ≤ k ≤ rings`)
/// has `6k` nodes at radius `k/rings`. Returns `(polar nodes (ρ, φ), facets)`
/// with node 0 the centre; facets are counter-clockwise seen from `+z`.
fn disk_rings(rings: usize) -> (Vec<(f64, f64)>, Vec<Vec<usize>>) {
    let mut nodes = vec![(0.0, 0.0)];
    let mut start = vec![0usize];
    for k in 1..=rings {
        start.push(nodes.len());
        let m = 6 * k;
        for j in 0..m {
            nodes.push((k as f64 / rings as f64, 2.0 * std::f64::consts::PI * j as f64 / m as f64));
        }
    }
    let mut facets = Vec::new();
    for j in 0..6 {
        facets.push(vec![0, 1 + j, 1 + (j + 1) % 6]);
    }
    for k in 2..=rings {
        let (ni, no) = (6 * (k - 1), 6 * k);
        let inner = |i: usize| start[k - 1] + i % ni;
        let outer = |o: usize| start[k] + o % no;
        let (mut i, mut o) = (0usize, 0usize);
        // Merge the two rings by angle.
        while i < ni || o < no {
            let take_outer = o < no && (i == ni || (o + 1) * ni <= (i + 1) * no);
            if take_outer {
                facets.push(vec![inner(i), outer(o), outer(o + 1)]);
                o += 1;
            } else {
                facets.push(vec![inner(i), outer(o), inner(i + 1)]);
                i += 1;
            }
        }
    }
    (nodes, facets)
}

/// The boundary of `B_R(c) ∩ {z ≥ 0}` with `c = (0, 0, −R cos θ0)`: a
/// spherical cap meeting the plane `z = 0` at angle `θ0`, closed by a flat
/// base disk. The dome carries `rings` rings of polar angle `θ0·k/rings`
/// (ring `k` has `6k` nodes); the base is the same ring triangulation of the
/// rim disk. Returns the mesh and the number of dome vertices off the plane
/// (apex and rings `1..rings−1`); the rim ring and the base interior follow.
pub fn cap_on_plane(theta0: f64, radius: f64, rings: usize) -> (Mesh, usize) {
    let (nodes, disk) = disk_rings(rings);
    let zc = -radius * theta0.cos();
    let rim_r = radius * theta0.sin();
    let mut vertices: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&(rho, phi)| {
            let t = theta0 * rho;
            let z = if rho == 1.0 { 0.0 } else { zc + radius * t.cos() };
            vec![radius * t.sin() * phi.cos(), radius * t.sin() * phi.sin(), z]
        })
        .collect();
    let rim_start = 1 + 3 * rings * (rings - 1);
    let base = vertices.len();
    for &(rho, phi) in &nodes[..rim_start] {
        vertices.push(vec![rim_r * rho * phi.cos(), rim_r * rho * phi.sin(), 0.0]);
    }
    let mut facets = disk.clone();
    let lift = |j: usize| if j < rim_start { base + j } else { j };
    facets.extend(disk.iter().map(|f| vec![lift(f[0]), lift(f[2]), lift(f[1])]));
    (Mesh { vertices, facets }, rim_start)
}

/// Icosphere of radius `radius` centred at `center` after `level`
/// subdivisions.
pub fn icosphere(center: &[f64], radius: f64, level: usize) -> Mesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut v: Vec<Vec<f64>> = [
        [-1.0, t, 0.0], [1.0, t, 0.0], [-1.0, -t, 0.0], [1.0, -t, 0.0],
        [0.0, -1.0, t], [0.0, 1.0, t], [0.0, -1.0, -t], [0.0, 1.0, -t],
        [t, 0.0, -1.0], [t, 0.0, 1.0], [-t, 0.0, -1.0], [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|p| normalized(p).unwrap())
    .collect();
    let mut f: Vec<[usize; 3]> = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid = std::collections::HashMap::new();
        let mut nf = Vec::with_capacity(f.len() * 4);
        let mut midpoint = |a: usize, b: usize, v: &mut Vec<Vec<f64>>| -> usize {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let m: Vec<f64> = v[a].iter().zip(&v[b]).map(|(x, y)| x + y).collect();
                v.push(normalized(&m).unwrap());
                v.len() - 1
            })
        };
        for [a, b, c] in f {
            let ab = midpoint(a, b, &mut v);
            let bc = midpoint(b, c, &mut v);
            let ca = midpoint(c, a, &mut v);
            nf.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        f = nf;
    }
    Mesh {
        vertices: v
            .into_iter()
            .map(|p| p.iter().zip(center).map(|(x, c)| c + radius * x).collect())
            .collect(),
        facets: f.into_iter().map(|t| t.to_vec()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_ring_counts() {
        let (nodes, facets) = disk_rings(4);
        assert_eq!(nodes.len(), 1 + 3 * 4 * 5);
        // Euler: a triangulated disk with V nodes and B boundary nodes has
        // 2V − B − 2 triangles.
        assert_eq!(facets.len(), 2 * nodes.len() - 24 - 2);
    }

    #[test]
    fn cap_rim_on_plane() {
        let (m, dome) = cap_on_plane(1.0, 2.0, 6);
        for v in &m.vertices[dome..] {
            assert_eq!(v[2], 0.0);
        }
        for v in &m.vertices[..dome] {
            assert!(v[2] > 0.0);
        }
        let rim = &m.vertices[dome];
        assert!(((rim[0] * rim[0] + rim[1] * rim[1]).sqrt() - 2.0 * 1f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn icosphere_counts() {
        let m = icosphere(&[0.0; 3], 1.0, 2);
        assert_eq!(m.vertices.len(), 162);
        assert_eq!(m.facets.len(), 320);
    }
}
