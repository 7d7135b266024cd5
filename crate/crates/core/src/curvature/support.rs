//! Support queries `argmax_j x_j·ν` over a fixed vertex set.
//!
//! Large sets in `R^3` use a greedy ascent on the hull vertex graph started
//! from a cube-map cache of precomputed maximisers; a linear function on a
//! polytope has no non-global local maxima, so the walk ends at the support
//! point. Ties within `tie` are collected by a flood fill over hull edges
//! (the tie set is a face, hence connected). Everything else is brute force.

use crate::convex::hull::Hull3;
use crate::linalg::dot;

const BRUTE_LIMIT: usize = 64;
const CACHE_RES: usize = 16;

enum Kind {
    Brute,
    Walk { neighbors: Vec<Vec<usize>>, cache: Vec<usize> },
}

pub(crate) struct SupportIndex {
    pts: Vec<Vec<f64>>,
    contact: Vec<bool>,
    tie: f64,
    kind: Kind,
}

fn cell(nu: &[f64]) -> usize {
    let k = (0..3).max_by(|&a, &b| nu[a].abs().total_cmp(&nu[b].abs())).unwrap();
    let face = 2 * k + usize::from(nu[k] < 0.0);
    let m = nu[k].abs();
    let (a, b) = ((k + 1) % 3, (k + 2) % 3);
    let q = |v: f64| (((v / m + 1.0) * 0.5 * CACHE_RES as f64) as usize).min(CACHE_RES - 1);
    (face * CACHE_RES + q(nu[a])) * CACHE_RES + q(nu[b])
}

fn cell_center(c: usize) -> [f64; 3] {
    let ib = c % CACHE_RES;
    let ia = (c / CACHE_RES) % CACHE_RES;
    let face = c / (CACHE_RES * CACHE_RES);
    let k = face / 2;
    let s = if face % 2 == 1 { -1.0 } else { 1.0 };
    let mid = |i: usize| -1.0 + (2.0 * i as f64 + 1.0) / CACHE_RES as f64;
    let mut v = [0.0; 3];
    v[k] = s;
    v[(k + 1) % 3] = mid(ia);
    v[(k + 2) % 3] = mid(ib);
    v
}

impl SupportIndex {
    pub(crate) fn new(pts: &[Vec<f64>], contact: &[bool], tie: f64, hull: Option<&Hull3>) -> Self {
        let kind = if pts.len() >= BRUTE_LIMIT {
            match hull {
                Some(h) => {
                    let cache = (0..6 * CACHE_RES * CACHE_RES)
                        .map(|c| {
                            let d = cell_center(c);
                            *h.vertices
                                .iter()
                                .max_by(|&&i, &&j| dot(&pts[i], &d).total_cmp(&dot(&pts[j], &d)))
                                .unwrap()
                        })
                        .collect();
                    Kind::Walk { neighbors: h.neighbors.clone(), cache }
                }
                None => Kind::Brute,
            }
        } else {
            Kind::Brute
        };
        Self { pts: pts.to_vec(), contact: contact.to_vec(), tie, kind }
    }

    fn val(&self, i: usize, nu: &[f64]) -> f64 {
        dot(&self.pts[i], nu)
    }

    /// A maximiser and the maximum.
    pub(crate) fn argmax(&self, nu: &[f64]) -> (usize, f64) {
        match &self.kind {
            Kind::Brute => {
                let mut best = (0, f64::NEG_INFINITY);
                for i in 0..self.pts.len() {
                    let v = self.val(i, nu);
                    if v > best.1 {
                        best = (i, v);
                    }
                }
                best
            }
            Kind::Walk { neighbors, cache } => {
                let mut v = cache[cell(nu)];
                let mut m = self.val(v, nu);
                loop {
                    let mut next = None;
                    for &w in &neighbors[v] {
                        let x = self.val(w, nu);
                        if x > m {
                            m = x;
                            next = Some(w);
                        }
                    }
                    match next {
                        Some(w) => v = w,
                        None => return (v, m),
                    }
                }
            }
        }
    }

    /// Indices within `tie` of the maximum. Under the walk only hull vertices
    /// are reported.
    pub(crate) fn support(&self, nu: &[f64]) -> Vec<usize> {
        let (v, m) = self.argmax(nu);
        match &self.kind {
            Kind::Brute => (0..self.pts.len()).filter(|&i| self.val(i, nu) >= m - self.tie).collect(),
            Kind::Walk { neighbors, .. } => {
                let mut out = vec![v];
                let mut q = 0;
                while q < out.len() {
                    let u = out[q];
                    q += 1;
                    for &w in &neighbors[u] {
                        if !out.contains(&w) && self.val(w, nu) >= m - self.tie {
                            out.push(w);
                        }
                    }
                }
                out.sort_unstable();
                out
            }
        }
    }

    /// Whether the support set of `ν` contains a vertex off the obstacle.
    pub(crate) fn accepts(&self, nu: &[f64]) -> bool {
        if let Kind::Brute = self.kind {
            let mut m = f64::NEG_INFINITY;
            for p in &self.pts {
                m = m.max(dot(p, nu));
            }
            return (0..self.pts.len()).any(|i| !self.contact[i] && self.val(i, nu) >= m - self.tie);
        }
        let (v, _) = self.argmax(nu);
        if !self.contact[v] {
            return true;
        }
        self.support(nu).iter().any(|&i| !self.contact[i])
    }

    #[cfg(test)]
    pub(crate) fn uses_hull_walk(&self) -> bool {
        matches!(self.kind, Kind::Walk { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc;

    #[test]
    fn walk_agrees_with_brute_force() {
        let pts: Vec<Vec<f64>> = mc::directions(3, 500, 3)
            .into_iter()
            .enumerate()
            .map(|(i, d)| d.iter().map(|v| v * (1.0 + 0.3 * ((i % 7) as f64) / 7.0)).collect())
            .collect();
        let flags = vec![false; pts.len()];
        let hull = Hull3::new(&pts).unwrap();
        let walk = SupportIndex::new(&pts, &flags, 1e-12, Some(&hull));
        assert!(walk.uses_hull_walk());
        for nu in mc::directions(3, 2000, 11) {
            let (_, m) = walk.argmax(&nu);
            let brute = pts.iter().map(|p| dot(p, &nu)).fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(m, brute);
        }
    }
}
