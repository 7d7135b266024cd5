//! Point clouds, their normal cones and restricted normal bundles, width, and
//! convex obstacles.

pub mod hull;
pub mod io;
mod obstacle;
mod width;

pub use obstacle::{ConvexObstacle, ObstacleNormal, Polytope};
pub use width::{extent, width, Width};

use serde::{Deserialize, Serialize};

use crate::linalg::{dot, norm, null_space, sub};
use crate::mc::{self, McEstimate, McPlan};
use crate::sphere::{sphere_measure, Direction};
use crate::{Error, Result};

/// A finite point set `X ⊂ B_r(0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub radius_bound: f64,
}

impl PointCloud {
    /// Validates dimensions and `|p| ≤ radius_bound` (with a relative slack
    /// of `1e-12`).
    pub fn new(dim: usize, points: Vec<Vec<f64>>, radius_bound: f64) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidDimension(dim));
        }
        if points.is_empty() {
            return Err(Error::Empty("point cloud"));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
            if !p.iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidParameter(format!("point {i} is not finite")));
            }
            if norm(p) > radius_bound * (1.0 + 1e-12) {
                return Err(Error::OutsideRadius { index: i });
            }
        }
        Ok(Self { dim, points, radius_bound })
    }

    /// Uses the largest point norm as the radius bound.
    pub fn from_points(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        let r = points.iter().map(|p| norm(p)).fold(0.0, f64::max);
        Self::new(dim, points, r)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Default tie tolerance for support queries, `1e-9·max(r, 1)`.
    pub fn tie_tol(&self) -> f64 {
        1e-9 * self.radius_bound.max(1.0)
    }
}

/// `max_j (x_j − x_i)·ν ≤ tol`.
pub fn in_normal_cone(x: &PointCloud, i: usize, nu: &[f64], tol: f64) -> bool {
    let xi = &x.points[i];
    let base = dot(xi, nu);
    x.points.iter().all(|p| dot(p, nu) - base <= tol)
}

/// Indices attaining `max_j x_j·ν` within `tie_tol`.
pub fn support_set(x: &PointCloud, nu: &[f64], tie_tol: f64) -> Vec<usize> {
    support_set_of(&x.points, nu, tie_tol)
}

pub(crate) fn support_set_of(points: &[Vec<f64>], nu: &[f64], tie_tol: f64) -> Vec<usize> {
    let vals: Vec<f64> = points.iter().map(|p| dot(p, nu)).collect();
    let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (0..vals.len()).filter(|&j| vals[j] >= m - tie_tol).collect()
}

/// Generators of the normal cone `N_{x_i}X = {ν : (x_j − x_i)·ν ≤ 0}`:
/// an orthonormal basis of its lineality space and its extreme rays modulo
/// that space. Both lists are empty iff the cone is `{0}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConeGenerators {
    pub lineality: Vec<Vec<f64>>,
    pub rays: Vec<Vec<f64>>,
}

impl ConeGenerators {
    pub fn is_trivial(&self) -> bool {
        self.lineality.is_empty() && self.rays.is_empty()
    }
}

pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Normal cone generators at `x_i` by enumeration of `(d−1)`-subsets of the
/// constraint rows, `d` the rank of the rows. Stops after the first ray when
/// `first_only` is set.
fn cone_generators(x: &PointCloud, i: usize, tol: f64, first_only: bool) -> ConeGenerators {
    let n = x.dim;
    let xi = &x.points[i];
    let scale = x.radius_bound.max(1e-300);
    let rows: Vec<Vec<f64>> = x
        .points
        .iter()
        .map(|p| sub(p, xi))
        .filter(|r| norm(r) > 1e-12 * scale)
        .collect();
    let lineality = null_space(&rows, n, 1e-12);
    if rows.is_empty() {
        return ConeGenerators { lineality, rays: Vec::new() };
    }
    // Work in the orthogonal complement of the lineality space.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        basis.push(e);
    }
    let all: Vec<Vec<f64>> = lineality.iter().cloned().chain(basis).collect();
    let q = crate::linalg::gram_schmidt(all, 1e-9);
    let comp: Vec<Vec<f64>> = q[lineality.len()..].to_vec();
    let d = comp.len();
    let reduced: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| comp.iter().map(|c| dot(r, c)).collect())
        .collect();
    let lift = |v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (c, &a) in comp.iter().zip(v) {
            for (o, ci) in out.iter_mut().zip(c) {
                *o += a * ci;
            }
        }
        out
    };
    let mut rays: Vec<Vec<f64>> = Vec::new();
    let feasible = |v: &[f64]| reduced.iter().all(|r| dot(r, v) <= tol);
    if d == 1 {
        for s in [1.0, -1.0] {
            if feasible(&[s]) {
                rays.push(lift(&[s]));
            }
        }
    } else {
        let rtol = 1e-9;
        for_each_subset(reduced.len(), d - 1, &mut |sub_idx| {
            let sel: Vec<Vec<f64>> = sub_idx.iter().map(|&j| reduced[j].clone()).collect();
            let ns = null_space(&sel, d, 1e-10);
            if ns.len() == 1 {
                for s in [1.0, -1.0] {
                    let v: Vec<f64> = ns[0].iter().map(|a| a * s).collect();
                    let rnorm = reduced.iter().map(|r| dot(r, &v)).fold(f64::NEG_INFINITY, f64::max);
                    if rnorm <= tol {
                        let full = lift(&v);
                        if !rays.iter().any(|r| dot(r, &full) > 1.0 - rtol) {
                            rays.push(full);
                        }
                        if first_only {
                            return false;
                        }
                    }
                }
            }
            true
        });
    }
    ConeGenerators { lineality, rays }
}

/// Exact generators of `N_{x_i}X`.
pub fn normal_cone(x: &PointCloud, i: usize) -> ConeGenerators {
    cone_generators(x, i, x.tie_tol(), false)
}

/// Whether `N_{x_i}X` contains a nonzero vector.
pub fn normal_cone_nonempty(x: &PointCloud, i: usize) -> bool {
    !cone_generators(x, i, x.tie_tol(), true).is_trivial()
}

/// Selector `σ : X → S^{N-1}` with `σ(x_i) ∈ N_{x_i}X` whenever that cone
/// is nonempty. Validated at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalSelector {
    sigma: Vec<Direction>,
}

impl NormalSelector {
    pub fn new(x: &PointCloud, sigma: Vec<Direction>) -> Result<Self> {
        if sigma.len() != x.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: sigma.len() });
        }
        let tol = x.tie_tol();
        for (i, s) in sigma.iter().enumerate() {
            if s.dim() != x.dim {
                return Err(Error::DimensionMismatch { expected: x.dim, got: s.dim() });
            }
            if !in_normal_cone(x, i, s.as_slice(), tol) && normal_cone_nonempty(x, i) {
                return Err(Error::InvalidSelector { index: i });
            }
        }
        Ok(Self { sigma })
    }

    /// The same direction at every point (valid for clouds in a hyperplane
    /// orthogonal to `d`).
    pub fn constant(x: &PointCloud, d: Direction) -> Result<Self> {
        Self::new(x, vec![d; x.len()])
    }

    /// A valid selector: the normalised mean of the cone's extreme rays (plus
    /// lineality directions when there are no rays) where the cone is
    /// nonempty, `fallback` elsewhere.
    pub fn cone_centers(x: &PointCloud, fallback: &Direction) -> Result<Self> {
        let mut sigma = Vec::with_capacity(x.len());
        for i in 0..x.len() {
            let g = normal_cone(x, i);
            let mut acc = vec![0.0; x.dim];
            let src = if g.rays.is_empty() { &g.lineality } else { &g.rays };
            for r in src.iter().take(if g.rays.is_empty() { 1 } else { usize::MAX }) {
                for (a, v) in acc.iter_mut().zip(r) {
                    *a += v;
                }
            }
            sigma.push(Direction::normalize(&acc).unwrap_or_else(|_| fallback.clone()));
        }
        Self::new(x, sigma)
    }

    /// At each point the unit direction of `N_{x_i}X` closest to `d` (the
    /// normalised projection of `d` onto the cone), the best generator when
    /// `d` is in the polar cone, and `d` itself where the cone is `{0}`.
    pub fn toward(x: &PointCloud, d: &Direction) -> Result<Self> {
        let mut sigma = Vec::with_capacity(x.len());
        for i in 0..x.len() {
            let g = normal_cone(x, i);
            if g.is_trivial() {
                sigma.push(d.clone());
                continue;
            }
            let mut gens = g.rays.clone();
            for l in &g.lineality {
                gens.push(l.clone());
                gens.push(l.iter().map(|v| -v).collect());
            }
            let lam = crate::linalg::nnls(&gens, d.as_slice());
            let mut p = vec![0.0; x.dim];
            for (gk, l) in gens.iter().zip(&lam) {
                for (pi, gi) in p.iter_mut().zip(gk) {
                    *pi += l * gi;
                }
            }
            let s = match Direction::normalize(&p) {
                Ok(s) if norm(&p) > 1e-12 => s,
                _ => {
                    let best = gens
                        .iter()
                        .max_by(|a, b| dot(a, d.as_slice()).total_cmp(&dot(b, d.as_slice())))
                        .expect("nontrivial cone");
                    Direction::normalize(best)?
                }
            };
            sigma.push(s);
        }
        Self::new(x, sigma)
    }

    pub fn get(&self, i: usize) -> &Direction {
        &self.sigma[i]
    }

    pub fn as_slice(&self) -> &[Direction] {
        &self.sigma
    }
}

/// Monte Carlo `H^{N-1}` of the restricted normal bundle `N^{σ,θ}X`: a
/// direction is accepted iff some support point `x_i` has `ν·σ(x_i) ≥ cos θ`.
pub fn bundle_measure(
    x: &PointCloud,
    sigma: &NormalSelector,
    theta: f64,
    plan: &McPlan,
) -> Result<McEstimate> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::InvalidAngle(theta));
    }
    if x.dim < 2 {
        return Err(Error::InvalidDimension(x.dim));
    }
    if sigma.as_slice().len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: sigma.as_slice().len() });
    }
    let cos_t = theta.cos();
    let tie = x.tie_tol();
    let total = sphere_measure(x.dim)?;
    let hits = mc::count_hits(plan, x.dim, |nu| bundle_accepts(x, sigma, cos_t, tie, nu));
    Ok(McEstimate::from_hits(hits, plan.samples, plan.seed, total))
}

#[inline]
pub(crate) fn bundle_accepts(
    x: &PointCloud,
    sigma: &NormalSelector,
    cos_t: f64,
    tie: f64,
    nu: &[f64],
) -> bool {
    let mut m = f64::NEG_INFINITY;
    for p in &x.points {
        m = m.max(dot(p, nu));
    }
    x.points
        .iter()
        .zip(sigma.as_slice())
        .any(|(p, s)| dot(p, nu) >= m - tie && dot(nu, s.as_slice()) >= cos_t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> PointCloud {
        PointCloud::from_points(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]],
        )
        .unwrap()
    }

    #[test]
    fn normal_cone_membership() {
        let x = PointCloud::from_points(2, vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(in_normal_cone(&x, 0, &[-1.0, 0.0], 1e-12));
        assert!(!in_normal_cone(&x, 0, &[1.0, 0.0], 1e-12));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(in_normal_cone(&square(), 2, &[s, s], 1e-12));
    }

    #[test]
    fn support_sets() {
        let sq = square();
        let mut right = support_set(&sq, &[1.0, 0.0], 1e-9);
        right.sort();
        assert_eq!(right, vec![1, 2]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(support_set(&sq, &[s, s], 1e-9), vec![2]);
        let one = PointCloud::from_points(3, vec![vec![0.1, 0.2, 0.3]]).unwrap();
        assert_eq!(support_set(&one, &[0.0, 0.0, 1.0], 1e-9), vec![0]);
    }

    #[test]
    fn cone_rays_of_square_corner() {
        let g = normal_cone(&square(), 2);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays.len(), 2);
        for r in &g.rays {
            assert!((r[0] - 1.0).abs() < 1e-12 && r[1].abs() < 1e-12
                || (r[1] - 1.0).abs() < 1e-12 && r[0].abs() < 1e-12);
        }
    }

    #[test]
    fn interior_point_has_trivial_cone() {
        let mut pts = square().points;
        pts.push(vec![0.5, 0.5]);
        let x = PointCloud::from_points(2, pts).unwrap();
        assert!(!normal_cone_nonempty(&x, 4));
        assert!(normal_cone_nonempty(&x, 0));
        // Any direction is acceptable at the interior point.
        let mut sigma: Vec<Direction> = (0..4)
            .map(|i| Direction::normalize(&sub(&x.points[i], &[0.5, 0.5])).unwrap())
            .collect();
        sigma.push(Direction::axis(2, 1));
        assert!(NormalSelector::new(&x, sigma.clone()).is_ok());
        sigma[0] = Direction::axis(2, 0);
        assert_eq!(
            NormalSelector::new(&x, sigma).unwrap_err(),
            Error::InvalidSelector { index: 0 }
        );
    }

    #[test]
    fn collinear_cloud_has_lineality() {
        let x = PointCloud::from_points(3, vec![vec![0.0; 3], vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]])
            .unwrap();
        let g = normal_cone(&x, 1);
        assert_eq!(g.lineality.len(), 2);
        assert!(g.rays.is_empty());
        let end = normal_cone(&x, 2);
        assert_eq!(end.rays.len(), 1);
        assert!((end.rays[0][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cone_centers_are_valid() {
        let x = PointCloud::from_points(
            3,
            vec![
                vec![0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![0.1, 0.1, 0.1],
            ],
        )
        .unwrap();
        let sel = NormalSelector::cone_centers(&x, &Direction::axis(3, 2)).unwrap();
        for i in 0..4 {
            assert!(in_normal_cone(&x, i, sel.get(i).as_slice(), 1e-12));
        }
    }
}
