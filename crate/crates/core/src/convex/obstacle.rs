use serde::{Deserialize, Serialize};

use crate::linalg::{dot, norm, solve, sub};
use crate::sphere::Direction;
use crate::{Error, Result};

/// `{x : a_i·x ≤ b_i}` with unit normals `a_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polytope {
    pub normals: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
}

impl Polytope {
    fn dim(&self) -> usize {
        self.normals[0].len()
    }

    fn scale(&self) -> f64 {
        self.offsets.iter().fold(1.0f64, |a, b| a.max(b.abs()))
    }

    fn residual(&self, x: &[f64]) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| dot(a, x) - b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Nearest point of `{a_i·x ≤ b_i − shrink}` by enumeration of active
    /// sets of at most `N` constraints; the first candidate satisfying the
    /// KKT conditions is the projection. `None` if the set is empty.
    fn project_shrunk(&self, x: &[f64], shrink: f64) -> Option<Vec<f64>> {
        let n = self.dim();
        let m = self.normals.len();
        let tol = 1e-12 * self.scale();
        let feasible = |y: &[f64]| {
            self.normals
                .iter()
                .zip(&self.offsets)
                .all(|(a, b)| dot(a, y) - (b - shrink) <= tol)
        };
        if feasible(x) {
            return Some(x.to_vec());
        }
        let mut fallback: Option<(f64, Vec<f64>)> = None;
        for k in 1..=n.min(m) {
            let mut found = None;
            super::for_each_subset(m, k, &mut |s| {
                let gram: Vec<Vec<f64>> = s
                    .iter()
                    .map(|&i| s.iter().map(|&j| dot(&self.normals[i], &self.normals[j])).collect())
                    .collect();
                let rhs: Vec<f64> = s
                    .iter()
                    .map(|&i| dot(&self.normals[i], x) - (self.offsets[i] - shrink))
                    .collect();
                let Some(lam) = solve(&gram, &rhs, 1e-10) else {
                    return true;
                };
                let mut y = x.to_vec();
                for (&i, l) in s.iter().zip(&lam) {
                    for (yk, ak) in y.iter_mut().zip(&self.normals[i]) {
                        *yk -= l * ak;
                    }
                }
                if feasible(&y) {
                    if lam.iter().all(|&l| l >= -1e-12) {
                        found = Some(y);
                        return false;
                    }
                    let d = crate::linalg::dist(&y, x);
                    if fallback.as_ref().is_none_or(|(bd, _)| d < *bd) {
                        fallback = Some((d, y));
                    }
                }
                true
            });
            if found.is_some() {
                return found;
            }
        }
        fallback.map(|(_, y)| y)
    }
}

/// Serialized form of an obstacle; see [`ConvexObstacle`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ObstacleSpec {
    Polytope { normals: Vec<Vec<f64>>, offsets: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Dilation { base: Box<ObstacleSpec>, eta: f64 },
}

/// A closed convex body with nonempty interior.
///
/// The dilation `C_η = C + B̄_η(0)` is never built explicitly: every query
/// goes through the base body, using `sd_{C_η} = sd_C − η`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ObstacleSpec", into = "ObstacleSpec")]
pub enum ConvexObstacle {
    Polytope(Polytope),
    Ball { center: Vec<f64>, radius: f64 },
    Dilation { base: Box<ConvexObstacle>, eta: f64 },
}

impl TryFrom<ObstacleSpec> for ConvexObstacle {
    type Error = Error;
    fn try_from(s: ObstacleSpec) -> Result<Self> {
        match s {
            ObstacleSpec::Polytope { normals, offsets } => Self::polytope(normals, offsets),
            ObstacleSpec::Ball { center, radius } => Self::ball(center, radius),
            ObstacleSpec::Dilation { base, eta } => Self::dilation(Self::try_from(*base)?, eta),
        }
    }
}

impl From<ConvexObstacle> for ObstacleSpec {
    fn from(c: ConvexObstacle) -> Self {
        match c {
            ConvexObstacle::Polytope(p) => ObstacleSpec::Polytope { normals: p.normals, offsets: p.offsets },
            ConvexObstacle::Ball { center, radius } => ObstacleSpec::Ball { center, radius },
            ConvexObstacle::Dilation { base, eta } => {
                ObstacleSpec::Dilation { base: Box::new((*base).into()), eta }
            }
        }
    }
}

/// Outer unit normal at a boundary point; `smooth` is false at polytope
/// faces of codimension ≥ 2, where `normal` is one extreme direction of the
/// normal cone.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleNormal {
    pub normal: Direction,
    pub smooth: bool,
}

impl ConvexObstacle {
    /// Halfspace intersection `a_i·x ≤ b_i`; normals are rescaled to unit
    /// length. Rejects sets with empty interior.
    pub fn polytope(normals: Vec<Vec<f64>>, offsets: Vec<f64>) -> Result<Self> {
        if normals.is_empty() {
            return Err(Error::Empty("polytope constraints"));
        }
        if normals.len() != offsets.len() {
            return Err(Error::DimensionMismatch { expected: normals.len(), got: offsets.len() });
        }
        let dim = normals[0].len();
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let mut ns = Vec::with_capacity(normals.len());
        let mut bs = Vec::with_capacity(normals.len());
        for (a, b) in normals.iter().zip(&offsets) {
            if a.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.len() });
            }
            let l = norm(a);
            if !(l > 1e-300) || !l.is_finite() || !b.is_finite() {
                return Err(Error::InvalidParameter("polytope constraint".into()));
            }
            ns.push(a.iter().map(|v| v / l).collect());
            bs.push(b / l);
        }
        let p = Polytope { normals: ns, offsets: bs };
        let eps = 1e-9 * p.scale();
        if p.project_shrunk(&vec![0.0; dim], eps).is_none() {
            return Err(Error::DegenerateObstacle);
        }
        Ok(Self::Polytope(p))
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn aabb(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let n = lo.len();
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for k in 0..n {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            normals.push(e.clone());
            offsets.push(hi[k]);
            e[k] = -1.0;
            normals.push(e);
            offsets.push(-lo[k]);
        }
        Self::polytope(normals, offsets)
    }

    /// Cube of half-side `half` centred at `center`.
    pub fn cube(center: &[f64], half: f64) -> Result<Self> {
        let lo: Vec<f64> = center.iter().map(|c| c - half).collect();
        let hi: Vec<f64> = center.iter().map(|c| c + half).collect();
        Self::aabb(&lo, &hi)
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::DegenerateObstacle);
        }
        Ok(Self::Ball { center, radius })
    }

    pub fn dilation(base: ConvexObstacle, eta: f64) -> Result<Self> {
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::InvalidParameter(format!("dilation radius {eta}")));
        }
        Ok(Self::Dilation { base: Box::new(base), eta })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Polytope(p) => p.dim(),
            Self::Ball { center, .. } => center.len(),
            Self::Dilation { base, .. } => base.dim(),
        }
    }

    /// Nearest point of the obstacle.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Self::Polytope(p) => p.project_shrunk(x, 0.0).expect("nonempty polytope"),
            Self::Ball { center, radius } => {
                let d = sub(x, center);
                let l = norm(&d);
                if l <= *radius {
                    x.to_vec()
                } else {
                    center.iter().zip(&d).map(|(c, v)| c + v * radius / l).collect()
                }
            }
            Self::Dilation { base, eta } => {
                let p = base.project(x);
                let d = sub(x, &p);
                let l = norm(&d);
                if l <= *eta {
                    x.to_vec()
                } else {
                    p.iter().zip(&d).map(|(c, v)| c + v * eta / l).collect()
                }
            }
        }
    }

    /// Euclidean distance to the obstacle (zero inside).
    pub fn distance(&self, x: &[f64]) -> f64 {
        self.signed_distance(x).max(0.0)
    }

    /// Distance to the obstacle outside, minus the distance to the boundary
    /// inside.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        match self {
            Self::Polytope(p) => {
                let r = p.residual(x);
                if r <= 0.0 {
                    r
                } else {
                    // The projection treats near-feasible points as feasible;
                    // the residual is an exact lower bound outside.
                    crate::linalg::dist(x, &self.project(x)).max(r)
                }
            }
            Self::Ball { center, radius } => crate::linalg::dist(x, center) - radius,
            Self::Dilation { base, eta } => base.signed_distance(x) - eta,
        }
    }

    /// Nearest point of the boundary (equal to [`Self::project`] outside).
    pub fn boundary_point(&self, x: &[f64]) -> Vec<f64> {
        if self.signed_distance(x) > 0.0 {
            return self.project(x);
        }
        match self {
            Self::Polytope(p) => {
                let (i, depth) = p
                    .normals
                    .iter()
                    .zip(&p.offsets)
                    .map(|(a, b)| b - dot(a, x))
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("nonempty");
                x.iter().zip(&p.normals[i]).map(|(v, a)| v + depth * a).collect()
            }
            Self::Ball { center, radius } => {
                let d = sub(x, center);
                let l = norm(&d);
                let u: Vec<f64> = if l > 0.0 { d.iter().map(|v| v / l).collect() } else {
                    let mut e = vec![0.0; d.len()];
                    e[0] = 1.0;
                    e
                };
                center.iter().zip(&u).map(|(c, v)| c + radius * v).collect()
            }
            Self::Dilation { base, eta } => {
                let q = if base.signed_distance(x) > 0.0 { base.project(x) } else { base.boundary_point(x) };
                let n = if base.signed_distance(x) > 0.0 {
                    crate::linalg::normalized(&sub(x, &q)).unwrap_or_else(|| vec![0.0; x.len()])
                } else {
                    base.normal(&q, 1e-9 * (1.0 + norm(&q))).map(|n| n.normal.into_vec()).unwrap_or_default()
                };
                q.iter().zip(&n).map(|(a, b)| a + eta * b).collect()
            }
        }
    }

    /// `signed_distance(x) ≤ tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.signed_distance(x) <= tol
    }

    /// Outer unit normal at `x`, which must lie within `tol` of the boundary.
    pub fn normal(&self, x: &[f64], tol: f64) -> Result<ObstacleNormal> {
        let sd = self.signed_distance(x);
        if sd.abs() > tol {
            return Err(Error::NotOnBoundary(sd));
        }
        Ok(match self {
            Self::Polytope(p) => {
                let active = self.active_facets(p, x, tol);
                ObstacleNormal {
                    normal: Direction::normalize(&p.normals[active[0]])?,
                    smooth: active.len() == 1,
                }
            }
            Self::Ball { center, .. } => ObstacleNormal {
                normal: Direction::normalize(&sub(x, center))?,
                smooth: true,
            },
            Self::Dilation { base, eta } => {
                if *eta == 0.0 {
                    return base.normal(x, tol);
                }
                let p = base.project(x);
                ObstacleNormal { normal: Direction::normalize(&sub(x, &p))?, smooth: true }
            }
        })
    }

    fn active_facets(&self, p: &Polytope, x: &[f64], tol: f64) -> Vec<usize> {
        let mut act: Vec<(usize, f64)> = p
            .normals
            .iter()
            .zip(&p.offsets)
            .enumerate()
            .map(|(i, (a, b))| (i, dot(a, x) - b))
            .filter(|(_, r)| *r >= -tol)
            .collect();
        act.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        act.into_iter().map(|(i, _)| i).collect()
    }

    /// Generators of the obstacle's normal cone at a boundary point `x`: the
    /// active facet normals of a polytope, the single normal otherwise.
    pub fn normal_generators(&self, x: &[f64], tol: f64) -> Result<Vec<Direction>> {
        match self {
            Self::Polytope(p) => {
                let sd = self.signed_distance(x);
                if sd.abs() > tol {
                    return Err(Error::NotOnBoundary(sd));
                }
                self.active_facets(p, x, tol)
                    .into_iter()
                    .map(|i| Direction::normalize(&p.normals[i]))
                    .collect()
            }
            Self::Dilation { base, eta } if *eta == 0.0 => base.normal_generators(x, tol),
            _ => Ok(vec![self.normal(x, tol)?.normal]),
        }
    }

    /// The image under `x ↦ λx`, `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Self {
        match self {
            Self::Polytope(p) => Self::Polytope(Polytope {
                normals: p.normals.clone(),
                offsets: p.offsets.iter().map(|b| b * lambda).collect(),
            }),
            Self::Ball { center, radius } => Self::Ball {
                center: center.iter().map(|c| c * lambda).collect(),
                radius: radius * lambda,
            },
            Self::Dilation { base, eta } => Self::Dilation {
                base: Box::new(base.scaled(lambda)),
                eta: eta * lambda,
            },
        }
    }

    /// The image under `x ↦ x + t`.
    pub fn translated(&self, t: &[f64]) -> Self {
        match self {
            Self::Polytope(p) => Self::Polytope(Polytope {
                normals: p.normals.clone(),
                offsets: p.normals.iter().zip(&p.offsets).map(|(a, b)| b + dot(a, t)).collect(),
            }),
            Self::Ball { center, radius } => Self::Ball {
                center: center.iter().zip(t).map(|(c, s)| c + s).collect(),
                radius: *radius,
            },
            Self::Dilation { base, eta } => Self::Dilation {
                base: Box::new(base.translated(t)),
                eta: *eta,
            },
        }
    }
}
