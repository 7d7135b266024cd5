//! Geometric measures and sharp inequalities for surfaces and sets outside
//! convex obstacles.
//!
//! The crate is organised bottom-up:
//!
//! - [`sphere`]: exact cap measures on `S^{N-1}` and Monte Carlo measures of
//!   spherical polytopes.
//! - [`convex`]: point clouds, normal cones, restricted normal bundles, width,
//!   and convex obstacles (polytopes, balls, dilations).
//! - [`curvature`]: total positive curvature `K^+` of polytopal surfaces
//!   resting on obstacles, the contact-angle gate and the stability checks.
//! - [`willmore`]: `∫|H|^{N-1}` on analytic surfaces of revolution.
//! - [`stability`]: slab-flattened point clouds and the calibrated `δ(ε)`
//!   table.
//! - [`isoprofile`]: planar relative isoperimetric profiles and invariants
//!   of their minimizers.
//!
//! Every Monte Carlo estimator runs on [`mc`], whose sample stream depends
//! only on `(seed, sample index)`, never on the number of workers.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod convex;
pub mod curvature;
mod error;
pub mod isoprofile;
pub mod linalg;
pub mod mc;
pub mod quadrature;
pub mod sphere;
pub mod stability;
pub mod willmore;

pub use error::{Error, Result};
pub use mc::{McEstimate, McPlan};
pub use sphere::Direction;
