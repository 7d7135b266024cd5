use thiserror::Error;

/// Errors raised by precondition checks across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("angle {0} outside [0, pi]")]
    InvalidAngle(f64),
    #[error("negative mass {0}")]
    NegativeMass(f64),
    #[error("vector is not unit length (norm {0})")]
    NotUnit(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("point {index} lies outside the stated radius bound")]
    OutsideRadius { index: usize },
    #[error("normal selector invalid at point {index}: sigma is not in the normal cone")]
    InvalidSelector { index: usize },
    #[error("base direction does not satisfy constraint {constraint}")]
    NotInRegion { constraint: usize },
    #[error("region is not spherically convex: {0}")]
    NotSphericallyConvex(&'static str),
    #[error("point is not on the obstacle boundary (distance {0})")]
    NotOnBoundary(f64),
    #[error("obstacle has empty interior")]
    DegenerateObstacle,
    #[error("vertex {index} lies inside the obstacle (depth {depth})")]
    VertexInsideObstacle { index: usize, depth: f64 },
    #[error("facet {facet} references missing vertex")]
    BadFacet { facet: usize },
    #[error("contact-angle gate failed: margin {margin} exceeds {tolerance}")]
    GateFailed { margin: f64, tolerance: f64 },
    #[error("infeasible mass {mass}: available {available}")]
    InfeasibleMass { mass: f64, available: f64 },
    #[error("degenerate metric at parameter ({u}, {v})")]
    DegenerateMetric { u: f64, v: f64 },
    #[error("parameter ({u}, {v}) outside the chart domain")]
    OutsideDomain { u: f64, v: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("insufficient budget: need {needed} samples, have {budget}")]
    InsufficientBudget { needed: u64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
