//! JSON documents for point clouds and obstacles.
//!
//! ```json
//! {"dim": 2, "points": [[0, 0], [1, 0]], "sigma": [[-1, 0], [1, 0]]}
//! {"obstacle": {"type": "ball", "center": [0, 0], "radius": 1}}
//! ```

use serde::{Deserialize, Serialize};

use super::{ConvexObstacle, NormalSelector, PointCloud};
use crate::sphere::Direction;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointCloudDoc {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<Vec<f64>>>,
    /// Defaults to the largest point norm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_bound: Option<f64>,
}

impl PointCloudDoc {
    /// Validates the cloud and, when present, the selector (normalising each
    /// `sigma` entry).
    pub fn build(&self) -> Result<(PointCloud, Option<NormalSelector>)> {
        let cloud = match self.radius_bound {
            Some(r) => PointCloud::new(self.dim, self.points.clone(), r)?,
            None => PointCloud::from_points(self.dim, self.points.clone())?,
        };
        let sigma = match &self.sigma {
            None => None,
            Some(s) => {
                let dirs = s.iter().map(|v| Direction::normalize(v)).collect::<Result<Vec<_>>>()?;
                Some(NormalSelector::new(&cloud, dirs)?)
            }
        };
        Ok((cloud, sigma))
    }

    pub fn from_cloud(cloud: &PointCloud, sigma: Option<&NormalSelector>) -> Self {
        Self {
            dim: cloud.dim,
            points: cloud.points.clone(),
            sigma: sigma.map(|s| s.as_slice().iter().map(|d| d.as_slice().to_vec()).collect()),
            radius_bound: Some(cloud.radius_bound),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleDoc {
    pub obstacle: ConvexObstacle,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_cloud_with_selector() {
        let doc: PointCloudDoc =
            serde_json::from_str(r#"{"dim": 2, "points": [[0, 0], [1, 0]], "sigma": [[-2, 0], [1, 0]]}"#)
                .unwrap();
        let (cloud, sigma) = doc.build().unwrap();
        assert_eq!(cloud.len(), 2);
        assert_eq!(sigma.unwrap().get(0).as_slice(), &[-1.0, 0.0]);
        let bad: PointCloudDoc =
            serde_json::from_str(r#"{"dim": 2, "points": [[0, 0], [1, 0]], "sigma": [[1, 0], [1, 0]]}"#)
                .unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn parse_obstacle_variants() {
        let s = r#"{"obstacle": {"type": "dilation", "eta": 0.1,
            "base": {"type": "polytope", "normals": [[1,0],[-1,0],[0,1],[0,-1]], "offsets": [1,1,1,1]}}}"#;
        let doc: ObstacleDoc = serde_json::from_str(s).unwrap();
        assert_eq!(doc.obstacle.dim(), 2);
        assert!((doc.obstacle.signed_distance(&[2.0, 0.0]) - 0.9).abs() < 1e-14);
    }
}
