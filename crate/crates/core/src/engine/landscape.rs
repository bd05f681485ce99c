use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::geom::{PointCloud, Vec3, GRASPNESS};

/// How candidate outcomes at one view collapse into a view score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    /// Fraction of the view's candidates that are feasible.
    #[default]
    FeasibleRatio,
    /// Mean score over the view's candidates (colliding ones count as 0).
    MeanScore,
    /// Best score over the view's candidates (colliding ones count as 0).
    MaxScore,
}

impl Aggregation {
    pub const ALL: [Aggregation; 3] = [Aggregation::FeasibleRatio, Aggregation::MeanScore, Aggregation::MaxScore];

    pub fn as_str(&self) -> &'static str {
        match self {
            Aggregation::FeasibleRatio => "feasible-ratio",
            Aggregation::MeanScore => "mean-score",
            Aggregation::MaxScore => "max-score",
        }
    }
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Aggregation::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::arg(alloc::format!("unknown aggregation mode `{s}`")))
    }
}

/// Graspness over a set of points: one scalar per point and one value per
/// approach view per point (row-major, `len() × view_count`).
#[derive(Debug, Clone, PartialEq)]
pub struct GraspableLandscape {
    pub positions: Vec<Vec3>,
    /// Object id per point, -1 for background.
    pub object_ids: Vec<i32>,
    pub view_count: usize,
    pub aggregation: Aggregation,
    /// Whether the values have been min-max normalized.
    pub normalized: bool,
    pub point: Vec<f64>,
    pub view: Vec<f64>,
}

impl GraspableLandscape {
    pub fn len(&self) -> usize {
        self.point.len()
    }

    pub fn is_empty(&self) -> bool {
        self.point.is_empty()
    }

    pub fn view_row(&self, i: usize) -> &[f64] {
        &self.view[i * self.view_count..(i + 1) * self.view_count]
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.point.len();
        if self.positions.len() != n || self.object_ids.len() != n || self.view.len() != n * self.view_count {
            return Err(Error::state("landscape arrays disagree in length"));
        }
        Ok(())
    }

    /// Indices of points on objects (id >= 0).
    pub fn object_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.object_ids[i] >= 0).collect()
    }

    /// Copies the point graspness into `cloud` as the graspness channel.
    pub fn attach_to(&self, cloud: &mut PointCloud) -> Result<()> {
        cloud.set_scalar(GRASPNESS, self.point.clone())
    }

    /// Short human-readable summary.
    pub fn describe(&self) -> String {
        alloc::format!(
            "{} points, {} views, {}{}",
            self.len(),
            self.view_count,
            self.aggregation,
            if self.normalized { ", normalized" } else { "" }
        )
    }
}
