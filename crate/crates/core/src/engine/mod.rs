//! Point-wise and view-wise graspness landscapes.
//!
//! For every point the engine evaluates the full grid of candidates (views ×
//! in-plane angles × depths) and aggregates the outcomes per view. At scene
//! level a candidate only counts when its gripper bodies are also clear of
//! every other scene point.

mod compute;
mod landscape;
mod normalize;
mod project;

pub use compute::{object_graspness, scene_graspness, scene_landscape, LandscapeLevel};
pub use landscape::{Aggregation, GraspableLandscape};
pub use normalize::normalize_landscape;
pub use project::{project_to_view, DEFAULT_PROJECTION_CUTOFF};

use crate::error::Result;
use crate::gripper::GripperModel;
use crate::quality::{GridConfig, QualityConfig};

/// Everything that determines a landscape.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GraspnessConfig {
    pub grid: GridConfig,
    pub gripper: GripperModel,
    pub quality: QualityConfig,
    pub aggregation: Aggregation,
}

impl GraspnessConfig {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.gripper.validate()?;
        self.quality.validate()
    }
}
