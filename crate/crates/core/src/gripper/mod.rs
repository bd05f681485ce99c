//! Parallel-jaw gripper: dimensions, grasp frames, collision bodies and the
//! cylinder crop around a seed point.

mod bodies;
mod crop;
mod frame;

pub use bodies::{check_collision, check_collision_points, gripper_bodies, GripperBodies, LocalBox, OrientedBox};
pub use crop::{cylinder_crop, CropResult};
pub use frame::{grasp_frame, GraspFrame, GraspPose};
pub(crate) use frame::view_basis;

use crate::error::{Error, Result};

/// Two-finger gripper dimensions in meters.
///
/// In the grasp frame the fingers extend `finger_length` back from the tips
/// along the approach axis, are `finger_thickness` thick along the closing
/// axis and `finger_height` tall along the third axis; the palm box sits
/// behind them and is `palm_depth` deep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GripperModel {
    pub max_width: f64,
    pub finger_length: f64,
    pub finger_thickness: f64,
    pub finger_height: f64,
    pub palm_depth: f64,
}

impl Default for GripperModel {
    fn default() -> Self {
        GripperModel {
            max_width: 0.10,
            finger_length: 0.06,
            finger_thickness: 0.01,
            finger_height: 0.02,
            palm_depth: 0.02,
        }
    }
}

impl GripperModel {
    pub fn validate(&self) -> Result<()> {
        let dims = [self.max_width, self.finger_length, self.finger_thickness, self.finger_height, self.palm_depth];
        if dims.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
            return Err(Error::arg("gripper dimensions must be positive"));
        }
        if self.max_width <= 2.0 * self.finger_thickness {
            return Err(Error::arg("max_width must exceed twice the finger thickness"));
        }
        Ok(())
    }

    /// Radius around the grasp center, over depths up to `max_depth` (and
    /// down to `min_depth`), that encloses the closing region and every body.
    pub fn reach(&self, min_depth: f64, max_depth: f64) -> f64 {
        let back = (min_depth - self.finger_length - self.palm_depth).abs().max(max_depth.abs());
        let side = self.max_width / 2.0 + self.finger_thickness;
        let up = self.finger_height / 2.0;
        num_traits::Float::sqrt(back * back + side * side + up * up)
    }
}
