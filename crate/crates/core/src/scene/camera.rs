#[allow(unused_imports)] // float methods under no_std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geom::{RigidTransform, Vec3};

/// Pinhole depth camera. Camera frame: +z forward, +x right, +y down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraModel {
    /// Camera frame to world.
    pub pose: RigidTransform,
    pub width: u32,
    pub height: u32,
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

impl CameraModel {
    /// 320x240 camera with a 60° horizontal field of view looking at
    /// `target` from `eye`.
    pub fn looking_at(eye: Vec3, target: Vec3) -> Result<Self> {
        let pose = RigidTransform::look_at(eye, target, Vec3::z())?;
        let (width, height) = (320u32, 240u32);
        let f = width as f64 / 2.0 / (30f64.to_radians()).tan();
        let cam = CameraModel { pose, width, height, fx: f, fy: f, cx: width as f64 / 2.0, cy: height as f64 / 2.0 };
        cam.validate()?;
        Ok(cam)
    }

    /// The default tabletop viewpoint used by generated scenes.
    pub fn default_tabletop() -> Self {
        Self::looking_at(Vec3::new(0.0, -0.45, 0.55), Vec3::zeros()).expect("valid default camera")
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::arg("image size must be positive"));
        }
        if !(self.fx > 0.0 && self.fy > 0.0) {
            return Err(Error::arg("focal lengths must be positive"));
        }
        if !(0.0..=self.width as f64).contains(&self.cx) || !(0.0..=self.height as f64).contains(&self.cy) {
            return Err(Error::arg("principal point must lie inside the image"));
        }
        Ok(())
    }

    pub fn position(&self) -> Vec3 {
        self.pose.translation
    }

    /// Unit ray direction (world frame) through the center of pixel `(u, v)`.
    pub fn ray_direction(&self, u: u32, v: u32) -> Vec3 {
        let d = Vec3::new((u as f64 + 0.5 - self.cx) / self.fx, (v as f64 + 0.5 - self.cy) / self.fy, 1.0);
        self.pose.apply_vector(&d.normalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_ray_hits_target_direction() {
        let cam = CameraModel::looking_at(Vec3::new(0.0, 0.0, 1.0), Vec3::zeros()).unwrap();
        let d = cam.ray_direction(159, 119);
        assert!((d - (-Vec3::z())).norm() < 0.01);
    }

    #[test]
    fn validation() {
        let mut cam = CameraModel::default_tabletop();
        cam.fx = 0.0;
        assert!(cam.validate().is_err());
        let mut cam = CameraModel::default_tabletop();
        cam.cx = 400.0;
        assert!(cam.validate().is_err());
    }
}
