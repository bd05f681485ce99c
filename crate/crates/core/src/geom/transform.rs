#[allow(unused_imports)] // float methods under no_std
use num_traits::Float;

use super::{Mat3, Vec3};
use crate::error::{Error, Result};

const ORTHO_TOL: f64 = 1e-9;

/// Proper rigid motion `p -> R p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    pub rotation: Mat3,
    pub translation: Vec3,
}

impl Default for RigidTransform {
    fn default() -> Self {
        Self::identity()
    }
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self { rotation: Mat3::identity(), translation: Vec3::zeros() }
    }

    /// Checked constructor: `rotation` must be orthonormal with determinant +1.
    pub fn new(rotation: Mat3, translation: Vec3) -> Result<Self> {
        let gram = rotation.transpose() * rotation - Mat3::identity();
        if gram.iter().any(|v| v.abs() > ORTHO_TOL) {
            return Err(Error::arg("rotation is not orthonormal"));
        }
        if (rotation.determinant() - 1.0).abs() > ORTHO_TOL {
            return Err(Error::arg("rotation determinant is not +1"));
        }
        Ok(Self { rotation, translation })
    }

    /// Builds from a row-major 3x3 rotation and a translation.
    pub fn from_row_major(rotation: &[f64; 9], translation: [f64; 3]) -> Result<Self> {
        Self::new(Mat3::from_row_slice(rotation), Vec3::from(translation))
    }

    pub fn to_row_major(&self) -> [f64; 9] {
        let r = &self.rotation;
        [
            r[(0, 0)], r[(0, 1)], r[(0, 2)],
            r[(1, 0)], r[(1, 1)], r[(1, 2)],
            r[(2, 0)], r[(2, 1)], r[(2, 2)],
        ]
    }

    pub fn from_translation(t: Vec3) -> Self {
        Self { rotation: Mat3::identity(), translation: t }
    }

    /// Rotation by `angle` radians about `axis` (need not be normalized).
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Self {
        Self { rotation: axis_angle_matrix(axis, angle), translation: Vec3::zeros() }
    }

    pub fn rotation_z(angle: f64) -> Self {
        Self::from_axis_angle(Vec3::z(), angle)
    }

    /// Camera pose at `eye` looking at `target` (camera +z forward, +y down).
    pub fn look_at(eye: Vec3, target: Vec3, up: Vec3) -> Result<Self> {
        let forward = target - eye;
        if forward.norm() == 0.0 {
            return Err(Error::arg("eye and target coincide"));
        }
        let z = forward.normalize();
        let mut x = z.cross(&up);
        if x.norm() < 1e-12 {
            // Looking along `up`: fall back to world +y as the up hint.
            x = z.cross(&Vec3::y());
        }
        if x.norm() < 1e-12 {
            return Err(Error::arg("degenerate up vector"));
        }
        let x = x.normalize();
        let y = z.cross(&x);
        Ok(Self { rotation: Mat3::from_columns(&[x, y, z]), translation: eye })
    }

    #[inline]
    pub fn apply_point(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    #[inline]
    pub fn apply_vector(&self, v: &Vec3) -> Vec3 {
        self.rotation * v
    }

    /// Maps a world point into this transform's local frame.
    #[inline]
    pub fn inverse_apply_point(&self, p: &Vec3) -> Vec3 {
        self.rotation.tr_mul(&(p - self.translation))
    }

    #[inline]
    pub fn inverse_apply_vector(&self, v: &Vec3) -> Vec3 {
        self.rotation.tr_mul(v)
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let rt = self.rotation.transpose();
        RigidTransform { rotation: rt, translation: -(rt * self.translation) }
    }

    /// Rotation angle of `R_self^T R_other`, in `[0, π]`.
    pub fn rotation_angle_to(&self, other: &RigidTransform) -> f64 {
        rotation_angle(&(self.rotation.transpose() * other.rotation))
    }
}

/// Angle of a rotation matrix from its trace.
pub(crate) fn rotation_angle(r: &Mat3) -> f64 {
    let c = ((r.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    c.acos()
}

/// Rodrigues' formula.
pub(crate) fn axis_angle_matrix(axis: Vec3, angle: f64) -> Mat3 {
    let n = axis.norm();
    if n == 0.0 {
        return Mat3::identity();
    }
    let k = axis / n;
    let kx = Mat3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
    Mat3::identity() + kx * angle.sin() + kx * kx * (1.0 - angle.cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    #[test]
    fn rejects_reflections() {
        let m = Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
        assert!(RigidTransform::new(m, Vec3::zeros()).is_err());
        let skew = Mat3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(RigidTransform::new(skew, Vec3::zeros()).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let a = RigidTransform {
            translation: Vec3::new(1.0, 2.0, 3.0),
            ..RigidTransform::from_axis_angle(Vec3::new(1.0, 1.0, 0.0), 0.7)
        };
        let b = RigidTransform::rotation_z(FRAC_PI_2);
        let p = Vec3::new(0.3, -0.2, 0.5);
        let ab = a.compose(&b);
        assert!((ab.apply_point(&p) - a.apply_point(&b.apply_point(&p))).norm() < 1e-12);
        let id = a.compose(&a.inverse());
        assert!((id.rotation - Mat3::identity()).norm() < 1e-12);
        assert!(id.translation.norm() < 1e-12);
        assert!(RigidTransform::new(ab.rotation, ab.translation).is_ok());
    }

    #[test]
    fn look_at_points_z_at_target() {
        let t = RigidTransform::look_at(Vec3::new(0.0, -0.5, 0.6), Vec3::zeros(), Vec3::z()).unwrap();
        let fwd = t.apply_vector(&Vec3::z());
        let expected = (Vec3::zeros() - Vec3::new(0.0, -0.5, 0.6)).normalize();
        assert!((fwd - expected).norm() < 1e-12);
        assert!((t.rotation.determinant() - 1.0).abs() < 1e-12);
    }
}
