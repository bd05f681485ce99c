#[allow(unused_imports)] // float methods under no_std
use num_traits::Float;

use crate::geom::{Mat3, RigidTransform, Vec3};

/// Gripper frame at a grasp center: x = approach direction, y = closing
/// direction, z = finger-height direction.
///
/// The frame is built in two steps: the minimal rotation taking +z to the
/// approach direction is applied to the base frame `(+z, +y, -x)`, then the
/// result is rotated about its x-axis by the in-plane angle. Local
/// coordinates are always obtained through [`GraspFrame::to_local`], so code
/// paths that cache the first step stay bit-identical to ones that do not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraspFrame {
    pub center: Vec3,
    /// Columns: axes of the frame at in-plane angle zero.
    base: Mat3,
    pub angle: f64,
    cos: f64,
    sin: f64,
}

/// Builds the frame for `view` (unit, pointing from the gripper toward the
/// surface) rotated by `in_plane_angle` radians.
pub fn grasp_frame(center: Vec3, view: &Vec3, in_plane_angle: f64) -> GraspFrame {
    GraspFrame::at_angle(center, view_basis(view), in_plane_angle)
}

/// Angle-zero basis for an approach direction.
pub(crate) fn view_basis(view: &Vec3) -> Mat3 {
    let c = view.z;
    let r = if 1.0 + c > 1e-12 {
        // Rodrigues with k = z × v: R = I + [k]x + [k]x² / (1 + c).
        let k = Vec3::z().cross(view);
        let kx = Mat3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
        Mat3::identity() + kx + kx * kx * (1.0 / (1.0 + c))
    } else {
        // view = -z: half turn about +x.
        Mat3::from_diagonal(&Vec3::new(1.0, -1.0, -1.0))
    };
    Mat3::from_columns(&[r * Vec3::z(), r * Vec3::y(), r * -Vec3::x()])
}

impl GraspFrame {
    pub(crate) fn at_angle(center: Vec3, base: Mat3, angle: f64) -> Self {
        let (sin, cos) = angle.sin_cos();
        GraspFrame { center, base, angle, cos, sin }
    }

    pub fn approach(&self) -> Vec3 {
        self.base.column(0).into_owned()
    }

    pub fn closing(&self) -> Vec3 {
        self.base.column(1) * self.cos + self.base.column(2) * self.sin
    }

    pub fn height_axis(&self) -> Vec3 {
        self.base.column(2) * self.cos - self.base.column(1) * self.sin
    }

    /// Rotation with columns (approach, closing, height).
    pub fn rotation(&self) -> Mat3 {
        Mat3::from_columns(&[self.approach(), self.closing(), self.height_axis()])
    }

    pub fn transform(&self) -> RigidTransform {
        RigidTransform { rotation: self.rotation(), translation: self.center }
    }

    /// Angle-zero local coordinates of a world point.
    #[inline]
    pub(crate) fn local0(&self, p: &Vec3) -> Vec3 {
        self.base.tr_mul(&(p - self.center))
    }

    /// Applies the in-plane rotation to angle-zero local coordinates.
    #[inline]
    pub(crate) fn spin(&self, l0: &Vec3) -> Vec3 {
        Vec3::new(l0.x, self.cos * l0.y + self.sin * l0.z, self.cos * l0.z - self.sin * l0.y)
    }

    #[inline]
    pub fn to_local(&self, p: &Vec3) -> Vec3 {
        self.spin(&self.local0(p))
    }

    /// Angle-zero local components of a direction.
    #[inline]
    pub(crate) fn dir_local0(&self, v: &Vec3) -> Vec3 {
        self.base.tr_mul(v)
    }

    #[inline]
    pub fn dir_to_local(&self, v: &Vec3) -> Vec3 {
        self.spin(&self.dir_local0(v))
    }

    pub fn to_world(&self, l: &Vec3) -> Vec3 {
        self.center + self.approach() * l.x + self.closing() * l.y + self.height_axis() * l.z
    }
}

/// A complete grasp: frame parameters plus depth, opening width and score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraspPose {
    pub center: Vec3,
    pub view: Vec3,
    pub angle: f64,
    pub depth: f64,
    pub width: f64,
    pub score: f64,
}

impl GraspPose {
    pub fn frame(&self) -> GraspFrame {
        grasp_frame(self.center, &self.view, self.angle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};
    use proptest::prelude::*;

    fn unit(v: (f64, f64, f64)) -> Option<Vec3> {
        let v = Vec3::new(v.0, v.1, v.2);
        (v.norm() > 1e-3).then(|| v.normalize())
    }

    #[test]
    fn plus_z_view_keeps_reference_y() {
        let f = grasp_frame(Vec3::zeros(), &Vec3::z(), 0.0);
        assert_eq!(f.approach(), Vec3::z());
        assert_eq!(f.closing(), Vec3::y());
        assert_eq!(f.height_axis(), -Vec3::x());
    }

    #[test]
    fn minus_z_view_is_handled() {
        let f = grasp_frame(Vec3::zeros(), &-Vec3::z(), 0.3);
        assert!((f.approach() + Vec3::z()).norm() < 1e-15);
        let r = f.rotation();
        assert!((r.transpose() * r - Mat3::identity()).norm() < 1e-12);
    }

    #[test]
    fn quarter_turn_makes_closing_axes_perpendicular() {
        let v = Vec3::new(0.3, -0.5, 0.8).normalize();
        let a = grasp_frame(Vec3::zeros(), &v, 0.0);
        let b = grasp_frame(Vec3::zeros(), &v, FRAC_PI_2);
        assert!(a.closing().dot(&b.closing()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn frames_are_right_handed_orthonormal(v in (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64), angle in 0.0..PI) {
            if let Some(view) = unit(v) {
                let f = grasp_frame(Vec3::new(0.1, 0.2, 0.3), &view, angle);
                let r = f.rotation();
                prop_assert!((r.transpose() * r - Mat3::identity()).norm() < 1e-12);
                prop_assert!((r.determinant() - 1.0).abs() < 1e-12);
                prop_assert!((f.approach() - view).norm() < 1e-12);
            }
        }

        #[test]
        fn half_turn_flips_closing_and_height(v in (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64), angle in 0.0..PI) {
            if let Some(view) = unit(v) {
                let a = grasp_frame(Vec3::zeros(), &view, angle);
                let b = grasp_frame(Vec3::zeros(), &view, angle + PI);
                prop_assert!((a.closing() + b.closing()).norm() < 1e-12);
                prop_assert!((a.height_axis() + b.height_axis()).norm() < 1e-12);
                prop_assert!((a.approach() - b.approach()).norm() == 0.0);
            }
        }

        #[test]
        fn local_round_trip(p in (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64), angle in 0.0..PI) {
            let f = grasp_frame(Vec3::new(0.1, 0.0, -0.2), &Vec3::new(1.0, 2.0, -0.5).normalize(), angle);
            let p = Vec3::new(p.0, p.1, p.2);
            prop_assert!((f.to_world(&f.to_local(&p)) - p).norm() < 1e-12);
            prop_assert!((f.to_local(&p) - f.rotation().transpose() * (p - f.center)).norm() < 1e-12);
        }
    }
}
