
use super::{GraspFrame, GripperModel};
use crate::geom::{Mat3, SpatialIndex, Vec3};

/// Margin by which a point must be inside a body to count as a collision.
pub const BODY_SLACK: f64 = 1e-9;

/// Axis-aligned box in grasp-frame coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalBox {
    pub center: Vec3,
    pub half: Vec3,
}

impl LocalBox {
    /// Strictly inside, by at least [`BODY_SLACK`] on every axis.
    #[inline]
    pub fn contains_strict(&self, l: &Vec3) -> bool {
        (l.x - self.center.x).abs() < self.half.x - BODY_SLACK
            && (l.y - self.center.y).abs() < self.half.y - BODY_SLACK
            && (l.z - self.center.z).abs() < self.half.z - BODY_SLACK
    }

    #[inline]
    pub fn contains_closed(&self, l: &Vec3) -> bool {
        (l.x - self.center.x).abs() <= self.half.x
            && (l.y - self.center.y).abs() <= self.half.y
            && (l.z - self.center.z).abs() <= self.half.z
    }
}

/// World-frame box, for export and visualization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedBox {
    pub center: Vec3,
    /// Columns are the box axes.
    pub axes: Mat3,
    pub half_extents: Vec3,
}

/// Two fingers, the palm and the open region between the fingers, all
/// expressed in one grasp frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GripperBodies {
    pub frame: GraspFrame,
    pub fingers: [LocalBox; 2],
    pub palm: LocalBox,
    /// Region between the fingers, from `depth - finger_length` to `depth`.
    /// Points here are what the gripper closes on and never collide.
    pub exclusion: LocalBox,
}

/// Places the gripper, opened to `width`, with its finger tips `depth` past
/// the frame center along the approach axis.
pub fn gripper_bodies(gripper: &GripperModel, frame: &GraspFrame, depth: f64, width: f64) -> GripperBodies {
    let (fl, t, fh, pd) = (gripper.finger_length, gripper.finger_thickness, gripper.finger_height, gripper.palm_depth);
    let half_w = width / 2.0;
    let finger = |side: f64| LocalBox {
        center: Vec3::new(depth - fl / 2.0, side * (half_w + t / 2.0), 0.0),
        half: Vec3::new(fl / 2.0, t / 2.0, fh / 2.0),
    };
    GripperBodies {
        frame: *frame,
        fingers: [finger(-1.0), finger(1.0)],
        palm: LocalBox {
            center: Vec3::new(depth - fl - pd / 2.0, 0.0, 0.0),
            half: Vec3::new(pd / 2.0, half_w + t, fh / 2.0),
        },
        exclusion: LocalBox {
            center: Vec3::new(depth - fl / 2.0, 0.0, 0.0),
            half: Vec3::new(fl / 2.0, half_w, fh / 2.0),
        },
    }
}

impl GripperBodies {
    /// Collision test for a point already in grasp-frame coordinates.
    #[inline]
    pub fn hits_local(&self, l: &Vec3) -> bool {
        if self.exclusion.contains_closed(l) {
            return false;
        }
        self.fingers[0].contains_strict(l) || self.fingers[1].contains_strict(l) || self.palm.contains_strict(l)
    }

    #[inline]
    pub fn hits(&self, p: &Vec3) -> bool {
        self.hits_local(&self.frame.to_local(p))
    }

    /// Fingers then palm, in world coordinates.
    pub fn world_boxes(&self) -> [OrientedBox; 3] {
        let axes = self.frame.rotation();
        let world = |b: &LocalBox| OrientedBox {
            center: self.frame.to_world(&b.center),
            axes,
            half_extents: b.half,
        };
        [world(&self.fingers[0]), world(&self.fingers[1]), world(&self.palm)]
    }

    /// Radius about the frame center enclosing every body.
    pub fn bounding_radius(&self) -> f64 {
        [self.fingers[0], self.fingers[1], self.palm]
            .iter()
            .map(|b| (b.center.abs() + b.half).norm())
            .fold(0.0, f64::max)
    }
}

/// True iff some indexed point lies strictly inside a body (outside the
/// exclusion region).
pub fn check_collision(bodies: &GripperBodies, index: &SpatialIndex) -> bool {
    let r = bodies.bounding_radius() + 1e-6;
    index
        .within_radius(&bodies.frame.center, r)
        .into_iter()
        .any(|i| bodies.hits(&index.points()[i]))
}

/// Linear-scan variant of [`check_collision`].
pub fn check_collision_points(bodies: &GripperBodies, points: &[Vec3]) -> bool {
    points.iter().any(|p| bodies.hits(p))
}
