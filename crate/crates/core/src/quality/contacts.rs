use alloc::vec::Vec;


use super::QualityConfig;
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::gripper::{gripper_bodies, GraspFrame, GripperModel};

/// The two finger contacts of a closing gripper.
///
/// Points and normals are copied from the input cloud; `left` is on the
/// negative closing side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactPair {
    pub left: Vec3,
    pub right: Vec3,
    pub left_normal: Vec3,
    pub right_normal: Vec3,
    pub left_index: usize,
    pub right_index: usize,
    /// Extent of the gripped points along the closing axis.
    pub width: f64,
    /// Finger opening centered on the grasp frame that clears every gripped
    /// point: twice the largest absolute closing coordinate.
    pub opening: f64,
    /// Opening used to place the fingers: `opening` plus clearance, capped
    /// at the gripper's maximum width.
    pub grip_width: f64,
    pub valid: bool,
}

impl ContactPair {
    pub fn invalid() -> Self {
        ContactPair {
            left: Vec3::zeros(),
            right: Vec3::zeros(),
            left_normal: Vec3::zeros(),
            right_normal: Vec3::zeros(),
            left_index: 0,
            right_index: 0,
            width: 0.0,
            opening: 0.0,
            grip_width: 0.0,
            valid: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LocalPoint {
    pub l: Vec3,
    /// Outward normal in angle-zero local coordinates.
    pub n0: Vec3,
    pub index: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LocalContacts {
    pub left: usize,
    pub right: usize,
    pub width: f64,
    pub opening: f64,
    pub grip_width: f64,
}

/// Contact search on points already in grasp-frame coordinates.
///
/// `points` may be any subset of the target, in any order, that contains
/// every point within the finger slab between the palm back and the tips.
/// Ties resolve to the lowest index, so callers that prefilter or reorder
/// get the same answer as a full scan.
pub(crate) fn contacts_local(
    frame: &GraspFrame,
    depth: f64,
    gripper: &GripperModel,
    cfg: &QualityConfig,
    points: &[LocalPoint],
) -> Option<LocalContacts> {
    let mut extent = [(0.0, 0.0)];
    region_extents(&[depth], gripper, points, &mut extent);
    contacts_in_extent(frame, depth, extent[0], gripper, cfg, points)
}

/// Closing-axis extent `(min, max)` of the closing region at each depth, in
/// one pass over `points`. Empty regions give `(inf, -inf)`.
pub(crate) fn region_extents(depths: &[f64], gripper: &GripperModel, points: &[LocalPoint], out: &mut [(f64, f64)]) {
    let half_h = gripper.finger_height / 2.0;
    let half_w = gripper.max_width / 2.0;
    out.fill((f64::INFINITY, f64::NEG_INFINITY));
    for p in points.iter().filter(|p| p.l.z.abs() <= half_h && p.l.y.abs() <= half_w) {
        for (e, &depth) in out.iter_mut().zip(depths) {
            if p.l.x >= depth - gripper.finger_length && p.l.x <= depth {
                e.0 = e.0.min(p.l.y);
                e.1 = e.1.max(p.l.y);
            }
        }
    }
}

/// [`contacts_local`] given the region extent from [`region_extents`].
pub(crate) fn contacts_in_extent(
    frame: &GraspFrame,
    depth: f64,
    (c_min, c_max): (f64, f64),
    gripper: &GripperModel,
    cfg: &QualityConfig,
    points: &[LocalPoint],
) -> Option<LocalContacts> {
    let half_h = gripper.finger_height / 2.0;
    let half_w = gripper.max_width / 2.0;
    let back = depth - gripper.finger_length;
    let in_region = |l: &Vec3| l.z.abs() <= half_h && l.x >= back && l.x <= depth && l.y.abs() <= half_w;
    if !(c_max > c_min) {
        return None;
    }
    let opening = 2.0 * c_min.abs().max(c_max.abs());
    let grip_width = (opening + cfg.width_clearance).min(gripper.max_width);

    // Outside the region: no point may sit inside a body at this opening.
    // Inside: per side, the band point whose outward normal best faces away
    // from the other finger.
    let bodies = gripper_bodies(gripper, frame, depth, grip_width);
    let better = |cand: f64, index: usize, cur: Option<(usize, f64)>| {
        cur.map_or(true, |(i, best)| cand > best || (cand == best && index < i))
    };
    let (mut left, mut right) = (None::<(usize, f64)>, None::<(usize, f64)>);
    for p in points {
        if !in_region(&p.l) {
            if bodies.hits_local(&p.l) {
                return None;
            }
            continue;
        }
        let in_left = p.l.y <= c_min + cfg.contact_band;
        let in_right = p.l.y >= c_max - cfg.contact_band;
        if !in_left && !in_right {
            continue;
        }
        let ny = frame.spin(&p.n0).y;
        if in_left && better(-ny, p.index, left) {
            left = Some((p.index, -ny));
        }
        if in_right && better(ny, p.index, right) {
            right = Some((p.index, ny));
        }
    }
    let (left, right) = (left?.0, right?.0);
    Some(LocalContacts { left, right, width: c_max - c_min, opening, grip_width })
}

/// Closes the gripper, placed at `frame` with tips `depth` past the center,
/// on a point set with outward normals.
///
/// Only points in the closing region count: approach coordinate within the
/// finger length behind the tips, height within half the finger height and
/// closing coordinate within half the maximum width. The extreme closing
/// coordinates bound the grip; on each side the contact is the point within
/// `contact_band` of the extreme whose normal faces most directly outward.
/// The pair is invalid when the region is empty or flat along the closing
/// axis, or when any point lies inside a finger or the palm once the fingers
/// are placed at the grip width.
pub fn find_contacts(
    frame: &GraspFrame,
    depth: f64,
    points: &[Vec3],
    normals: &[Vec3],
    gripper: &GripperModel,
    cfg: &QualityConfig,
) -> Result<ContactPair> {
    if points.len() != normals.len() {
        return Err(Error::arg("every point needs a normal"));
    }
    let local: Vec<LocalPoint> = points
        .iter()
        .zip(normals)
        .enumerate()
        .map(|(index, (p, n))| LocalPoint { l: frame.to_local(p), n0: frame.dir_local0(n), index })
        .collect();
    Ok(match contacts_local(frame, depth, gripper, cfg, &local) {
        None => ContactPair::invalid(),
        Some(c) => ContactPair {
            left: points[c.left],
            right: points[c.right],
            left_normal: normals[c.left],
            right_normal: normals[c.right],
            left_index: c.left,
            right_index: c.right,
            width: c.width,
            opening: c.opening,
            grip_width: c.grip_width,
            valid: true,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gripper::grasp_frame;
    use crate::quality::min_antipodal_friction;
    use crate::scene::{sample_surface, Shape};

    fn plates(gap: f64) -> (Vec<Vec3>, Vec<Vec3>) {
        let mut pts = Vec::new();
        let mut nrm = Vec::new();
        for i in -5..=5 {
            for k in -2..=2 {
                for side in [-1.0, 1.0] {
                    pts.push(Vec3::new(k as f64 * 0.002, side * gap / 2.0, i as f64 * 0.002));
                    nrm.push(Vec3::new(0.0, side, 0.0));
                }
            }
        }
        (pts, nrm)
    }

    #[test]
    fn parallel_plates() {
        let (pts, nrm) = plates(0.06);
        // View +x keeps the closing axis on +y at angle zero.
        let frame = grasp_frame(Vec3::new(-0.01, 0.0, 0.0), &Vec3::x(), 0.0);
        let c = find_contacts(&frame, 0.02, &pts, &nrm, &GripperModel::default(), &QualityConfig::default()).unwrap();
        assert!(c.valid);
        assert!((c.width - 0.06).abs() < 1e-12);
        assert_eq!(min_antipodal_friction(&c), 0.0);
        assert!((c.grip_width - 0.07).abs() < 1e-12);
    }

    #[test]
    fn empty_region_is_invalid() {
        let frame = grasp_frame(Vec3::zeros(), &Vec3::z(), 0.0);
        let c = find_contacts(&frame, 0.02, &[], &[], &GripperModel::default(), &QualityConfig::default()).unwrap();
        assert!(!c.valid);
        assert_eq!(min_antipodal_friction(&c), f64::INFINITY);
        let far = [Vec3::new(1.0, 0.0, 0.0)];
        let c = find_contacts(&frame, 0.02, &far, &[Vec3::x()], &GripperModel::default(), &QualityConfig::default())
            .unwrap();
        assert!(!c.valid);
    }

    #[test]
    fn normals_must_match_points() {
        let frame = grasp_frame(Vec3::zeros(), &Vec3::z(), 0.0);
        let r = find_contacts(&frame, 0.02, &[Vec3::zeros()], &[], &GripperModel::default(), &QualityConfig::default());
        assert!(r.is_err());
    }

    #[test]
    fn sphere_across_diameter() {
        let spacing = 0.004;
        let cloud = sample_surface(&Shape::Sphere { radius: 0.03 }, spacing, 0).unwrap();
        let normals = cloud.normals.clone().unwrap();
        let cfg = QualityConfig { contact_band: 2.0 * spacing, ..QualityConfig::default() };
        let frame = grasp_frame(Vec3::new(0.0, 0.0, 0.03), &-Vec3::z(), 0.3);
        let c = find_contacts(&frame, 0.03, &cloud.positions, &normals, &GripperModel::default(), &cfg).unwrap();
        assert!(c.valid);
        assert!((c.width - 0.06).abs() <= spacing);
        let tol = ((0.03 - cfg.contact_band) / 0.03).acos();
        let axis = frame.closing();
        assert!((-c.left_normal).dot(&axis).acos() <= tol);
        assert!(c.right_normal.dot(&axis).acos() <= tol);
        assert!(min_antipodal_friction(&c) < 0.2);
    }

    #[test]
    fn oversized_cube_is_never_gripped() {
        let cloud = sample_surface(&Shape::Box { half_extents: Vec3::repeat(0.1) }, 0.01, 0).unwrap();
        let normals = cloud.normals.clone().unwrap();
        let g = GripperModel::default();
        let cfg = QualityConfig::default();
        let views = crate::geom::fibonacci_sphere(40).unwrap();
        for (i, p) in cloud.positions.iter().enumerate().step_by(37) {
            for v in &views {
                for a in 0..4 {
                    let frame = grasp_frame(*p, v, a as f64 * core::f64::consts::PI / 4.0);
                    for d in [0.01, 0.04] {
                        let c = find_contacts(&frame, d, &cloud.positions, &normals, &g, &cfg).unwrap();
                        assert!(!c.valid || min_antipodal_friction(&c) >= 1.0 - 1e-12, "point {i}");
                    }
                }
            }
        }
    }
}
