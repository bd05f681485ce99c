use alloc::vec::Vec;

use crate::engine::GraspnessConfig;
use crate::error::{Error, Result};
use crate::geom::{SpatialIndex, Vec3};
use crate::gripper::{check_collision, gripper_bodies, GraspPose, GripperModel};
use crate::quality::{CandidateGrid, CandidateResult, CollisionMode};
use crate::scene::Scene;

/// Default grasp-NMS center distance, in meters.
pub const DEFAULT_NMS_TRANSLATION: f64 = 0.03;
/// Default grasp-NMS rotation angle (30°), in radians.
pub const DEFAULT_NMS_ROTATION: f64 = core::f64::consts::PI / 6.0;

/// Evaluates in-plane angle × depth grids at seeds of an assembled scene.
///
/// Contacts come from the seed's object model; collisions, when requested,
/// from the whole scene cloud.
pub struct SceneGrasper<'a> {
    scene: &'a Scene,
    cfg: &'a GraspnessConfig,
    indices: Vec<SpatialIndex>,
}

impl<'a> SceneGrasper<'a> {
    pub fn new(scene: &'a Scene, cfg: &'a GraspnessConfig) -> Result<Self> {
        cfg.validate()?;
        if scene.full_cloud.normals.is_none() {
            return Err(Error::state("scene cloud lacks normals"));
        }
        let indices = (0..scene.instances.len())
            .map(|i| SpatialIndex::build(&scene.full_cloud.positions[scene.object_range(i)]))
            .collect();
        Ok(SceneGrasper { scene, cfg, indices })
    }

    pub fn config(&self) -> &GraspnessConfig {
        self.cfg
    }

    /// The `angles × depths` results at one seed and view, angle-major.
    /// `None` if `object_id` is not an object of the scene.
    pub fn evaluate(&self, object_id: i32, seed: &Vec3, view: usize, check_collisions: bool) -> Option<Vec<CandidateResult>> {
        let inst = self.scene.instance_by_id(object_id)?;
        let range = self.scene.object_range(inst);
        let full = &self.scene.full_cloud;
        let normals = full.normals.as_ref().expect("checked in new");
        let mut grid = CandidateGrid::new(
            &self.cfg.grid,
            &self.cfg.gripper,
            &self.cfg.quality,
            &full.positions[range.clone()],
            &normals[range.clone()],
            &self.indices[inst],
        )
        .expect("validated in new");
        if check_collisions {
            grid = grid.with_obstacles(self.scene.index(), CollisionMode::Always).with_target_in_obstacles(range);
        }
        let mut out = Vec::with_capacity(self.cfg.grid.per_view());
        grid.evaluate_view(seed, view, |_, _, _, r| out.push(*r));
        Some(out)
    }

    /// Highest-scoring feasible candidate at the seed and view (collision-free
    /// too when `check_collisions`), lowest `(angle, depth)` index on ties.
    pub fn best_grasp(&self, object_id: i32, seed: &Vec3, view: usize, check_collisions: bool) -> Option<GraspPose> {
        let results = self.evaluate(object_id, seed, view, check_collisions)?;
        let grid = &self.cfg.grid;
        let threshold = self.cfg.quality.score_threshold;
        let mut best: Option<(usize, &CandidateResult)> = None;
        for (n, r) in results.iter().enumerate() {
            let free = !check_collisions || r.collision_free == Some(true);
            if r.score > threshold && free && best.map_or(true, |(_, b)| r.score > b.score) {
                best = Some((n, r));
            }
        }
        let (n, r) = best?;
        let (a, k) = (n / grid.depths.len(), n % grid.depths.len());
        Some(GraspPose {
            center: *seed,
            view: grid.views[view],
            angle: grid.angle(a),
            depth: grid.depths[k],
            width: r.grip_width,
            score: r.score,
        })
    }
}

/// Best collision-free grasp at `seed` on object `object_id` from grid view
/// `view`.
///
/// The returned width is the finger opening the candidate was checked with:
/// the symmetric contact opening plus clearance, capped at the maximum width.
pub fn best_grasp_at_seed(
    scene: &Scene,
    object_id: i32,
    seed: &Vec3,
    view: usize,
    cfg: &GraspnessConfig,
) -> Result<Option<GraspPose>> {
    if view >= cfg.grid.view_count() {
        return Err(Error::arg("view index outside the grid"));
    }
    Ok(SceneGrasper::new(scene, cfg)?.best_grasp(object_id, seed, view, true))
}

/// Greedy non-maximum suppression over grasps sorted by descending score.
///
/// A grasp is dropped when an earlier kept grasp is both closer than
/// `translation` (center distance) and within `rotation` (frame rotation
/// angle).
pub fn grasp_nms(grasps: &[GraspPose], translation: f64, rotation: f64) -> Result<Vec<GraspPose>> {
    if grasps.windows(2).any(|w| w[0].score < w[1].score) {
        return Err(Error::arg("grasps must be sorted by descending score"));
    }
    let mut kept: Vec<(GraspPose, crate::geom::RigidTransform)> = Vec::new();
    for g in grasps {
        let t = g.frame().transform();
        let suppressed = kept
            .iter()
            .any(|(k, kt)| (k.center - g.center).norm() < translation && kt.rotation_angle_to(&t) < rotation);
        if !suppressed {
            kept.push((*g, t));
        }
    }
    Ok(kept.into_iter().map(|(g, _)| g).collect())
}

/// Grasps whose gripper bodies hold no scene point.
pub fn collision_filter(grasps: &[GraspPose], scene_index: &SpatialIndex, gripper: &GripperModel) -> Vec<GraspPose> {
    grasps
        .iter()
        .filter(|g| !check_collision(&gripper_bodies(gripper, &g.frame(), g.depth, g.width), scene_index))
        .copied()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pose(center: Vec3, angle: f64, score: f64) -> GraspPose {
        GraspPose { center, view: Vec3::z(), angle, depth: 0.02, width: 0.05, score }
    }

    #[test]
    fn nms_basics() {
        let g = pose(Vec3::zeros(), 0.0, 0.9);
        assert_eq!(grasp_nms(&[g], 0.03, 0.5).unwrap().len(), 1);
        assert_eq!(grasp_nms(&[g, g], 0.03, 0.5).unwrap().len(), 1);
        let rotated = pose(Vec3::zeros(), 1.0, 0.8);
        let moved = pose(Vec3::new(0.05, 0.0, 0.0), 0.0, 0.7);
        assert_eq!(grasp_nms(&[g, rotated, moved], 0.03, 0.5).unwrap().len(), 3);
        assert!(grasp_nms(&[moved, g], 0.03, 0.5).is_err());
    }

    #[test]
    fn filter_basics() {
        let g = pose(Vec3::zeros(), 0.0, 0.9);
        let empty = SpatialIndex::build(&[]);
        assert_eq!(collision_filter(&[g], &empty, &GripperModel::default()), alloc::vec![g]);
        let bodies = gripper_bodies(&GripperModel::default(), &g.frame(), g.depth, g.width);
        let inside = g.frame().to_world(&bodies.fingers[1].center);
        assert!(collision_filter(&[g], &SpatialIndex::build(&[inside]), &GripperModel::default()).is_empty());
    }
}
