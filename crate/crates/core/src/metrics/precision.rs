use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gripper::{check_collision, gripper_bodies, GraspPose, GripperModel};
use crate::quality::{find_contacts, min_antipodal_friction, QualityConfig};
use crate::scene::Scene;

/// How a single predicted grasp fares against the scene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraspOutcome {
    /// Object owning the scene point nearest to the grasp center, if any.
    pub object_id: Option<i32>,
    /// Minimum friction coefficient on that object (infinite if the
    /// contacts are invalid).
    pub mu: f64,
    pub collision_free: bool,
}

impl GraspOutcome {
    pub fn succeeds(&self, mu_threshold: f64) -> bool {
        self.collision_free && self.mu <= mu_threshold
    }
}

/// Contacts on the nearest object and collisions against the whole scene
/// cloud, with the gripper opened to the grasp's width.
pub fn evaluate_grasp(grasp: &GraspPose, scene: &Scene, gripper: &GripperModel, quality: &QualityConfig) -> Result<GraspOutcome> {
    let frame = grasp.frame();
    let bodies = gripper_bodies(gripper, &frame, grasp.depth, grasp.width);
    let collision_free = !check_collision(&bodies, scene.index());

    let object_id = nearest_object(scene, &grasp.center)?;
    let mu = match object_id.and_then(|id| scene.instance_by_id(id)) {
        Some(inst) => {
            let cloud = &scene.full_cloud;
            let r = scene.object_range(inst);
            let normals = cloud.normals.as_ref().ok_or_else(|| Error::state("scene cloud lacks normals"))?;
            let pair = find_contacts(&frame, grasp.depth, &cloud.positions[r.clone()], &normals[r], gripper, quality)?;
            min_antipodal_friction(&pair)
        }
        None => f64::INFINITY,
    };
    Ok(GraspOutcome { object_id, mu, collision_free })
}

fn nearest_object(scene: &Scene, p: &crate::geom::Vec3) -> Result<Option<i32>> {
    let mut best: Option<(f64, i32)> = None;
    for (inst, obj) in scene.instances.iter().enumerate() {
        let r = scene.object_range(inst);
        for q in &scene.full_cloud.positions[r] {
            let d = (q - p).norm_squared();
            if best.map_or(true, |(b, _)| d < b) {
                best = Some((d, obj.id as i32));
            }
        }
    }
    Ok(best.map(|(_, id)| id))
}

/// Precision of the first `k` grasps at each friction threshold: the share
/// that are collision-free with a minimum friction coefficient at most the
/// threshold. `grasps` must be sorted by descending score.
pub fn precision_at_k(
    grasps: &[GraspPose],
    scene: &Scene,
    gripper: &GripperModel,
    quality: &QualityConfig,
    mu_thresholds: &[f64],
    k: usize,
) -> Result<Vec<f64>> {
    if grasps.is_empty() {
        return Err(Error::arg("precision of an empty grasp list"));
    }
    if k == 0 || k > grasps.len() {
        return Err(Error::arg("k must lie in 1..=number of grasps"));
    }
    if grasps.windows(2).any(|w| w[0].score < w[1].score) {
        return Err(Error::arg("grasps must be sorted by descending score"));
    }
    let outcomes = grasps[..k]
        .iter()
        .map(|g| evaluate_grasp(g, scene, gripper, quality))
        .collect::<Result<Vec<_>>>()?;
    Ok(mu_thresholds
        .iter()
        .map(|&t| outcomes.iter().filter(|o| o.succeeds(t)).count() as f64 / k as f64)
        .collect())
}
