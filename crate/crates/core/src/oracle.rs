//! Slow reference implementations used to cross-check the fast paths.
//!
//! Everything here loops over every point, view, angle and depth with the
//! public primitives only: no spatial index, no neighborhood prefilters, no
//! caching. Enabled for the crate's own tests and through the `oracle`
//! feature.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // float methods under no_std
use num_traits::Float;

use crate::engine::{Aggregation, GraspableLandscape, GraspnessConfig, LandscapeLevel};
use crate::geom::Vec3;
use crate::gripper::{check_collision_points, grasp_frame, gripper_bodies, GraspFrame};
use crate::quality::{find_contacts, grasp_score, min_antipodal_friction, ContactPair};
use crate::scene::Scene;

/// Outcome of one candidate: its score and whether it counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaiveCandidate {
    pub score: f64,
    pub counts: bool,
}

/// Evaluates one candidate from scratch.
pub fn naive_candidate(
    frame: &GraspFrame,
    depth: f64,
    points: &[Vec3],
    normals: &[Vec3],
    obstacles: Option<&[Vec3]>,
    cfg: &GraspnessConfig,
) -> NaiveCandidate {
    let contacts = find_contacts(frame, depth, points, normals, &cfg.gripper, &cfg.quality).expect("matching normals");
    let mu = min_antipodal_friction(&contacts);
    let score = grasp_score(mu, cfg.quality.mu_min, cfg.quality.mu_max).expect("valid friction bounds");
    let mut counts = score > cfg.quality.score_threshold;
    if counts {
        if let Some(obs) = obstacles {
            let bodies = gripper_bodies(&cfg.gripper, frame, depth, contacts.grip_width);
            counts = !check_collision_points(&bodies, obs);
        }
    }
    NaiveCandidate { score, counts }
}

/// Raw point and view rows for every point of one object.
pub fn naive_rows(points: &[Vec3], normals: &[Vec3], obstacles: Option<&[Vec3]>, cfg: &GraspnessConfig) -> (Vec<f64>, Vec<f64>) {
    naive_rows_at(points, points, normals, obstacles, cfg)
}

/// Rows for grasps centered at `centers` on the object `points`.
pub fn naive_rows_at(
    centers: &[Vec3],
    points: &[Vec3],
    normals: &[Vec3],
    obstacles: Option<&[Vec3]>,
    cfg: &GraspnessConfig,
) -> (Vec<f64>, Vec<f64>) {
    let grid = &cfg.grid;
    let v = grid.view_count();
    let l = grid.angles * grid.depths.len();
    let mut point_out = Vec::new();
    let mut view_out = Vec::new();
    for p in centers {
        let mut row_count = vec![0u32; v];
        let mut row_sum = vec![0.0f64; v];
        let mut row_max = vec![0.0f64; v];
        for (j, view) in grid.views.iter().enumerate() {
            for a in 0..grid.angles {
                let frame = grasp_frame(*p, view, grid.angle(a));
                for &depth in &grid.depths {
                    let c = naive_candidate(&frame, depth, points, normals, obstacles, cfg);
                    if c.counts {
                        row_count[j] += 1;
                        row_sum[j] += c.score;
                        if c.score > row_max[j] {
                            row_max[j] = c.score;
                        }
                    }
                }
            }
        }
        let denom = (v * l) as f64;
        match cfg.aggregation {
            Aggregation::FeasibleRatio => {
                let mut total = 0u32;
                for c in &row_count {
                    total += c;
                    view_out.push(*c as f64 / l as f64);
                }
                point_out.push(total as f64 / denom);
            }
            Aggregation::MeanScore => {
                let mut total = 0.0;
                for s in &row_sum {
                    total += s;
                    view_out.push(s / l as f64);
                }
                point_out.push(total / denom);
            }
            Aggregation::MaxScore => {
                let mut best = 0.0f64;
                for m in &row_max {
                    best = best.max(*m);
                    view_out.push(*m);
                }
                point_out.push(best);
            }
        }
    }
    (point_out, view_out)
}

/// Reference for [`crate::engine::scene_landscape`].
pub fn naive_scene_landscape(scene: &Scene, level: LandscapeLevel, cfg: &GraspnessConfig) -> GraspableLandscape {
    let full = &scene.full_cloud;
    let normals = full.normals.as_ref().expect("scene normals");
    let obstacles = match level {
        LandscapeLevel::Object => None,
        LandscapeLevel::Scene => Some(&full.positions[..]),
    };
    let mut point = Vec::new();
    let mut view = Vec::new();
    let mut positions = Vec::new();
    let mut ids = Vec::new();
    for i in 0..scene.instances.len() {
        let r = scene.object_range(i);
        let (p, v) = naive_rows(&full.positions[r.clone()], &normals[r.clone()], obstacles, cfg);
        point.extend(p);
        view.extend(v);
        positions.extend_from_slice(&full.positions[r.clone()]);
        ids.extend_from_slice(&full.object_ids.as_ref().expect("scene ids")[r]);
    }
    GraspableLandscape {
        positions,
        object_ids: ids,
        view_count: cfg.grid.view_count(),
        aggregation: cfg.aggregation,
        normalized: false,
        point,
        view,
    }
}

/// Smallest `μ = k·step ≤ mu_max` whose friction cones at both contacts
/// contain the line between them; infinite if none does.
pub fn min_friction_on_grid(contacts: &ContactPair, step: f64, mu_max: f64) -> f64 {
    if !contacts.valid {
        return f64::INFINITY;
    }
    let line = contacts.right - contacts.left;
    let inside = |inward: Vec3, toward: Vec3, mu: f64| {
        // Cone of half-angle atan(mu) around `inward`.
        let half_angle = mu.atan();
        toward.dot(&inward) >= half_angle.cos() * toward.norm() * inward.norm()
    };
    let steps = (mu_max / step).floor() as usize;
    for k in 0..=steps {
        let mu = k as f64 * step;
        if inside(-contacts.left_normal, line, mu) && inside(-contacts.right_normal, -line, mu) {
            return mu;
        }
    }
    f64::INFINITY
}
