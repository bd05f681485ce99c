use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use super::{Aggregation, GraspableLandscape, GraspnessConfig};
use crate::error::{Error, Result};
use crate::geom::{PointCloud, SpatialIndex, Vec3};
use crate::quality::{CandidateGrid, CandidateResult, CollisionMode};
use crate::scene::Scene;

/// Whether candidates are checked against the rest of the scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LandscapeLevel {
    /// Each object on its own, no collision labels.
    Object,
    /// Candidates must also be collision-free against every scene point.
    Scene,
}

struct Group<'a> {
    points: &'a [Vec3],
    normals: &'a [Vec3],
    index: SpatialIndex,
    /// Where these points sit in the obstacle cloud, if they are part of it.
    range: Range<usize>,
}

/// Raw landscape of a single object cloud (with normals) in isolation.
///
/// The view value at view `j` aggregates the `angles × depths` candidates at
/// that view; the point value aggregates all `views × angles × depths`.
pub fn object_graspness(cloud: &PointCloud, cfg: &GraspnessConfig) -> Result<GraspableLandscape> {
    cfg.validate()?;
    let normals = cloud.normals.as_deref().ok_or_else(|| Error::arg("object cloud needs normals"))?;
    let group = Group { points: &cloud.positions, normals, index: SpatialIndex::build(&cloud.positions), range: 0..0 };
    let (point, view) = compute_rows(cfg, core::slice::from_ref(&group), None)?;
    let object_ids = match &cloud.object_ids {
        Some(ids) => ids.clone(),
        None => vec![0; cloud.len()],
    };
    Ok(GraspableLandscape {
        positions: cloud.positions.clone(),
        object_ids,
        view_count: cfg.grid.view_count(),
        aggregation: cfg.aggregation,
        normalized: false,
        point,
        view,
    })
}

/// Raw scene-level landscape over every object sample of `scene` (table
/// excluded), in world coordinates and `full_cloud` order.
pub fn scene_graspness(scene: &Scene, cfg: &GraspnessConfig) -> Result<GraspableLandscape> {
    scene_landscape(scene, LandscapeLevel::Scene, cfg)
}

/// Raw landscape over the object samples of `scene` at either level.
///
/// Contacts are always searched on the candidate's own object. At
/// [`LandscapeLevel::Scene`] a feasible candidate only counts if its gripper
/// bodies are clear of the full scene cloud.
pub fn scene_landscape(scene: &Scene, level: LandscapeLevel, cfg: &GraspnessConfig) -> Result<GraspableLandscape> {
    cfg.validate()?;
    let full = &scene.full_cloud;
    let normals = full.normals.as_deref().ok_or_else(|| Error::state("scene cloud lacks normals"))?;
    let groups: Vec<Group> = (0..scene.instances.len())
        .map(|i| {
            let r = scene.object_range(i);
            Group {
                points: &full.positions[r.clone()],
                normals: &normals[r.clone()],
                index: SpatialIndex::build(&full.positions[r.clone()]),
                range: r,
            }
        })
        .collect();
    let obstacles = match level {
        LandscapeLevel::Object => None,
        LandscapeLevel::Scene => Some(scene.index()),
    };
    let (point, view) = compute_rows(cfg, &groups, obstacles)?;
    let model = scene.model_cloud();
    Ok(GraspableLandscape {
        positions: model.positions,
        object_ids: model.object_ids.unwrap_or_default(),
        view_count: cfg.grid.view_count(),
        aggregation: cfg.aggregation,
        normalized: false,
        point,
        view,
    })
}

fn compute_rows(cfg: &GraspnessConfig, groups: &[Group], obstacles: Option<&SpatialIndex>) -> Result<(Vec<f64>, Vec<f64>)> {
    let evaluators = groups
        .iter()
        .map(|g| {
            let e = CandidateGrid::new(&cfg.grid, &cfg.gripper, &cfg.quality, g.points, g.normals, &g.index)?;
            Ok(match obstacles {
                Some(o) => e.with_obstacles(o, CollisionMode::FeasibleOnly).with_target_in_obstacles(g.range.clone()),
                None => e,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut offsets = Vec::with_capacity(groups.len() + 1);
    offsets.push(0);
    for g in groups {
        offsets.push(offsets[offsets.len() - 1] + g.points.len());
    }
    let total = offsets[groups.len()];

    let rows = crate::par::map_range(total, |n| {
        let g = offsets.partition_point(|&o| o <= n) - 1;
        point_row(&evaluators[g], &groups[g].points[n - offsets[g]], cfg)
    });

    let v = cfg.grid.view_count();
    let mut point = Vec::with_capacity(total);
    let mut view = Vec::with_capacity(total * v);
    for (p, row) in rows {
        point.push(p);
        view.extend_from_slice(&row);
    }
    Ok((point, view))
}

fn point_row(evaluator: &CandidateGrid, center: &Vec3, cfg: &GraspnessConfig) -> (f64, Vec<f64>) {
    let v = cfg.grid.view_count();
    let per_view = cfg.grid.per_view() as f64;
    let threshold = cfg.quality.score_threshold;
    let mut counts = vec![0u32; v];
    let mut sums = vec![0.0f64; v];
    let mut maxes = vec![0.0f64; v];
    evaluator.evaluate(center, |j, _, _, r: &CandidateResult| {
        if r.is_feasible(threshold) {
            counts[j] += 1;
            sums[j] += r.score;
            maxes[j] = maxes[j].max(r.score);
        }
    });
    let all = v as f64 * per_view;
    match cfg.aggregation {
        Aggregation::FeasibleRatio => {
            let total: u32 = counts.iter().sum();
            (total as f64 / all, counts.iter().map(|&c| c as f64 / per_view).collect())
        }
        Aggregation::MeanScore => {
            let total: f64 = sums.iter().sum();
            (total / all, sums.iter().map(|s| s / per_view).collect())
        }
        Aggregation::MaxScore => (maxes.iter().copied().fold(0.0, f64::max), maxes),
    }
}
