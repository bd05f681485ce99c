//! Seed-point and view selection, best-grasp search, grasp NMS and the
//! collision post-filter.

mod grasps;
mod seeds;
mod views;

pub use grasps::{best_grasp_at_seed, collision_filter, grasp_nms, SceneGrasper, DEFAULT_NMS_ROTATION, DEFAULT_NMS_TRANSLATION};
pub use seeds::{sample_seed_indices, sample_seeds, PointStrategy, SamplingConfig, SeedSet};
pub use views::{select_view, ViewStrategy};
