use alloc::vec::Vec;

#[allow(unused_imports)] // float methods under no_std
use num_traits::Float;

use super::grasp_frame;
use crate::error::{Error, Result};
use crate::geom::Vec3;

/// Points grouped by a cylinder around a seed, in normalized grasp-frame
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CropResult {
    /// Ascending point indices.
    pub indices: Vec<usize>,
    /// Grasp-frame coordinates divided by the cylinder radius.
    pub coords: Vec<Vec3>,
}

/// Groups up to `max_points` points inside the cylinder aligned with the
/// approach axis at `seed`.
///
/// A point is inside when its approach coordinate lies in
/// `[height.0, height.1]` and its distance from the axis is at most `radius`.
/// With more than `max_points` inside, a seeded uniform subset is kept.
pub fn cylinder_crop(
    seed: &Vec3,
    view: &Vec3,
    points: &[Vec3],
    radius: f64,
    height: (f64, f64),
    max_points: usize,
    rng_seed: u64,
) -> Result<CropResult> {
    if !(radius > 0.0) {
        return Err(Error::arg("cylinder radius must be positive"));
    }
    if !(height.0 < height.1) {
        return Err(Error::arg("cylinder height range is empty"));
    }
    let frame = grasp_frame(*seed, view, 0.0);
    let inside: Vec<(usize, Vec3)> = points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let l = frame.to_local(p);
            let radial = (l.y * l.y + l.z * l.z).sqrt();
            (l.x >= height.0 && l.x <= height.1 && radial <= radius).then_some((i, l))
        })
        .collect();
    let chosen: Vec<(usize, Vec3)> = if inside.len() > max_points {
        let mut rng = crate::rng::seeded(rng_seed);
        let mut picks = rand::seq::index::sample(&mut rng, inside.len(), max_points).into_vec();
        picks.sort_unstable();
        picks.into_iter().map(|k| inside[k]).collect()
    } else {
        inside
    };
    Ok(CropResult {
        indices: chosen.iter().map(|c| c.0).collect(),
        coords: chosen.iter().map(|c| c.1 / radius).collect(),
    })
}
