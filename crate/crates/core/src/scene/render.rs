use alloc::vec::Vec;

use rand_distr::{Distribution, Normal};

use super::{CameraModel, Scene};
use crate::error::Result;
use crate::geom::{PointCloud, Vec3};

const MAX_STEPS: usize = 128;
const HIT_TOLERANCE: f64 = 1e-5;
const NEAR: f64 = 1e-3;
const FAR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Emit points in world coordinates instead of the camera frame.
    pub world_frame: bool,
    /// Standard deviation of Gaussian noise added along each ray, meters.
    pub depth_noise_std: f64,
    pub seed: u64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { world_frame: true, depth_noise_std: 0.0, seed: 0 }
    }
}

/// Sphere-traces one ray per pixel against the scene SDF.
///
/// Points come out in row-major pixel order with the SDF normal of the hit
/// surface and the id of the hit object (-1 for the table). Misses produce
/// nothing.
pub fn render_depth_view(scene: &Scene, camera: &CameraModel, opts: &RenderOptions) -> Result<PointCloud> {
    camera.validate()?;
    let noise = if opts.depth_noise_std > 0.0 {
        Some(Normal::new(0.0, opts.depth_noise_std).map_err(|_| crate::Error::arg("invalid depth noise"))?)
    } else {
        None
    };
    let origin = camera.position();
    let rows = crate::par::map_range(camera.height as usize, |v| {
        let mut rng = crate::rng::task_rng(opts.seed, v as u64);
        let mut hits = Vec::new();
        for u in 0..camera.width {
            let dir = camera.ray_direction(u, v as u32);
            if let Some((t, normal, id)) = trace(scene, &origin, &dir) {
                let t = match &noise {
                    Some(n) => t + n.sample(&mut rng),
                    None => t,
                };
                hits.push((origin + dir * t, normal, id));
            }
        }
        hits
    });

    let hits: Vec<(Vec3, Vec3, i32)> = rows.into_iter().flatten().collect();
    let (positions, normals): (Vec<Vec3>, Vec<Vec3>) = if opts.world_frame {
        hits.iter().map(|h| (h.0, h.1)).unzip()
    } else {
        hits.iter()
            .map(|h| (camera.pose.inverse_apply_point(&h.0), camera.pose.inverse_apply_vector(&h.1)))
            .unzip()
    };
    let ids = hits.iter().map(|h| h.2).collect();
    PointCloud::new(positions).with_normals(normals)?.with_object_ids(ids)
}

fn trace(scene: &Scene, origin: &Vec3, dir: &Vec3) -> Option<(f64, Vec3, i32)> {
    let mut t = NEAR;
    for _ in 0..MAX_STEPS {
        let p = origin + dir * t;
        let (d, normal, id) = scene.sdf_and_normal(&p);
        if d < HIT_TOLERANCE {
            return Some((t, normal, id));
        }
        t += d;
        if t > FAR {
            return None;
        }
    }
    None
}
