use alloc::vec::Vec;

use nalgebra::SymmetricEigen;

use super::{Mat3, PointCloud, SpatialIndex, Vec3};
use crate::error::{Error, Result};

/// Relative size of the middle eigenvalue below which a neighborhood is
/// treated as collinear.
const RANK_TOL: f64 = 1e-10;

/// A cloud with estimated normals and a per-point validity flag.
///
/// Invalid normals (collinear or coincident neighborhoods) are stored as the
/// zero vector.
#[derive(Debug, Clone)]
pub struct NormalEstimate {
    pub cloud: PointCloud,
    pub valid: Vec<bool>,
}

/// PCA normals over the `k` nearest neighbors (the point itself included),
/// oriented so that `normal · (reference - p) >= 0`.
pub fn estimate_normals(cloud: &PointCloud, k: usize, reference: &Vec3) -> Result<NormalEstimate> {
    if k < 3 {
        return Err(Error::arg("normal estimation needs k >= 3"));
    }
    if cloud.len() < k {
        return Err(Error::arg(alloc::format!("cloud has {} points, k = {k}", cloud.len())));
    }
    let index = SpatialIndex::build(&cloud.positions);
    let results = crate::par::map_range(cloud.len(), |i| {
        let p = cloud.positions[i];
        let hood = index.nearest(&p, k).expect("index is non-empty");
        normal_from_neighbors(hood.iter().map(|n| cloud.positions[n.index]), &p, reference)
    });
    let valid = results.iter().map(Option::is_some).collect();
    let normals = results.into_iter().map(|n| n.unwrap_or_else(Vec3::zeros)).collect();
    let mut out = cloud.clone();
    out.normals = Some(normals);
    Ok(NormalEstimate { cloud: out, valid })
}

fn normal_from_neighbors(points: impl Iterator<Item = Vec3> + Clone, p: &Vec3, reference: &Vec3) -> Option<Vec3> {
    let n = points.clone().count() as f64;
    let mean = points.clone().fold(Vec3::zeros(), |a, q| a + q) / n;
    let cov = points.fold(Mat3::zeros(), |a, q| {
        let d = q - mean;
        a + d * d.transpose()
    }) / n;
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let largest = eig.eigenvalues[order[2]];
    if !(largest > 0.0) || eig.eigenvalues[order[1]] <= RANK_TOL * largest {
        return None;
    }
    let mut normal: Vec3 = eig.eigenvectors.column(order[0]).into_owned().normalize();
    if normal.dot(&(reference - p)) < 0.0 {
        normal = -normal;
    }
    Some(normal)
}
