use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[allow(unused_imports)] // float methods under no_std
use num_traits::Float;

use super::{PointCloud, Vec3};
use crate::error::{Error, Result};

/// Replaces the points of every occupied voxel by their centroid.
///
/// Scalars and normals are averaged (normals renormalized); object ids take
/// the majority label, lowest id on ties. Output follows lexicographic voxel
/// order, which makes the result independent of input order.
pub fn voxel_downsample(cloud: &PointCloud, voxel_size: f64) -> Result<PointCloud> {
    if !(voxel_size > 0.0) || !voxel_size.is_finite() {
        return Err(Error::arg("voxel size must be positive"));
    }
    cloud.validate()?;
    let mut buckets: BTreeMap<[i64; 3], Vec<usize>> = BTreeMap::new();
    for (i, p) in cloud.positions.iter().enumerate() {
        buckets.entry(voxel_key(p, voxel_size)).or_default().push(i);
    }

    let n = buckets.len();
    let mut out = PointCloud::new(Vec::with_capacity(n));
    let mut normals = cloud.normals.as_ref().map(|_| Vec::with_capacity(n));
    let mut ids = cloud.object_ids.as_ref().map(|_| Vec::with_capacity(n));
    let mut scalars: Vec<Vec<f64>> = cloud.scalars.values().map(|_| Vec::with_capacity(n)).collect();

    for members in buckets.values() {
        if let [i] = members[..] {
            out.positions.push(cloud.positions[i]);
            if let (Some(dst), Some(src)) = (normals.as_mut(), cloud.normals.as_ref()) {
                dst.push(src[i]);
            }
            if let (Some(dst), Some(src)) = (ids.as_mut(), cloud.object_ids.as_ref()) {
                dst.push(src[i]);
            }
            for (dst, src) in scalars.iter_mut().zip(cloud.scalars.values()) {
                dst.push(src[i]);
            }
            continue;
        }
        let k = members.len() as f64;
        let sum = members.iter().fold(Vec3::zeros(), |acc, &i| acc + cloud.positions[i]);
        out.positions.push(sum / k);
        if let (Some(dst), Some(src)) = (normals.as_mut(), cloud.normals.as_ref()) {
            let s = members.iter().fold(Vec3::zeros(), |acc, &i| acc + src[i]);
            let len = s.norm();
            dst.push(if len > 0.0 { s / len } else { src[members[0]] });
        }
        if let (Some(dst), Some(src)) = (ids.as_mut(), cloud.object_ids.as_ref()) {
            dst.push(majority(members.iter().map(|&i| src[i])));
        }
        for (dst, src) in scalars.iter_mut().zip(cloud.scalars.values()) {
            dst.push(members.iter().map(|&i| src[i]).sum::<f64>() / k);
        }
    }
    out.normals = normals;
    out.object_ids = ids;
    out.scalars = cloud.scalars.keys().cloned().zip(scalars).collect();
    Ok(out)
}

pub(crate) fn voxel_key(p: &Vec3, size: f64) -> [i64; 3] {
    [(p.x / size).floor() as i64, (p.y / size).floor() as i64, (p.z / size).floor() as i64]
}

fn majority(labels: impl Iterator<Item = i32>) -> i32 {
    let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(l).or_default() += 1;
    }
    // BTreeMap iterates ascending, so `>` keeps the lowest id among ties.
    let mut best = (i32::MIN, 0usize);
    for (&label, &c) in &counts {
        if c > best.1 {
            best = (label, c);
        }
    }
    best.0
}
