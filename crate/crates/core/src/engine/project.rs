use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::GraspableLandscape;
use crate::error::{Error, Result};
use crate::geom::{PointCloud, SpatialIndex};

/// Largest distance, in meters, at which a rendered point inherits the
/// graspness of a model point.
pub const DEFAULT_PROJECTION_CUTOFF: f64 = 0.01;

/// Transfers a landscape from model points onto a rendered cloud.
///
/// Each rendered object point takes the values of its nearest landscape
/// point with the same object id, if that point is within `cutoff`.
/// Everything else, including all background points, gets 0. The rendered
/// cloud must carry object ids; ids absent from the landscape are an error.
pub fn project_to_view(landscape: &GraspableLandscape, partial: &PointCloud, cutoff: f64) -> Result<GraspableLandscape> {
    landscape.validate()?;
    if !(cutoff >= 0.0) {
        return Err(Error::arg("projection cutoff must be non-negative"));
    }
    let ids = partial.object_ids.as_deref().ok_or_else(|| Error::arg("partial cloud needs object ids"))?;

    let mut members: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, &id) in landscape.object_ids.iter().enumerate() {
        if id >= 0 {
            members.entry(id).or_default().push(i);
        }
    }
    let mut indices = BTreeMap::new();
    for (&id, m) in &members {
        let pts: Vec<_> = m.iter().map(|&i| landscape.positions[i]).collect();
        indices.insert(id, SpatialIndex::build(&pts));
    }

    let v = landscape.view_count;
    let mut point = alloc::vec![0.0; partial.len()];
    let mut view = alloc::vec![0.0; partial.len() * v];
    for (i, (p, &id)) in partial.positions.iter().zip(ids).enumerate() {
        if id < 0 {
            continue;
        }
        let index = indices
            .get(&id)
            .ok_or_else(|| Error::arg(alloc::format!("object id {id} is not in the landscape")))?;
        let nn = index.nearest_one(p)?;
        if nn.distance <= cutoff {
            let src = members[&id][nn.index];
            point[i] = landscape.point[src];
            view[i * v..(i + 1) * v].copy_from_slice(landscape.view_row(src));
        }
    }
    Ok(GraspableLandscape {
        positions: partial.positions.clone(),
        object_ids: ids.to_vec(),
        view_count: v,
        aggregation: landscape.aggregation,
        normalized: landscape.normalized,
        point,
        view,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Aggregation;
    use crate::geom::Vec3;

    fn model() -> GraspableLandscape {
        GraspableLandscape {
            positions: alloc::vec![Vec3::zeros(), Vec3::x()],
            object_ids: alloc::vec![3, 4],
            view_count: 2,
            aggregation: Aggregation::FeasibleRatio,
            normalized: true,
            point: alloc::vec![0.25, 0.75],
            view: alloc::vec![0.1, 0.2, 0.3, 0.4],
        }
    }

    #[test]
    fn copies_nearest_same_object() {
        let partial = PointCloud::new(alloc::vec![Vec3::zeros(), Vec3::new(1.0, 0.005, 0.0), Vec3::new(0.0, 0.02, 0.0), Vec3::x()])
            .with_object_ids(alloc::vec![3, 4, 3, -1])
            .unwrap();
        let p = project_to_view(&model(), &partial, DEFAULT_PROJECTION_CUTOFF).unwrap();
        assert_eq!(p.point, alloc::vec![0.25, 0.75, 0.0, 0.0]);
        assert_eq!(p.view, alloc::vec![0.1, 0.2, 0.3, 0.4, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn nearest_must_share_the_id() {
        // Closest model point belongs to object 4; object 3's point is 1 m away.
        let partial = PointCloud::new(alloc::vec![Vec3::x()]).with_object_ids(alloc::vec![3]).unwrap();
        assert_eq!(project_to_view(&model(), &partial, 0.01).unwrap().point, alloc::vec![0.0]);
    }

    #[test]
    fn unknown_id_and_missing_ids_fail() {
        let partial = PointCloud::new(alloc::vec![Vec3::zeros()]).with_object_ids(alloc::vec![9]).unwrap();
        assert!(project_to_view(&model(), &partial, 0.01).is_err());
        let bare = PointCloud::new(alloc::vec![Vec3::zeros()]);
        assert!(project_to_view(&model(), &bare, 0.01).is_err());
    }
}
