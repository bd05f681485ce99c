use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::ops::Range;

use super::{sample_surface, sample_table, Shape};
use crate::error::{Error, Result};
use crate::geom::{PointCloud, RigidTransform, SpatialIndex, Vec3};

/// Allowed penetration of an object into the table, in meters.
pub const CONTACT_TOLERANCE: f64 = 1e-3;
/// Thickness of the slab used to render the table disk.
const TABLE_THICKNESS: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectInstance {
    pub id: u32,
    pub shape: Shape,
    /// Object frame to world.
    pub pose: RigidTransform,
}

/// Tabletop disk centered at the world origin; its top face is `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table {
    pub radius: f64,
}

impl Default for Table {
    fn default() -> Self {
        Table { radius: 0.5 }
    }
}

impl Table {
    /// Signed distance to the table slab, with its outward normal.
    pub fn sdf_and_normal(&self, p: &Vec3) -> (f64, Vec3) {
        let slab = Shape::Cylinder { radius: self.radius, half_height: TABLE_THICKNESS / 2.0 };
        slab.sdf_and_normal(&(p + Vec3::new(0.0, 0.0, TABLE_THICKNESS / 2.0)))
    }
}

/// Posed objects on an optional table, with their surface samples.
///
/// `full_cloud` holds every object's samples in instance order followed by
/// the table samples; object points carry their instance id, table points -1.
#[derive(Debug, Clone)]
pub struct Scene {
    pub instances: Vec<ObjectInstance>,
    pub table: Option<Table>,
    pub spacing: f64,
    pub full_cloud: PointCloud,
    object_ranges: Vec<Range<usize>>,
    bounds: Vec<(Vec3, f64)>,
    index: SpatialIndex,
}

/// Samples every instance (seeded by `seed ^ id`) and the table at `spacing`
/// and assembles the world-frame scene cloud.
pub fn assemble_scene(
    instances: Vec<ObjectInstance>,
    table: Option<Table>,
    spacing: f64,
    seed: u64,
) -> Result<Scene> {
    let mut seen = BTreeSet::new();
    for inst in &instances {
        if !seen.insert(inst.id) {
            return Err(Error::arg(alloc::format!("duplicate object id {}", inst.id)));
        }
        if inst.id > i32::MAX as u32 {
            return Err(Error::arg("object id exceeds i32 range"));
        }
        inst.shape.validate()?;
        if table.is_some() && inst.shape.lowest_z(&inst.pose) < -CONTACT_TOLERANCE {
            return Err(Error::arg(alloc::format!("object {} penetrates the table", inst.id)));
        }
    }
    if let Some(t) = table {
        if !(t.radius > 0.0) {
            return Err(Error::arg("table radius must be positive"));
        }
    }

    let mut full = PointCloud::new(Vec::new()).with_normals(Vec::new())?.with_object_ids(Vec::new())?;
    let mut object_ranges = Vec::with_capacity(instances.len());
    for inst in &instances {
        let local = sample_surface(&inst.shape, spacing, crate::rng::derive_seed(seed, inst.id as u64))?;
        let n = local.len();
        let world = local.transformed(&inst.pose).with_object_ids(alloc::vec![inst.id as i32; n])?;
        let start = full.len();
        full.append(&world);
        object_ranges.push(start..start + n);
    }
    if let Some(t) = table {
        let tc = sample_table(t.radius, spacing)?;
        let n = tc.len();
        full.append(&tc.with_object_ids(alloc::vec![-1; n])?);
    }
    let bounds = instances
        .iter()
        .map(|i| (i.pose.translation, i.shape.bounding_radius()))
        .collect();
    let index = SpatialIndex::build(&full.positions);
    Ok(Scene { instances, table, spacing, full_cloud: full, object_ranges, bounds, index })
}

impl Scene {
    /// Index over `full_cloud`.
    pub fn index(&self) -> &SpatialIndex {
        &self.index
    }

    pub fn object_range(&self, instance: usize) -> Range<usize> {
        self.object_ranges[instance].clone()
    }

    pub fn instance_by_id(&self, id: i32) -> Option<usize> {
        self.instances.iter().position(|inst| inst.id as i32 == id)
    }

    /// World-frame samples (with normals) of one instance.
    pub fn object_cloud(&self, instance: usize) -> PointCloud {
        let r = self.object_range(instance);
        self.full_cloud.select(&r.collect::<Vec<_>>())
    }

    /// All object samples, without table points.
    pub fn model_cloud(&self) -> PointCloud {
        let n: usize = self.object_ranges.iter().map(|r| r.len()).sum();
        self.full_cloud.select(&(0..n).collect::<Vec<_>>())
    }

    pub fn table_point_count(&self) -> usize {
        self.full_cloud.len() - self.object_ranges.iter().map(|r| r.len()).sum::<usize>()
    }

    /// Scene signed distance with the outward normal and the id of the
    /// closest surface (-1 for the table).
    pub fn sdf_and_normal(&self, p: &Vec3) -> (f64, Vec3, i32) {
        let mut best = (f64::INFINITY, Vec3::z(), -1);
        if let Some(t) = &self.table {
            let (d, n) = t.sdf_and_normal(p);
            best = (d, n, -1);
        }
        for (inst, (center, radius)) in self.instances.iter().zip(&self.bounds) {
            // The bounding sphere distance is a lower bound on the true one.
            if (p - center).norm() - radius >= best.0 {
                continue;
            }
            let local = inst.pose.inverse_apply_point(p);
            let (d, n) = inst.shape.sdf_and_normal(&local);
            if d < best.0 {
                best = (d, inst.pose.apply_vector(&n), inst.id as i32);
            }
        }
        best
    }

    pub fn sdf(&self, p: &Vec3) -> f64 {
        self.sdf_and_normal(p).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn sphere_at(id: u32, t: Vec3) -> ObjectInstance {
        ObjectInstance { id, shape: Shape::Sphere { radius: 0.03 }, pose: RigidTransform::from_translation(t) }
    }

    #[test]
    fn empty_scene_is_table_only() {
        let s = assemble_scene(Vec::new(), Some(Table { radius: 0.1 }), 0.01, 0).unwrap();
        assert!(s.full_cloud.len() > 0);
        assert!(s.full_cloud.object_ids.as_ref().unwrap().iter().all(|&i| i == -1));
        assert_eq!(s.table_point_count(), s.full_cloud.len());
    }

    #[test]
    fn identity_pose_keeps_object_cloud() {
        let s = assemble_scene(alloc::vec![sphere_at(4, Vec3::zeros())], None, 0.005, 0).unwrap();
        let local = sample_surface(&Shape::Sphere { radius: 0.03 }, 0.005, 4).unwrap();
        assert_eq!(s.full_cloud.positions, local.positions);
        assert_eq!(s.object_cloud(0).normals, local.normals);
    }

    #[test]
    fn rotated_box_normals_match_world_sdf() {
        let inst = ObjectInstance {
            id: 0,
            shape: Shape::Box { half_extents: Vec3::new(0.02, 0.04, 0.03) },
            pose: RigidTransform { translation: Vec3::new(0.1, 0.0, 0.03), ..RigidTransform::rotation_z(FRAC_PI_2) },
        };
        let s = assemble_scene(alloc::vec![inst], Some(Table::default()), 0.005, 0).unwrap();
        let obj = s.object_cloud(0);
        for (p, n) in obj.positions.iter().zip(obj.normals.as_ref().unwrap()) {
            let (d, sn, id) = s.sdf_and_normal(p);
            assert!(d.abs() < 1e-12);
            // Bottom samples touch the table, where the table may win.
            if id == 0 {
                assert!((sn - n).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn counts_add_up() {
        let s = assemble_scene(
            alloc::vec![sphere_at(0, Vec3::new(0.0, 0.0, 0.03)), sphere_at(1, Vec3::new(0.1, 0.0, 0.03))],
            Some(Table { radius: 0.2 }),
            0.005,
            1,
        )
        .unwrap();
        let per_object: usize = (0..2).map(|i| s.object_range(i).len()).sum();
        let table = sample_table(0.2, 0.005).unwrap().len();
        assert_eq!(s.full_cloud.len(), per_object + table);
    }

    #[test]
    fn rejects_duplicates_and_table_penetration() {
        let dup = alloc::vec![sphere_at(1, Vec3::new(0.0, 0.0, 0.03)), sphere_at(1, Vec3::new(0.1, 0.0, 0.03))];
        assert!(assemble_scene(dup, None, 0.01, 0).is_err());
        let sunk = alloc::vec![sphere_at(0, Vec3::new(0.0, 0.0, 0.02))];
        assert!(assemble_scene(sunk.clone(), Some(Table::default()), 0.01, 0).is_err());
        assert!(assemble_scene(sunk, None, 0.01, 0).is_ok());
    }
}
