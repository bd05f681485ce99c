//! Scene description files (JSON) and random tabletop scenes.

use std::path::Path;

use graspness_core::rng::seeded;
use graspness_core::scene::{assemble_scene, CameraModel, ObjectInstance, Scene, Shape, Table, TriMesh};
use graspness_core::{RigidTransform, Vec3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{io_error, CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub objects: Vec<ObjectEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub camera: Option<CameraEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectEntry {
    pub id: u32,
    pub shape: ShapeEntry,
    pub pose: PoseEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ShapeEntry {
    Box { half_extents: [f64; 3] },
    Sphere { radius: f64 },
    Cylinder { radius: f64, half_height: f64 },
    Mesh { vertices: Vec<[f64; 3]>, triangles: Vec<[usize; 3]> },
}

/// Row-major rotation and translation, object (or camera) frame to world.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseEntry {
    pub rotation: [f64; 9],
    pub translation: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraEntry {
    pub pose: PoseEntry,
    pub width: u32,
    pub height: u32,
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

impl PoseEntry {
    pub fn from_transform(t: &RigidTransform) -> Self {
        PoseEntry { rotation: t.to_row_major(), translation: t.translation.into() }
    }

    pub fn transform(&self) -> Result<RigidTransform> {
        Ok(RigidTransform::from_row_major(&self.rotation, self.translation)?)
    }
}

impl ShapeEntry {
    pub fn from_shape(shape: &Shape) -> Self {
        match shape {
            Shape::Box { half_extents } => ShapeEntry::Box { half_extents: (*half_extents).into() },
            Shape::Sphere { radius } => ShapeEntry::Sphere { radius: *radius },
            Shape::Cylinder { radius, half_height } => ShapeEntry::Cylinder { radius: *radius, half_height: *half_height },
            Shape::Mesh(m) => ShapeEntry::Mesh {
                vertices: m.vertices.iter().map(|&v| v.into()).collect(),
                triangles: m.triangles.clone(),
            },
        }
    }

    pub fn shape(&self) -> Result<Shape> {
        let shape = match self {
            ShapeEntry::Box { half_extents } => Shape::Box { half_extents: Vec3::from(*half_extents) },
            ShapeEntry::Sphere { radius } => Shape::Sphere { radius: *radius },
            ShapeEntry::Cylinder { radius, half_height } => Shape::Cylinder { radius: *radius, half_height: *half_height },
            ShapeEntry::Mesh { vertices, triangles } => {
                Shape::Mesh(TriMesh::new(vertices.iter().map(|&v| Vec3::from(v)).collect(), triangles.clone())?)
            }
        };
        shape.validate()?;
        Ok(shape)
    }
}

impl CameraEntry {
    pub fn from_camera(c: &CameraModel) -> Self {
        CameraEntry {
            pose: PoseEntry::from_transform(&c.pose),
            width: c.width,
            height: c.height,
            fx: c.fx,
            fy: c.fy,
            cx: c.cx,
            cy: c.cy,
        }
    }

    pub fn camera(&self) -> Result<CameraModel> {
        let c = CameraModel {
            pose: self.pose.transform()?,
            width: self.width,
            height: self.height,
            fx: self.fx,
            fy: self.fy,
            cx: self.cx,
            cy: self.cy,
        };
        c.validate()?;
        Ok(c)
    }
}

impl SceneFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        Self::from_json(&text).map_err(|e| io_error(path, e))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SceneFile = serde_json::from_str(text).map_err(|e| CliError::input(e.to_string()))?;
        file.instances()?;
        file.camera()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scene serializes");
        s.push('\n');
        s
    }

    pub fn instances(&self) -> Result<Vec<ObjectInstance>> {
        self.objects
            .iter()
            .map(|o| Ok(ObjectInstance { id: o.id, shape: o.shape.shape()?, pose: o.pose.transform()? }))
            .collect()
    }

    pub fn table(&self) -> Option<Table> {
        self.table.map(|t| Table { radius: t.radius })
    }

    /// The file's camera, or the default tabletop camera.
    pub fn camera(&self) -> Result<CameraModel> {
        match &self.camera {
            Some(c) => c.camera(),
            None => Ok(CameraModel::default_tabletop()),
        }
    }

    /// Samples every surface at `spacing` and assembles the scene.
    pub fn assemble(&self, spacing: f64, seed: u64) -> Result<Scene> {
        Ok(assemble_scene(self.instances()?, self.table(), spacing, seed)?)
    }
}

/// Most placement attempts spent on one random scene.
pub const MAX_PLACEMENT_ATTEMPTS: usize = 10_000;
/// Radius of the table region objects are dropped into.
const PLACEMENT_RADIUS: f64 = 0.15;
/// Minimum horizontal gap between object footprints.
const PLACEMENT_GAP: f64 = 0.005;

/// Random tabletop scene: `count` primitives (3 to 8 drawn from `seed` when
/// `None`) resting on a 0.5 m table with disjoint footprints, seen from the
/// default camera.
pub fn random_scene(count: Option<usize>, seed: u64) -> Result<SceneFile> {
    let mut rng = seeded(seed);
    let n = count.unwrap_or_else(|| rng.gen_range(3..=8));
    let mut placed: Vec<(f64, f64, f64)> = Vec::new();
    let mut objects = Vec::with_capacity(n);
    let mut attempts = 0;
    while objects.len() < n {
        if attempts == MAX_PLACEMENT_ATTEMPTS {
            return Err(CliError::input(format!(
                "placed {} of {n} objects in {MAX_PLACEMENT_ATTEMPTS} attempts",
                objects.len()
            )));
        }
        attempts += 1;
        let (shape, local, footprint, height) = random_primitive(&mut rng);
        let r = PLACEMENT_RADIUS * rng.gen::<f64>().sqrt();
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let (x, y) = (r * phi.cos(), r * phi.sin());
        if placed.iter().any(|&(px, py, pf)| ((px - x).powi(2) + (py - y).powi(2)).sqrt() < pf + footprint + PLACEMENT_GAP) {
            continue;
        }
        placed.push((x, y, footprint));
        let yaw = RigidTransform::rotation_z(rng.gen_range(0.0..std::f64::consts::TAU));
        let mut pose = yaw.compose(&local);
        pose.translation = Vec3::new(x, y, height);
        objects.push(ObjectEntry {
            id: objects.len() as u32,
            shape: ShapeEntry::from_shape(&shape),
            pose: PoseEntry::from_transform(&pose),
        });
    }
    Ok(SceneFile {
        objects,
        table: Some(TableEntry { radius: Table::default().radius }),
        camera: Some(CameraEntry::from_camera(&CameraModel::default_tabletop())),
    })
}

/// Shape, its resting orientation, horizontal footprint radius and the
/// height of its center above the table.
fn random_primitive(rng: &mut impl Rng) -> (Shape, RigidTransform, f64, f64) {
    match rng.gen_range(0..3) {
        0 => {
            let h = Vec3::new(rng.gen_range(0.015..0.04), rng.gen_range(0.015..0.04), rng.gen_range(0.015..0.04));
            (Shape::Box { half_extents: h }, RigidTransform::identity(), h.xy().norm(), h.z)
        }
        1 => {
            let r = rng.gen_range(0.02..0.035);
            (Shape::Sphere { radius: r }, RigidTransform::identity(), r, r)
        }
        _ => {
            let (r, hh) = (rng.gen_range(0.015..0.03), rng.gen_range(0.03..0.06));
            let shape = Shape::Cylinder { radius: r, half_height: hh };
            if rng.gen_bool(0.5) {
                (shape, RigidTransform::identity(), r, hh)
            } else {
                let lying = RigidTransform::from_axis_angle(Vec3::x(), std::f64::consts::FRAC_PI_2);
                (shape, lying, (r * r + hh * hh).sqrt(), r)
            }
        }
    }
}
