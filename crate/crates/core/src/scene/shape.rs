use core::f64::consts::PI;

#[allow(unused_imports)] // float methods under no_std
use num_traits::Float;

use super::TriMesh;
use crate::error::{Error, Result};
use crate::geom::{RigidTransform, Vec3};

/// Object geometry in its own frame. Cylinders are aligned with local z.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Box { half_extents: Vec3 },
    Sphere { radius: f64 },
    Cylinder { radius: f64, half_height: f64 },
    Mesh(TriMesh),
}

impl Shape {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        match self {
            Shape::Box { half_extents: h } if h.iter().all(|&v| positive(v)) => Ok(()),
            Shape::Sphere { radius } if positive(*radius) => Ok(()),
            Shape::Cylinder { radius, half_height } if positive(*radius) && positive(*half_height) => Ok(()),
            Shape::Mesh(mesh) => mesh.validate(),
            _ => Err(Error::arg("shape dimensions must be positive and finite")),
        }
    }

    /// Signed distance (negative inside) and outward unit normal.
    pub fn sdf_and_normal(&self, p: &Vec3) -> (f64, Vec3) {
        match self {
            Shape::Box { half_extents } => box_sdf(half_extents, p),
            Shape::Sphere { radius } => {
                let n = p.norm();
                let normal = if n > 0.0 { p / n } else { Vec3::z() };
                (n - radius, normal)
            }
            Shape::Cylinder { radius, half_height } => cylinder_sdf(*radius, *half_height, p),
            Shape::Mesh(mesh) => mesh.sdf_and_normal(p),
        }
    }

    pub fn sdf(&self, p: &Vec3) -> f64 {
        self.sdf_and_normal(p).0
    }

    pub fn surface_area(&self) -> f64 {
        match self {
            Shape::Box { half_extents: h } => 8.0 * (h.x * h.y + h.y * h.z + h.x * h.z),
            Shape::Sphere { radius } => 4.0 * PI * radius * radius,
            Shape::Cylinder { radius, half_height } => {
                2.0 * PI * radius * (2.0 * half_height) + 2.0 * PI * radius * radius
            }
            Shape::Mesh(mesh) => mesh.surface_area(),
        }
    }

    /// Radius of a sphere about the local origin enclosing the shape.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            Shape::Box { half_extents } => half_extents.norm(),
            Shape::Sphere { radius } => *radius,
            Shape::Cylinder { radius, half_height } => (radius * radius + half_height * half_height).sqrt(),
            Shape::Mesh(mesh) => mesh.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }

    /// Lowest world z reached by the shape under `pose`.
    pub fn lowest_z(&self, pose: &RigidTransform) -> f64 {
        let r = &pose.rotation;
        let cz = pose.translation.z;
        match self {
            Shape::Box { half_extents: h } => {
                cz - (h.x * r[(2, 0)].abs() + h.y * r[(2, 1)].abs() + h.z * r[(2, 2)].abs())
            }
            Shape::Sphere { radius } => cz - radius,
            Shape::Cylinder { radius, half_height } => {
                let az = r[(2, 2)];
                cz - half_height * az.abs() - radius * (1.0 - az * az).max(0.0).sqrt()
            }
            Shape::Mesh(mesh) => mesh
                .vertices
                .iter()
                .map(|v| pose.apply_point(v).z)
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Shape::Box { .. } => "box",
            Shape::Sphere { .. } => "sphere",
            Shape::Cylinder { .. } => "cylinder",
            Shape::Mesh(_) => "mesh",
        }
    }
}

fn box_sdf(h: &Vec3, p: &Vec3) -> (f64, Vec3) {
    let q = p.abs() - h;
    let sign = |v: f64| if v >= 0.0 { 1.0 } else { -1.0 };
    let outside = q.sup(&Vec3::zeros());
    let out_len = outside.norm();
    if out_len > 0.0 {
        let n = Vec3::new(sign(p.x) * outside.x, sign(p.y) * outside.y, sign(p.z) * outside.z) / out_len;
        return (out_len, n);
    }
    // Inside or on the surface: nearest face wins, preferring z, then y, then x.
    let inner = q.x.max(q.y).max(q.z);
    let n = if q.z >= q.x && q.z >= q.y {
        Vec3::new(0.0, 0.0, sign(p.z))
    } else if q.y >= q.x {
        Vec3::new(0.0, sign(p.y), 0.0)
    } else {
        Vec3::new(sign(p.x), 0.0, 0.0)
    };
    (inner, n)
}

fn cylinder_sdf(radius: f64, half_height: f64, p: &Vec3) -> (f64, Vec3) {
    let rho = (p.x * p.x + p.y * p.y).sqrt();
    let radial = if rho > 0.0 { Vec3::new(p.x / rho, p.y / rho, 0.0) } else { Vec3::x() };
    let axial = Vec3::new(0.0, 0.0, if p.z >= 0.0 { 1.0 } else { -1.0 });
    let dr = rho - radius;
    let dz = p.z.abs() - half_height;
    if dr > 0.0 && dz > 0.0 {
        let d = (dr * dr + dz * dz).sqrt();
        return (d, (radial * dr + axial * dz) / d);
    }
    if dr > 0.0 {
        return (dr, radial);
    }
    if dz > 0.0 {
        return (dz, axial);
    }
    if dz >= dr {
        (dz, axial)
    } else {
        (dr, radial)
    }
}
