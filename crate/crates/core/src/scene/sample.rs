use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // float methods under no_std
use num_traits::Float;
use rand::Rng as _;

use super::{Shape, TriMesh};
use crate::error::{Error, Result};
use crate::geom::{fibonacci_sphere, PointCloud, Vec3};

/// Near-uniform surface samples with analytic normals, about `spacing` apart.
///
/// Analytic primitives use deterministic lattices (face grids, cylinder rings,
/// a Fibonacci sphere), so `seed` only affects meshes, which are sampled by
/// area-weighted random triangles.
pub fn sample_surface(shape: &Shape, spacing: f64, seed: u64) -> Result<PointCloud> {
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(Error::arg("sample spacing must be positive"));
    }
    shape.validate()?;
    let (positions, normals) = match shape {
        Shape::Box { half_extents } => sample_box(half_extents, spacing),
        Shape::Sphere { radius } => {
            let n = ((shape.surface_area() / (spacing * spacing)).round() as usize).max(1);
            let dirs = fibonacci_sphere(n)?;
            (dirs.iter().map(|d| d * *radius).collect(), dirs)
        }
        Shape::Cylinder { radius, half_height } => sample_cylinder(*radius, *half_height, spacing),
        Shape::Mesh(mesh) => sample_mesh(mesh, spacing, seed),
    };
    PointCloud::new(positions).with_normals(normals)
}

fn cells(length: f64, spacing: f64) -> usize {
    ((length / spacing).ceil() as usize).max(1)
}

fn sample_box(h: &Vec3, spacing: f64) -> (Vec<Vec3>, Vec<Vec3>) {
    let mut pts = Vec::new();
    let mut nrm = Vec::new();
    for axis in 0..3 {
        let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
        let (nb, nc) = (cells(2.0 * h[b], spacing), cells(2.0 * h[c], spacing));
        for sign in [1.0, -1.0] {
            for i in 0..nb {
                for j in 0..nc {
                    let mut p = Vec3::zeros();
                    p[axis] = sign * h[axis];
                    p[b] = -h[b] + (i as f64 + 0.5) * (2.0 * h[b] / nb as f64);
                    p[c] = -h[c] + (j as f64 + 0.5) * (2.0 * h[c] / nc as f64);
                    let mut n = Vec3::zeros();
                    n[axis] = sign;
                    pts.push(p);
                    nrm.push(n);
                }
            }
        }
    }
    (pts, nrm)
}

fn sample_cylinder(radius: f64, half_height: f64, spacing: f64) -> (Vec<Vec3>, Vec<Vec3>) {
    let mut pts = Vec::new();
    let mut nrm = Vec::new();
    let n_theta = cells(2.0 * PI * radius, spacing).max(3);
    let n_z = cells(2.0 * half_height, spacing);
    for i in 0..n_theta {
        let a = (i as f64 + 0.5) * 2.0 * PI / n_theta as f64;
        let (s, c) = a.sin_cos();
        for j in 0..n_z {
            let z = -half_height + (j as f64 + 0.5) * (2.0 * half_height / n_z as f64);
            pts.push(Vec3::new(radius * c, radius * s, z));
            nrm.push(Vec3::new(c, s, 0.0));
        }
    }
    for (z, nz) in [(half_height, 1.0), (-half_height, -1.0)] {
        for (x, y) in disk_lattice(radius, spacing) {
            pts.push(Vec3::new(x, y, z));
            nrm.push(Vec3::new(0.0, 0.0, nz));
        }
    }
    (pts, nrm)
}

/// Concentric rings covering a disk at roughly `spacing`.
fn disk_lattice(radius: f64, spacing: f64) -> Vec<(f64, f64)> {
    let rings = ((radius / spacing).round() as usize).max(1);
    let mut out = Vec::new();
    for k in 0..rings {
        let rho = (k as f64 + 0.5) * radius / rings as f64;
        let count = ((2.0 * PI * rho / spacing).round() as usize).max(1);
        for m in 0..count {
            let a = (m as f64 + 0.5) * 2.0 * PI / count as f64;
            out.push((rho * a.cos(), rho * a.sin()));
        }
    }
    out
}

fn sample_mesh(mesh: &TriMesh, spacing: f64, seed: u64) -> (Vec<Vec3>, Vec<Vec3>) {
    let mut cumulative = Vec::with_capacity(mesh.triangles.len());
    let mut total = 0.0;
    for t in 0..mesh.triangles.len() {
        total += mesh.triangle_area(t);
        cumulative.push(total);
    }
    let n = ((total / (spacing * spacing)).round() as usize).max(1);
    let mut rng = crate::rng::seeded(seed);
    let mut pts = Vec::with_capacity(n);
    let mut nrm = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.gen::<f64>() * total;
        let t = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
        let tri = mesh.triangles[t];
        let (a, b, c) = (mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
        let (r1, r2): (f64, f64) = (rng.gen(), rng.gen());
        let s = r1.sqrt();
        pts.push(a * (1.0 - s) + b * (s * (1.0 - r2)) + c * (s * r2));
        nrm.push(mesh.face_normal(t));
    }
    (pts, nrm)
}

/// Square lattice over the table disk `x² + y² <= radius²` at `z = 0`.
pub fn sample_table(radius: f64, spacing: f64) -> Result<PointCloud> {
    if !(spacing > 0.0) || !(radius > 0.0) {
        return Err(Error::arg("table radius and spacing must be positive"));
    }
    let n = (radius / spacing).ceil() as i64;
    let mut pts = Vec::new();
    for i in -n..n {
        for j in -n..n {
            let x = (i as f64 + 0.5) * spacing;
            let y = (j as f64 + 0.5) * spacing;
            if x * x + y * y <= radius * radius {
                pts.push(Vec3::new(x, y, 0.0));
            }
        }
    }
    let normals = alloc::vec![Vec3::z(); pts.len()];
    PointCloud::new(pts).with_normals(normals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn on_surface(shape: &Shape, spacing: f64) {
        let c = sample_surface(shape, spacing, 3).unwrap();
        let normals = c.normals.as_ref().unwrap();
        for (p, n) in c.positions.iter().zip(normals) {
            let (d, an) = shape.sdf_and_normal(p);
            assert!(d.abs() < 1e-6, "{} sample off surface by {d}", shape.kind());
            assert!((n.norm() - 1.0).abs() < 1e-12);
            // Edge samples may sit where two faces meet; away from edges the
            // stored normal is the SDF gradient.
            if !matches!(shape, Shape::Mesh(_)) {
                assert!(n.dot(&an) > -1e-12);
            }
        }
    }

    #[test]
    fn samples_lie_on_surface() {
        on_surface(&Shape::Sphere { radius: 0.03 }, 0.005);
        on_surface(&Shape::Box { half_extents: Vec3::new(0.02, 0.03, 0.05) }, 0.005);
        on_surface(&Shape::Cylinder { radius: 0.025, half_height: 0.04 }, 0.004);
        on_surface(&Shape::Mesh(TriMesh::cuboid(Vec3::new(0.02, 0.03, 0.01))), 0.004);
    }

    #[test]
    fn sphere_count_tracks_area() {
        let c = sample_surface(&Shape::Sphere { radius: 0.03 }, 0.005, 0).unwrap();
        let expected = 4.0 * PI * 0.03 * 0.03 / (0.005 * 0.005);
        assert!((c.len() as f64 - expected).abs() <= 0.3 * expected);
    }

    #[test]
    fn primitive_counts_track_area() {
        for shape in [
            Shape::Box { half_extents: Vec3::new(0.02, 0.03, 0.05) },
            Shape::Cylinder { radius: 0.025, half_height: 0.04 },
        ] {
            let c = sample_surface(&shape, 0.005, 0).unwrap();
            let expected = shape.surface_area() / 0.005f64.powi(2);
            assert!((c.len() as f64 - expected).abs() <= 0.3 * expected, "{}: {}", shape.kind(), c.len());
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let mesh = Shape::Mesh(TriMesh::cuboid(Vec3::repeat(0.02)));
        assert_eq!(sample_surface(&mesh, 0.004, 11).unwrap(), sample_surface(&mesh, 0.004, 11).unwrap());
        assert_ne!(sample_surface(&mesh, 0.004, 11).unwrap(), sample_surface(&mesh, 0.004, 12).unwrap());
    }

    #[test]
    fn table_is_a_flat_disk() {
        let t = sample_table(0.1, 0.01).unwrap();
        assert!(t.positions.iter().all(|p| p.z == 0.0 && p.xy().norm() <= 0.1));
        let expected = PI * 0.01 / 1e-4;
        assert!((t.len() as f64 - expected).abs() < 0.1 * expected);
    }
}
