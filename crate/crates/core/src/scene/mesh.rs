use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // float methods under no_std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geom::Vec3;

/// Closed triangle mesh with outward (counter-clockwise) winding.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mesh = Self { vertices, triangles };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Axis-aligned box as 12 triangles; handy for tests and examples.
    pub fn cuboid(half: Vec3) -> Self {
        let v = |x: f64, y: f64, z: f64| Vec3::new(x * half.x, y * half.y, z * half.z);
        let vertices = alloc::vec![
            v(-1.0, -1.0, -1.0), v(1.0, -1.0, -1.0), v(1.0, 1.0, -1.0), v(-1.0, 1.0, -1.0),
            v(-1.0, -1.0, 1.0), v(1.0, -1.0, 1.0), v(1.0, 1.0, 1.0), v(-1.0, 1.0, 1.0),
        ];
        let triangles = alloc::vec![
            [0, 2, 1], [0, 3, 2], [4, 5, 6], [4, 6, 7],
            [0, 1, 5], [0, 5, 4], [1, 2, 6], [1, 6, 5],
            [2, 3, 7], [2, 7, 6], [3, 0, 4], [3, 4, 7],
        ];
        Self { vertices, triangles }
    }

    /// Rejects out-of-range indices, degenerate faces and meshes that are not
    /// closed 2-manifolds of genus zero (`V - E + F = 2`, every edge shared by
    /// exactly two faces).
    pub fn validate(&self) -> Result<()> {
        if self.triangles.is_empty() {
            return Err(Error::arg("mesh has no triangles"));
        }
        let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for t in &self.triangles {
            if t.iter().any(|&i| i >= self.vertices.len()) {
                return Err(Error::arg("triangle index out of range"));
            }
            if self.face_normal_raw(t).norm() == 0.0 {
                return Err(Error::arg("degenerate triangle"));
            }
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *edges.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        if edges.values().any(|&c| c != 2) {
            return Err(Error::arg("mesh is not watertight"));
        }
        let euler = self.vertices.len() as i64 - edges.len() as i64 + self.triangles.len() as i64;
        if euler != 2 {
            return Err(Error::arg(alloc::format!("mesh Euler characteristic is {euler}, expected 2")));
        }
        if self.signed_volume() <= 0.0 {
            return Err(Error::arg("mesh winding is not outward"));
        }
        Ok(())
    }

    fn corners(&self, t: &[usize; 3]) -> (Vec3, Vec3, Vec3) {
        (self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]])
    }

    fn face_normal_raw(&self, t: &[usize; 3]) -> Vec3 {
        let (a, b, c) = self.corners(t);
        (b - a).cross(&(c - a))
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        0.5 * self.face_normal_raw(&self.triangles[t]).norm()
    }

    pub fn face_normal(&self, t: usize) -> Vec3 {
        self.face_normal_raw(&self.triangles[t]).normalize()
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let (a, b, c) = self.corners(t);
                a.dot(&b.cross(&c)) / 6.0
            })
            .sum()
    }

    /// Generalized winding number; ~1 inside, ~0 outside a closed mesh.
    pub fn winding_number(&self, p: &Vec3) -> f64 {
        let total: f64 = self
            .triangles
            .iter()
            .map(|t| {
                let (a, b, c) = self.corners(t);
                let (a, b, c) = (a - p, b - p, c - p);
                let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
                let num = a.dot(&b.cross(&c));
                let den = la * lb * lc + a.dot(&b) * lc + b.dot(&c) * la + c.dot(&a) * lb;
                2.0 * num.atan2(den)
            })
            .sum();
        total / (4.0 * PI)
    }

    /// Distance to the nearest triangle, signed by the winding number, with
    /// that triangle's face normal.
    pub fn sdf_and_normal(&self, p: &Vec3) -> (f64, Vec3) {
        let mut best = (f64::INFINITY, 0usize);
        for (i, t) in self.triangles.iter().enumerate() {
            let (a, b, c) = self.corners(t);
            let d2 = (closest_point_on_triangle(p, &a, &b, &c) - p).norm_squared();
            if d2 < best.0 {
                best = (d2, i);
            }
        }
        let dist = best.0.sqrt();
        let inside = self.winding_number(p) > 0.5;
        (if inside { -dist } else { dist }, self.face_normal(best.1))
    }
}

/// Closest point on triangle `abc` to `p` (Voronoi-region walk).
pub(crate) fn closest_point_on_triangle(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> Vec3 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}
