//! Geometric kernel shared by every other module.

mod cloud;
mod fps;
mod index;
mod normals;
mod sphere;
mod transform;
mod voxel;

pub use cloud::{PointCloud, GRASPNESS, OBJECTNESS};
pub use fps::farthest_point_sampling;
pub use index::{Neighbor, SpatialIndex};
pub use normals::{estimate_normals, NormalEstimate};
pub use sphere::fibonacci_sphere;
pub use transform::RigidTransform;
pub use voxel::voxel_downsample;

/// A point or displacement in meters.
pub type Vec3 = nalgebra::Vector3<f64>;
/// A direction with unit Euclidean norm.
pub type UnitVec3 = nalgebra::Unit<Vec3>;
pub type Mat3 = nalgebra::Matrix3<f64>;

/// Squared Euclidean distance; the single expression every nearest-neighbor
/// path uses so that index queries and linear scans agree bit-for-bit.
#[inline]
pub fn dist2(a: &Vec3, b: &Vec3) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    dx * dx + dy * dy + dz * dz
}
