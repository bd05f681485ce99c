//! Geometric graspness for parallel-jaw grasping.
//!
//! The crate evaluates dense grids of grasp candidates around every point of
//! an object model with an antipodal friction model, turns the outcomes into
//! point-wise and view-wise graspness landscapes (optionally labelled by
//! collisions with the rest of a cluttered scene), projects them onto
//! rendered single-view clouds and benchmarks graspness-aware seed sampling.
//!
//! The crate is `no_std` and only needs `alloc`. Enable the `parallel`
//! feature to spread landscape computation, rendering and benchmarks over a
//! rayon pool; results do not depend on the number of workers.
//!
//! Module map:
//!
//! - [`geom`]: vectors, rigid transforms, Fibonacci views, FPS, voxel grid,
//!   k-d tree, normal estimation.
//! - [`scene`]: analytic shapes and meshes, surface sampling, scene assembly,
//!   sphere-traced depth rendering.
//! - [`gripper`]: gripper model, grasp frames, collision bodies, cylinder crop.
//! - [`quality`]: contact finding, minimum antipodal friction, grasp score,
//!   candidate grids.
//! - [`engine`]: object- and scene-level landscapes, normalization, projection.
//! - [`sampling`]: seed and view selection, best grasp, grasp NMS,
//!   collision post-filter.
//! - [`metrics`]: ranking error, imbalance statistics, precision@k and the
//!   sampling benchmark.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod engine;
pub mod error;
pub mod geom;
pub mod gripper;
pub mod metrics;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod quality;
pub mod rng;
pub mod sampling;
pub mod scene;

mod par;

pub use error::{Error, Result};
pub use geom::{PointCloud, RigidTransform, SpatialIndex, UnitVec3, Vec3};
