//! Synthetic tabletop scenes: shapes, surface sampling, assembly and
//! single-view depth rendering.

mod assembly;
mod camera;
mod mesh;
mod render;
mod sample;
mod shape;

pub use assembly::{assemble_scene, ObjectInstance, Scene, Table, CONTACT_TOLERANCE};
pub use camera::CameraModel;
pub use mesh::TriMesh;
pub use render::{render_depth_view, RenderOptions};
pub use sample::{sample_surface, sample_table};
pub use shape::Shape;
