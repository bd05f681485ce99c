//! Files and command line around [`graspness_core`].
//!
//! Formats: PLY clouds ([`ply`]), the `GSNV1` view-graspness sidecar
//! ([`sidecar`]), JSON scene descriptions ([`scene_file`]), TOML
//! configuration ([`config`]), grasp and benchmark CSV ([`grasps`],
//! [`report`]). [`commands`] wires them to the library for the `graspness`
//! binary.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod grasps;
pub mod ply;
pub mod report;
pub mod scene_file;
pub mod sidecar;

pub use config::Config;
pub use error::{CliError, Result};
