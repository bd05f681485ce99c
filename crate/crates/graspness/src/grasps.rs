//! Grasp lists as CSV: `center_x,center_y,center_z,view_x,view_y,view_z,angle,depth,width,score`.

use std::io::{Read, Write};
use std::path::Path;

use graspness_core::gripper::GraspPose;
use graspness_core::Vec3;
use serde::{Deserialize, Serialize};

use crate::error::{io_error, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Row {
    center_x: f64,
    center_y: f64,
    center_z: f64,
    view_x: f64,
    view_y: f64,
    view_z: f64,
    angle: f64,
    depth: f64,
    width: f64,
    score: f64,
}

pub fn write_grasps<W: Write>(w: W, grasps: &[GraspPose]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    if grasps.is_empty() {
        out.write_record(["center_x", "center_y", "center_z", "view_x", "view_y", "view_z", "angle", "depth", "width", "score"])
            .map_err(|e| CliError::input(e.to_string()))?;
    }
    for g in grasps {
        out.serialize(Row {
            center_x: g.center.x,
            center_y: g.center.y,
            center_z: g.center.z,
            view_x: g.view.x,
            view_y: g.view.y,
            view_z: g.view.z,
            angle: g.angle,
            depth: g.depth,
            width: g.width,
            score: g.score,
        })
        .map_err(|e| CliError::input(e.to_string()))?;
    }
    out.flush().map_err(|e| CliError::input(e.to_string()))
}

pub fn read_grasps<R: Read>(r: R) -> Result<Vec<GraspPose>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| {
            let r: Row = row.map_err(|e| CliError::input(format!("bad grasp row: {e}")))?;
            let view = Vec3::new(r.view_x, r.view_y, r.view_z);
            if !(view.norm() > 0.0) {
                return Err(CliError::input("grasp view must be non-zero"));
            }
            Ok(GraspPose {
                center: Vec3::new(r.center_x, r.center_y, r.center_z),
                view: view.normalize(),
                angle: r.angle,
                depth: r.depth,
                width: r.width,
                score: r.score,
            })
        })
        .collect()
}

pub fn write_grasps_file(path: &Path, grasps: &[GraspPose]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| io_error(path, e))?;
    write_grasps(std::io::BufWriter::new(file), grasps)
}

pub fn read_grasps_file(path: &Path) -> Result<Vec<GraspPose>> {
    let file = std::fs::File::open(path).map_err(|e| io_error(path, e))?;
    read_grasps(std::io::BufReader::new(file)).map_err(|e| io_error(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = GraspPose {
            center: Vec3::new(0.1, -0.25, 1e-7),
            view: Vec3::new(0.0, 0.6, -0.8),
            angle: 1.25,
            depth: 0.02,
            width: 0.055,
            score: 0.7,
        };
        let mut buf = Vec::new();
        write_grasps(&mut buf, &[g, g]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("center_x,center_y,center_z,view_x,view_y,view_z,angle,depth,width,score\n"));
        assert_eq!(read_grasps(&buf[..]).unwrap(), vec![g, g]);

        let mut empty = Vec::new();
        write_grasps(&mut empty, &[]).unwrap();
        assert!(read_grasps(&empty[..]).unwrap().is_empty());
    }
}
