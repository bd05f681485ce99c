//! View-graspness sidecar: the 5-byte magic `GSNV1`, `u32` point count,
//! `u32` view count, then `points × views` row-major `f32`, all little-endian.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{io_error, CliError, Result};

pub const MAGIC: &[u8; 5] = b"GSNV1";

/// Row-major `points × views` values.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewTable {
    pub points: usize,
    pub views: usize,
    pub values: Vec<f32>,
}

impl ViewTable {
    pub fn from_f64(points: usize, views: usize, values: &[f64]) -> Result<Self> {
        if values.len() != points * views {
            return Err(CliError::internal("view table size disagrees with its shape"));
        }
        if points > u32::MAX as usize || views > u32::MAX as usize {
            return Err(CliError::input("view table too large for the sidecar format"));
        }
        Ok(ViewTable { points, views, values: values.iter().map(|&v| v as f32).collect() })
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| v as f64).collect()
    }
}

/// `landscape.ply` -> `landscape.gsnv`.
pub fn sidecar_path(ply: &Path) -> PathBuf {
    ply.with_extension("gsnv")
}

pub fn write_sidecar<W: Write>(mut w: W, table: &ViewTable) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(table.points as u32).to_le_bytes())?;
    w.write_all(&(table.views as u32).to_le_bytes())?;
    let mut bytes = Vec::with_capacity(table.values.len() * 4);
    for v in &table.values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&bytes)?;
    w.flush()
}

pub fn read_sidecar<R: Read>(mut r: R) -> Result<ViewTable> {
    let bad = |m: &str| CliError::input(format!("malformed sidecar: {m}"));
    let mut head = [0u8; 13];
    r.read_exact(&mut head).map_err(|_| bad("truncated header"))?;
    if &head[..5] != MAGIC {
        return Err(bad("wrong magic"));
    }
    let points = u32::from_le_bytes(head[5..9].try_into().unwrap()) as usize;
    let views = u32::from_le_bytes(head[9..13].try_into().unwrap()) as usize;
    let len = points.checked_mul(views).and_then(|n| n.checked_mul(4)).ok_or_else(|| bad("size overflow"))?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| bad(&e.to_string()))?;
    if bytes.len() != len {
        return Err(bad("payload length disagrees with the header"));
    }
    let values = bytes.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(ViewTable { points, views, values })
}

pub fn write_sidecar_file(path: &Path, table: &ViewTable) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| io_error(path, e))?;
    write_sidecar(std::io::BufWriter::new(file), table).map_err(|e| io_error(path, e))
}

pub fn read_sidecar_file(path: &Path) -> Result<ViewTable> {
    let file = std::fs::File::open(path).map_err(|e| io_error(path, e))?;
    read_sidecar(std::io::BufReader::new(file)).map_err(|e| io_error(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_layout() {
        let t = ViewTable::from_f64(2, 3, &[0.0, 0.5, 1.0, 0.25, 0.75, 0.125]).unwrap();
        let mut buf = Vec::new();
        write_sidecar(&mut buf, &t).unwrap();
        assert_eq!(buf.len(), 13 + 24);
        assert_eq!(&buf[..5], b"GSNV1");
        assert_eq!(&buf[5..13], &[2, 0, 0, 0, 3, 0, 0, 0]);
        assert_eq!(&buf[13..17], &0.0f32.to_le_bytes());
        assert_eq!(read_sidecar(&buf[..]).unwrap(), t);
        assert!(read_sidecar(&buf[..buf.len() - 1]).is_err());
        buf[0] = b'X';
        assert!(read_sidecar(&buf[..]).is_err());
    }
}
