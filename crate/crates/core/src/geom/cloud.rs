use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{RigidTransform, Vec3};
use crate::error::{Error, Result};

/// Name of the point-wise graspness channel.
pub const GRASPNESS: &str = "graspness";
/// Name under which objectness is exported; it is derived from object ids.
pub const OBJECTNESS: &str = "objectness";

/// Positions with optional normals, object labels and named scalar channels.
///
/// Object ids use `-1` for background; objectness is derived from them, so a
/// background point can never carry an object label.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCloud {
    pub positions: Vec<Vec3>,
    pub normals: Option<Vec<Vec3>>,
    pub object_ids: Option<Vec<i32>>,
    pub scalars: BTreeMap<String, Vec<f64>>,
}

impl PointCloud {
    pub fn new(positions: Vec<Vec3>) -> Self {
        Self { positions, ..Self::default() }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn with_normals(mut self, normals: Vec<Vec3>) -> Result<Self> {
        self.check_len(normals.len(), "normals")?;
        self.normals = Some(normals);
        Ok(self)
    }

    pub fn with_object_ids(mut self, ids: Vec<i32>) -> Result<Self> {
        self.check_len(ids.len(), "object_id")?;
        if ids.iter().any(|&id| id < -1) {
            return Err(Error::arg("object ids must be >= -1"));
        }
        self.object_ids = Some(ids);
        Ok(self)
    }

    pub fn set_scalar(&mut self, name: &str, values: Vec<f64>) -> Result<()> {
        self.check_len(values.len(), name)?;
        self.scalars.insert(name.into(), values);
        Ok(())
    }

    pub fn scalar(&self, name: &str) -> Option<&[f64]> {
        self.scalars.get(name).map(Vec::as_slice)
    }

    pub fn object_id(&self, i: usize) -> i32 {
        self.object_ids.as_ref().map_or(-1, |ids| ids[i])
    }

    /// 1 for object points, 0 for background.
    pub fn objectness(&self) -> Vec<u8> {
        (0..self.len()).map(|i| u8::from(self.object_id(i) >= 0)).collect()
    }

    pub fn transformed(&self, t: &RigidTransform) -> Self {
        Self {
            positions: self.positions.iter().map(|p| t.apply_point(p)).collect(),
            normals: self.normals.as_ref().map(|ns| ns.iter().map(|n| t.apply_vector(n)).collect()),
            object_ids: self.object_ids.clone(),
            scalars: self.scalars.clone(),
        }
    }

    /// Concatenates `other`; channels present on only one side are filled
    /// with zeros (scalars), `-1` (ids) or dropped (normals).
    pub fn append(&mut self, other: &PointCloud) {
        let (n0, n1) = (self.len(), other.len());
        self.normals = match (self.normals.take(), &other.normals) {
            (Some(mut a), Some(b)) => {
                a.extend_from_slice(b);
                Some(a)
            }
            (None, None) if n0 == 0 => None,
            (None, Some(b)) if n0 == 0 => Some(b.clone()),
            (Some(a), None) if n1 == 0 => Some(a),
            _ => None,
        };
        if self.object_ids.is_some() || other.object_ids.is_some() {
            let mut ids = self.object_ids.take().unwrap_or_else(|| alloc::vec![-1; n0]);
            match &other.object_ids {
                Some(b) => ids.extend_from_slice(b),
                None => ids.resize(n0 + n1, -1),
            }
            self.object_ids = Some(ids);
        }
        let names: Vec<String> =
            self.scalars.keys().chain(other.scalars.keys()).cloned().collect();
        for name in names {
            if self.scalars.contains_key(&name) && self.scalars[&name].len() == n0 + n1 {
                continue;
            }
            let mut vals = self.scalars.remove(&name).unwrap_or_else(|| alloc::vec![0.0; n0]);
            match other.scalars.get(&name) {
                Some(b) => vals.extend_from_slice(b),
                None => vals.resize(n0 + n1, 0.0),
            }
            self.scalars.insert(name, vals);
        }
        self.positions.extend_from_slice(&other.positions);
    }

    /// Keeps the listed points, in the listed order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            positions: indices.iter().map(|&i| self.positions[i]).collect(),
            normals: self.normals.as_ref().map(|ns| indices.iter().map(|&i| ns[i]).collect()),
            object_ids: self.object_ids.as_ref().map(|ids| indices.iter().map(|&i| ids[i]).collect()),
            scalars: self
                .scalars
                .iter()
                .map(|(k, v)| (k.clone(), indices.iter().map(|&i| v[i]).collect()))
                .collect(),
        }
    }

    /// Checks that every channel matches the number of positions.
    pub fn validate(&self) -> Result<()> {
        if let Some(ns) = &self.normals {
            self.check_len(ns.len(), "normals")?;
        }
        if let Some(ids) = &self.object_ids {
            self.check_len(ids.len(), "object_id")?;
        }
        for (name, v) in &self.scalars {
            self.check_len(v.len(), name)?;
        }
        Ok(())
    }

    fn check_len(&self, n: usize, what: &str) -> Result<()> {
        if n != self.len() {
            return Err(Error::arg(alloc::format!(
                "channel `{what}` has {n} entries for {} points",
                self.len()
            )));
        }
        Ok(())
    }
}
