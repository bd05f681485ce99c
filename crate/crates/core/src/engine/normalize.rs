use alloc::vec::Vec;

use super::GraspableLandscape;
use crate::error::{Error, Result};

/// Min-max normalization of a raw landscape.
///
/// Point values are scaled over all points; view values are scaled per view
/// column (each view's minimum and maximum over the points). A constant
/// population maps to zeros.
pub fn normalize_landscape(raw: &GraspableLandscape) -> Result<GraspableLandscape> {
    raw.validate()?;
    if raw.is_empty() {
        return Err(Error::arg("cannot normalize an empty landscape"));
    }
    let v = raw.view_count;
    let point = min_max(&raw.point);
    let mut view = raw.view.clone();
    for j in 0..v {
        let column: Vec<f64> = (0..raw.len()).map(|i| raw.view[i * v + j]).collect();
        for (i, x) in min_max(&column).into_iter().enumerate() {
            view[i * v + j] = x;
        }
    }
    Ok(GraspableLandscape { point, view, normalized: true, ..raw.clone() })
}

fn min_max(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return alloc::vec![0.0; values.len()];
    }
    values.iter().map(|x| (x - lo) / (hi - lo)).collect()
}
