use core::fmt;
use core::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::rng::Rng;

/// How an approach view is chosen for a seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViewStrategy {
    /// The view closest to the inward surface normal.
    Normal,
    /// The view with the highest view graspness.
    Top1,
    /// A view drawn with probability proportional to its view graspness.
    Pvs,
}

impl ViewStrategy {
    pub const ALL: [ViewStrategy; 3] = [ViewStrategy::Normal, ViewStrategy::Top1, ViewStrategy::Pvs];

    pub fn as_str(&self) -> &'static str {
        match self {
            ViewStrategy::Normal => "normal",
            ViewStrategy::Top1 => "top-1",
            ViewStrategy::Pvs => "pvs",
        }
    }
}

impl fmt::Display for ViewStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ViewStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ViewStrategy::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::arg(alloc::format!("unknown view strategy `{s}`")))
    }
}

/// Index of the chosen view.
///
/// `views` are the approach directions behind `view_graspness`; `normal` is
/// the seed's outward normal and is only needed by [`ViewStrategy::Normal`].
/// Under PVS an all-zero row falls back to a uniform draw.
pub fn select_view(
    view_graspness: &[f64],
    strategy: ViewStrategy,
    views: &[Vec3],
    normal: Option<&Vec3>,
    rng: &mut Rng,
) -> Result<usize> {
    if view_graspness.is_empty() {
        return Err(Error::arg("no views to choose from"));
    }
    match strategy {
        ViewStrategy::Top1 => Ok(argmax(view_graspness.iter().copied())),
        ViewStrategy::Normal => {
            let n = normal.ok_or_else(|| Error::arg("normal view selection needs the seed normal"))?;
            if views.len() != view_graspness.len() {
                return Err(Error::arg("view directions and view graspness differ in length"));
            }
            Ok(argmax(views.iter().map(|v| -v.dot(n))))
        }
        ViewStrategy::Pvs => {
            if view_graspness.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
                return Err(Error::arg("view graspness must be finite and non-negative"));
            }
            match WeightedIndex::new(view_graspness) {
                Ok(dist) => Ok(dist.sample(rng)),
                Err(_) => Ok(rng.gen_range(0..view_graspness.len())),
            }
        }
    }
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}
