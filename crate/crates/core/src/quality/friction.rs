#[allow(unused_imports)] // float methods under no_std
use num_traits::Float;

use super::ContactPair;
use crate::error::{Error, Result};
use crate::geom::Vec3;

/// Smallest friction coefficient at which the pair is antipodal: the larger
/// of `tan θ` over both contacts, where `θ` is the angle between the inward
/// normal and the line toward the other contact. Infinite for invalid pairs
/// and whenever either angle reaches 90°.
pub fn min_antipodal_friction(contacts: &ContactPair) -> f64 {
    if !contacts.valid {
        return f64::INFINITY;
    }
    min_friction_from_geometry(&contacts.left, &contacts.left_normal, &contacts.right, &contacts.right_normal)
}

/// [`min_antipodal_friction`] on raw contact points and outward normals.
pub fn min_friction_from_geometry(left: &Vec3, left_normal: &Vec3, right: &Vec3, right_normal: &Vec3) -> f64 {
    let line = right - left;
    let len = line.norm();
    if !(len > 0.0) {
        return f64::INFINITY;
    }
    let dir = line / len;
    // Inward normal at the left contact is -n_left, and it should point along
    // `dir`; at the right contact -n_right should point along -dir.
    let cos_l = -left_normal.dot(&dir) / left_normal.norm();
    let cos_r = right_normal.dot(&dir) / right_normal.norm();
    tan_from_cos(cos_l).max(tan_from_cos(cos_r))
}

fn tan_from_cos(c: f64) -> f64 {
    if !(c > 0.0) {
        return f64::INFINITY;
    }
    let c = c.min(1.0);
    (1.0 - c * c).max(0.0).sqrt() / c
}

/// Maps a minimum friction coefficient to `[0, 1]` on a log scale: 1 at or
/// below `mu_min`, 0 at `mu_max` and above.
pub fn grasp_score(mu_star: f64, mu_min: f64, mu_max: f64) -> Result<f64> {
    if !(mu_min > 0.0 && mu_min < mu_max) {
        return Err(Error::arg("grasp score needs 0 < mu_min < mu_max"));
    }
    Ok(score_unchecked(mu_star, mu_min, mu_max))
}

#[inline]
pub(crate) fn score_unchecked(mu_star: f64, mu_min: f64, mu_max: f64) -> f64 {
    if !(mu_star <= mu_max) {
        return 0.0;
    }
    let mu = mu_star.max(mu_min);
    let q = (mu_max / mu).ln() / (mu_max / mu_min).ln();
    // Contact angles exactly at the cone boundary (e.g. 45° box edges with
    // mu_max = 1) land a rounding error either side of mu_max.
    if q < SCORE_FLOOR {
        0.0
    } else {
        q
    }
}

/// Scores below this are rounding noise around `mu_max` and count as 0.
pub const SCORE_FLOOR: f64 = 1e-12;
