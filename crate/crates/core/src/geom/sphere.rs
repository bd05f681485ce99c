use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // float methods under no_std
use num_traits::Float;

use super::Vec3;
use crate::error::{Error, Result};

/// `count` directions on the unit sphere from the golden-angle Fibonacci
/// lattice: `z_k = 1 - (2k+1)/V`, `φ_k = k·π·(3 - √5)`.
pub fn fibonacci_sphere(count: usize) -> Result<Vec<Vec3>> {
    if count == 0 {
        return Err(Error::arg("view count must be at least 1"));
    }
    let golden = PI * (3.0 - 5.0.sqrt());
    let n = count as f64;
    Ok((0..count)
        .map(|k| {
            let kf = k as f64;
            let z = 1.0 - (2.0 * kf + 1.0) / n;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = kf * golden;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect())
}
