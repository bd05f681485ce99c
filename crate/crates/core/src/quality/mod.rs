//! Antipodal grasp quality: contacts, minimum friction coefficient, score and
//! dense candidate grids.

mod contacts;
mod friction;
mod grid;

pub use contacts::{find_contacts, ContactPair};
pub use friction::{grasp_score, min_antipodal_friction, min_friction_from_geometry};
pub use grid::{evaluate_candidate_grid, CandidateGrid, CandidateResult, CollisionMode, GridConfig};

pub(crate) use contacts::{contacts_in_extent, region_extents, LocalPoint};

use crate::error::{Error, Result};

/// Friction bounds, feasibility threshold and contact-search tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityConfig {
    /// Friction coefficient mapped to score 1.
    pub mu_min: f64,
    /// Largest friction coefficient still counted as antipodal (score 0).
    pub mu_max: f64,
    /// A candidate is feasible when its score is strictly above this.
    pub score_threshold: f64,
    /// Depth of the contact band on each side, in meters. Twice the surface
    /// sampling spacing works well.
    pub contact_band: f64,
    /// Extra opening added to the contact opening when placing the fingers.
    pub width_clearance: f64,
}

impl Default for QualityConfig {
    fn default() -> Self {
        QualityConfig { mu_min: 0.1, mu_max: 1.0, score_threshold: 0.0, contact_band: 0.01, width_clearance: 0.01 }
    }
}

impl QualityConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu_min > 0.0 && self.mu_min < self.mu_max && self.mu_max.is_finite()) {
            return Err(Error::arg("friction bounds need 0 < mu_min < mu_max"));
        }
        if !(self.score_threshold >= 0.0 && self.score_threshold < 1.0) {
            return Err(Error::arg("score threshold must lie in [0, 1)"));
        }
        if !(self.contact_band >= 0.0) || !(self.width_clearance >= 0.0) {
            return Err(Error::arg("contact band and clearance must be non-negative"));
        }
        Ok(())
    }

    /// Score of a minimum friction coefficient under these bounds.
    #[inline]
    pub fn score(&self, mu_star: f64) -> f64 {
        friction::score_unchecked(mu_star, self.mu_min, self.mu_max)
    }

    #[inline]
    pub fn is_feasible(&self, score: f64) -> bool {
        score > self.score_threshold
    }
}
