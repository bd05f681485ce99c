//! Pipeline configuration, read from TOML. Every field has a default, so an
//! empty file (or no file) gives the standard setup.

use std::path::Path;

use graspness_core::engine::{Aggregation, GraspnessConfig, LandscapeLevel};
use graspness_core::gripper::GripperModel;
use graspness_core::quality::{GridConfig, QualityConfig};
use graspness_core::sampling::{PointStrategy, SamplingConfig, ViewStrategy};
use serde::{Deserialize, Serialize};

use crate::error::{io_error, CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub grid: GridSection,
    pub gripper: GripperSection,
    pub quality: QualitySection,
    pub sampling: SamplingSection,
    pub engine: EngineSection,
    pub crop: CropSection,
    pub render: RenderSection,
    pub bench: BenchSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub views: usize,
    pub angles: usize,
    pub depths: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GripperSection {
    pub max_width: f64,
    pub finger_length: f64,
    pub finger_thickness: f64,
    pub finger_height: f64,
    pub palm_depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QualitySection {
    pub mu_min: f64,
    pub mu_max: f64,
    /// Score threshold `c`.
    pub threshold: f64,
    pub contact_band: f64,
    pub width_clearance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingSection {
    pub point_strategy: String,
    pub view_strategy: String,
    pub seed_count: usize,
    pub graspness_threshold: f64,
    pub nms_translation: f64,
    /// Degrees.
    pub nms_rotation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineSection {
    pub aggregation: String,
    /// `scene` (with collision labels) or `object`.
    pub level: String,
    pub projection_cutoff: f64,
    pub voxel_size: f64,
    /// Surface sampling spacing of object models and the table.
    pub sample_spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CropSection {
    pub radius: f64,
    pub height: [f64; 2],
    pub group_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderSection {
    pub depth_noise: f64,
    /// Write PLY files as ASCII instead of binary little-endian.
    pub ascii: bool,
    /// Optional `[min, max]` box; rendered points outside it are dropped.
    pub workspace: Option<[[f64; 3]; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchSection {
    pub strategies: Vec<String>,
    pub trials: usize,
    pub precision_k: usize,
    pub mu_thresholds: Vec<f64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 0,
            grid: GridSection::default(),
            gripper: GripperSection::default(),
            quality: QualitySection::default(),
            sampling: SamplingSection::default(),
            engine: EngineSection::default(),
            crop: CropSection::default(),
            render: RenderSection::default(),
            bench: BenchSection::default(),
        }
    }
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection { views: 300, angles: 12, depths: vec![0.01, 0.02, 0.03, 0.04] }
    }
}

impl Default for GripperSection {
    fn default() -> Self {
        let g = GripperModel::default();
        GripperSection {
            max_width: g.max_width,
            finger_length: g.finger_length,
            finger_thickness: g.finger_thickness,
            finger_height: g.finger_height,
            palm_depth: g.palm_depth,
        }
    }
}

impl Default for QualitySection {
    fn default() -> Self {
        let q = QualityConfig::default();
        QualitySection {
            mu_min: q.mu_min,
            mu_max: q.mu_max,
            threshold: q.score_threshold,
            contact_band: q.contact_band,
            width_clearance: q.width_clearance,
        }
    }
}

impl Default for SamplingSection {
    fn default() -> Self {
        SamplingSection {
            point_strategy: PointStrategy::GraspableFps.to_string(),
            view_strategy: ViewStrategy::Pvs.to_string(),
            seed_count: 1024,
            graspness_threshold: 0.1,
            nms_translation: 0.03,
            nms_rotation: 30.0,
        }
    }
}

impl Default for EngineSection {
    fn default() -> Self {
        EngineSection {
            aggregation: Aggregation::FeasibleRatio.to_string(),
            level: "scene".into(),
            projection_cutoff: 0.01,
            voxel_size: 0.005,
            sample_spacing: 0.005,
        }
    }
}

impl Default for CropSection {
    fn default() -> Self {
        CropSection { radius: 0.05, height: [-0.02, 0.04], group_size: 16 }
    }
}

impl Default for RenderSection {
    fn default() -> Self {
        RenderSection { depth_noise: 0.0, ascii: false, workspace: None }
    }
}

impl Default for BenchSection {
    fn default() -> Self {
        BenchSection {
            strategies: PointStrategy::ALL.iter().map(|s| s.to_string()).collect(),
            trials: 5,
            precision_k: 10,
            mu_thresholds: vec![0.2, 0.4, 0.8],
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        Self::from_toml(&text).map_err(|e| io_error(path, e))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| CliError::input(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every section by building the library configurations.
    pub fn validate(&self) -> Result<()> {
        self.graspness()?;
        self.sampling()?;
        self.level()?;
        self.bench_strategies()?;
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.engine.voxel_size) || !positive(self.engine.sample_spacing) {
            return Err(CliError::input("voxel_size and sample_spacing must be positive"));
        }
        if !(self.engine.projection_cutoff >= 0.0) {
            return Err(CliError::input("projection_cutoff must be non-negative"));
        }
        if !positive(self.crop.radius) || !(self.crop.height[0] < self.crop.height[1]) || self.crop.group_size == 0 {
            return Err(CliError::input("crop needs a positive radius, an increasing height range and a group size"));
        }
        if !(self.render.depth_noise >= 0.0) {
            return Err(CliError::input("depth_noise must be non-negative"));
        }
        if !(self.sampling.nms_translation >= 0.0) || !(self.sampling.nms_rotation >= 0.0) {
            return Err(CliError::input("NMS thresholds must be non-negative"));
        }
        if self.bench.trials == 0 || self.bench.precision_k == 0 {
            return Err(CliError::input("bench trials and precision_k must be positive"));
        }
        Ok(())
    }

    pub fn graspness(&self) -> Result<GraspnessConfig> {
        let g = &self.gripper;
        let q = &self.quality;
        let cfg = GraspnessConfig {
            grid: GridConfig::new(self.grid.views, self.grid.angles, self.grid.depths.clone())?,
            gripper: GripperModel {
                max_width: g.max_width,
                finger_length: g.finger_length,
                finger_thickness: g.finger_thickness,
                finger_height: g.finger_height,
                palm_depth: g.palm_depth,
            },
            quality: QualityConfig {
                mu_min: q.mu_min,
                mu_max: q.mu_max,
                score_threshold: q.threshold,
                contact_band: q.contact_band,
                width_clearance: q.width_clearance,
            },
            aggregation: self.engine.aggregation.parse()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn sampling(&self) -> Result<SamplingConfig> {
        let s = &self.sampling;
        let cfg = SamplingConfig {
            point_strategy: s.point_strategy.parse()?,
            view_strategy: s.view_strategy.parse()?,
            seed_count: s.seed_count,
            graspness_threshold: s.graspness_threshold,
            rng_seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn level(&self) -> Result<LandscapeLevel> {
        match self.engine.level.as_str() {
            "scene" => Ok(LandscapeLevel::Scene),
            "object" => Ok(LandscapeLevel::Object),
            other => Err(CliError::input(format!("unknown landscape level `{other}`"))),
        }
    }

    pub fn bench_strategies(&self) -> Result<Vec<PointStrategy>> {
        if self.bench.strategies.is_empty() {
            return Err(CliError::input("bench needs at least one strategy"));
        }
        self.bench.strategies.iter().map(|s| Ok(s.parse()?)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = Config::from_toml("").unwrap();
        assert_eq!(cfg, Config::default());
        let g = cfg.graspness().unwrap();
        assert_eq!((g.grid.view_count(), g.grid.angles), (300, 12));
        assert_eq!(g.grid.depths, vec![0.01, 0.02, 0.03, 0.04]);
        assert_eq!(cfg.sampling().unwrap().seed_count, 1024);
        assert_eq!(cfg.sampling().unwrap().graspness_threshold, 0.1);
        assert_eq!((cfg.crop.radius, cfg.crop.height, cfg.crop.group_size), (0.05, [-0.02, 0.04], 16));
        assert_eq!(cfg.engine.voxel_size, 0.005);
    }

    #[test]
    fn round_trip_and_errors() {
        let mut cfg = Config::default();
        cfg.grid.views = 8;
        cfg.sampling.point_strategy = "fps".into();
        assert_eq!(Config::from_toml(&cfg.to_toml()).unwrap(), cfg);
        assert!(Config::from_toml("[grid]\nviews = 0").is_err());
        assert!(Config::from_toml("[quality]\nmu_min = 2.0").is_err());
        assert!(Config::from_toml("[sampling]\npoint_strategy = \"best\"").is_err());
        assert!(Config::from_toml("[grid]\nspokes = 3").is_err());
    }
}
