use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::precision::evaluate_grasp;
use crate::engine::{normalize_landscape, project_to_view, scene_graspness, GraspableLandscape, GraspnessConfig, DEFAULT_PROJECTION_CUTOFF};
use crate::error::{Error, Result};
use crate::geom::{voxel_downsample, PointCloud, Vec3};
use crate::gripper::GraspPose;
use crate::sampling::{sample_seeds, PointStrategy, SamplingConfig, SceneGrasper, ViewStrategy};
use crate::scene::{render_depth_view, CameraModel, RenderOptions, Scene};

/// How the single-view cloud of a benchmark scene is produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewSetup {
    pub camera: CameraModel,
    pub render: RenderOptions,
    pub voxel_size: f64,
    /// Axis-aligned `(min, max)` box; rendered points outside it are dropped.
    pub workspace: Option<(Vec3, Vec3)>,
    pub projection_cutoff: f64,
}

impl Default for ViewSetup {
    fn default() -> Self {
        ViewSetup {
            camera: CameraModel::default_tabletop(),
            render: RenderOptions::default(),
            voxel_size: 0.005,
            workspace: None,
            projection_cutoff: DEFAULT_PROJECTION_CUTOFF,
        }
    }
}

impl ViewSetup {
    /// Renders `scene`, voxel-downsamples the hits and applies the workspace
    /// box.
    pub fn render_partial(&self, scene: &Scene) -> Result<PointCloud> {
        let rendered = render_depth_view(scene, &self.camera, &self.render)?;
        let partial = voxel_downsample(&rendered, self.voxel_size)?;
        Ok(match self.workspace {
            Some((lo, hi)) => {
                let keep: Vec<usize> = (0..partial.len())
                    .filter(|&i| {
                        let p = partial.positions[i];
                        (0..3).all(|a| p[a] >= lo[a] && p[a] <= hi[a])
                    })
                    .collect();
                partial.select(&keep)
            }
            None => partial,
        })
    }
}

/// A scene with its rendered cloud and ground-truth labels on that cloud.
#[derive(Debug, Clone)]
pub struct BenchScene {
    pub scene: Scene,
    pub partial: PointCloud,
    /// Normalized scene-level landscape over the model points.
    pub model_label: GraspableLandscape,
    /// `model_label` projected onto `partial`.
    pub label: GraspableLandscape,
}

impl BenchScene {
    /// Computes the scene-level landscape, then renders and labels the view.
    pub fn prepare(scene: Scene, setup: &ViewSetup, cfg: &GraspnessConfig) -> Result<Self> {
        let model_label = normalize_landscape(&scene_graspness(&scene, cfg)?)?;
        Self::with_landscape(scene, model_label, setup)
    }

    /// Like [`BenchScene::prepare`] with an already normalized landscape.
    pub fn with_landscape(scene: Scene, model_label: GraspableLandscape, setup: &ViewSetup) -> Result<Self> {
        let partial = setup.render_partial(&scene)?;
        let label = project_to_view(&model_label, &partial, setup.projection_cutoff)?;
        Ok(BenchScene { scene, partial, model_label, label })
    }
}

/// What the benchmark runs.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub strategies: Vec<PointStrategy>,
    pub seed_count: usize,
    pub graspness_threshold: f64,
    pub trials: usize,
    pub rng_seed: u64,
    /// Precision is taken over the best `precision_k` seed grasps.
    pub precision_k: usize,
    pub mu_thresholds: Vec<f64>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            strategies: PointStrategy::ALL.to_vec(),
            seed_count: 1024,
            graspness_threshold: 0.1,
            trials: 5,
            rng_seed: 0,
            precision_k: 10,
            mu_thresholds: alloc::vec![0.2, 0.4, 0.8],
        }
    }
}

/// One strategy on one scene in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub scene: usize,
    pub strategy: PointStrategy,
    pub trial: usize,
    pub seeds: usize,
    /// Mean ground-truth point graspness of the seeds.
    pub mean_graspness: f64,
    /// Share of seeds with a feasible, collision-free grasp from their
    /// best view.
    pub feasible_fraction: f64,
    /// Share of the scene's objects that received a seed.
    pub coverage: f64,
    /// Precision of the top seed grasps, one value per friction threshold.
    pub precision: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return MeanStd { mean: 0.0, std: 0.0 };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            num_traits::Float::sqrt(ss / (n - 1) as f64)
        } else {
            0.0
        };
        MeanStd { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub strategy: PointStrategy,
    pub runs: usize,
    pub mean_graspness: MeanStd,
    pub feasible_fraction: MeanStd,
    pub coverage: MeanStd,
    pub precision: Vec<MeanStd>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub mu_thresholds: Vec<f64>,
    pub precision_k: usize,
    /// Ordered by scene, then strategy (in option order), then trial.
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// Mean and spread over scenes and trials, per strategy in first-seen
    /// order.
    pub fn summary(&self) -> Vec<BenchSummary> {
        let mut order: Vec<PointStrategy> = Vec::new();
        for r in &self.rows {
            if !order.contains(&r.strategy) {
                order.push(r.strategy);
            }
        }
        order
            .into_iter()
            .map(|s| {
                let rows: Vec<&BenchRow> = self.rows.iter().filter(|r| r.strategy == s).collect();
                let col = |f: &dyn Fn(&BenchRow) -> f64| MeanStd::of(&rows.iter().map(|r| f(r)).collect::<Vec<_>>());
                BenchSummary {
                    strategy: s,
                    runs: rows.len(),
                    mean_graspness: col(&|r| r.mean_graspness),
                    feasible_fraction: col(&|r| r.feasible_fraction),
                    coverage: col(&|r| r.coverage),
                    precision: (0..self.mu_thresholds.len()).map(|t| col(&|r| r.precision[t])).collect(),
                }
            })
            .collect()
    }

    pub fn summary_for(&self, strategy: PointStrategy) -> Option<BenchSummary> {
        self.summary().into_iter().find(|s| s.strategy == strategy)
    }
}

/// Runs every strategy for `trials` trials on every scene.
///
/// Trial `t` of scene `s` uses the generator seed `rng_seed ^ (s * trials +
/// t)` for every strategy, so strategies are compared on common random
/// numbers. Each seed is graded once per scene: its best grasp from the
/// top-1 view of its label, with collisions against the full scene.
pub fn run_sampling_benchmark(scenes: &[BenchScene], opts: &BenchOptions, cfg: &GraspnessConfig) -> Result<BenchReport> {
    if scenes.is_empty() {
        return Err(Error::arg("benchmark needs at least one scene"));
    }
    if opts.strategies.is_empty() || opts.trials == 0 {
        return Err(Error::arg("benchmark needs at least one strategy and one trial"));
    }
    if opts.precision_k == 0 {
        return Err(Error::arg("precision k must be positive"));
    }
    cfg.validate()?;

    let mut rows = Vec::new();
    for (s, bench) in scenes.iter().enumerate() {
        let mut seed_sets = Vec::with_capacity(opts.strategies.len() * opts.trials);
        for &strategy in &opts.strategies {
            for t in 0..opts.trials {
                let sc = SamplingConfig {
                    point_strategy: strategy,
                    view_strategy: ViewStrategy::Top1,
                    seed_count: opts.seed_count,
                    graspness_threshold: opts.graspness_threshold,
                    rng_seed: crate::rng::derive_seed(opts.rng_seed, (s * opts.trials + t) as u64),
                };
                seed_sets.push((strategy, t, sample_seeds(&bench.label, &sc)?));
            }
        }

        let needed: Vec<usize> = seed_sets
            .iter()
            .flat_map(|(_, _, set)| set.indices.iter().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let grasper = SceneGrasper::new(&bench.scene, cfg)?;
        let graded = crate::par::map_range(needed.len(), |n| grade_seed(&grasper, &bench.label, needed[n]));
        let lookup = |i: usize| &graded[needed.binary_search(&i).expect("graded")];

        let objects = bench.scene.instances.len();
        for (strategy, trial, set) in &seed_sets {
            let m = set.len();
            let mean_graspness = set.point_graspness.iter().sum::<f64>() / m as f64;
            let feasible = set.indices.iter().filter(|&&i| lookup(i).is_some()).count();
            let hit: BTreeSet<i32> = set.indices.iter().map(|&i| bench.label.object_ids[i]).filter(|&id| id >= 0).collect();
            let coverage = if objects == 0 { 0.0 } else { hit.len() as f64 / objects as f64 };

            let mut grasps: Vec<GraspPose> = set.indices.iter().filter_map(|&i| *lookup(i)).collect();
            grasps.sort_by(|a, b| b.score.total_cmp(&a.score));
            let precision = if grasps.is_empty() {
                alloc::vec![0.0; opts.mu_thresholds.len()]
            } else {
                let k = opts.precision_k.min(grasps.len());
                let outcomes = grasps[..k]
                    .iter()
                    .map(|g| evaluate_grasp(g, &bench.scene, &cfg.gripper, &cfg.quality))
                    .collect::<Result<Vec<_>>>()?;
                opts.mu_thresholds
                    .iter()
                    .map(|&t| outcomes.iter().filter(|o| o.succeeds(t)).count() as f64 / opts.precision_k as f64)
                    .collect()
            };
            rows.push(BenchRow {
                scene: s,
                strategy: *strategy,
                trial: *trial,
                seeds: m,
                mean_graspness,
                feasible_fraction: feasible as f64 / m as f64,
                coverage,
                precision,
            });
        }
    }
    Ok(BenchReport { mu_thresholds: opts.mu_thresholds.clone(), precision_k: opts.precision_k, rows })
}

fn grade_seed(grasper: &SceneGrasper, label: &GraspableLandscape, i: usize) -> Option<GraspPose> {
    let id = label.object_ids[i];
    if id < 0 {
        return None;
    }
    let row = label.view_row(i);
    let mut view = 0;
    for (j, &v) in row.iter().enumerate() {
        if v > row[view] {
            view = j;
        }
    }
    grasper.best_grasp(id, &label.positions[i], view, true)
}
