use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng as _;

use crate::engine::GraspableLandscape;
use crate::error::{Error, Result};
use crate::geom::{farthest_point_sampling, Vec3};
use crate::rng::seeded;

use super::ViewStrategy;

/// How seed points are picked from a cloud.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStrategy {
    UniformRandom,
    Fps,
    /// Uniform among points whose graspness exceeds the threshold.
    GraspableRandom,
    /// Farthest point sampling among points whose graspness exceeds the
    /// threshold.
    GraspableFps,
}

impl PointStrategy {
    pub const ALL: [PointStrategy; 4] =
        [PointStrategy::UniformRandom, PointStrategy::Fps, PointStrategy::GraspableRandom, PointStrategy::GraspableFps];

    pub fn as_str(&self) -> &'static str {
        match self {
            PointStrategy::UniformRandom => "uniform-random",
            PointStrategy::Fps => "fps",
            PointStrategy::GraspableRandom => "graspable-random",
            PointStrategy::GraspableFps => "graspable-fps",
        }
    }

    pub fn uses_graspness(&self) -> bool {
        matches!(self, PointStrategy::GraspableRandom | PointStrategy::GraspableFps)
    }
}

impl fmt::Display for PointStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PointStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PointStrategy::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::arg(alloc::format!("unknown point strategy `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    pub point_strategy: PointStrategy,
    pub view_strategy: ViewStrategy,
    /// Number of seeds `M`.
    pub seed_count: usize,
    /// Graspness threshold for the graspable strategies.
    pub graspness_threshold: f64,
    pub rng_seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            point_strategy: PointStrategy::GraspableFps,
            view_strategy: ViewStrategy::Pvs,
            seed_count: 1024,
            graspness_threshold: 0.1,
            rng_seed: 0,
        }
    }
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.seed_count == 0 {
            return Err(Error::arg("seed count must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.graspness_threshold) {
            return Err(Error::arg("graspness threshold must lie in [0, 1)"));
        }
        Ok(())
    }
}

/// Selected seeds with their graspness.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSet {
    /// Indices into the sampled cloud, without repeats.
    pub indices: Vec<usize>,
    pub point_graspness: Vec<f64>,
    /// Row-major `indices.len() × view_count`.
    pub view_graspness: Vec<f64>,
    pub view_count: usize,
}

impl SeedSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn view_row(&self, k: usize) -> &[f64] {
        &self.view_graspness[k * self.view_count..(k + 1) * self.view_count]
    }
}

/// Picks up to `seed_count` distinct point indices.
///
/// Graspable strategies keep points with graspness strictly above the
/// threshold; when fewer than `seed_count` qualify, all of them are taken
/// and the rest is filled by descending graspness (lowest index first on
/// ties). FPS variants start from a point drawn with the seeded generator.
/// Random strategies return indices in ascending order, FPS ones in
/// selection order.
pub fn sample_seed_indices(positions: &[Vec3], graspness: Option<&[f64]>, cfg: &SamplingConfig) -> Result<Vec<usize>> {
    cfg.validate()?;
    if positions.is_empty() {
        return Err(Error::state("cannot sample seeds from an empty cloud"));
    }
    if let Some(g) = graspness {
        if g.len() != positions.len() {
            return Err(Error::arg("graspness length differs from the cloud"));
        }
    }
    let mut rng = seeded(cfg.rng_seed);
    let m = cfg.seed_count;
    let candidates: Vec<usize> = if cfg.point_strategy.uses_graspness() {
        let g = graspness.ok_or_else(|| Error::arg("graspable strategies need a graspness channel"))?;
        (0..positions.len()).filter(|&i| g[i] > cfg.graspness_threshold).collect()
    } else {
        (0..positions.len()).collect()
    };

    let mut chosen = if candidates.len() <= m {
        candidates.clone()
    } else {
        match cfg.point_strategy {
            PointStrategy::UniformRandom | PointStrategy::GraspableRandom => {
                let mut picks: Vec<usize> =
                    rand::seq::index::sample(&mut rng, candidates.len(), m).into_iter().map(|k| candidates[k]).collect();
                picks.sort_unstable();
                picks
            }
            PointStrategy::Fps | PointStrategy::GraspableFps => {
                let pts: Vec<Vec3> = candidates.iter().map(|&i| positions[i]).collect();
                let start = rng.gen_range(0..pts.len());
                farthest_point_sampling(&pts, m, start)?.into_iter().map(|k| candidates[k]).collect()
            }
        }
    };

    if chosen.len() < m && chosen.len() < positions.len() {
        if let Some(g) = graspness {
            let mut in_set = alloc::vec![false; positions.len()];
            for &i in &chosen {
                in_set[i] = true;
            }
            let mut rest: Vec<usize> = (0..positions.len()).filter(|&i| !in_set[i]).collect();
            rest.sort_by(|&a, &b| g[b].total_cmp(&g[a]).then(a.cmp(&b)));
            chosen.extend(rest.into_iter().take(m - chosen.len()));
        }
    }
    Ok(chosen)
}

/// [`sample_seed_indices`] on a landscape, carrying the seeds' graspness
/// along.
pub fn sample_seeds(landscape: &GraspableLandscape, cfg: &SamplingConfig) -> Result<SeedSet> {
    landscape.validate()?;
    let indices = sample_seed_indices(&landscape.positions, Some(&landscape.point), cfg)?;
    let mut view_graspness = Vec::with_capacity(indices.len() * landscape.view_count);
    for &i in &indices {
        view_graspness.extend_from_slice(landscape.view_row(i));
    }
    Ok(SeedSet {
        point_graspness: indices.iter().map(|&i| landscape.point[i]).collect(),
        indices,
        view_graspness,
        view_count: landscape.view_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(strategy: PointStrategy, m: usize) -> SamplingConfig {
        SamplingConfig { point_strategy: strategy, seed_count: m, ..SamplingConfig::default() }
    }

    fn line(n: usize) -> Vec<Vec3> {
        (0..n).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect()
    }

    #[test]
    fn filter_and_top_up() {
        let g = [0.05, 0.5, 0.2, 0.08];
        let pts = line(4);
        let two = sample_seed_indices(&pts, Some(&g), &cfg(PointStrategy::GraspableFps, 2)).unwrap();
        assert_eq!(two, alloc::vec![1, 2]);
        let three = sample_seed_indices(&pts, Some(&g), &cfg(PointStrategy::GraspableFps, 3)).unwrap();
        assert_eq!(three, alloc::vec![1, 2, 3]);
        let all = sample_seed_indices(&pts, Some(&g), &cfg(PointStrategy::GraspableRandom, 9)).unwrap();
        assert_eq!(all, alloc::vec![1, 2, 3, 0]);
    }

    #[test]
    fn top_up_ties_prefer_low_index() {
        let g = [0.0, 0.9, 0.0, 0.0];
        let s = sample_seed_indices(&line(4), Some(&g), &cfg(PointStrategy::GraspableRandom, 3)).unwrap();
        assert_eq!(s, alloc::vec![1, 0, 2]);
    }

    #[test]
    fn graspable_seeds_pass_the_threshold() {
        let n = 500;
        let g: Vec<f64> = (0..n).map(|i| (i % 7) as f64 / 7.0).collect();
        for strategy in [PointStrategy::GraspableFps, PointStrategy::GraspableRandom] {
            let s = sample_seed_indices(&line(n), Some(&g), &cfg(strategy, 100)).unwrap();
            assert_eq!(s.len(), 100);
            assert!(s.iter().all(|&i| g[i] > 0.1));
        }
    }

    #[test]
    fn errors() {
        assert!(sample_seed_indices(&[], None, &cfg(PointStrategy::Fps, 1)).is_err());
        assert!(sample_seed_indices(&line(3), None, &cfg(PointStrategy::GraspableFps, 1)).is_err());
        assert!(sample_seed_indices(&line(3), None, &cfg(PointStrategy::Fps, 0)).is_err());
        assert!("fps".parse::<PointStrategy>().is_ok());
        assert!("random".parse::<PointStrategy>().is_err());
    }

    #[test]
    fn seeded_and_distinct() {
        let pts: Vec<Vec3> = (0..300).map(|i| Vec3::new((i * 37 % 101) as f64, (i * 11 % 53) as f64, 0.0)).collect();
        for strategy in [PointStrategy::UniformRandom, PointStrategy::Fps] {
            let c = SamplingConfig { rng_seed: 5, ..cfg(strategy, 50) };
            let a = sample_seed_indices(&pts, None, &c).unwrap();
            assert_eq!(a, sample_seed_indices(&pts, None, &c).unwrap());
            let mut sorted = a.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), 50);
        }
    }
}
