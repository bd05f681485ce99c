//! Evaluation: rank error between landscapes, imbalance statistics,
//! oracle precision of predicted grasps and the seed-sampling benchmark.

mod bench;
mod precision;
mod ranking;

pub use bench::{run_sampling_benchmark, BenchOptions, BenchReport, BenchRow, BenchScene, BenchSummary, MeanStd, ViewSetup};
pub use precision::{evaluate_grasp, precision_at_k, GraspOutcome};
pub use ranking::{graspable_fraction, rank, ranking_error, DEFAULT_RANK_BINS};
