//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "graspness", version, about = "Geometric graspness landscapes for parallel-jaw grasping")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// TOML configuration file; missing fields take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Root seed; overrides the configuration's `seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: logical cores). Outputs do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output file; standard output when omitted, where the format allows.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a scene description, random or normalized from a file.
    SceneGen(SceneGenArgs),
    /// Render a scene from its camera into a voxel-downsampled PLY cloud.
    Render(RenderArgs),
    /// Compute the graspness landscape of a scene (PLY plus view sidecar).
    Graspness(GraspnessArgs),
    /// Sample seeds on a landscape and write their best grasps as CSV.
    Sample(SampleArgs),
    /// Evaluation metrics.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Compare seed sampling strategies on a set of scenes.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SceneGenArgs {
    /// Number of random objects (3 to 8, drawn from the seed, when omitted).
    #[arg(long, conflicts_with = "from")]
    pub objects: Option<usize>,
    /// Validate and rewrite an existing scene file instead.
    #[arg(long)]
    pub from: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    pub scene: PathBuf,
    /// Camera position `x,y,z`; with `--target`, replaces the scene camera.
    #[arg(long, value_parser = parse_vec3, requires = "target")]
    pub eye: Option<[f64; 3]>,
    #[arg(long, value_parser = parse_vec3, requires = "eye")]
    pub target: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Args)]
pub struct GraspnessArgs {
    pub scene: PathBuf,
    /// Project the landscape onto this rendered cloud (needs object ids).
    #[arg(long)]
    pub partial: Option<PathBuf>,
    /// Keep raw values instead of min-max normalizing.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CollisionHandling {
    /// Only collision-free candidates compete for the best grasp.
    Check,
    /// Pick best grasps ignoring collisions, then drop colliding ones.
    Filter,
    /// Ignore collisions.
    None,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Landscape PLY; its view sidecar is read from the same path with a
    /// `.gsnv` extension.
    pub landscape: PathBuf,
    #[arg(long)]
    pub scene: PathBuf,
    #[arg(long, value_enum, default_value_t = CollisionHandling::Check)]
    pub collision: CollisionHandling,
    /// Skip grasp non-maximum suppression.
    #[arg(long)]
    pub no_nms: bool,
    /// Also write the cylinder crop around each seed as a PLY file.
    #[arg(long)]
    pub crops: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    /// Rank error between two landscapes over the same points.
    Ranking {
        pred: PathBuf,
        label: PathBuf,
        #[arg(long, default_value_t = 20)]
        bins: usize,
    },
    /// Share of object points with graspness above a threshold.
    Fraction {
        landscape: PathBuf,
        #[arg(long, default_value_t = 0.3)]
        threshold: f64,
    },
    /// Oracle precision of the top grasps of a grasp CSV.
    Precision {
        grasps: PathBuf,
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Friction thresholds, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.4,0.8")]
        mu: Vec<f64>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Scene files.
    pub scenes: Vec<PathBuf>,
    /// Additionally generate this many random scenes from the seed.
    #[arg(long, default_value_t = 0)]
    pub random_scenes: usize,
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected x,y,z".into());
    }
    let mut v = [0.0; 3];
    for (dst, p) in v.iter_mut().zip(parts) {
        *dst = p.trim().parse().map_err(|_| format!("bad number `{p}`"))?;
    }
    Ok(v)
}
