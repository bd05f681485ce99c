//! The pipeline behind each subcommand.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use graspness_core::engine::{normalize_landscape, project_to_view, scene_landscape, GraspableLandscape, GraspnessConfig};
use graspness_core::geom::GRASPNESS;
use graspness_core::gripper::{cylinder_crop, GraspPose};
use graspness_core::metrics::{
    graspable_fraction, precision_at_k, ranking_error, run_sampling_benchmark, BenchOptions, BenchScene, ViewSetup,
};
use graspness_core::rng::{derive_seed, task_rng};
use graspness_core::sampling::{collision_filter, grasp_nms, sample_seeds, select_view, SceneGrasper};
use graspness_core::scene::{CameraModel, RenderOptions, Scene};
use graspness_core::{PointCloud, Vec3};
use rayon::prelude::*;

use crate::cli::{BenchArgs, Cli, CollisionHandling, Command, EvalCommand, GlobalArgs, GraspnessArgs, RenderArgs, SampleArgs, SceneGenArgs};
use crate::config::Config;
use crate::error::{io_error, CliError, Result};
use crate::grasps::{read_grasps_file, write_grasps};
use crate::ply::{read_ply_file, write_ply, write_ply_file, PlyFormat};
use crate::report::{summary_table, write_bench_csv};
use crate::scene_file::{random_scene, SceneFile};
use crate::sidecar::{read_sidecar_file, sidecar_path, write_sidecar_file, ViewTable};

/// Loads the configuration and applies the seed override.
pub fn load_config(global: &GlobalArgs) -> Result<Config> {
    let mut cfg = match &global.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

/// Runs one parsed command line. Text meant for the terminal goes to
/// `stdout`; file outputs go to `--output`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let cfg = load_config(&cli.global)?;
    let out = cli.global.output.as_deref();
    match &cli.command {
        Command::SceneGen(a) => scene_gen(&cfg, a, out, stdout),
        Command::Render(a) => render(&cfg, a, out, stdout),
        Command::Graspness(a) => graspness(&cfg, a, out),
        Command::Sample(a) => sample(&cfg, a, out, stdout),
        Command::Eval(e) => eval(&cfg, e, out, stdout),
        Command::Bench(a) => bench(&cfg, a, out, stdout),
    }
}

fn emit(out: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| io_error(path, e)),
        None => stdout.write_all(bytes).map_err(|e| CliError::input(format!("stdout: {e}"))),
    }
}

fn ply_format(cfg: &Config) -> PlyFormat {
    if cfg.render.ascii {
        PlyFormat::Ascii
    } else {
        PlyFormat::BinaryLittleEndian
    }
}

pub fn load_scene(path: &Path, cfg: &Config) -> Result<(SceneFile, Scene)> {
    let file = SceneFile::load(path)?;
    let scene = file.assemble(cfg.engine.sample_spacing, cfg.seed)?;
    Ok((file, scene))
}

pub fn view_setup(cfg: &Config, camera: CameraModel) -> ViewSetup {
    ViewSetup {
        camera,
        render: RenderOptions { world_frame: true, depth_noise_std: cfg.render.depth_noise, seed: cfg.seed },
        voxel_size: cfg.engine.voxel_size,
        workspace: cfg.render.workspace.map(|[lo, hi]| (Vec3::from(lo), Vec3::from(hi))),
        projection_cutoff: cfg.engine.projection_cutoff,
    }
}

fn scene_gen(cfg: &Config, a: &SceneGenArgs, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    let file = match &a.from {
        Some(path) => SceneFile::load(path)?,
        None => random_scene(a.objects, cfg.seed)?,
    };
    emit(out, file.to_json().as_bytes(), stdout)
}

fn render(cfg: &Config, a: &RenderArgs, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    let (file, scene) = load_scene(&a.scene, cfg)?;
    let camera = match (a.eye, a.target) {
        (Some(eye), Some(target)) => CameraModel::looking_at(eye.into(), target.into())?,
        _ => file.camera()?,
    };
    let cloud = view_setup(cfg, camera).render_partial(&scene)?;
    let mut bytes = Vec::new();
    write_ply(&mut bytes, &cloud, ply_format(cfg)).map_err(|e| CliError::input(e.to_string()))?;
    emit(out, &bytes, stdout)
}

/// A landscape with the cloud it lives on, as written by `graspness`.
pub struct LandscapeFile {
    pub cloud: PointCloud,
    pub landscape: GraspableLandscape,
}

/// Computes the (normalized unless `raw`) landscape of a scene, optionally
/// projected onto a rendered cloud.
pub fn compute_landscape(cfg: &Config, scene: &Scene, partial: Option<&PointCloud>, raw: bool) -> Result<LandscapeFile> {
    let gcfg = cfg.graspness()?;
    let mut land = scene_landscape(scene, cfg.level()?, &gcfg)?;
    if !raw && !land.is_empty() {
        land = normalize_landscape(&land)?;
    }
    let (base, land) = match partial {
        Some(p) => (p.clone(), project_to_view(&land, p, cfg.engine.projection_cutoff)?),
        None => (scene.model_cloud(), land),
    };
    check_landscape(&land, !raw)?;
    let mut cloud = PointCloud::new(base.positions);
    if let Some(n) = base.normals {
        cloud = cloud.with_normals(n)?;
    }
    cloud = cloud.with_object_ids(land.object_ids.clone())?;
    cloud.set_scalar(GRASPNESS, land.point.clone())?;
    Ok(LandscapeFile { cloud, landscape: land })
}

fn check_landscape(land: &GraspableLandscape, normalized: bool) -> Result<()> {
    land.validate().map_err(|e| CliError::internal(e.to_string()))?;
    let ok = |v: &f64| v.is_finite() && *v >= 0.0 && (!normalized || *v <= 1.0);
    if !land.point.iter().chain(&land.view).all(ok) {
        return Err(CliError::internal("landscape value outside its range"));
    }
    Ok(())
}

pub fn write_landscape(path: &Path, file: &LandscapeFile, format: PlyFormat) -> Result<()> {
    write_ply_file(path, &file.cloud, format)?;
    let l = &file.landscape;
    write_sidecar_file(&sidecar_path(path), &ViewTable::from_f64(l.len(), l.view_count, &l.view)?)
}

/// Reads a landscape PLY and its sidecar. The point values come from the
/// `graspness` channel; the file does not record how they were aggregated,
/// so that is taken from `cfg`.
pub fn read_landscape(path: &Path, cfg: &Config) -> Result<LandscapeFile> {
    let cloud = read_ply_file(path)?;
    let table = read_sidecar_file(&sidecar_path(path))?;
    let point = cloud
        .scalar(GRASPNESS)
        .ok_or_else(|| CliError::input(format!("{}: no graspness channel", path.display())))?
        .to_vec();
    let object_ids = cloud
        .object_ids
        .clone()
        .ok_or_else(|| CliError::input(format!("{}: no object ids", path.display())))?;
    if table.points != cloud.len() {
        return Err(CliError::input("sidecar point count differs from the PLY"));
    }
    let landscape = GraspableLandscape {
        positions: cloud.positions.clone(),
        object_ids,
        view_count: table.views,
        aggregation: cfg.engine.aggregation.parse()?,
        normalized: point.iter().all(|v| (0.0..=1.0).contains(v)),
        point,
        view: table.to_f64(),
    };
    Ok(LandscapeFile { cloud, landscape })
}

fn graspness(cfg: &Config, a: &GraspnessArgs, out: Option<&Path>) -> Result<()> {
    let out = out.ok_or_else(|| CliError::input("graspness needs --output (the sidecar is written next to it)"))?;
    let (_, scene) = load_scene(&a.scene, cfg)?;
    let partial = a.partial.as_deref().map(read_ply_file).transpose()?;
    let file = compute_landscape(cfg, &scene, partial.as_ref(), a.raw)?;
    write_landscape(out, &file, ply_format(cfg))
}

/// Seeds, views and best grasps for a landscape, sorted by descending score
/// (seed order on ties) and reduced by NMS unless `nms` is false.
pub fn sample_grasps(
    cfg: &Config,
    gcfg: &GraspnessConfig,
    scene: &Scene,
    land: &LandscapeFile,
    collision: CollisionHandling,
    nms: bool,
) -> Result<(Vec<GraspPose>, Vec<(usize, usize)>)> {
    let l = &land.landscape;
    if l.view_count != gcfg.grid.view_count() {
        return Err(CliError::input(format!(
            "landscape has {} views but the configuration has {}",
            l.view_count,
            gcfg.grid.view_count()
        )));
    }
    let scfg = cfg.sampling()?;
    let seeds = sample_seeds(l, &scfg)?;
    let normals = land.cloud.normals.as_deref();
    let grasper = SceneGrasper::new(scene, gcfg)?;
    let check = collision == CollisionHandling::Check;
    let picked = seeds
        .indices
        .par_iter()
        .enumerate()
        .map(|(k, &i)| {
            // Seed k draws its view from its own stream, so order of work
            // never matters.
            let mut rng = task_rng(derive_seed(cfg.seed, 1), k as u64);
            let view = select_view(seeds.view_row(k), scfg.view_strategy, &gcfg.grid.views, normals.map(|n| &n[i]), &mut rng)?;
            let id = l.object_ids[i];
            let grasp = if id >= 0 { grasper.best_grasp(id, &l.positions[i], view, check) } else { None };
            Ok(((i, view), grasp))
        })
        .collect::<Result<Vec<_>>>()?;
    let seed_views: Vec<(usize, usize)> = picked.iter().map(|(sv, _)| *sv).collect();
    let mut grasps: Vec<GraspPose> = picked.into_iter().filter_map(|(_, g)| g).collect();
    if collision == CollisionHandling::Filter {
        grasps = collision_filter(&grasps, scene.index(), &gcfg.gripper);
    }
    grasps.sort_by(|a, b| b.score.total_cmp(&a.score));
    if nms {
        grasps = grasp_nms(&grasps, cfg.sampling.nms_translation, cfg.sampling.nms_rotation.to_radians())?;
    }
    Ok((grasps, seed_views))
}

fn sample(cfg: &Config, a: &SampleArgs, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    let gcfg = cfg.graspness()?;
    let land = read_landscape(&a.landscape, cfg)?;
    let (_, scene) = load_scene(&a.scene, cfg)?;
    let (grasps, seed_views) = sample_grasps(cfg, &gcfg, &scene, &land, a.collision, !a.no_nms)?;
    if let Some(path) = &a.crops {
        write_ply_file(path, &crops(cfg, &gcfg, &land.landscape, &seed_views)?, ply_format(cfg))?;
    }
    let mut bytes = Vec::new();
    write_grasps(&mut bytes, &grasps)?;
    emit(out, &bytes, stdout)
}

/// Cylinder crops around the seeds along their chosen views, concatenated;
/// the `seed` channel holds each point's seed ordinal.
fn crops(cfg: &Config, gcfg: &GraspnessConfig, land: &GraspableLandscape, seed_views: &[(usize, usize)]) -> Result<PointCloud> {
    let mut positions = Vec::new();
    let mut owner = Vec::new();
    for (k, &(i, view)) in seed_views.iter().enumerate() {
        let c = cylinder_crop(
            &land.positions[i],
            &gcfg.grid.views[view],
            &land.positions,
            cfg.crop.radius,
            (cfg.crop.height[0], cfg.crop.height[1]),
            cfg.crop.group_size,
            derive_seed(cfg.seed, k as u64),
        )?;
        for &j in &c.indices {
            positions.push(land.positions[j]);
            owner.push(k as f64);
        }
    }
    let mut cloud = PointCloud::new(positions);
    cloud.set_scalar("seed", owner)?;
    Ok(cloud)
}

fn object_values(path: &Path) -> Result<Vec<f64>> {
    let cloud = read_ply_file(path)?;
    let g = cloud
        .scalar(GRASPNESS)
        .ok_or_else(|| CliError::input(format!("{}: no graspness channel", path.display())))?;
    Ok(match &cloud.object_ids {
        Some(ids) => g.iter().zip(ids).filter(|(_, &id)| id >= 0).map(|(v, _)| *v).collect(),
        None => g.to_vec(),
    })
}

fn eval(cfg: &Config, e: &EvalCommand, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    let text = match e {
        EvalCommand::Ranking { pred, label, bins } => {
            let p = read_ply_file(pred)?;
            let l = read_ply_file(label)?;
            let get = |c: &PointCloud, path: &Path| {
                c.scalar(GRASPNESS)
                    .map(<[f64]>::to_vec)
                    .ok_or_else(|| CliError::input(format!("{}: no graspness channel", path.display())))
            };
            format!("ranking_error {}\n", ranking_error(&get(&p, pred)?, &get(&l, label)?, *bins)?)
        }
        EvalCommand::Fraction { landscape, threshold } => {
            format!("graspable_fraction {}\n", graspable_fraction(&object_values(landscape)?, *threshold)?)
        }
        EvalCommand::Precision { grasps, scene, k, mu } => {
            let g = read_grasps_file(grasps)?;
            let (_, scene) = load_scene(scene, cfg)?;
            let gcfg = cfg.graspness()?;
            let p = precision_at_k(&g, &scene, &gcfg.gripper, &gcfg.quality, mu, *k)?;
            mu.iter().zip(p).map(|(t, v)| format!("precision_at_{k} mu<={t} {v}\n")).collect()
        }
    };
    emit(out, text.as_bytes(), stdout)
}

fn bench(cfg: &Config, a: &BenchArgs, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    if a.scenes.is_empty() && a.random_scenes == 0 {
        return Err(CliError::input("bench needs scene files or --random-scenes"));
    }
    let started = Instant::now();
    let mut files = a.scenes.iter().map(|p| SceneFile::load(p)).collect::<Result<Vec<_>>>()?;
    for i in 0..a.random_scenes {
        files.push(random_scene(None, derive_seed(cfg.seed, i as u64))?);
    }
    let gcfg = cfg.graspness()?;
    let scenes = files
        .iter()
        .map(|f| {
            let scene = f.assemble(cfg.engine.sample_spacing, cfg.seed)?;
            Ok(BenchScene::prepare(scene, &view_setup(cfg, f.camera()?), &gcfg)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let opts = BenchOptions {
        strategies: cfg.bench_strategies()?,
        seed_count: cfg.sampling.seed_count,
        graspness_threshold: cfg.sampling.graspness_threshold,
        trials: cfg.bench.trials,
        rng_seed: cfg.seed,
        precision_k: cfg.bench.precision_k,
        mu_thresholds: cfg.bench.mu_thresholds.clone(),
    };
    let report = run_sampling_benchmark(&scenes, &opts, &gcfg)?;
    let mut csv = Vec::new();
    write_bench_csv(&mut csv, &report)?;
    let summary = summary_table(&report);
    match out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| io_error(path, e))?;
            stdout.write_all(summary.as_bytes()).map_err(|e| CliError::input(e.to_string()))?;
        }
        None => {
            stdout.write_all(&csv).map_err(|e| CliError::input(e.to_string()))?;
            eprint!("{summary}");
        }
    }
    eprintln!("bench finished in {:.1} s", started.elapsed().as_secs_f64());
    Ok(())
}
