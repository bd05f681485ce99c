use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;


use super::{contacts_in_extent, min_friction_from_geometry, region_extents, LocalPoint, QualityConfig};
use crate::error::{Error, Result};
use crate::geom::{fibonacci_sphere, SpatialIndex, Vec3};
use crate::gripper::{gripper_bodies, view_basis, GraspFrame, GripperModel};

/// Approach views, in-plane angles and depths sampled around each point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub views: Vec<Vec3>,
    /// Number of in-plane angles; angle `a` is `a·π/angles`.
    pub angles: usize,
    pub depths: Vec<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig::new(300, 12, vec![0.01, 0.02, 0.03, 0.04]).expect("default grid is valid")
    }
}

impl GridConfig {
    /// Grid over `view_count` Fibonacci-lattice views.
    pub fn new(view_count: usize, angles: usize, depths: Vec<f64>) -> Result<Self> {
        let grid = GridConfig { views: fibonacci_sphere(view_count)?, angles, depths };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.views.is_empty() || self.angles == 0 || self.depths.is_empty() {
            return Err(Error::arg("grid needs at least one view, angle and depth"));
        }
        if self.depths.iter().any(|d| !d.is_finite()) {
            return Err(Error::arg("grid depths must be finite"));
        }
        Ok(())
    }

    pub fn view_count(&self) -> usize {
        self.views.len()
    }

    /// Candidates per view (`angles × depths`).
    pub fn per_view(&self) -> usize {
        self.angles * self.depths.len()
    }

    pub fn len(&self) -> usize {
        self.view_count() * self.per_view()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn angle(&self, a: usize) -> f64 {
        a as f64 * core::f64::consts::PI / self.angles as f64
    }

    /// Flat position of `(view, angle, depth)` in view-major order.
    pub fn flat_index(&self, view: usize, angle: usize, depth: usize) -> usize {
        (view * self.angles + angle) * self.depths.len() + depth
    }

    fn depth_range(&self) -> (f64, f64) {
        let lo = self.depths.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.depths.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

/// Outcome of one grasp candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateResult {
    /// Minimum friction coefficient; infinite without valid contacts.
    pub mu: f64,
    pub score: f64,
    /// Finger opening used for the collision bodies (0 without contacts).
    pub grip_width: f64,
    /// `None` when no collision check was run.
    pub collision_free: Option<bool>,
}

impl CandidateResult {
    const INFEASIBLE: CandidateResult =
        CandidateResult { mu: f64::INFINITY, score: 0.0, grip_width: 0.0, collision_free: None };

    /// Score above the threshold and not known to collide.
    pub fn is_feasible(&self, threshold: f64) -> bool {
        self.score > threshold && self.collision_free != Some(false)
    }
}

/// Which candidates get a collision check against the obstacles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionMode {
    /// Every candidate with valid contacts.
    Always,
    /// Only candidates whose score passes the feasibility threshold.
    FeasibleOnly,
}

/// Evaluates candidate grids around points of one target object.
///
/// Contacts are searched among the target points only; collisions, when
/// obstacles are attached, against every obstacle point.
pub struct CandidateGrid<'a> {
    grid: &'a GridConfig,
    gripper: GripperModel,
    quality: QualityConfig,
    points: &'a [Vec3],
    normals: &'a [Vec3],
    index: &'a SpatialIndex,
    obstacles: Option<&'a SpatialIndex>,
    own: Range<usize>,
    mode: CollisionMode,
    reach: f64,
    x_range: (f64, f64),
}

const MARGIN: f64 = 1e-6;

struct Scratch {
    target0: Vec<LocalPoint>,
    slab: Vec<LocalPoint>,
    extents: Vec<(f64, f64)>,
    obstacles0: Option<Vec<Vec3>>,
    obstacle_slab: Option<Vec<Vec3>>,
}

impl<'a> CandidateGrid<'a> {
    /// `index` must be built over `points`.
    pub fn new(
        grid: &'a GridConfig,
        gripper: &GripperModel,
        quality: &QualityConfig,
        points: &'a [Vec3],
        normals: &'a [Vec3],
        index: &'a SpatialIndex,
    ) -> Result<Self> {
        grid.validate()?;
        gripper.validate()?;
        quality.validate()?;
        if normals.len() != points.len() || index.len() != points.len() {
            return Err(Error::arg("target points, normals and index disagree in length"));
        }
        let (lo, hi) = grid.depth_range();
        Ok(CandidateGrid {
            grid,
            gripper: *gripper,
            quality: *quality,
            points,
            normals,
            index,
            obstacles: None,
            own: 0..0,
            mode: CollisionMode::FeasibleOnly,
            reach: gripper.reach(lo, hi) + MARGIN,
            x_range: (lo - gripper.finger_length - gripper.palm_depth - MARGIN, hi + MARGIN),
        })
    }

    pub fn with_obstacles(mut self, obstacles: &'a SpatialIndex, mode: CollisionMode) -> Self {
        self.obstacles = Some(obstacles);
        self.mode = mode;
        self
    }

    /// Declares that obstacle indices in `range` are the target points
    /// themselves. Contact search already rejects candidates whose bodies
    /// hold a target point, so the collision pass skips them.
    pub fn with_target_in_obstacles(mut self, range: Range<usize>) -> Self {
        self.own = range;
        self
    }

    pub fn grid(&self) -> &GridConfig {
        self.grid
    }

    /// Calls `sink(view, angle, depth, result)` for every candidate at
    /// `center`, in view-major order.
    pub fn evaluate<F: FnMut(usize, usize, usize, &CandidateResult)>(&self, center: &Vec3, mut sink: F) {
        let target = self.index.within_radius(center, self.reach);
        let mut obstacles = None;
        let mut scratch = self.scratch();
        for j in 0..self.grid.view_count() {
            self.evaluate_view_with(center, j, &target, &mut obstacles, &mut scratch, &mut sink);
        }
    }

    /// Like [`CandidateGrid::evaluate`] restricted to one view.
    pub fn evaluate_view<F: FnMut(usize, usize, usize, &CandidateResult)>(&self, center: &Vec3, view: usize, mut sink: F) {
        let target = self.index.within_radius(center, self.reach);
        let mut scratch = self.scratch();
        self.evaluate_view_with(center, view, &target, &mut None, &mut scratch, &mut sink);
    }

    fn scratch(&self) -> Scratch {
        Scratch {
            target0: Vec::new(),
            slab: Vec::new(),
            extents: vec![(0.0, 0.0); self.grid.depths.len()],
            obstacles0: None,
            obstacle_slab: None,
        }
    }

    fn evaluate_view_with<F: FnMut(usize, usize, usize, &CandidateResult)>(
        &self,
        center: &Vec3,
        j: usize,
        target: &[usize],
        obstacle_ids: &mut Option<Vec<usize>>,
        s: &mut Scratch,
        sink: &mut F,
    ) {
        let g = &self.gripper;
        let (half_h, half_y) = (g.finger_height / 2.0, g.max_width / 2.0 + g.finger_thickness);
        let base = view_basis(&self.grid.views[j]);
        let frame0 = GraspFrame::at_angle(*center, base, 0.0);
        // Spinning about the approach axis keeps y² + z², so points outside
        // this cylinder miss the slab at every angle.
        let r2 = (half_h * half_h + half_y * half_y) * (1.0 + 1e-9);
        let in_x = |l: &Vec3| l.x >= self.x_range.0 && l.x <= self.x_range.1 && l.y * l.y + l.z * l.z <= r2;
        let in_slab = |l: &Vec3| l.z.abs() <= half_h && l.y.abs() <= half_y;

        s.target0.clear();
        s.target0.extend(
            target
                .iter()
                .map(|&index| LocalPoint {
                    l: frame0.local0(&self.points[index]),
                    n0: frame0.dir_local0(&self.normals[index]),
                    index,
                })
                .filter(|p| in_x(&p.l)),
        );
        s.obstacles0 = None;

        for a in 0..self.grid.angles {
            let frame = GraspFrame::at_angle(*center, base, self.grid.angle(a));
            s.slab.clear();
            s.slab.extend(
                s.target0.iter().map(|p| LocalPoint { l: frame.spin(&p.l), ..*p }).filter(|p| in_slab(&p.l)),
            );
            s.obstacle_slab = None;
            region_extents(&self.grid.depths, g, &s.slab, &mut s.extents);
            for (k, &depth) in self.grid.depths.iter().enumerate() {
                let result = match contacts_in_extent(&frame, depth, s.extents[k], g, &self.quality, &s.slab) {
                    None => CandidateResult::INFEASIBLE,
                    Some(c) => {
                        let mu = min_friction_from_geometry(
                            &self.points[c.left],
                            &self.normals[c.left],
                            &self.points[c.right],
                            &self.normals[c.right],
                        );
                        let score = self.quality.score(mu);
                        let mut r = CandidateResult { mu, score, grip_width: c.grip_width, collision_free: None };
                        if let Some(obstacles) = self.obstacles {
                            if self.mode == CollisionMode::Always || self.quality.is_feasible(score) {
                                let slab = s.obstacle_slab.get_or_insert_with(|| {
                                    let ids = obstacle_ids.get_or_insert_with(|| obstacles.within_radius(center, self.reach));
                                    let l0 = s.obstacles0.get_or_insert_with(|| {
                                        ids.iter()
                                            .filter(|i| !self.own.contains(i))
                                            .map(|&i| frame0.local0(&obstacles.points()[i]))
                                            .filter(|l| in_x(l))
                                            .collect()
                                    });
                                    l0.iter().map(|l| frame.spin(l)).filter(|l| in_slab(l)).collect()
                                });
                                let bodies = gripper_bodies(g, &frame, depth, c.grip_width);
                                r.collision_free = Some(!slab.iter().any(|l| bodies.hits_local(l)));
                            }
                        }
                        r
                    }
                };
                sink(j, a, k, &result);
            }
        }
    }
}

/// Full `views × angles × depths` grid at one point, in view-major order.
/// With `obstacles`, every candidate with valid contacts is also checked for
/// collisions.
pub fn evaluate_candidate_grid(
    center: &Vec3,
    grid: &GridConfig,
    points: &[Vec3],
    normals: &[Vec3],
    obstacles: Option<&SpatialIndex>,
    gripper: &GripperModel,
    quality: &QualityConfig,
) -> Result<Vec<CandidateResult>> {
    let index = SpatialIndex::build(points);
    let mut evaluator = CandidateGrid::new(grid, gripper, quality, points, normals, &index)?;
    if let Some(o) = obstacles {
        evaluator = evaluator.with_obstacles(o, CollisionMode::Always);
    }
    let mut out = vec![CandidateResult::INFEASIBLE; grid.len()];
    evaluator.evaluate(center, |j, a, k, r| out[grid.flat_index(j, a, k)] = *r);
    Ok(out)
}
