//! Deterministic planar two-link arm environment.
//!
//! The controller is a fixed attractive/repulsive potential field descended
//! with Jacobian-transpose gradient steps. It is a pure function of
//! (scene, params, stimulus): identical inputs produce bit-identical
//! trajectories, which is what makes trajectory hashing a usable channel.

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::core::{Action, Stimulus, TerminalStatus, Trajectory};
use crate::error::{Error, Result};
use crate::hashing;
use crate::rng::CounterRng;

/// Clearance required between a stimulus surface and the goal or arm base.
pub const PLACEMENT_MARGIN: f64 = 0.05;
/// Sampled stimulus radius range, workspace units.
pub const STIMULUS_RADIUS_RANGE: (f64, f64) = (0.05, 0.15);
/// Sampled stimulus strength range (repulsion gain multiplier). Kept well
/// below the base-obstacle strength so stimuli deflect the motion without
/// walling off the goal.
pub const STIMULUS_STRENGTH_RANGE: (f64, f64) = (0.3, 0.9);
/// Consecutive rejected placements before sampling gives up.
pub const MAX_PLACEMENT_REJECTIONS: u32 = 1000;

/// Distance floor inside the repulsion term; keeps the field finite if the
/// end effector ever reaches an obstacle surface.
const RHO_FLOOR: f64 = 1e-3;

/// A static repulsive object in the scene.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
    pub strength: f64,
}

/// Axis-aligned rectangle in workspace coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }
}

/// A task: goal position, fixed obstacles, arm geometry, controller step
/// schedule, and the region where stimuli may be placed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub scene_id: String,
    pub goal: [f64; 2],
    pub base_obstacles: Vec<Obstacle>,
    /// Joint angles at episode start, radians.
    pub initial_joints: [f64; 2],
    pub link_lengths: [f64; 2],
    pub t_max: u32,
    /// Goal tolerance, workspace units.
    pub epsilon: f64,
    /// Controller gradient step size.
    pub eta: f64,
    pub stimulus_region: Rect,
}

impl Scene {
    /// Check structural invariants, including goal reachability:
    /// `|L1 - L2| + eps <= |goal| <= L1 + L2 - eps`.
    pub fn validate(&self) -> Result<()> {
        let [l1, l2] = self.link_lengths;
        if l1 <= 0.0 || l2 <= 0.0 {
            return Err(Error::Config(format!("{}: link lengths must be > 0", self.scene_id)));
        }
        if self.epsilon <= 0.0 || self.eta <= 0.0 {
            return Err(Error::Config(format!("{}: epsilon and eta must be > 0", self.scene_id)));
        }
        if self.t_max < 1 {
            return Err(Error::Config(format!("{}: t_max must be >= 1", self.scene_id)));
        }
        let r = self.stimulus_region;
        if r.x_min >= r.x_max || r.y_min >= r.y_max {
            return Err(Error::Config(format!("{}: empty stimulus region", self.scene_id)));
        }
        let goal_dist = (self.goal[0].powi(2) + self.goal[1].powi(2)).sqrt();
        if goal_dist > l1 + l2 - self.epsilon {
            return Err(Error::Config(format!(
                "{}: goal at |{goal_dist:.3}| is outside the reachable disk",
                self.scene_id
            )));
        }
        if goal_dist < (l1 - l2).abs() + self.epsilon {
            return Err(Error::Config(format!(
                "{}: goal at |{goal_dist:.3}| is inside the unreachable inner annulus",
                self.scene_id
            )));
        }
        for ob in &self.base_obstacles {
            if ob.radius <= 0.0 || ob.strength < 0.0 {
                return Err(Error::Config(format!("{}: invalid base obstacle", self.scene_id)));
            }
        }
        Ok(())
    }

    /// Placement invariants for a stimulus: inside the region, positive
    /// radius, and clear of the goal and the arm base by
    /// `radius + PLACEMENT_MARGIN`.
    pub fn validate_placement(&self, stimulus: &Stimulus) -> Result<()> {
        if stimulus.radius <= 0.0 {
            return Err(Error::Placement(format!("radius {} must be > 0", stimulus.radius)));
        }
        if stimulus.strength < 0.0 {
            return Err(Error::Placement(format!("strength {} must be >= 0", stimulus.strength)));
        }
        if !self.stimulus_region.contains(stimulus.x, stimulus.y) {
            return Err(Error::Placement(format!(
                "({:.3}, {:.3}) outside stimulus region",
                stimulus.x, stimulus.y
            )));
        }
        let margin = stimulus.radius + PLACEMENT_MARGIN;
        let goal_dist =
            ((stimulus.x - self.goal[0]).powi(2) + (stimulus.y - self.goal[1]).powi(2)).sqrt();
        if goal_dist < margin {
            return Err(Error::Placement(format!("overlaps goal (distance {goal_dist:.3})")));
        }
        let base_dist = (stimulus.x.powi(2) + stimulus.y.powi(2)).sqrt();
        if base_dist < margin {
            return Err(Error::Placement(format!("overlaps arm base (distance {base_dist:.3})")));
        }
        Ok(())
    }

    /// Forward kinematics of the end effector.
    pub fn end_effector(&self, joints: [f64; 2]) -> [f64; 2] {
        let [l1, l2] = self.link_lengths;
        let [t1, t2] = joints;
        [l1 * t1.cos() + l2 * (t1 + t2).cos(), l1 * t1.sin() + l2 * (t1 + t2).sin()]
    }

    /// 2x2 end-effector Jacobian at the given joint angles.
    pub fn jacobian(&self, joints: [f64; 2]) -> [[f64; 2]; 2] {
        let [l1, l2] = self.link_lengths;
        let [t1, t2] = joints;
        let s1 = t1.sin();
        let c1 = t1.cos();
        let s12 = (t1 + t2).sin();
        let c12 = (t1 + t2).cos();
        [[-l1 * s1 - l2 * s12, -l2 * s12], [l1 * c1 + l2 * c12, l2 * c12]]
    }

    /// Run the no-stimulus episode and require convergence. Every preset
    /// must pass this.
    pub fn self_check(&self, params: &ControllerParams) -> Result<u32> {
        let baseline = interact(self, params, None)?;
        if !baseline.converged() {
            return Err(Error::Config(format!(
                "{}: baseline does not converge within {} steps",
                self.scene_id, self.t_max
            )));
        }
        Ok(baseline.len() as u32)
    }
}

/// Potential-field controller gains. The checksum is computed from the
/// parameter bytes at construction, so any later tampering is detectable by
/// re-verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerParams {
    k_att: f64,
    k_rep: f64,
    rho0: f64,
    checksum: String,
}

impl ControllerParams {
    pub fn new(k_att: f64, k_rep: f64, rho0: f64) -> Result<Self> {
        if k_att <= 0.0 || k_rep <= 0.0 || rho0 <= 0.0 {
            return Err(Error::Config("controller gains must be > 0".into()));
        }
        let checksum = Self::compute_checksum(k_att, k_rep, rho0);
        Ok(Self { k_att, k_rep, rho0, checksum })
    }

    fn compute_checksum(k_att: f64, k_rep: f64, rho0: f64) -> String {
        let mut bytes = Vec::with_capacity(24);
        bytes.extend_from_slice(&k_att.to_le_bytes());
        bytes.extend_from_slice(&k_rep.to_le_bytes());
        bytes.extend_from_slice(&rho0.to_le_bytes());
        hashing::fingerprint(&bytes)
    }

    pub fn k_att(&self) -> f64 {
        self.k_att
    }

    pub fn k_rep(&self) -> f64 {
        self.k_rep
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    /// Recompute the checksum from the current parameter values and compare
    /// with the stored one.
    pub fn verify(&self) -> bool {
        Self::compute_checksum(self.k_att, self.k_rep, self.rho0) == self.checksum
    }
}

impl Default for ControllerParams {
    fn default() -> Self {
        Self::new(1.0, 0.1, 0.3).expect("default gains are valid")
    }
}

/// Gradient of the potential field with respect to the end-effector
/// position. Attractive quadratic well at the goal plus, for each obstacle
/// closer than `rho0` (surface distance), the repulsive term
/// `k_rep * strength * 1/2 * (1/rho - 1/rho0)^2`.
fn field_gradient(
    scene: &Scene,
    params: &ControllerParams,
    stimulus: Option<&Stimulus>,
    ee: [f64; 2],
) -> [f64; 2] {
    let mut gx = params.k_att * (ee[0] - scene.goal[0]);
    let mut gy = params.k_att * (ee[1] - scene.goal[1]);

    let mut add_obstacle = |cx: f64, cy: f64, radius: f64, strength: f64| {
        if strength == 0.0 {
            return;
        }
        let dx = ee[0] - cx;
        let dy = ee[1] - cy;
        let dist = (dx * dx + dy * dy).sqrt();
        let rho = (dist - radius).max(RHO_FLOOR);
        if rho >= params.rho0 {
            return;
        }
        let coeff = -params.k_rep * strength * (1.0 / rho - 1.0 / params.rho0) / (rho * rho);
        // Direction away from the obstacle center; fixed fallback keeps the
        // controller deterministic in the degenerate dist == 0 case.
        let (ux, uy) = if dist > 1e-12 { (dx / dist, dy / dist) } else { (1.0, 0.0) };
        gx += coeff * ux;
        gy += coeff * uy;
    };

    for ob in &scene.base_obstacles {
        add_obstacle(ob.x, ob.y, ob.radius, ob.strength);
    }
    if let Some(st) = stimulus {
        add_obstacle(st.x, st.y, st.radius, st.strength);
    }
    [gx, gy]
}

/// Run one episode: descend the potential field from the scene's initial
/// joints, recording the joint configuration after every step. Terminates
/// `Converged` as soon as the end effector is within `epsilon` of the goal,
/// otherwise `MaxStepsExceeded` after `t_max` steps.
pub fn interact(
    scene: &Scene,
    params: &ControllerParams,
    stimulus: Option<&Stimulus>,
) -> Result<Trajectory> {
    scene.validate()?;
    if let Some(st) = stimulus {
        scene.validate_placement(st)?;
    }

    let mut joints = scene.initial_joints;
    let mut actions = Vec::new();
    let mut status = TerminalStatus::MaxStepsExceeded;
    for _ in 0..scene.t_max {
        let ee = scene.end_effector(joints);
        let grad = field_gradient(scene, params, stimulus, ee);
        let j = scene.jacobian(joints);
        // Joint-space step via the Jacobian transpose.
        joints[0] -= scene.eta * (j[0][0] * grad[0] + j[1][0] * grad[1]);
        joints[1] -= scene.eta * (j[0][1] * grad[0] + j[1][1] * grad[1]);
        actions.push(Action::new(vec![joints[0], joints[1]]));

        let ee_now = scene.end_effector(joints);
        let dist =
            ((ee_now[0] - scene.goal[0]).powi(2) + (ee_now[1] - scene.goal[1]).powi(2)).sqrt();
        if dist < scene.epsilon {
            status = TerminalStatus::Converged;
            break;
        }
    }
    Trajectory::new(actions, status)
}

/// Draw one stimulus for trial `id`: position uniform over the scene's
/// stimulus region, radius and strength uniform over their ranges,
/// rejection-resampled until the placement invariants hold.
pub fn sample_stimulus(rng: &mut CounterRng, scene: &Scene, id: u32) -> Result<Stimulus> {
    for _ in 0..MAX_PLACEMENT_REJECTIONS {
        let r = scene.stimulus_region;
        let stimulus = Stimulus {
            x: rng.range_f64(r.x_min, r.x_max),
            y: rng.range_f64(r.y_min, r.y_max),
            radius: rng.range_f64(STIMULUS_RADIUS_RANGE.0, STIMULUS_RADIUS_RANGE.1),
            strength: rng.range_f64(STIMULUS_STRENGTH_RANGE.0, STIMULUS_STRENGTH_RANGE.1),
            id,
        };
        if scene.validate_placement(&stimulus).is_ok() {
            return Ok(stimulus);
        }
    }
    Err(Error::RegionTooConstrained { rejections: MAX_PLACEMENT_REJECTIONS })
}

/// Preset scene definitions, embedded as the same JSON document the CLI
/// accepts via `--scene-file`.
const PRESETS_JSON: &str = include_str!("presets.json");

#[derive(Debug, Deserialize)]
struct PresetFile {
    scenes: Vec<Scene>,
}

fn presets() -> &'static [Scene] {
    static PRESETS: OnceLock<Vec<Scene>> = OnceLock::new();
    PRESETS.get_or_init(|| {
        let file: PresetFile =
            serde_json::from_str(PRESETS_JSON).expect("embedded presets.json is valid");
        file.scenes
    })
}

/// Names of the built-in preset scenes.
pub fn preset_ids() -> Vec<String> {
    presets().iter().map(|s| s.scene_id.clone()).collect()
}

/// Look up a built-in preset scene by id.
pub fn preset(scene_id: &str) -> Result<Scene> {
    presets()
        .iter()
        .find(|s| s.scene_id == scene_id)
        .cloned()
        .ok_or_else(|| {
            Error::Config(format!(
                "unknown scene {scene_id:?}; presets: {}",
                preset_ids().join(", ")
            ))
        })
}

/// Parse scenes from JSON text (the `--scene-file` format): a single scene
/// object, an array of scenes, or a `{"scenes": [...]}` wrapper.
pub fn scenes_from_json(text: &str) -> Result<Vec<Scene>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let scenes: Vec<Scene> = if value.is_array() {
        serde_json::from_value(value)?
    } else if value.get("scenes").is_some() {
        serde_json::from_value::<PresetFile>(value)?.scenes
    } else {
        vec![serde_json::from_value(value)?]
    };
    for scene in &scenes {
        scene.validate()?;
    }
    Ok(scenes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::canonical_bytes;
    use std::collections::BTreeSet;

    fn default_scene() -> Scene {
        preset("pick").unwrap()
    }

    #[test]
    fn presets_validate_and_self_check() {
        let params = ControllerParams::default();
        let ids = preset_ids();
        assert_eq!(ids, vec!["drawer", "move-near", "pick", "basket"]);
        for id in ids {
            let scene = preset(&id).unwrap();
            scene.validate().unwrap();
            let t0 = scene.self_check(&params).unwrap();
            assert!(t0 >= 1 && t0 <= scene.t_max);
        }
    }

    #[test]
    fn unreachable_goal_is_a_config_error() {
        let mut scene = default_scene();
        scene.goal = [2.5, 0.0];
        assert!(matches!(interact(&scene, &ControllerParams::default(), None), Err(Error::Config(_))));
        scene.goal = [0.0, 0.0];
        assert!(matches!(scene.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn interact_is_deterministic() {
        let scene = default_scene();
        let params = ControllerParams::default();
        let region = scene.stimulus_region;
        let stimulus = Stimulus {
            x: (region.x_min + region.x_max) / 2.0,
            y: (region.y_min + region.y_max) / 2.0,
            radius: 0.1,
            strength: 0.5,
            id: 0,
        };
        let a = interact(&scene, &params, Some(&stimulus)).unwrap();
        let b = interact(&scene, &params, Some(&stimulus)).unwrap();
        assert_eq!(
            canonical_bytes(&a, 3).unwrap(),
            canonical_bytes(&b, 3).unwrap()
        );
        assert_eq!(a, b);
    }

    #[test]
    fn zero_strength_stimulus_matches_baseline() {
        let scene = default_scene();
        let params = ControllerParams::default();
        let baseline = interact(&scene, &params, None).unwrap();
        let region = scene.stimulus_region;
        let stimulus = Stimulus {
            x: (region.x_min + region.x_max) / 2.0,
            y: (region.y_min + region.y_max) / 2.0,
            radius: 0.1,
            strength: 0.0,
            id: 0,
        };
        let stego = interact(&scene, &params, Some(&stimulus)).unwrap();
        assert_eq!(
            canonical_bytes(&baseline, 3).unwrap(),
            canonical_bytes(&stego, 3).unwrap()
        );
    }

    #[test]
    fn placement_violations_are_rejected() {
        let scene = default_scene();
        let params = ControllerParams::default();
        let outside = Stimulus {
            x: scene.stimulus_region.x_max + 1.0,
            y: scene.stimulus_region.y_max + 1.0,
            radius: 0.1,
            strength: 1.0,
            id: 0,
        };
        assert!(matches!(interact(&scene, &params, Some(&outside)), Err(Error::Placement(_))));
        let on_goal = Stimulus { x: scene.goal[0], y: scene.goal[1], radius: 0.1, strength: 1.0, id: 0 };
        assert!(scene.validate_placement(&on_goal).is_err());
    }

    /// 10x10 grid of stimulus positions over the region; counts distinct
    /// canonical trajectories among valid, converged placements.
    fn grid_distinct_trajectories(scene: &Scene, params: &ControllerParams) -> usize {
        let r = scene.stimulus_region;
        let mut distinct = BTreeSet::new();
        for i in 0..10 {
            for jj in 0..10 {
                let x = r.x_min + (r.x_max - r.x_min) * (f64::from(i) + 0.5) / 10.0;
                let y = r.y_min + (r.y_max - r.y_min) * (f64::from(jj) + 0.5) / 10.0;
                let st = Stimulus { x, y, radius: 0.1, strength: 1.0, id: 0 };
                if scene.validate_placement(&st).is_err() {
                    continue;
                }
                let traj = interact(scene, params, Some(&st)).unwrap();
                distinct.insert(canonical_bytes(&traj, 3).unwrap());
            }
        }
        distinct.len()
    }

    #[test]
    fn stimulus_grid_is_sensitive_on_every_preset() {
        let params = ControllerParams::default();
        for id in preset_ids() {
            let scene = preset(&id).unwrap();
            let distinct = grid_distinct_trajectories(&scene, &params);
            assert!(distinct >= 8, "{id}: only {distinct} distinct trajectories on a 10x10 grid");
        }
    }

    #[test]
    fn sampling_is_deterministic_and_respects_invariants() {
        let scene = default_scene();
        let mut rng_a = CounterRng::new(11, 0);
        let mut rng_b = CounterRng::new(11, 0);
        for id in 0..100 {
            let a = sample_stimulus(&mut rng_a, &scene, id).unwrap();
            let b = sample_stimulus(&mut rng_b, &scene, id).unwrap();
            assert_eq!(a, b);
            scene.validate_placement(&a).unwrap();
            assert!((STIMULUS_RADIUS_RANGE.0..STIMULUS_RADIUS_RANGE.1).contains(&a.radius));
            assert!((STIMULUS_STRENGTH_RANGE.0..STIMULUS_STRENGTH_RANGE.1).contains(&a.strength));
        }
    }

    #[test]
    fn fully_blocked_region_errors() {
        let mut scene = default_scene();
        // Shrink the region to a sliver right on the goal: every placement
        // violates the goal margin.
        scene.stimulus_region = Rect {
            x_min: scene.goal[0] - 0.01,
            y_min: scene.goal[1] - 0.01,
            x_max: scene.goal[0] + 0.01,
            y_max: scene.goal[1] + 0.01,
        };
        let mut rng = CounterRng::new(3, 0);
        assert!(matches!(
            sample_stimulus(&mut rng, &scene, 0),
            Err(Error::RegionTooConstrained { .. })
        ));
    }

    #[test]
    fn controller_checksum_survives_interactions() {
        let scene = default_scene();
        let params = ControllerParams::default();
        let before = params.checksum().to_string();
        assert!(params.verify());
        let region = scene.stimulus_region;
        let cx = (region.x_min + region.x_max) / 2.0;
        let cy = (region.y_min + region.y_max) / 2.0;
        for i in 0..5 {
            let st = Stimulus { x: cx + 0.02 * f64::from(i), y: cy, radius: 0.1, strength: 0.5, id: i as u32 };
            let _ = interact(&scene, &params, Some(&st)).unwrap();
        }
        assert_eq!(params.checksum(), before);
        assert!(params.verify());
    }

    #[test]
    fn tampered_params_fail_verification() {
        let params = ControllerParams::default();
        let mut json = serde_json::to_value(&params).unwrap();
        json["k_rep"] = serde_json::json!(0.2);
        let tampered: ControllerParams = serde_json::from_value(json).unwrap();
        assert!(!tampered.verify());
    }
}
