//! Kinematic legged crawler.
//!
//! Stance feet act as no-slip anchors: whatever displacement the joints
//! impose on a stance foot in the body frame, the body undergoes the
//! opposite displacement in the world. There are no forces, masses, or
//! friction. One step is one control tick (`dt = 1`).

mod terrain;

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

pub use terrain::{make_terrain, Terrain, TerrainKind, BLOCK_SIZE, DEFAULT_BLOCK_HEIGHT};

use crate::error::{Error, Result};

pub const K_VELOCITY: f64 = 2.0;
pub const K_UPRIGHT: f64 = 0.5;
pub const K_YAW: f64 = 0.5;
/// Minimum projection of the body z-axis on the world z-axis counted as upright.
pub const UPRIGHT_THRESHOLD: f64 = 0.93;
/// Heading tolerance in radians.
pub const YAW_LIMIT: f64 = 0.45;
/// Value of the upright and heading terms when violated.
pub const VIOLATION: f64 = -0.5;
/// Orientation values are reported within `[-3.14, 3.14]`.
pub const ORIENTATION_LIMIT: f64 = 3.14;
/// Fraction by which roll and pitch move toward the stance plane each step.
pub const TILT_RELAX: f64 = 0.2;
/// Fraction by which body height moves toward its stance target each step.
pub const HEIGHT_RELAX: f64 = 0.5;

/// Asymmetric modifiers standing in for the mismatch between a simulated
/// and a physical robot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DynamicsPerturbation {
    /// Multiplier on every segment of a leg, one per leg; empty means 1.
    pub segment_scale: Vec<f64>,
    /// Multiplier on the rate limit, one per joint; empty means 1.
    pub rate_scale: Vec<f64>,
    pub contact_tolerance_scale: f64,
}

impl Default for DynamicsPerturbation {
    fn default() -> Self {
        Self { segment_scale: Vec::new(), rate_scale: Vec::new(), contact_tolerance_scale: 1.0 }
    }
}

impl DynamicsPerturbation {
    /// Left legs shortened, right legs lengthened, every third joint slowed,
    /// and a looser contact threshold.
    pub fn asymmetric(config: &WalkerConfig) -> Self {
        let segment_scale =
            (0..config.num_legs).map(|l| if config.leg_side(l) > 0.0 { 0.9 } else { 1.1 }).collect();
        let rate_scale = (0..config.joint_count()).map(|j| if j % 3 == 0 { 0.7 } else { 1.0 }).collect();
        Self { segment_scale, rate_scale, contact_tolerance_scale: 1.5 }
    }

    pub fn is_identity(&self) -> bool {
        self.segment_scale.iter().all(|s| *s == 1.0)
            && self.rate_scale.iter().all(|s| *s == 1.0)
            && self.contact_tolerance_scale == 1.0
    }
}

/// Body and leg geometry plus simulation constants.
///
/// Joint 0 of each leg yaws the leg about the vertical axis (positive swings
/// the foot forward on either side). The remaining joints pitch successive
/// segments in the leg's vertical plane (positive lifts). At zero angles
/// segment 0 and, for legs with three or more joints, segment 1 are
/// horizontal and every later segment points straight down, so all feet
/// rest at the same depth below the hips.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkerConfig {
    pub num_legs: usize,
    pub joints_per_leg: usize,
    /// One length per joint, shared by all legs.
    pub segment_lengths: Vec<f64>,
    /// Hip (x, y) in the body frame; y > 0 is the left side.
    pub hip_positions: Vec<[f64; 2]>,
    pub leg_names: Vec<String>,
    pub max_joint_rate: f64,
    pub episode_steps: usize,
    pub contact_tolerance: f64,
    pub gravity_drop: f64,
    #[serde(default)]
    pub perturbation: DynamicsPerturbation,
}

impl WalkerConfig {
    /// Six legs with three joints each: 27 observations, 18 actions.
    pub fn beetle() -> Self {
        Self {
            num_legs: 6,
            joints_per_leg: 3,
            segment_lengths: vec![0.05, 0.12, 0.15],
            hip_positions: vec![[0.15, 0.08], [0.0, 0.08], [-0.15, 0.08], [0.15, -0.08], [0.0, -0.08], [-0.15, -0.08]],
            leg_names: ["lf", "lm", "lh", "rf", "rm", "rh"].map(String::from).to_vec(),
            max_joint_rate: 0.1,
            episode_steps: 500,
            contact_tolerance: 0.01,
            gravity_drop: 0.05,
            perturbation: DynamicsPerturbation::default(),
        }
    }

    /// Four legs with four joints each: 23 observations, 16 actions.
    pub fn gecko() -> Self {
        Self {
            num_legs: 4,
            joints_per_leg: 4,
            segment_lengths: vec![0.04, 0.12, 0.12, 0.03],
            hip_positions: vec![[0.15, 0.07], [-0.15, 0.07], [0.15, -0.07], [-0.15, -0.07]],
            leg_names: ["lf", "lh", "rf", "rh"].map(String::from).to_vec(),
            max_joint_rate: 0.1,
            episode_steps: 500,
            contact_tolerance: 0.01,
            gravity_drop: 0.05,
            perturbation: DynamicsPerturbation::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.num_legs == 0 {
            return bad("num_legs must be at least 1".into());
        }
        if self.joints_per_leg < 2 {
            return bad("joints_per_leg must be at least 2".into());
        }
        if self.segment_lengths.len() != self.joints_per_leg {
            return bad(format!(
                "segment_lengths has {} entries, expected joints_per_leg = {}",
                self.segment_lengths.len(),
                self.joints_per_leg
            ));
        }
        if self.segment_lengths.iter().any(|l| !(*l > 0.0)) {
            return bad("segment_lengths must be positive".into());
        }
        if self.hip_positions.len() != self.num_legs {
            return bad(format!("hip_positions has {} entries, expected {}", self.hip_positions.len(), self.num_legs));
        }
        if self.hip_positions.iter().any(|h| h[1] == 0.0) {
            return bad("hip_positions need a nonzero lateral offset".into());
        }
        if self.leg_names.len() != self.num_legs {
            return bad(format!("leg_names has {} entries, expected {}", self.leg_names.len(), self.num_legs));
        }
        if !(self.max_joint_rate > 0.0) {
            return bad("max_joint_rate must be positive".into());
        }
        if self.episode_steps == 0 {
            return bad("episode_steps must be positive".into());
        }
        if !(self.contact_tolerance >= 0.0) || !(self.gravity_drop >= 0.0) {
            return bad("contact_tolerance and gravity_drop must be non-negative".into());
        }
        let p = &self.perturbation;
        if !p.segment_scale.is_empty() && p.segment_scale.len() != self.num_legs {
            return bad("perturbation.segment_scale needs one entry per leg".into());
        }
        if !p.rate_scale.is_empty() && p.rate_scale.len() != self.joint_count() {
            return bad("perturbation.rate_scale needs one entry per joint".into());
        }
        Ok(())
    }

    pub fn joint_count(&self) -> usize {
        self.num_legs * self.joints_per_leg
    }

    /// Joint angles, contact flags, then roll, pitch and yaw.
    pub fn observation_size(&self) -> usize {
        self.joint_count() + self.num_legs + 3
    }

    pub fn leg_index(&self, name: &str) -> Option<usize> {
        self.leg_names.iter().position(|n| n == name)
    }

    fn leg_side(&self, leg: usize) -> f64 {
        self.hip_positions[leg][1].signum()
    }

    fn segment_scale(&self, leg: usize) -> f64 {
        self.perturbation.segment_scale.get(leg).copied().unwrap_or(1.0)
    }

    fn joint_rate(&self, joint: usize) -> f64 {
        self.max_joint_rate * self.perturbation.rate_scale.get(joint).copied().unwrap_or(1.0)
    }

    fn contact_tol(&self) -> f64 {
        self.contact_tolerance * self.perturbation.contact_tolerance_scale
    }

    fn rest_angle(&self, segment: usize) -> f64 {
        if segment >= 2 || (segment == 1 && self.joints_per_leg == 2) {
            -FRAC_PI_2
        } else {
            0.0
        }
    }

    /// Depth of a foot below its hip at zero joint angles.
    pub fn nominal_clearance(&self, leg: usize) -> f64 {
        -self.foot_in_body(leg, &vec![0.0; self.joints_per_leg])[2]
    }

    /// Foot position in the body frame for one leg's joint angles.
    pub fn foot_in_body(&self, leg: usize, joints: &[f64]) -> [f64; 3] {
        let scale = self.segment_scale(leg);
        let side = self.leg_side(leg);
        let heading = side * FRAC_PI_2 - side * joints[0];
        let mut radial = self.segment_lengths[0] * scale;
        let mut z = 0.0;
        let mut pitch = 0.0;
        for k in 1..self.joints_per_leg {
            pitch += joints[k];
            let a = self.rest_angle(k) + pitch;
            let len = self.segment_lengths[k] * scale;
            radial += len * a.cos();
            z += len * a.sin();
        }
        let [hx, hy] = self.hip_positions[leg];
        [hx + radial * heading.cos(), hy + radial * heading.sin(), z]
    }
}

/// Legs held at a fixed posture for a whole episode.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DamageSpec {
    pub frozen_legs: BTreeSet<usize>,
    /// Posture of a frozen leg, one angle per joint of the leg; empty means all zero.
    #[serde(default)]
    pub frozen_posture: Vec<f64>,
}

impl DamageSpec {
    pub fn none() -> Self {
        Self::default()
    }

    /// Named presets: `none`, or leg names joined by `_` such as `lf`, `rh`,
    /// `lf_rf`.
    pub fn preset(name: &str, config: &WalkerConfig) -> Result<Self> {
        if name == "none" || name.is_empty() {
            return Ok(Self::none());
        }
        let mut frozen_legs = BTreeSet::new();
        for leg in name.split('_') {
            let idx = config
                .leg_index(leg)
                .ok_or_else(|| Error::Config(format!("unknown leg {leg:?} in damage preset {name:?}")))?;
            frozen_legs.insert(idx);
        }
        Ok(Self { frozen_legs, frozen_posture: Vec::new() })
    }

    pub fn validate(&self, config: &WalkerConfig) -> Result<()> {
        if let Some(&l) = self.frozen_legs.iter().find(|l| **l >= config.num_legs) {
            return Err(Error::Config(format!("frozen leg {l} does not exist")));
        }
        if !self.frozen_posture.is_empty() && self.frozen_posture.len() != config.joints_per_leg {
            return Err(Error::Config("frozen_posture needs one angle per leg joint".into()));
        }
        Ok(())
    }

    pub fn is_frozen(&self, leg: usize) -> bool {
        self.frozen_legs.contains(&leg)
    }

    fn posture(&self, joint_in_leg: usize) -> f64 {
        self.frozen_posture.get(joint_in_leg).copied().unwrap_or(0.0).clamp(-1.0, 1.0)
    }

    pub fn describe(&self, config: &WalkerConfig) -> String {
        if self.frozen_legs.is_empty() {
            return "none".into();
        }
        self.frozen_legs.iter().map(|&l| config.leg_names[l].as_str()).collect::<Vec<_>>().join("_")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkerState {
    pub position: [f64; 3],
    /// Roll, pitch, yaw.
    pub orientation: [f64; 3],
    pub joints: Vec<f64>,
    pub contacts: Vec<bool>,
    pub step: usize,
}

impl WalkerState {
    pub fn upright_projection(&self) -> f64 {
        self.orientation[0].cos() * self.orientation[1].cos()
    }

    fn is_finite(&self) -> bool {
        self.position.iter().chain(&self.orientation).chain(&self.joints).all(|v| v.is_finite())
    }
}

/// Terms of one step's reward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReward {
    pub velocity_x: f64,
    pub upright: f64,
    pub heading: f64,
}

impl StepReward {
    pub fn total(&self) -> f64 {
        K_VELOCITY * self.velocity_x + K_UPRIGHT * self.upright + K_YAW * self.heading
    }
}

/// Reward of a step that moved the body by `dx` along world x and ended in `state`.
pub fn reward_terms(dx: f64, state: &WalkerState) -> StepReward {
    let upright = if state.upright_projection() > UPRIGHT_THRESHOLD { 0.0 } else { VIOLATION };
    let heading = if state.orientation[2].abs() < YAW_LIMIT { 0.0 } else { VIOLATION };
    StepReward { velocity_x: dx, upright, heading }
}

fn rotation(orientation: [f64; 3]) -> Matrix3<f64> {
    let [roll, pitch, yaw] = orientation;
    let (sr, cr) = roll.sin_cos();
    let (sp, cp) = pitch.sin_cos();
    let (sy, cy) = yaw.sin_cos();
    Matrix3::new(
        cy * cp,
        cy * sp * sr - sy * cr,
        cy * sp * cr + sy * sr,
        sy * cp,
        sy * sp * sr + cy * cr,
        sy * sp * cr - cy * sr,
        -sp,
        cp * sr,
        cp * cr,
    )
}

fn wrap_angle(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let mut a = (a + PI).rem_euclid(2.0 * PI) - PI;
    if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Config, terrain and damage for one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: WalkerConfig,
    pub terrain: Terrain,
    pub damage: DamageSpec,
}

impl Scenario {
    pub fn new(config: WalkerConfig, terrain: Terrain, damage: DamageSpec) -> Result<Self> {
        config.validate()?;
        damage.validate(&config)?;
        Ok(Self { config, terrain, damage })
    }

    pub fn flat(config: WalkerConfig) -> Result<Self> {
        Self::new(config, Terrain::flat(), DamageSpec::none())
    }

    pub fn reset(&self) -> WalkerState {
        reset(&self.config, &self.terrain, &self.damage)
    }

    pub fn step(&self, state: &WalkerState, action: &[f64]) -> Result<(WalkerState, StepReward)> {
        step(state, action, &self.config, &self.terrain, &self.damage)
    }
}

fn foot_world(config: &WalkerConfig, state: &WalkerState, rot: &Matrix3<f64>, leg: usize, joints: &[f64]) -> Vector3<f64> {
    let p = config.foot_in_body(leg, joints);
    Vector3::from(state.position) + rot * Vector3::from(p)
}

fn leg_range(config: &WalkerConfig, leg: usize) -> std::ops::Range<usize> {
    leg * config.joints_per_leg..(leg + 1) * config.joints_per_leg
}

fn contacts_of(config: &WalkerConfig, terrain: &Terrain, state: &WalkerState) -> Vec<bool> {
    let rot = rotation(state.orientation);
    let tol = config.contact_tol();
    (0..config.num_legs)
        .map(|leg| {
            let f = foot_world(config, state, &rot, leg, &state.joints[leg_range(config, leg)]);
            f.z <= terrain.height_at(f.x, f.y) + tol
        })
        .collect()
}

/// Body at the origin with zero orientation, every joint at rest (frozen
/// legs at their frozen posture), hips raised so the feet meet the ground.
pub fn reset(config: &WalkerConfig, terrain: &Terrain, damage: &DamageSpec) -> WalkerState {
    let mut joints = vec![0.0; config.joint_count()];
    for &leg in &damage.frozen_legs {
        for k in 0..config.joints_per_leg {
            joints[leg * config.joints_per_leg + k] = damage.posture(k);
        }
    }
    let mut ground = 0.0;
    let mut clearance = 0.0;
    for leg in 0..config.num_legs {
        let p = config.foot_in_body(leg, &joints[leg_range(config, leg)]);
        ground += terrain.height_at(p[0], p[1]);
        clearance -= p[2];
    }
    let n = config.num_legs as f64;
    let mut state = WalkerState {
        position: [0.0, 0.0, ground / n + clearance / n],
        orientation: [0.0; 3],
        joints,
        contacts: Vec::new(),
        step: 0,
    };
    state.contacts = contacts_of(config, terrain, &state);
    state
}

/// `[joint angles, contact flags, roll, pitch, yaw]`.
pub fn observe(state: &WalkerState) -> Vec<f64> {
    let mut obs = Vec::with_capacity(state.joints.len() + state.contacts.len() + 3);
    observe_into(state, &mut obs);
    obs
}

pub fn observe_into(state: &WalkerState, obs: &mut Vec<f64>) {
    obs.clear();
    obs.extend(state.joints.iter().map(|q| q.clamp(-1.0, 1.0)));
    obs.extend(state.contacts.iter().map(|&c| if c { 1.0 } else { 0.0 }));
    obs.extend(state.orientation.iter().map(|a| a.clamp(-ORIENTATION_LIMIT, ORIENTATION_LIMIT)));
}

/// Least-squares plane `h = a + b*u + c*v` through stance-foot terrain
/// heights in the yaw-aligned body frame, returned as target (roll, pitch).
fn stance_tilt(points: &[(f64, f64, f64)]) -> (f64, f64) {
    // Small ridge on the slopes keeps the system solvable with < 3 feet.
    const RIDGE: f64 = 1e-6;
    let mut m = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for &(u, v, h) in points {
        let row = Vector3::new(1.0, u, v);
        m += row * row.transpose();
        rhs += row * h;
    }
    m[(1, 1)] += RIDGE;
    m[(2, 2)] += RIDGE;
    match m.lu().solve(&rhs) {
        Some(coef) => (coef[2].atan(), -coef[1].atan()),
        None => (0.0, 0.0),
    }
}

/// Advances the walker one tick and returns the successor state and reward.
///
/// 1. Joints move toward `action` (clamped to [-1, 1]) by at most the rate
///    limit; frozen legs ignore the action.
/// 2. Stance feet are those touching the terrain before the move.
/// 3. With stance feet, the body translates by minus their mean body-frame
///    displacement and turns by minus the mean angle they sweep about the
///    body origin. Without stance feet it drops by `gravity_drop`.
/// 4. Roll and pitch relax toward the plane through the stance-foot terrain
///    heights; height relaxes toward mean stance terrain plus clearance.
pub fn step(
    state: &WalkerState,
    action: &[f64],
    config: &WalkerConfig,
    terrain: &Terrain,
    damage: &DamageSpec,
) -> Result<(WalkerState, StepReward)> {
    let nj = config.joint_count();
    if action.len() != nj {
        return Err(Error::Input(format!("action has length {}, walker has {nj} joints", action.len())));
    }
    let jpl = config.joints_per_leg;
    let mut next = state.clone();
    for (j, (q, &target)) in next.joints.iter_mut().zip(action).enumerate() {
        if damage.is_frozen(j / jpl) {
            continue;
        }
        let target = if target.is_nan() { *q } else { target.clamp(-1.0, 1.0) };
        let rate = config.joint_rate(j);
        *q = (*q + (target - *q).clamp(-rate, rate)).clamp(-1.0, 1.0);
    }

    let rot = rotation(state.orientation);
    let tol = config.contact_tol();
    let (mut shift_x, mut shift_y, mut turn) = (0.0, 0.0, 0.0);
    let mut anchors = Vec::with_capacity(config.num_legs);
    let mut clearance = 0.0;
    for leg in 0..config.num_legs {
        let range = leg * jpl..(leg + 1) * jpl;
        let before = config.foot_in_body(leg, &state.joints[range.clone()]);
        let world = Vector3::from(state.position) + rot * Vector3::from(before);
        let ground = terrain.height_at(world.x, world.y);
        if world.z > ground + tol {
            continue;
        }
        let after = config.foot_in_body(leg, &next.joints[range]);
        shift_x += after[0] - before[0];
        shift_y += after[1] - before[1];
        let cross = before[0] * after[1] - before[1] * after[0];
        let dot = before[0] * after[0] + before[1] * after[1];
        turn += cross.atan2(dot);
        let (sy, cy) = state.orientation[2].sin_cos();
        let dx = world.x - state.position[0];
        let dy = world.y - state.position[1];
        anchors.push((cy * dx + sy * dy, -sy * dx + cy * dy, ground));
        clearance += config.nominal_clearance(leg);
    }

    if anchors.is_empty() {
        next.position[2] -= config.gravity_drop;
    } else {
        let n = anchors.len() as f64;
        let (bx, by) = (-shift_x / n, -shift_y / n);
        let (sy, cy) = state.orientation[2].sin_cos();
        next.position[0] += cy * bx - sy * by;
        next.position[1] += sy * bx + cy * by;
        next.orientation[2] = wrap_angle(state.orientation[2] - turn / n);

        let (roll_t, pitch_t) = stance_tilt(&anchors);
        next.orientation[0] += TILT_RELAX * (roll_t - state.orientation[0]);
        next.orientation[1] += TILT_RELAX * (pitch_t - state.orientation[1]);

        let ground = anchors.iter().map(|a| a.2).sum::<f64>() / n;
        let target = ground + clearance / n;
        next.position[2] += HEIGHT_RELAX * (target - state.position[2]);
    }
    next.step = state.step + 1;
    if !next.is_finite() {
        return Err(Error::SimulationFault { step: state.step, reason: "non-finite walker state".into() });
    }
    next.contacts = contacts_of(config, terrain, &next);
    let reward = reward_terms(next.position[0] - state.position[0], &next);
    Ok((next, reward))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beetle() -> Scenario {
        Scenario::flat(WalkerConfig::beetle()).unwrap()
    }

    #[test]
    fn observation_sizes() {
        assert_eq!(WalkerConfig::beetle().observation_size(), 27);
        assert_eq!(WalkerConfig::gecko().observation_size(), 23);
        assert_eq!(WalkerConfig::gecko().joint_count(), 16);
    }

    #[test]
    fn reset_feet_on_flat_ground() {
        for config in [WalkerConfig::beetle(), WalkerConfig::gecko()] {
            let s = Scenario::flat(config).unwrap();
            let state = s.reset();
            assert!(state.contacts.iter().all(|&c| c));
            assert_eq!(state.orientation, [0.0; 3]);
            assert_eq!(&state.position[..2], &[0.0, 0.0]);
            let obs = observe(&state);
            assert_eq!(obs.len(), s.config.observation_size());
            assert_eq!(&obs[obs.len() - 3..], &[0.0, 0.0, 0.0]);
            assert_eq!(state, s.reset());
        }
    }

    #[test]
    fn contact_flags_are_binary() {
        let s = beetle();
        let mut state = s.reset();
        let mut action = vec![0.0; 18];
        action[1] = 1.0;
        action[4] = -1.0;
        for _ in 0..5 {
            state = s.step(&state, &action).unwrap().0;
        }
        let obs = observe(&state);
        assert!(obs[18..24].iter().all(|c| *c == 0.0 || *c == 1.0));
        assert!(!state.contacts[0], "lifted leg should lose contact");
    }

    #[test]
    fn stationary_action_zero_reward() {
        let s = beetle();
        let state = s.reset();
        let (next, r) = s.step(&state, &state.joints.clone()).unwrap();
        assert_eq!(r.total(), 0.0);
        assert_eq!(next.position, state.position);
    }

    #[test]
    fn penalties() {
        let mut state = beetle().reset();
        state.orientation = [0.5, 0.0, 0.0];
        assert!(state.upright_projection() <= UPRIGHT_THRESHOLD);
        assert_eq!(reward_terms(0.0, &state).total(), -0.25);
        state.orientation = [0.0, 0.0, 0.5];
        let r = reward_terms(0.0, &state);
        assert_eq!(r.heading, -0.5);
        assert_eq!(r.total(), -0.25);
        state.orientation = [0.0, 0.0, -0.44];
        assert_eq!(reward_terms(0.1, &state).total(), 0.2);
    }

    #[test]
    fn retracting_stance_legs_moves_forward() {
        let s = beetle();
        let state = s.reset();
        let (next, r) = s.step(&state, &vec![-1.0, 0.0, 0.0].repeat(6)).unwrap();
        assert!(next.position[0] > 0.0);
        assert!(next.position[1].abs() < 1e-12);
        assert!(next.orientation[2].abs() < 1e-12);
        assert!(r.total() > 0.0);
    }

    #[test]
    fn frozen_legs_hold_posture() {
        let config = WalkerConfig::beetle();
        let damage = DamageSpec::preset("lf_rf", &config).unwrap();
        assert_eq!(damage.frozen_legs.iter().copied().collect::<Vec<_>>(), vec![0, 3]);
        let s = Scenario::new(config, Terrain::flat(), damage).unwrap();
        let mut state = s.reset();
        for t in 0..40 {
            let a: Vec<f64> = (0..18).map(|j| ((t + j) as f64 * 0.7).sin()).collect();
            state = s.step(&state, &a).unwrap().0;
            assert!(state.joints[0..3].iter().all(|q| *q == 0.0));
            assert!(state.joints[9..12].iter().all(|q| *q == 0.0));
        }
        assert!(DamageSpec::preset("xx", &s.config).is_err());
    }

    #[test]
    fn no_stance_drops_body() {
        let s = beetle();
        let mut state = s.reset();
        state.position[2] += 1.0;
        let (next, _) = s.step(&state, &state.joints.clone()).unwrap();
        assert!((next.position[2] - (state.position[2] - 0.05)).abs() < 1e-15);
    }

    #[test]
    fn bad_action_length() {
        let s = beetle();
        assert!(matches!(s.step(&s.reset(), &[0.0; 3]), Err(Error::Input(_))));
    }

    #[test]
    fn blocks_tilt_body() {
        let config = WalkerConfig::gecko();
        let terrain = make_terrain(TerrainKind::Blocks, 0.04, 3).unwrap();
        let s = Scenario::new(config, terrain, DamageSpec::none()).unwrap();
        let mut state = s.reset();
        for t in 0..60 {
            let a: Vec<f64> = (0..16).map(|j| ((t as f64) * 0.3 + j as f64).sin()).collect();
            state = s.step(&state, &a).unwrap().0;
        }
        assert!(state.orientation[0] != 0.0 || state.orientation[1] != 0.0);
    }

    #[test]
    fn wrap() {
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert_eq!(wrap_angle(0.3), 0.3);
    }
}
