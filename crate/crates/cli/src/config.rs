//! Run configuration files (TOML).
//!
//! ```toml
//! master_seed = 7
//! policy = "hebbian"        # ff | hebbian | lstm
//! normalization = "max"     # max | std
//! topology = "beetle"       # beetle | gecko | custom
//! out_dir = "runs/beetle-max"
//!
//! [es]
//! scale = "desk"            # desk (256 x 150) | full (1024 x 500)
//! generations = 150
//!
//! [terrain]
//! kind = "flat"             # flat | blocks
//!
//! [damage]
//! preset = "none"           # none | lf | rh | lf_rf | ...
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use plasticwalk::rng::{derive_seed, Stream};
use plasticwalk::walker::{make_terrain, DamageSpec, DynamicsPerturbation, Scenario, Terrain, TerrainKind, WalkerConfig};
use plasticwalk::{EsConfig, Normalization, PolicyKind, PolicySpec, UpdateRule};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Beetle,
    Gecko,
    Custom,
}

impl Topology {
    pub fn as_str(self) -> &'static str {
        match self {
            Topology::Beetle => "beetle",
            Topology::Gecko => "gecko",
            Topology::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EsScale {
    #[default]
    Desk,
    Full,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EsSection {
    #[serde(default)]
    pub scale: EsScale,
    pub population_size: Option<usize>,
    pub generations: Option<usize>,
    pub alpha: Option<f64>,
    pub sigma: Option<f64>,
    pub decay: Option<f64>,
    pub episodes_per_eval: Option<usize>,
    pub workers: Option<usize>,
    pub update: Option<UpdateRule>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkerSection {
    pub num_legs: Option<usize>,
    pub joints_per_leg: Option<usize>,
    pub segment_lengths: Option<Vec<f64>>,
    pub hip_positions: Option<Vec<[f64; 2]>>,
    pub leg_names: Option<Vec<String>>,
    pub max_joint_rate: Option<f64>,
    pub episode_steps: Option<usize>,
    pub contact_tolerance: Option<f64>,
    pub gravity_drop: Option<f64>,
    /// `none` or `asymmetric`.
    pub perturbation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TerrainSection {
    #[serde(default = "flat_kind")]
    pub kind: TerrainKind,
    #[serde(default = "default_h_max")]
    pub h_max: f64,
    /// Defaults to a seed derived from `master_seed`.
    pub seed: Option<u64>,
}

fn flat_kind() -> TerrainKind {
    TerrainKind::Flat
}

fn default_h_max() -> f64 {
    plasticwalk::walker::DEFAULT_BLOCK_HEIGHT
}

impl Default for TerrainSection {
    fn default() -> Self {
        Self { kind: TerrainKind::Flat, h_max: default_h_max(), seed: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DamageSection {
    pub preset: Option<String>,
    pub posture: Option<Vec<f64>>,
}

/// The file as written, before presets are applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub master_seed: Option<u64>,
    /// Name used in comparison tables; defaults to the file stem.
    pub label: Option<String>,
    pub policy: PolicyKind,
    #[serde(default = "max_norm")]
    pub normalization: Normalization,
    pub topology: Topology,
    pub out_dir: Option<PathBuf>,
    #[serde(default = "default_interval")]
    pub checkpoint_interval: usize,
    /// Write measured wall time in the generation log instead of 0.
    #[serde(default)]
    pub log_wall_time: bool,
    #[serde(default)]
    pub es: EsSection,
    #[serde(default)]
    pub walker: WalkerSection,
    #[serde(default)]
    pub terrain: TerrainSection,
    #[serde(default)]
    pub damage: DamageSection,
}

fn max_norm() -> Normalization {
    Normalization::Max
}

fn default_interval() -> usize {
    10
}

/// A configuration with presets applied and every value checked.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub label: String,
    pub master_seed: u64,
    pub topology: Topology,
    pub spec: PolicySpec,
    pub es: EsConfig,
    pub walker: WalkerConfig,
    pub terrain: TerrainSection,
    pub damage: DamageSpec,
    pub out_dir: PathBuf,
    pub checkpoint_interval: usize,
    pub log_wall_time: bool,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    pub fn resolve(&self, default_label: &str) -> Result<ResolvedConfig> {
        let cfg = |m: String| HarnessError::Config(m);
        let master_seed = self
            .master_seed
            .ok_or_else(|| cfg("missing required key `master_seed` (runs are never seeded from the clock)".into()))?;

        let mut walker = match self.topology {
            Topology::Beetle | Topology::Custom => WalkerConfig::beetle(),
            Topology::Gecko => WalkerConfig::gecko(),
        };
        let w = &self.walker;
        if self.topology == Topology::Custom {
            for (key, given) in [
                ("num_legs", w.num_legs.is_some()),
                ("joints_per_leg", w.joints_per_leg.is_some()),
                ("segment_lengths", w.segment_lengths.is_some()),
                ("hip_positions", w.hip_positions.is_some()),
                ("leg_names", w.leg_names.is_some()),
            ] {
                if !given {
                    return Err(cfg(format!("topology = \"custom\" requires `walker.{key}`")));
                }
            }
        }
        if let Some(v) = w.num_legs {
            walker.num_legs = v;
        }
        if let Some(v) = w.joints_per_leg {
            walker.joints_per_leg = v;
        }
        if let Some(v) = &w.segment_lengths {
            walker.segment_lengths = v.clone();
        }
        if let Some(v) = &w.hip_positions {
            walker.hip_positions = v.clone();
        }
        if let Some(v) = &w.leg_names {
            walker.leg_names = v.clone();
        }
        if let Some(v) = w.max_joint_rate {
            walker.max_joint_rate = v;
        }
        if let Some(v) = w.episode_steps {
            walker.episode_steps = v;
        }
        if let Some(v) = w.contact_tolerance {
            walker.contact_tolerance = v;
        }
        if let Some(v) = w.gravity_drop {
            walker.gravity_drop = v;
        }
        match w.perturbation.as_deref() {
            None | Some("none") => {}
            Some("asymmetric") => walker.perturbation = DynamicsPerturbation::asymmetric(&walker),
            Some(other) => {
                return Err(cfg(format!("walker.perturbation: unknown value {other:?} (expected none or asymmetric)")))
            }
        }
        walker.validate().map_err(|e| cfg(format!("walker: {e}")))?;

        let mut damage = DamageSpec::preset(self.damage.preset.as_deref().unwrap_or("none"), &walker)
            .map_err(|e| cfg(format!("damage.preset: {e}")))?;
        if let Some(p) = &self.damage.posture {
            damage.frozen_posture = p.clone();
        }
        damage.validate(&walker).map_err(|e| cfg(format!("damage: {e}")))?;

        if !(self.terrain.h_max >= 0.0) {
            return Err(cfg(format!("terrain.h_max must be >= 0, got {}", self.terrain.h_max)));
        }

        let (pop, gens) = match self.es.scale {
            EsScale::Desk => (256, 150),
            EsScale::Full => (1024, 500),
        };
        let e = &self.es;
        let es = EsConfig {
            population_size: e.population_size.unwrap_or(pop),
            generations: e.generations.unwrap_or(gens),
            alpha: e.alpha.unwrap_or(0.1),
            sigma: e.sigma.unwrap_or(0.1),
            decay: e.decay.unwrap_or(0.999),
            master_seed,
            episodes_per_eval: e.episodes_per_eval.unwrap_or(1),
            workers: e.workers.unwrap_or(0),
            update: e.update.unwrap_or_default(),
        };
        es.validate().map_err(|e| cfg(format!("es: {e}")))?;
        if self.checkpoint_interval == 0 {
            return Err(cfg("checkpoint_interval must be at least 1".into()));
        }

        let spec = PolicySpec::new(self.policy, self.normalization, walker.observation_size(), walker.joint_count());
        Ok(ResolvedConfig {
            label: self.label.clone().unwrap_or_else(|| default_label.to_string()),
            master_seed,
            topology: self.topology,
            spec,
            es,
            walker,
            terrain: self.terrain.clone(),
            damage,
            out_dir: self.out_dir.clone().unwrap_or_else(|| PathBuf::from("runs").join(default_label)),
            checkpoint_interval: self.checkpoint_interval,
            log_wall_time: self.log_wall_time,
        })
    }
}

/// Loads and resolves a config file; the label defaults to the file stem.
pub fn load_config(path: &Path) -> Result<ResolvedConfig> {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
    RunConfig::load(path)?.resolve(stem)
}

impl ResolvedConfig {
    /// Terrain for evaluation seed `index`; without an explicit seed every
    /// index gets its own block layout.
    pub fn terrain_for(&self, section: &TerrainSection, index: u64) -> Result<Terrain> {
        let seed = section.seed.unwrap_or_else(|| derive_seed(self.master_seed, Stream::Terrain, &[index]));
        Ok(make_terrain(section.kind, section.h_max, seed)?)
    }

    /// The training scenario.
    pub fn scenario(&self) -> Result<Scenario> {
        Ok(Scenario::new(self.walker.clone(), self.terrain_for(&self.terrain, 0)?, self.damage.clone())?)
    }

    pub fn init_seed(&self) -> u64 {
        derive_seed(self.master_seed, Stream::Init, &[])
    }

    /// Seed of evaluation episode `index`; index 0 is the seed used to score
    /// the center genome during training.
    pub fn eval_seed(&self, index: u64) -> u64 {
        derive_seed(self.master_seed, Stream::Eval, &[index])
    }

    /// SHA-256 over everything that shapes the training trajectory. Run
    /// length, worker count and output settings are left out so a run can be
    /// extended or resumed elsewhere.
    pub fn config_hash(&self) -> String {
        #[derive(Serialize)]
        struct Hashed<'a> {
            master_seed: u64,
            policy: PolicyKind,
            normalization: Normalization,
            population_size: usize,
            alpha: f64,
            sigma: f64,
            decay: f64,
            episodes_per_eval: usize,
            update: UpdateRule,
            walker: &'a WalkerConfig,
            terrain: &'a TerrainSection,
            damage: &'a DamageSpec,
        }
        let h = Hashed {
            master_seed: self.master_seed,
            policy: self.spec.kind,
            normalization: self.spec.normalization,
            population_size: self.es.population_size,
            alpha: self.es.alpha,
            sigma: self.es.sigma,
            decay: self.es.decay,
            episodes_per_eval: self.es.episodes_per_eval,
            update: self.es.update,
            walker: &self.walker,
            terrain: &self.terrain,
            damage: &self.damage,
        };
        let bytes = serde_json::to_vec(&h).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}
