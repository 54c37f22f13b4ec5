//! Hebbian-plastic locomotion controllers trained by evolution strategies.
//!
//! The crate contains the plastic network and its ABCD learning rule, static
//! feed-forward and LSTM baselines, an evolution-strategies trainer, a
//! kinematic legged walker with terrain and damage, and tools for analysing
//! recorded weight trajectories.

pub mod analysis;
pub mod baseline;
pub mod episode;
pub mod error;
pub mod es;
pub mod plastic;
pub mod policy;
pub mod rng;
pub mod walker;

pub use baseline::{LSTMNetwork, LstmShape, StaticFFNetwork};
pub use episode::{run_episode, EpisodeOptions, EpisodeOutcome, WalkerObjective};
pub use error::{Error, Result};
pub use es::{train, EsConfig, Evaluation, GenerationRecord, Objective, TrainRun, Trainer, TrainerState, UpdateRule};
pub use plastic::{HebbianRuleSet, LayerShape, Normalization, PlasticNetwork, WeightState};
pub use policy::{Controller, Policy, PolicyKind, PolicySpec};
pub use rng::{derive_seed, Stream};
pub use walker::{DamageSpec, Scenario, Terrain, TerrainKind, WalkerConfig, WalkerState};
