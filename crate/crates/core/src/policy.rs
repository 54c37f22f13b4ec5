//! Controllers that can drive the walker, and how to build them from genomes.

use serde::{Deserialize, Serialize};

use crate::baseline::{uniform_open, LSTMNetwork, LstmShape, StaticFFNetwork, BASELINE_INIT_BOUND};
use crate::error::{Error, Result};
use crate::plastic::{
    chain_from_sizes, init_rule_genome, synapse_count, HebbianRuleSet, LayerShape, Normalization,
    PlasticNetwork,
};

/// Hidden layer sizes of the FF and Hebbian networks.
pub const HIDDEN_LAYERS: [usize; 2] = [64, 32];
/// Hidden state size of the LSTM.
pub const LSTM_HIDDEN: usize = 60;

/// A closed-loop controller. `act` may mutate plastic state.
pub trait Policy: Send {
    /// Re-initializes the plastic state (weights or recurrent states).
    fn reset(&mut self, seed: u64);

    fn act(&mut self, observation: &[f64]) -> Result<&[f64]>;

    /// Number of values that change while acting.
    fn plastic_len(&self) -> usize;

    /// Appends the current plastic values to `out`.
    fn write_plastic(&self, out: &mut Vec<f64>);
}

impl Policy for PlasticNetwork {
    fn reset(&mut self, seed: u64) {
        PlasticNetwork::reset(self, seed);
    }

    fn act(&mut self, observation: &[f64]) -> Result<&[f64]> {
        self.step(observation)
    }

    fn plastic_len(&self) -> usize {
        self.weights().len()
    }

    fn write_plastic(&self, out: &mut Vec<f64>) {
        self.weights().flatten_into(out);
    }
}

impl Policy for StaticFFNetwork {
    fn reset(&mut self, _seed: u64) {}

    fn act(&mut self, observation: &[f64]) -> Result<&[f64]> {
        self.forward(observation)
    }

    fn plastic_len(&self) -> usize {
        0
    }

    fn write_plastic(&self, _out: &mut Vec<f64>) {}
}

impl Policy for LSTMNetwork {
    fn reset(&mut self, seed: u64) {
        LSTMNetwork::reset(self, seed);
    }

    fn act(&mut self, observation: &[f64]) -> Result<&[f64]> {
        self.forward(observation)
    }

    fn plastic_len(&self) -> usize {
        self.shape().state_len()
    }

    fn write_plastic(&self, out: &mut Vec<f64>) {
        out.extend_from_slice(self.hidden());
        out.extend_from_slice(self.cell());
    }
}

/// Emits the same action forever; handy for environment checks.
#[derive(Debug, Clone)]
pub struct ConstantPolicy(pub Vec<f64>);

impl Policy for ConstantPolicy {
    fn reset(&mut self, _seed: u64) {}

    fn act(&mut self, _observation: &[f64]) -> Result<&[f64]> {
        Ok(&self.0)
    }

    fn plastic_len(&self) -> usize {
        0
    }

    fn write_plastic(&self, _out: &mut Vec<f64>) {}
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Ff,
    Hebbian,
    Lstm,
}

impl PolicyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Ff => "ff",
            PolicyKind::Hebbian => "hebbian",
            PolicyKind::Lstm => "lstm",
        }
    }
}

/// Everything needed to turn a genome into a controller.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    pub normalization: Normalization,
    pub observation_size: usize,
    pub action_size: usize,
}

/// One of the three controller families.
#[derive(Debug, Clone)]
pub enum Controller {
    Ff(StaticFFNetwork),
    Hebbian(PlasticNetwork),
    Lstm(LSTMNetwork),
}

impl Policy for Controller {
    fn reset(&mut self, seed: u64) {
        match self {
            Controller::Ff(p) => Policy::reset(p, seed),
            Controller::Hebbian(p) => Policy::reset(p, seed),
            Controller::Lstm(p) => Policy::reset(p, seed),
        }
    }

    fn act(&mut self, observation: &[f64]) -> Result<&[f64]> {
        match self {
            Controller::Ff(p) => p.act(observation),
            Controller::Hebbian(p) => p.act(observation),
            Controller::Lstm(p) => p.act(observation),
        }
    }

    fn plastic_len(&self) -> usize {
        match self {
            Controller::Ff(p) => p.plastic_len(),
            Controller::Hebbian(p) => p.plastic_len(),
            Controller::Lstm(p) => p.plastic_len(),
        }
    }

    fn write_plastic(&self, out: &mut Vec<f64>) {
        match self {
            Controller::Ff(p) => p.write_plastic(out),
            Controller::Hebbian(p) => p.write_plastic(out),
            Controller::Lstm(p) => p.write_plastic(out),
        }
    }
}

impl PolicySpec {
    pub fn new(kind: PolicyKind, normalization: Normalization, observation_size: usize, action_size: usize) -> Self {
        Self { kind, normalization, observation_size, action_size }
    }

    /// Layer chain of the FF and Hebbian networks.
    pub fn chain(&self) -> Result<Vec<LayerShape>> {
        let sizes = [self.observation_size, HIDDEN_LAYERS[0], HIDDEN_LAYERS[1], self.action_size];
        chain_from_sizes(&sizes)
    }

    pub fn lstm_shape(&self) -> Result<LstmShape> {
        LstmShape::new(self.observation_size, LSTM_HIDDEN, self.action_size)
    }

    /// Number of evolved parameters.
    pub fn genome_len(&self) -> Result<usize> {
        Ok(match self.kind {
            PolicyKind::Ff => StaticFFNetwork::genome_len(&self.chain()?),
            PolicyKind::Hebbian => HebbianRuleSet::genome_len(&self.chain()?),
            PolicyKind::Lstm => self.lstm_shape()?.param_count(),
        })
    }

    /// Number of values that change during an episode.
    pub fn plastic_len(&self) -> Result<usize> {
        Ok(match self.kind {
            PolicyKind::Ff => 0,
            PolicyKind::Hebbian => synapse_count(&self.chain()?),
            PolicyKind::Lstm => self.lstm_shape()?.state_len(),
        })
    }

    /// Starting genome: N(0, 0.01²) rules for Hebbian, U(-0.1, 0.1) otherwise.
    pub fn init_genome(&self, seed: u64) -> Result<Vec<f64>> {
        Ok(match self.kind {
            PolicyKind::Hebbian => init_rule_genome(&self.chain()?, seed),
            _ => uniform_open(self.genome_len()?, BASELINE_INIT_BOUND, seed),
        })
    }

    pub fn build(&self, genome: &[f64]) -> Result<Controller> {
        let expected = self.genome_len()?;
        if genome.len() != expected {
            return Err(Error::Config(format!(
                "{} genome has length {}, expected {expected}",
                self.kind.as_str(),
                genome.len()
            )));
        }
        Ok(match self.kind {
            PolicyKind::Ff => Controller::Ff(StaticFFNetwork::from_genome(&self.chain()?, genome)?),
            PolicyKind::Hebbian => {
                Controller::Hebbian(PlasticNetwork::from_genome(&self.chain()?, genome, self.normalization)?)
            }
            PolicyKind::Lstm => Controller::Lstm(LSTMNetwork::from_genome(self.lstm_shape()?, genome)?),
        })
    }
}
