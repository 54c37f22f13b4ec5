//! Static feedforward and LSTM baseline controllers.

use rand::Rng;

use crate::error::{Error, Result};
use crate::plastic::{synapse_count, ActivationTrace, LayerShape, WeightState};
use crate::rng::rng_from_seed;

/// Open bound of the uniform initialization of FF and LSTM weights.
pub const BASELINE_INIT_BOUND: f64 = 0.1;
/// Open bound of the uniform initialization of LSTM hidden and cell states.
pub const LSTM_STATE_INIT_BOUND: f64 = 0.01;

/// Draws `n` values i.i.d. uniform on the open interval `(-bound, bound)`.
pub fn uniform_open(n: usize, bound: f64, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|_| {
            let mut u: f64 = rng.random();
            while u == 0.0 {
                u = rng.random();
            }
            bound * (2.0 * u - 1.0)
        })
        .collect()
}

/// Feedforward tanh network with fixed weights.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticFFNetwork {
    weights: WeightState,
    trace: ActivationTrace,
}

impl StaticFFNetwork {
    pub fn new(weights: WeightState) -> Self {
        let trace = ActivationTrace::for_chain(weights.shapes());
        Self { weights, trace }
    }

    pub fn from_genome(chain: &[LayerShape], genome: &[f64]) -> Result<Self> {
        Ok(Self::new(WeightState::from_flat(chain, genome)?))
    }

    pub fn genome_len(chain: &[LayerShape]) -> usize {
        synapse_count(chain)
    }

    pub fn weights(&self) -> &WeightState {
        &self.weights
    }

    pub fn forward(&mut self, observation: &[f64]) -> Result<&[f64]> {
        self.weights.forward_into(observation, &mut self.trace)?;
        Ok(self.trace.output())
    }
}

/// Stateless form of [`StaticFFNetwork::forward`].
pub fn ff_forward(net: &StaticFFNetwork, observation: &[f64]) -> Result<Vec<f64>> {
    let (action, _) = crate::plastic::forward(&net.weights, observation)?;
    Ok(action)
}

/// Sizes of an LSTM controller.
///
/// Parameters, in genome order:
/// * `W`: `4H × I` input weights,
/// * `U`: `4H × H` recurrent weights,
/// * `b`: `4H` gate biases,
/// * `V`: `O × (H + I)` output map over `[h; x]`, without bias.
///
/// Gate rows are ordered input, forget, candidate, output. For `I = 27`,
/// `H = 60`, `O = 18` this is `21,120 + 1,566 = 22,686` parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LstmShape {
    pub input_size: usize,
    pub hidden_size: usize,
    pub output_size: usize,
}

impl LstmShape {
    pub fn new(input_size: usize, hidden_size: usize, output_size: usize) -> Result<Self> {
        if input_size == 0 || hidden_size == 0 || output_size == 0 {
            return Err(Error::Config("LSTM sizes must all be positive".into()));
        }
        Ok(Self { input_size, hidden_size, output_size })
    }

    fn gate_rows(&self) -> usize {
        4 * self.hidden_size
    }

    pub fn cell_params(&self) -> usize {
        self.gate_rows() * (self.input_size + self.hidden_size + 1)
    }

    pub fn readout_params(&self) -> usize {
        self.output_size * (self.hidden_size + self.input_size)
    }

    pub fn param_count(&self) -> usize {
        self.cell_params() + self.readout_params()
    }

    /// Hidden plus cell state values.
    pub fn state_len(&self) -> usize {
        2 * self.hidden_size
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LSTMNetwork {
    shape: LstmShape,
    w_in: Vec<f64>,
    w_rec: Vec<f64>,
    bias: Vec<f64>,
    readout: Vec<f64>,
    hidden: Vec<f64>,
    cell: Vec<f64>,
    gates: Vec<f64>,
    joined: Vec<f64>,
    action: Vec<f64>,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl LSTMNetwork {
    pub fn from_genome(shape: LstmShape, genome: &[f64]) -> Result<Self> {
        if genome.len() != shape.param_count() {
            return Err(Error::Config(format!(
                "LSTM genome has length {}, expected {}",
                genome.len(),
                shape.param_count()
            )));
        }
        let g = shape.gate_rows();
        let (w_in, rest) = genome.split_at(g * shape.input_size);
        let (w_rec, rest) = rest.split_at(g * shape.hidden_size);
        let (bias, readout) = rest.split_at(g);
        Ok(Self {
            shape,
            w_in: w_in.to_vec(),
            w_rec: w_rec.to_vec(),
            bias: bias.to_vec(),
            readout: readout.to_vec(),
            hidden: vec![0.0; shape.hidden_size],
            cell: vec![0.0; shape.hidden_size],
            gates: vec![0.0; g],
            joined: vec![0.0; shape.hidden_size + shape.input_size],
            action: vec![0.0; shape.output_size],
        })
    }

    pub fn shape(&self) -> LstmShape {
        self.shape
    }

    pub fn to_genome(&self) -> Vec<f64> {
        [&self.w_in, &self.w_rec, &self.bias, &self.readout]
            .into_iter()
            .flat_map(|v| v.iter().copied())
            .collect()
    }

    pub fn hidden(&self) -> &[f64] {
        &self.hidden
    }

    pub fn cell(&self) -> &[f64] {
        &self.cell
    }

    pub fn set_states(&mut self, hidden: &[f64], cell: &[f64]) -> Result<()> {
        let h = self.shape.hidden_size;
        if hidden.len() != h || cell.len() != h {
            return Err(Error::Input(format!("LSTM states must both have length {h}")));
        }
        self.hidden.copy_from_slice(hidden);
        self.cell.copy_from_slice(cell);
        Ok(())
    }

    /// Re-initializes hidden and cell states from `seed`.
    pub fn reset(&mut self, seed: u64) {
        let (h, c) = init_lstm_states(self.shape.hidden_size, seed);
        self.hidden = h;
        self.cell = c;
    }

    /// Advances the recurrence one step and returns `tanh(V [h; x])`.
    pub fn forward(&mut self, observation: &[f64]) -> Result<&[f64]> {
        let LstmShape { input_size: ni, hidden_size: nh, .. } = self.shape;
        if observation.len() != ni {
            return Err(Error::Input(format!(
                "observation has length {}, LSTM expects {ni}",
                observation.len()
            )));
        }
        for (r, z) in self.gates.iter_mut().enumerate() {
            let wx: f64 =
                self.w_in[r * ni..(r + 1) * ni].iter().zip(observation).map(|(w, x)| w * x).sum();
            let uh: f64 =
                self.w_rec[r * nh..(r + 1) * nh].iter().zip(&self.hidden).map(|(u, h)| u * h).sum();
            *z = wx + uh + self.bias[r];
        }
        for k in 0..nh {
            let i = sigmoid(self.gates[k]);
            let f = sigmoid(self.gates[nh + k]);
            let g = self.gates[2 * nh + k].tanh();
            let o = sigmoid(self.gates[3 * nh + k]);
            self.cell[k] = f * self.cell[k] + i * g;
            self.hidden[k] = o * self.cell[k].tanh();
        }
        self.joined[..nh].copy_from_slice(&self.hidden);
        self.joined[nh..].copy_from_slice(observation);
        let width = nh + ni;
        for (j, y) in self.action.iter_mut().enumerate() {
            let z: f64 =
                self.readout[j * width..(j + 1) * width].iter().zip(&self.joined).map(|(v, x)| v * x).sum();
            *y = z.tanh();
        }
        Ok(&self.action)
    }
}

/// Forward step returning an owned action; the network's states advance.
pub fn lstm_forward(net: &mut LSTMNetwork, observation: &[f64]) -> Result<Vec<f64>> {
    net.forward(observation).map(<[f64]>::to_vec)
}

/// Hidden and cell states drawn uniformly from `(-0.01, 0.01)`.
pub fn init_lstm_states(hidden_size: usize, rng_seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut v = uniform_open(2 * hidden_size, LSTM_STATE_INIT_BOUND, rng_seed);
    let cell = v.split_off(hidden_size);
    (v, cell)
}
