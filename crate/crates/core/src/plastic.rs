//! Feedforward network whose weights change online under a per-synapse ABCD
//! Hebbian rule, plus the two layer-wise weight normalizations.
//!
//! Weight matrices are stored row-major as `output × input`, so synapse
//! `(i -> j)` of a layer lives at index `j * input_size + i`. Every layer uses
//! `tanh` and there are no bias neurons.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Open bound of the uniform weight initialization of a Hebbian network.
pub const HEBBIAN_INIT_BOUND: f64 = 0.01;
/// Standard deviation of the initial Hebbian coefficients (A, B, C, D, eta).
pub const RULE_INIT_STD: f64 = 0.01;
/// Scalars per synapse in a Hebbian genome.
pub const RULE_ARITY: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerShape {
    pub input_size: usize,
    pub output_size: usize,
}

impl LayerShape {
    pub fn new(input_size: usize, output_size: usize) -> Result<Self> {
        if input_size == 0 || output_size == 0 {
            return Err(Error::Config(format!(
                "layer shape {input_size}x{output_size} has an empty side"
            )));
        }
        Ok(Self { input_size, output_size })
    }

    pub fn synapses(&self) -> usize {
        self.input_size * self.output_size
    }
}

/// Builds the layer chain for a list of neuron counts, e.g. `[27, 64, 32, 18]`.
pub fn chain_from_sizes(sizes: &[usize]) -> Result<Vec<LayerShape>> {
    if sizes.len() < 2 {
        return Err(Error::Config("a network needs at least an input and an output size".into()));
    }
    sizes.windows(2).map(|w| LayerShape::new(w[0], w[1])).collect()
}

pub fn validate_chain(chain: &[LayerShape]) -> Result<()> {
    if chain.is_empty() {
        return Err(Error::Config("empty layer chain".into()));
    }
    for (k, s) in chain.iter().enumerate() {
        if s.input_size == 0 || s.output_size == 0 {
            return Err(Error::Config(format!("layer {k} has an empty side")));
        }
    }
    for (k, w) in chain.windows(2).enumerate() {
        if w[0].output_size != w[1].input_size {
            return Err(Error::Config(format!(
                "layer {k} outputs {} values but layer {} expects {}",
                w[0].output_size,
                k + 1,
                w[1].input_size
            )));
        }
    }
    Ok(())
}

pub fn synapse_count(chain: &[LayerShape]) -> usize {
    chain.iter().map(LayerShape::synapses).sum()
}

/// Synaptic weights of every layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightState {
    shapes: Vec<LayerShape>,
    layers: Vec<Vec<f64>>,
}

impl WeightState {
    pub fn zeros(chain: &[LayerShape]) -> Result<Self> {
        validate_chain(chain)?;
        Ok(Self {
            shapes: chain.to_vec(),
            layers: chain.iter().map(|s| vec![0.0; s.synapses()]).collect(),
        })
    }

    /// Wraps explicit per-layer weights, checking lengths against the chain.
    pub fn from_layers(chain: &[LayerShape], layers: Vec<Vec<f64>>) -> Result<Self> {
        validate_chain(chain)?;
        if layers.len() != chain.len() {
            return Err(Error::Config(format!(
                "{} weight layers for a {}-layer chain",
                layers.len(),
                chain.len()
            )));
        }
        for (k, (s, l)) in chain.iter().zip(&layers).enumerate() {
            if l.len() != s.synapses() {
                return Err(Error::Config(format!(
                    "layer {k} has {} weights, expected {}",
                    l.len(),
                    s.synapses()
                )));
            }
        }
        Ok(Self { shapes: chain.to_vec(), layers })
    }

    /// Unpacks a flat, layer-ordered weight vector.
    pub fn from_flat(chain: &[LayerShape], flat: &[f64]) -> Result<Self> {
        validate_chain(chain)?;
        if flat.len() != synapse_count(chain) {
            return Err(Error::Config(format!(
                "flat weight vector has length {}, expected {}",
                flat.len(),
                synapse_count(chain)
            )));
        }
        let mut rest = flat;
        let layers = chain
            .iter()
            .map(|s| {
                let (head, tail) = rest.split_at(s.synapses());
                rest = tail;
                head.to_vec()
            })
            .collect();
        Ok(Self { shapes: chain.to_vec(), layers })
    }

    /// Overwrites every weight with an i.i.d. draw from `(-bound, bound)`.
    pub fn fill_uniform(&mut self, bound: f64, seed: u64) {
        let mut rng = rng_from_seed(seed);
        for layer in &mut self.layers {
            for w in layer.iter_mut() {
                // `random::<f64>()` lies in [0, 1); reject the closed endpoint.
                let mut u: f64 = rng.random();
                while u == 0.0 {
                    u = rng.random();
                }
                *w = bound * (2.0 * u - 1.0);
            }
        }
    }

    pub fn shapes(&self) -> &[LayerShape] {
        &self.shapes
    }

    pub fn layers(&self) -> &[Vec<f64>] {
        &self.layers
    }

    pub fn layer(&self, k: usize) -> &[f64] {
        &self.layers[k]
    }

    pub fn layer_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.layers[k]
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers.iter().flat_map(|l| l.iter().copied())
    }

    pub fn flatten_into(&self, out: &mut Vec<f64>) {
        for l in &self.layers {
            out.extend_from_slice(l);
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.len());
        self.flatten_into(&mut v);
        v
    }

    pub fn input_size(&self) -> usize {
        self.shapes[0].input_size
    }

    pub fn output_size(&self) -> usize {
        self.shapes[self.shapes.len() - 1].output_size
    }

    /// Forward pass writing every layer's activations into `trace`.
    pub fn forward_into(&self, observation: &[f64], trace: &mut ActivationTrace) -> Result<()> {
        if observation.len() != self.input_size() {
            return Err(Error::Input(format!(
                "observation has length {}, network expects {}",
                observation.len(),
                self.input_size()
            )));
        }
        trace.ensure_shapes(&self.shapes);
        trace.activations[0].copy_from_slice(observation);
        for (k, (shape, w)) in self.shapes.iter().zip(&self.layers).enumerate() {
            let (before, after) = trace.activations.split_at_mut(k + 1);
            let input = &before[k];
            let output = &mut after[0];
            for (j, out) in output.iter_mut().enumerate() {
                let row = &w[j * shape.input_size..(j + 1) * shape.input_size];
                let z = dot(row, input);
                *out = z.tanh();
            }
        }
        Ok(())
    }
}

/// Randomly initialized Hebbian weights, uniform in `(-0.01, 0.01)`.
pub fn init_weights(chain: &[LayerShape], rng_seed: u64) -> Result<WeightState> {
    let mut w = WeightState::zeros(chain)?;
    w.fill_uniform(HEBBIAN_INIT_BOUND, rng_seed);
    Ok(w)
}

/// Activations seen on one forward pass: `activations[0]` is the observation
/// and `activations[k + 1]` is the output of layer `k`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ActivationTrace {
    pub activations: Vec<Vec<f64>>,
}

impl ActivationTrace {
    pub fn for_chain(chain: &[LayerShape]) -> Self {
        let mut t = Self::default();
        t.ensure_shapes(chain);
        t
    }

    fn ensure_shapes(&mut self, chain: &[LayerShape]) {
        let ok = self.activations.len() == chain.len() + 1
            && self.activations[0].len() == chain[0].input_size
            && chain.iter().zip(&self.activations[1..]).all(|(s, a)| a.len() == s.output_size);
        if !ok {
            self.activations = std::iter::once(chain[0].input_size)
                .chain(chain.iter().map(|s| s.output_size))
                .map(|n| vec![0.0; n])
                .collect();
        }
    }

    /// Pre-synaptic activations of layer `k`.
    pub fn pre(&self, k: usize) -> &[f64] {
        &self.activations[k]
    }

    /// Post-synaptic activations of layer `k`.
    pub fn post(&self, k: usize) -> &[f64] {
        &self.activations[k + 1]
    }

    pub fn output(&self) -> &[f64] {
        self.activations.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Tanh forward pass returning the action and the activation trace.
pub fn forward(weights: &WeightState, observation: &[f64]) -> Result<(Vec<f64>, ActivationTrace)> {
    let mut trace = ActivationTrace::for_chain(weights.shapes());
    weights.forward_into(observation, &mut trace)?;
    Ok((trace.output().to_vec(), trace))
}

/// ABCD coefficients and learning rate of every synapse in one layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerRules {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub eta: Vec<f64>,
}

impl LayerRules {
    fn zeros(n: usize) -> Self {
        Self {
            a: vec![0.0; n],
            b: vec![0.0; n],
            c: vec![0.0; n],
            d: vec![0.0; n],
            eta: vec![0.0; n],
        }
    }

    fn len(&self) -> usize {
        self.a.len()
    }

    fn blocks(&self) -> [&Vec<f64>; RULE_ARITY] {
        [&self.a, &self.b, &self.c, &self.d, &self.eta]
    }

    fn blocks_mut(&mut self) -> [&mut Vec<f64>; RULE_ARITY] {
        [&mut self.a, &mut self.b, &mut self.c, &mut self.d, &mut self.eta]
    }
}

/// Per-synapse plasticity rules for a whole network.
///
/// Genome layout, layer by layer: the layer's `A` block, then `B`, `C`, `D`
/// and `eta`, each block holding one value per synapse in weight order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HebbianRuleSet {
    shapes: Vec<LayerShape>,
    layers: Vec<LayerRules>,
}

impl HebbianRuleSet {
    pub fn zeros(chain: &[LayerShape]) -> Result<Self> {
        validate_chain(chain)?;
        Ok(Self {
            shapes: chain.to_vec(),
            layers: chain.iter().map(|s| LayerRules::zeros(s.synapses())).collect(),
        })
    }

    pub fn genome_len(chain: &[LayerShape]) -> usize {
        RULE_ARITY * synapse_count(chain)
    }

    pub fn shapes(&self) -> &[LayerShape] {
        &self.shapes
    }

    pub fn layers(&self) -> &[LayerRules] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [LayerRules] {
        &mut self.layers
    }

    /// Number of synapses, i.e. the number of rule 5-tuples.
    pub fn len(&self) -> usize {
        self.layers.iter().map(LayerRules::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Unpacks a flat genome into per-synapse rules.
pub fn genome_to_rules(chain: &[LayerShape], genome: &[f64]) -> Result<HebbianRuleSet> {
    let mut rules = HebbianRuleSet::zeros(chain)?;
    let expected = HebbianRuleSet::genome_len(chain);
    if genome.len() != expected {
        return Err(Error::Config(format!(
            "Hebbian genome has length {}, expected {expected}",
            genome.len()
        )));
    }
    let mut rest = genome;
    for layer in &mut rules.layers {
        let n = layer.len();
        for block in layer.blocks_mut() {
            let (head, tail) = rest.split_at(n);
            block.copy_from_slice(head);
            rest = tail;
        }
    }
    Ok(rules)
}

/// Inverse of [`genome_to_rules`].
pub fn rules_to_genome(rules: &HebbianRuleSet) -> Vec<f64> {
    let mut g = Vec::with_capacity(RULE_ARITY * rules.len());
    for layer in &rules.layers {
        for block in layer.blocks() {
            g.extend_from_slice(block);
        }
    }
    g
}

/// Initial Hebbian genome: every coefficient drawn from N(0, 0.01²).
pub fn init_rule_genome(chain: &[LayerShape], seed: u64) -> Vec<f64> {
    let n = HebbianRuleSet::genome_len(chain);
    let dist = Normal::new(0.0, RULE_INIT_STD).expect("valid normal");
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| dist.sample(&mut rng)).collect()
}

/// Adds `eta * (A*o_i*o_j + B*o_i + C*o_j + D)` to every weight.
pub fn hebbian_step(
    weights: &mut WeightState,
    rules: &HebbianRuleSet,
    trace: &ActivationTrace,
) -> Result<()> {
    if weights.shapes != rules.shapes {
        return Err(Error::Internal("weights and rules disagree in shape".into()));
    }
    if trace.activations.len() != weights.shapes.len() + 1 {
        return Err(Error::Internal("activation trace has the wrong layer count".into()));
    }
    for (k, (shape, (w, r))) in
        weights.shapes.iter().zip(weights.layers.iter_mut().zip(&rules.layers)).enumerate()
    {
        let pre = trace.pre(k);
        let post = trace.post(k);
        if pre.len() != shape.input_size || post.len() != shape.output_size {
            return Err(Error::Internal(format!("activation trace mismatch at layer {k}")));
        }
        let n_in = shape.input_size;
        for (j, &oj) in post.iter().enumerate() {
            let span = j * n_in..(j + 1) * n_in;
            let (w, a, b, c, d, eta) = (
                &mut w[span.clone()],
                &r.a[span.clone()],
                &r.b[span.clone()],
                &r.c[span.clone()],
                &r.d[span.clone()],
                &r.eta[span],
            );
            let terms = a.iter().zip(b).zip(c).zip(d).zip(eta).zip(pre);
            for (w, (((((a, b), c), d), eta), &oi)) in w.iter_mut().zip(terms) {
                *w += eta * (a * oi * oj + b * oi + c * oj + d);
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Divide each layer by its largest absolute weight.
    Max,
    /// Standardize each layer to zero mean and unit population deviation.
    Std,
}

impl Normalization {
    pub fn apply(self, weights: &mut WeightState) {
        match self {
            Normalization::Max => normalize_max(weights),
            Normalization::Std => normalize_std(weights),
        }
    }
}

const LANES: usize = 8;

/// Sum of `f(x)` accumulated in `LANES` interleaved partial sums, which lets
/// the compiler vectorize while keeping a fixed summation order.
fn lane_sum(xs: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let mut acc = [0.0; LANES];
    let chunks = xs.chunks_exact(LANES);
    let tail = chunks.remainder();
    for c in chunks {
        for k in 0..LANES {
            acc[k] += f(c[k]);
        }
    }
    acc.iter().sum::<f64>() + tail.iter().map(|&x| f(x)).sum::<f64>()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; LANES];
    let ca = a.chunks_exact(LANES);
    let cb = b.chunks_exact(LANES);
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..LANES {
            acc[k] += x[k] * y[k];
        }
    }
    acc.iter().sum::<f64>() + tail
}

/// Largest absolute value; NaN entries are skipped.
fn max_abs(xs: &[f64]) -> f64 {
    let mut acc = [0.0_f64; LANES];
    let chunks = xs.chunks_exact(LANES);
    let tail = chunks.remainder();
    for c in chunks {
        for k in 0..LANES {
            let a = c[k].abs();
            acc[k] = if a > acc[k] { a } else { acc[k] };
        }
    }
    acc.iter().chain(tail.iter()).fold(0.0, |m, &x| {
        let a = x.abs();
        if a > m {
            a
        } else {
            m
        }
    })
}

/// Divides a layer by `max(|w|)`. An all-zero layer is left as is; a layer
/// holding infinities maps them to ±1 and everything else to 0.
pub fn normalize_layer_max(layer: &mut [f64]) {
    let m = max_abs(layer);
    if m == f64::INFINITY {
        for w in layer.iter_mut() {
            *w = if w.is_infinite() { w.signum() } else { 0.0 };
        }
    } else if m > 0.0 {
        // Scaling by the reciprocal is within one ulp of dividing; the
        // largest entries are pinned so the layer maximum is exactly 1.
        let inv = 1.0 / m;
        for w in layer.iter_mut() {
            *w = if w.abs() == m { w.signum() } else { *w * inv };
        }
    }
}

/// Maps a layer to `(w - mean) / std` with the population deviation. A
/// zero-variance layer becomes all zeros.
pub fn normalize_layer_std(layer: &mut [f64]) {
    let n = layer.len() as f64;
    if layer.is_empty() {
        return;
    }
    // The result is scale invariant; very large layers are brought down
    // first so the variance cannot overflow.
    if max_abs(layer) > 1e100 {
        normalize_layer_max(layer);
    }
    let mean = lane_sum(layer, |w| w) / n;
    let var = lane_sum(layer, |w| (w - mean) * (w - mean)) / n;
    let sd = var.sqrt();
    if sd > 0.0 {
        for w in layer.iter_mut() {
            *w = (*w - mean) / sd;
        }
    } else {
        layer.iter_mut().for_each(|w| *w = 0.0);
    }
}

pub fn normalize_max(weights: &mut WeightState) {
    weights.layers.iter_mut().for_each(|l| normalize_layer_max(l));
}

pub fn normalize_std(weights: &mut WeightState) {
    weights.layers.iter_mut().for_each(|l| normalize_layer_std(l));
}

/// A Hebbian network bound to its rules: each control step runs forward,
/// applies the Hebbian update, then normalizes every layer once.
#[derive(Debug, Clone)]
pub struct PlasticNetwork {
    rules: HebbianRuleSet,
    weights: WeightState,
    trace: ActivationTrace,
    normalization: Normalization,
}

impl PlasticNetwork {
    pub fn new(rules: HebbianRuleSet, normalization: Normalization) -> Self {
        let weights = WeightState::zeros(rules.shapes()).expect("rule set holds a valid chain");
        let trace = ActivationTrace::for_chain(rules.shapes());
        Self { rules, weights, trace, normalization }
    }

    pub fn from_genome(chain: &[LayerShape], genome: &[f64], normalization: Normalization) -> Result<Self> {
        Ok(Self::new(genome_to_rules(chain, genome)?, normalization))
    }

    /// Re-draws the weights uniformly in `(-0.01, 0.01)`.
    pub fn reset(&mut self, seed: u64) {
        self.weights.fill_uniform(HEBBIAN_INIT_BOUND, seed);
    }

    pub fn weights(&self) -> &WeightState {
        &self.weights
    }

    pub fn set_weights(&mut self, weights: WeightState) -> Result<()> {
        if weights.shapes() != self.rules.shapes() {
            return Err(Error::Config("weight shapes do not match the rule set".into()));
        }
        self.weights = weights;
        Ok(())
    }

    pub fn rules(&self) -> &HebbianRuleSet {
        &self.rules
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// One control step. Returns the action computed before the update.
    pub fn step(&mut self, observation: &[f64]) -> Result<&[f64]> {
        self.weights.forward_into(observation, &mut self.trace)?;
        hebbian_step(&mut self.weights, &self.rules, &self.trace)?;
        self.normalization.apply(&mut self.weights);
        Ok(self.trace.output())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beetle() -> Vec<LayerShape> {
        chain_from_sizes(&[27, 64, 32, 18]).unwrap()
    }

    #[test]
    fn init_is_bounded_and_seeded() {
        let a = init_weights(&beetle(), 42).unwrap();
        assert_eq!(a.len(), 4352);
        assert!(a.iter().all(|w| w > -0.01 && w < 0.01));
        assert_eq!(a, init_weights(&beetle(), 42).unwrap());
        assert_ne!(a, init_weights(&beetle(), 43).unwrap());
    }

    #[test]
    fn incompatible_chain_rejected() {
        let chain = [LayerShape::new(3, 4).unwrap(), LayerShape::new(5, 2).unwrap()];
        assert!(matches!(init_weights(&chain, 0), Err(Error::Config(_))));
        assert!(matches!(init_weights(&[], 0), Err(Error::Config(_))));
        assert!(LayerShape::new(0, 3).is_err());
    }

    #[test]
    fn zero_weights_give_zero_action() {
        let w = WeightState::zeros(&beetle()).unwrap();
        let obs: Vec<f64> = (0..27).map(|i| i as f64 * 0.1 - 1.0).collect();
        let (a, trace) = forward(&w, &obs).unwrap();
        assert_eq!(a, vec![0.0; 18]);
        assert_eq!(trace.activations.len(), 4);
        assert_eq!(trace.pre(0), obs.as_slice());
    }

    #[test]
    fn scalar_forward() {
        let chain = [LayerShape::new(1, 1).unwrap()];
        let w = WeightState::from_layers(&chain, vec![vec![0.5]]).unwrap();
        let (a, _) = forward(&w, &[1.0]).unwrap();
        assert_eq!(a, vec![0.5_f64.tanh()]);
        assert!((a[0] - 0.4621).abs() < 1e-4);
    }

    #[test]
    fn wrong_observation_length() {
        let w = WeightState::zeros(&beetle()).unwrap();
        assert!(matches!(forward(&w, &[0.0; 26]), Err(Error::Input(_))));
    }

    fn one_synapse(a: f64, b: f64, c: f64, d: f64, eta: f64, w: f64, oi: f64, oj: f64) -> f64 {
        let chain = [LayerShape::new(1, 1).unwrap()];
        let mut weights = WeightState::from_layers(&chain, vec![vec![w]]).unwrap();
        let rules = genome_to_rules(&chain, &[a, b, c, d, eta]).unwrap();
        let trace = ActivationTrace { activations: vec![vec![oi], vec![oj]] };
        hebbian_step(&mut weights, &rules, &trace).unwrap();
        weights.layer(0)[0]
    }

    #[test]
    fn hebbian_examples() {
        assert!((one_synapse(1.0, 0.0, 0.0, 0.0, 0.1, 0.0, 1.0, 1.0) - 0.1).abs() < 1e-15);
        assert_eq!(one_synapse(3.0, -2.0, 7.0, 1.0, 0.0, 0.3, 0.9, -0.4), 0.3);
        // 1.0 + 0.5 * (2*(-0.25) + 0.5 + 0.5 + 0.25)
        assert!((one_synapse(2.0, 1.0, -1.0, 0.25, 0.5, 1.0, 0.5, -0.5) - 1.375).abs() < 1e-15);
    }

    #[test]
    fn hebbian_shape_mismatch() {
        let mut w = WeightState::zeros(&beetle()).unwrap();
        let rules = HebbianRuleSet::zeros(&chain_from_sizes(&[27, 64, 18]).unwrap()).unwrap();
        let trace = ActivationTrace::for_chain(&beetle());
        assert!(matches!(hebbian_step(&mut w, &rules, &trace), Err(Error::Internal(_))));
    }

    #[test]
    fn max_norm_examples() {
        let mut l = vec![0.5, -1.0, 0.25];
        normalize_layer_max(&mut l);
        assert_eq!(l, vec![0.5, -1.0, 0.25]);
        let mut l = vec![2.0, -4.0];
        normalize_layer_max(&mut l);
        assert_eq!(l, vec![0.5, -1.0]);
        let mut l = vec![0.0, 0.0];
        normalize_layer_max(&mut l);
        assert_eq!(l, vec![0.0, 0.0]);
    }

    #[test]
    fn std_norm_examples() {
        let mut l = vec![1.0, -1.0];
        normalize_layer_std(&mut l);
        assert_eq!(l, vec![1.0, -1.0]);
        let mut l = vec![3.0, 3.0, 3.0];
        normalize_layer_std(&mut l);
        assert_eq!(l, vec![0.0, 0.0, 0.0]);
        let mut l = vec![0.0, 1.0, 2.0, 3.0];
        normalize_layer_std(&mut l);
        // population sd of {0,1,2,3} is sqrt(1.25)
        let expected = [-1.341640786, -0.447213595, 0.447213595, 1.341640786];
        for (x, e) in l.iter().zip(expected) {
            assert!((x - e).abs() < 1e-8);
        }
    }

    #[test]
    fn genome_lengths() {
        assert_eq!(HebbianRuleSet::genome_len(&beetle()), 21_760);
        let gecko = chain_from_sizes(&[23, 64, 32, 16]).unwrap();
        assert_eq!(synapse_count(&gecko), 4_032);
        assert_eq!(HebbianRuleSet::genome_len(&gecko), 20_160);
        assert!(matches!(genome_to_rules(&gecko, &[0.0; 10]), Err(Error::Config(_))));
    }

    #[test]
    fn plastic_step_keeps_max_norm() {
        let chain = beetle();
        let genome = init_rule_genome(&chain, 3);
        let mut net = PlasticNetwork::from_genome(&chain, &genome, Normalization::Max).unwrap();
        net.reset(9);
        let obs: Vec<f64> = (0..27).map(|i| ((i * 7) % 5) as f64 * 0.3 - 0.6).collect();
        for _ in 0..50 {
            let a = net.step(&obs).unwrap().to_vec();
            assert!(a.iter().all(|x| x.abs() <= 1.0));
        }
        for l in net.weights().layers() {
            let m = l.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
            assert_eq!(m, 1.0);
        }
    }

    #[test]
    fn normalization_survives_overflow() {
        let mut l = vec![f64::INFINITY, 3.0, f64::NEG_INFINITY];
        normalize_layer_max(&mut l);
        assert_eq!(l, vec![1.0, 0.0, -1.0]);
        let mut l = vec![1e300, -1e300, 5e299, 0.0];
        normalize_layer_std(&mut l);
        assert!(l.iter().all(|w| w.is_finite()));
        let mean = l.iter().sum::<f64>() / 4.0;
        let var = l.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / 4.0;
        assert!(mean.abs() < 1e-12 && (var - 1.0).abs() < 1e-12);
    }
}
