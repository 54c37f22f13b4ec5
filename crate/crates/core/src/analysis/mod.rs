//! Weight-trajectory recording and analysis: PCA, attractor classification,
//! PC spread, and the contact-gating test.

mod attractor;
mod pca;
mod trace;

pub use attractor::{attractor_class, attractor_class_with, autocorrelation, pc_spread, AttractorClass, AttractorParams};
pub use pca::{pca, pca_matrix, PcaResult};
pub use trace::{EpisodeTrace, TraceHeader, TraceMeta, TraceStep, TRACE_FORMAT, TRACE_VERSION};

use serde::{Deserialize, Serialize};

use crate::episode::{run_episode, EpisodeOptions};
use crate::error::Result;
use crate::policy::Policy;
use crate::walker::Scenario;

/// Steps at the end of an episode over which oscillation amplitude is measured.
pub const GATE_WINDOW: usize = 100;

/// Action oscillation with and without contact feedback.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub normal_amplitude: f64,
    pub lifted_amplitude: f64,
}

/// Mean over joints of the peak-to-peak action over the last `window` steps.
pub fn oscillation_amplitude(trace: &EpisodeTrace, window: usize) -> f64 {
    let steps = trace.steps();
    let tail = &steps[steps.len().saturating_sub(window)..];
    let joints = trace.action_len();
    if tail.is_empty() || joints == 0 {
        return 0.0;
    }
    (0..joints)
        .map(|j| {
            let (lo, hi) = tail
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.action[j]), hi.max(s.action[j])));
            hi - lo
        })
        .sum::<f64>()
        / joints as f64
}

/// Runs the policy once normally and once with contact inputs forced to 0.
pub fn oscillation_gate_test<P: Policy + ?Sized>(policy: &mut P, scenario: &Scenario, seed: u64) -> Result<GateReport> {
    let normal = EpisodeOptions { record_trace: true, ..Default::default() };
    let lifted = EpisodeOptions { record_trace: true, lift_contacts: true, ..Default::default() };
    let (_, a) = run_episode(policy, scenario, seed, &normal)?;
    let (_, b) = run_episode(policy, scenario, seed, &lifted)?;
    Ok(GateReport {
        normal_amplitude: oscillation_amplitude(&a.expect("trace requested"), GATE_WINDOW),
        lifted_amplitude: oscillation_amplitude(&b.expect("trace requested"), GATE_WINDOW),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plastic::{chain_from_sizes, HebbianRuleSet, Normalization, PlasticNetwork};
    use crate::walker::WalkerConfig;

    #[test]
    fn zero_rules_zero_amplitude() {
        // Zero rules keep the weights at their tiny initial values; with the
        // weights zeroed as well the action is exactly zero.
        let chain = chain_from_sizes(&[27, 64, 32, 18]).unwrap();
        let rules = HebbianRuleSet::zeros(&chain).unwrap();
        let mut net = PlasticNetwork::new(rules, Normalization::Max);
        struct Zeroed(PlasticNetwork);
        impl Policy for Zeroed {
            fn reset(&mut self, _: u64) {}
            fn act(&mut self, o: &[f64]) -> Result<&[f64]> {
                self.0.step(o)
            }
            fn plastic_len(&self) -> usize {
                self.0.weights().len()
            }
            fn write_plastic(&self, out: &mut Vec<f64>) {
                self.0.weights().flatten_into(out)
            }
        }
        net.set_weights(crate::plastic::WeightState::zeros(&chain).unwrap()).unwrap();
        let s = Scenario::flat(WalkerConfig::beetle()).unwrap();
        let r = oscillation_gate_test(&mut Zeroed(net), &s, 1).unwrap();
        assert_eq!(r.normal_amplitude, 0.0);
        assert_eq!(r.lifted_amplitude, 0.0);
    }
}
