//! Running a policy through a walker episode.

use serde::{Deserialize, Serialize};

use crate::analysis::{EpisodeTrace, TraceMeta, TraceStep};
use crate::error::{Error, Result};
use crate::es::{Evaluation, Objective};
use crate::policy::{Policy, PolicySpec};
use crate::walker::{observe_into, Scenario, VIOLATION};

#[derive(Debug, Clone, Default)]
pub struct EpisodeOptions {
    pub record_trace: bool,
    /// Report every foot as out of contact to the policy, as if the robot
    /// were held in the air. The simulated contacts are unaffected.
    pub lift_contacts: bool,
    /// Overrides the configured episode length.
    pub steps: Option<usize>,
}

/// Summary of one episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeOutcome {
    /// Sum of step rewards.
    pub fitness: f64,
    /// Net world-frame x displacement of the body.
    pub x_displacement: f64,
    pub upright_violations: usize,
    pub yaw_violations: usize,
    pub steps: usize,
    /// Set when the simulation faulted and the episode was cut short.
    pub fault: Option<String>,
}

/// Resets `policy` with `seed`, then alternates observe, act, step.
pub fn run_episode<P: Policy + ?Sized>(
    policy: &mut P,
    scenario: &Scenario,
    seed: u64,
    options: &EpisodeOptions,
) -> Result<(EpisodeOutcome, Option<EpisodeTrace>)> {
    let config = &scenario.config;
    let steps = options.steps.unwrap_or(config.episode_steps);
    policy.reset(seed);
    let mut state = scenario.reset();
    let start_x = state.position[0];
    let mut trace = options.record_trace.then(|| {
        let meta = TraceMeta {
            policy_kind: String::new(),
            topology: String::new(),
            terrain: scenario.terrain.describe(),
            damage: scenario.damage.describe(config),
            seed,
        };
        EpisodeTrace::new(meta, config.observation_size(), config.joint_count(), policy.plastic_len())
    });
    let mut outcome = EpisodeOutcome {
        fitness: 0.0,
        x_displacement: 0.0,
        upright_violations: 0,
        yaw_violations: 0,
        steps: 0,
        fault: None,
    };
    let mut obs = Vec::with_capacity(config.observation_size());
    let mut action = Vec::with_capacity(config.joint_count());
    let contact_span = config.joint_count()..config.joint_count() + config.num_legs;
    for _ in 0..steps {
        observe_into(&state, &mut obs);
        if options.lift_contacts {
            obs[contact_span.clone()].iter_mut().for_each(|c| *c = 0.0);
        }
        action.clear();
        action.extend_from_slice(policy.act(&obs)?);
        let (next, reward) = match scenario.step(&state, &action) {
            Ok(r) => r,
            Err(Error::SimulationFault { step, reason }) => {
                outcome.fault = Some(format!("step {step}: {reason}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let r = reward.total();
        outcome.fitness += r;
        outcome.steps += 1;
        if reward.upright == VIOLATION {
            outcome.upright_violations += 1;
        }
        if reward.heading == VIOLATION {
            outcome.yaw_violations += 1;
        }
        if let Some(trace) = trace.as_mut() {
            let mut snapshot = Vec::with_capacity(policy.plastic_len());
            policy.write_plastic(&mut snapshot);
            trace.push(TraceStep { observation: obs.clone(), action: action.clone(), reward: r, snapshot })?;
        }
        state = next;
    }
    outcome.x_displacement = state.position[0] - start_x;
    Ok((outcome, trace))
}

/// ES objective: fitness of a genome as a controller on a scenario.
#[derive(Debug, Clone)]
pub struct WalkerObjective {
    pub spec: PolicySpec,
    pub scenario: Scenario,
}

impl WalkerObjective {
    pub fn new(spec: PolicySpec, scenario: Scenario) -> Result<Self> {
        let config = &scenario.config;
        if spec.observation_size != config.observation_size() || spec.action_size != config.joint_count() {
            return Err(Error::Config(format!(
                "policy I/O {}->{} does not match walker {}->{}",
                spec.observation_size,
                spec.action_size,
                config.observation_size(),
                config.joint_count()
            )));
        }
        Ok(Self { spec, scenario })
    }

    pub fn episode(&self, genome: &[f64], seed: u64, options: &EpisodeOptions) -> Result<(EpisodeOutcome, Option<EpisodeTrace>)> {
        let mut policy = self.spec.build(genome)?;
        let (outcome, mut trace) = run_episode(&mut policy, &self.scenario, seed, options)?;
        if let Some(t) = trace.as_mut() {
            t.meta.policy_kind = self.spec.kind.as_str().to_string();
        }
        Ok((outcome, trace))
    }
}

impl Objective for WalkerObjective {
    fn genome_len(&self) -> usize {
        self.spec.genome_len().unwrap_or(0)
    }

    fn evaluate(&self, genome: &[f64], seed: u64) -> Result<Evaluation> {
        let (outcome, _) = self.episode(genome, seed, &EpisodeOptions::default())?;
        Ok(Evaluation { fitness: outcome.fitness, flagged: outcome.fault.is_some() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plastic::Normalization;
    use crate::policy::{ConstantPolicy, PolicyKind};
    use crate::walker::WalkerConfig;

    #[test]
    fn zero_action_zero_fitness() {
        let s = Scenario::flat(WalkerConfig::beetle()).unwrap();
        let mut p = ConstantPolicy(vec![0.0; 18]);
        let opts = EpisodeOptions { record_trace: true, ..Default::default() };
        let (o, t) = run_episode(&mut p, &s, 0, &opts).unwrap();
        assert_eq!(o.fitness, 0.0);
        assert_eq!(o.steps, 500);
        assert_eq!(t.unwrap().len(), 500);
    }

    #[test]
    fn objective_checks_io() {
        let spec = PolicySpec::new(PolicyKind::Hebbian, Normalization::Max, 23, 16);
        assert!(WalkerObjective::new(spec, Scenario::flat(WalkerConfig::beetle()).unwrap()).is_err());
    }

    #[test]
    fn lifted_contacts_hidden_from_policy() {
        let s = Scenario::flat(WalkerConfig::beetle()).unwrap();
        let mut p = ConstantPolicy(vec![0.0; 18]);
        let opts = EpisodeOptions { record_trace: true, lift_contacts: true, steps: Some(5) };
        let (_, t) = run_episode(&mut p, &s, 0, &opts).unwrap();
        let t = t.unwrap();
        assert!(t.steps().iter().all(|st| st.observation[18..24].iter().all(|c| *c == 0.0)));
    }
}
