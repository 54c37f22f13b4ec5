//! Fixtures shared by the benchmarks.

use plasticwalk::{derive_seed, Normalization, PolicyKind, PolicySpec, Scenario, Stream, WalkerConfig, WalkerObjective};

/// Spec for a beetle controller of the given kind.
pub fn beetle_spec(kind: PolicyKind, normalization: Normalization) -> PolicySpec {
    let config = WalkerConfig::beetle();
    PolicySpec::new(kind, normalization, config.observation_size(), config.joint_count())
}

/// Flat-terrain objective and a freshly initialized genome for it.
pub fn beetle_objective(kind: PolicyKind, normalization: Normalization) -> (WalkerObjective, Vec<f64>) {
    let spec = beetle_spec(kind, normalization);
    let genome = spec.init_genome(derive_seed(0, Stream::Init, &[])).expect("beetle spec is valid");
    let scenario = Scenario::flat(WalkerConfig::beetle()).expect("beetle config is valid");
    (WalkerObjective::new(spec, scenario).expect("beetle spec is valid"), genome)
}
