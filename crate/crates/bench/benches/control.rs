use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};

use plasticwalk::analysis::pca_matrix;
use plasticwalk::es::{es_update, EsConfig};
use plasticwalk::walker::observe;
use plasticwalk::{EpisodeOptions, Normalization, Objective, Policy, PolicyKind, Scenario, WalkerConfig};
use plasticwalk_bench::{beetle_objective, beetle_spec};

fn network_step(c: &mut Criterion) {
    let obs: Vec<f64> = (0..27).map(|i| (i as f64 * 0.37).sin()).collect();
    let mut group = c.benchmark_group("network_step");
    for (name, kind, norm) in [
        ("hebbian_max", PolicyKind::Hebbian, Normalization::Max),
        ("hebbian_std", PolicyKind::Hebbian, Normalization::Std),
        ("ff", PolicyKind::Ff, Normalization::Max),
        ("lstm", PolicyKind::Lstm, Normalization::Max),
    ] {
        let spec = beetle_spec(kind, norm);
        let genome = spec.init_genome(1).unwrap();
        let mut policy = spec.build(&genome).unwrap();
        policy.reset(2);
        group.bench_function(name, |b| b.iter(|| black_box(policy.act(black_box(&obs)).unwrap()[0])));
    }
    group.finish();
}

fn walker_step(c: &mut Criterion) {
    let scenario = Scenario::flat(WalkerConfig::beetle()).unwrap();
    let state = scenario.reset();
    let action: Vec<f64> = (0..18).map(|j| if j % 2 == 0 { 0.5 } else { -0.5 }).collect();
    c.bench_function("walker_step", |b| b.iter(|| scenario.step(black_box(&state), black_box(&action)).unwrap()));
    c.bench_function("walker_observe", |b| b.iter(|| observe(black_box(&state))));
}

fn episode(c: &mut Criterion) {
    let mut group = c.benchmark_group("episode");
    group.sample_size(20);
    let (objective, genome) = beetle_objective(PolicyKind::Hebbian, Normalization::Max);
    group.bench_function("hebbian_500_steps", |b| b.iter(|| objective.evaluate(&genome, 3).unwrap()));
    let opts = EpisodeOptions { record_trace: true, ..Default::default() };
    group.bench_function("hebbian_500_steps_traced", |b| b.iter(|| objective.episode(&genome, 3, &opts).unwrap()));
    group.finish();
}

fn es(c: &mut Criterion) {
    let mut group = c.benchmark_group("es");
    let dim = 21_760;
    let config = EsConfig { population_size: 256, ..Default::default() };
    let fitness: Vec<f64> = (0..256).map(|i| ((i * 7919) % 256) as f64).collect();
    group.sample_size(10);
    group.bench_function("update_pop256", |b| {
        b.iter_batched(|| vec![0.0; dim], |mut theta| es_update(&mut theta, &fitness, &config, 0).unwrap(), BatchSize::LargeInput)
    });
    group.finish();
}

fn analysis(c: &mut Criterion) {
    let (objective, genome) = beetle_objective(PolicyKind::Hebbian, Normalization::Max);
    let opts = EpisodeOptions { record_trace: true, ..Default::default() };
    let trace = objective.episode(&genome, 0, &opts).unwrap().1.unwrap();
    let matrix = trace.snapshot_matrix();
    let mut group = c.benchmark_group("analysis");
    group.sample_size(10);
    group.bench_function("pca_500x4352_q3", |b| b.iter(|| pca_matrix(black_box(&matrix), 3).unwrap()));
    group.finish();
}

criterion_group!(benches, network_step, walker_step, episode, es, analysis);
criterion_main!(benches);
