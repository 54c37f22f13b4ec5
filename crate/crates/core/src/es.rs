//! Evolution strategies with mirrored sampling and centered-rank shaping.
//!
//! Noise is never stored: individual `i` of generation `g` uses the standard
//! normal vector seeded by `(master_seed, g, i / 2)`, negated for odd `i`.

use std::time::Instant;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateRule {
    /// `theta += alpha / (n sigma) * sum(shaped_i * eps_i)`.
    #[default]
    Standard,
    /// `theta += alpha / (n sigma) * sum(F_i * (theta + sigma eps_i))` with raw
    /// fitness. Kept only for comparison; it does not estimate a gradient.
    Printed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EsConfig {
    pub population_size: usize,
    pub generations: usize,
    pub alpha: f64,
    pub sigma: f64,
    pub decay: f64,
    pub master_seed: u64,
    #[serde(default = "one")]
    pub episodes_per_eval: usize,
    /// Worker threads for fitness evaluation; 0 lets rayon decide.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub update: UpdateRule,
}

fn one() -> usize {
    1
}

impl Default for EsConfig {
    fn default() -> Self {
        Self {
            population_size: 1024,
            generations: 500,
            alpha: 0.1,
            sigma: 0.1,
            decay: 0.999,
            master_seed: 0,
            episodes_per_eval: 1,
            workers: 0,
            update: UpdateRule::Standard,
        }
    }
}

impl EsConfig {
    pub fn validate(&self) -> Result<()> {
        let n = self.population_size;
        if n < 2 || n % 2 != 0 {
            return Err(Error::Config(format!("population_size must be even and >= 2, got {n}")));
        }
        if !(self.decay > 0.0 && self.decay <= 1.0) {
            return Err(Error::Config(format!("decay must lie in (0, 1], got {}", self.decay)));
        }
        if !(self.alpha > 0.0) || !(self.sigma > 0.0) {
            return Err(Error::Config("alpha and sigma must be positive".into()));
        }
        if self.episodes_per_eval == 0 {
            return Err(Error::Config("episodes_per_eval must be at least 1".into()));
        }
        Ok(())
    }

    /// Step size used by generation `t` (0-based).
    pub fn alpha_at(&self, t: usize) -> f64 {
        self.alpha * self.decay.powi(t as i32)
    }

    /// Noise scale used by generation `t` (0-based).
    pub fn sigma_at(&self, t: usize) -> f64 {
        self.sigma * self.decay.powi(t as i32)
    }
}

/// Standard normal perturbation of individual `index` in `generation`.
pub fn sample_noise(config: &EsConfig, dim: usize, generation: usize, index: usize) -> Vec<f64> {
    let mut rng = rng_from_seed(derive_seed(config.master_seed, Stream::Noise, &[generation as u64, (index / 2) as u64]));
    let sign = if index % 2 == 0 { 1.0 } else { -1.0 };
    (0..dim)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sign * z
        })
        .collect()
}

/// Ranks mapped linearly onto `[-0.5, 0.5]`; ties share their mean rank.
pub fn centered_ranks(fitness: &[f64]) -> Vec<f64> {
    let n = fitness.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && fitness[order[j + 1]] == fitness[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks.iter().map(|r| r / (n - 1) as f64 - 0.5).collect()
}

fn check_finite(fitness: &[f64]) -> Result<()> {
    match fitness.iter().position(|f| !f.is_finite()) {
        Some(index) => Err(Error::Evaluation { index, value: fitness[index] }),
        None => Ok(()),
    }
}

/// Applies one ES update to `theta` from the population's raw fitnesses.
pub fn es_update(theta: &mut [f64], fitnesses: &[f64], config: &EsConfig, generation: usize) -> Result<()> {
    let n = config.population_size;
    if fitnesses.len() != n {
        return Err(Error::Input(format!("{} fitness values for a population of {n}", fitnesses.len())));
    }
    check_finite(fitnesses)?;
    let alpha = config.alpha_at(generation);
    let sigma = config.sigma_at(generation);
    let scale = alpha / (n as f64 * sigma);
    let dim = theta.len();
    match config.update {
        UpdateRule::Standard => {
            let shaped = centered_ranks(fitnesses);
            let mut direction = vec![0.0; dim];
            for pair in 0..n / 2 {
                let weight = shaped[2 * pair] - shaped[2 * pair + 1];
                if weight == 0.0 {
                    continue;
                }
                let eps = sample_noise(config, dim, generation, 2 * pair);
                for (d, e) in direction.iter_mut().zip(&eps) {
                    *d += weight * e;
                }
            }
            for (t, d) in theta.iter_mut().zip(&direction) {
                *t += scale * d;
            }
        }
        UpdateRule::Printed => {
            let total: f64 = fitnesses.iter().sum();
            let mut direction: Vec<f64> = theta.iter().map(|t| total * t).collect();
            for pair in 0..n / 2 {
                let weight = fitnesses[2 * pair] - fitnesses[2 * pair + 1];
                let eps = sample_noise(config, dim, generation, 2 * pair);
                for (d, e) in direction.iter_mut().zip(&eps) {
                    *d += weight * sigma * e;
                }
            }
            for (t, d) in theta.iter_mut().zip(&direction) {
                *t += scale * d;
            }
        }
    }
    Ok(())
}

/// Fitness of one evaluated genome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub fitness: f64,
    /// The evaluation ended early (e.g. a simulation fault).
    pub flagged: bool,
}

/// Something ES can maximize.
pub trait Objective: Sync {
    fn genome_len(&self) -> usize;

    /// Fitness of `genome` for one episode seeded by `seed`.
    fn evaluate(&self, genome: &[f64], seed: u64) -> Result<Evaluation>;
}

/// Summary of one generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub fitness: Vec<f64>,
    pub best: f64,
    pub mean: f64,
    pub std: f64,
    /// Step size and noise scale after this generation's decay.
    pub alpha: f64,
    pub sigma: f64,
    pub wall_ms: u64,
    /// Fitness of the updated center genome under the evaluation seed.
    pub elite_fitness: f64,
    /// Individuals whose evaluation ended early.
    pub flagged: Vec<usize>,
}

/// Resumable optimizer state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainerState {
    pub theta: Vec<f64>,
    /// Next generation to run.
    pub generation: usize,
    pub best_genome: Vec<f64>,
    pub best_fitness: f64,
}

impl TrainerState {
    pub fn new(theta: Vec<f64>) -> Self {
        Self { best_genome: theta.clone(), theta, generation: 0, best_fitness: f64::NEG_INFINITY }
    }
}

/// Seed of the fixed episode used to score the center genome.
pub fn evaluation_seed(master_seed: u64) -> u64 {
    derive_seed(master_seed, Stream::Eval, &[0])
}

/// Seed of episode `episode` for every individual of `generation`.
pub fn episode_seed(master_seed: u64, generation: usize, episode: usize) -> u64 {
    derive_seed(master_seed, Stream::Episode, &[generation as u64, episode as u64])
}

pub struct Trainer<'a, O: Objective> {
    objective: &'a O,
    config: EsConfig,
    state: TrainerState,
    pool: rayon::ThreadPool,
}

impl<'a, O: Objective> Trainer<'a, O> {
    pub fn new(objective: &'a O, config: EsConfig, theta: Vec<f64>) -> Result<Self> {
        Self::resume(objective, config, TrainerState::new(theta))
    }

    pub fn resume(objective: &'a O, config: EsConfig, state: TrainerState) -> Result<Self> {
        config.validate()?;
        if state.theta.len() != objective.genome_len() {
            return Err(Error::Config(format!(
                "genome length {} does not match the objective's {}",
                state.theta.len(),
                objective.genome_len()
            )));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
        Ok(Self { objective, config, state, pool })
    }

    pub fn state(&self) -> &TrainerState {
        &self.state
    }

    pub fn config(&self) -> &EsConfig {
        &self.config
    }

    fn score(&self, genome: &[f64], seeds: &[u64]) -> Result<Evaluation> {
        let mut total = 0.0;
        let mut flagged = false;
        for &seed in seeds {
            let e = self.objective.evaluate(genome, seed)?;
            total += e.fitness;
            flagged |= e.flagged;
        }
        Ok(Evaluation { fitness: total / seeds.len() as f64, flagged })
    }

    /// Perturb, evaluate, update, and record one generation.
    pub fn step(&mut self) -> Result<GenerationRecord> {
        let started = Instant::now();
        let g = self.state.generation;
        let n = self.config.population_size;
        let sigma = self.config.sigma_at(g);
        let seeds: Vec<u64> =
            (0..self.config.episodes_per_eval).map(|e| episode_seed(self.config.master_seed, g, e)).collect();
        let theta = &self.state.theta;
        let evals: Vec<Evaluation> = self.pool.install(|| {
            (0..n)
                .into_par_iter()
                .map(|i| {
                    let eps = sample_noise(&self.config, theta.len(), g, i);
                    let genome: Vec<f64> = theta.iter().zip(&eps).map(|(t, e)| t + sigma * e).collect();
                    self.score(&genome, &seeds)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        let fitness: Vec<f64> = evals.iter().map(|e| e.fitness).collect();
        check_finite(&fitness)?;
        let flagged = evals.iter().enumerate().filter(|(_, e)| e.flagged).map(|(i, _)| i).collect();

        es_update(&mut self.state.theta, &fitness, &self.config, g)?;
        let elite = self.score(&self.state.theta, &[evaluation_seed(self.config.master_seed)])?;
        if elite.fitness > self.state.best_fitness {
            self.state.best_fitness = elite.fitness;
            self.state.best_genome.clone_from(&self.state.theta);
        }
        self.state.generation += 1;

        let mean = fitness.iter().sum::<f64>() / n as f64;
        let std = (fitness.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / n as f64).sqrt();
        Ok(GenerationRecord {
            generation: g,
            best: fitness.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean,
            std,
            fitness,
            alpha: self.config.alpha_at(g + 1),
            sigma: self.config.sigma_at(g + 1),
            wall_ms: started.elapsed().as_millis() as u64,
            elite_fitness: elite.fitness,
            flagged,
        })
    }
}

/// Outcome of a full training run.
#[derive(Debug, Clone)]
pub struct TrainRun {
    pub records: Vec<GenerationRecord>,
    pub state: TrainerState,
}

/// Runs `config.generations` generations from `theta`.
pub fn train<O: Objective>(objective: &O, config: &EsConfig, theta: Vec<f64>) -> Result<TrainRun> {
    let mut trainer = Trainer::new(objective, config.clone(), theta)?;
    let records = (0..config.generations).map(|_| trainer.step()).collect::<Result<Vec<_>>>()?;
    Ok(TrainRun { records, state: trainer.state })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Constant;

    impl Objective for Constant {
        fn genome_len(&self) -> usize {
            4
        }

        fn evaluate(&self, _: &[f64], _: u64) -> Result<Evaluation> {
            Ok(Evaluation { fitness: 3.0, flagged: false })
        }
    }

    fn small(n: usize) -> EsConfig {
        EsConfig { population_size: n, generations: 2, master_seed: 11, workers: 1, ..Default::default() }
    }

    #[test]
    fn noise_mirrored_and_deterministic() {
        let c = small(8);
        let a = sample_noise(&c, 50, 3, 0);
        assert_eq!(a, sample_noise(&c, 50, 3, 0));
        let b = sample_noise(&c, 50, 3, 1);
        assert!(a.iter().zip(&b).all(|(x, y)| *x == -*y));
        assert_ne!(a, sample_noise(&c, 50, 4, 0));
        assert_ne!(a, sample_noise(&c, 50, 3, 2));
    }

    #[test]
    fn ranks() {
        assert_eq!(centered_ranks(&[3.0, 1.0, 2.0]), vec![0.5, -0.5, 0.0]);
        assert_eq!(centered_ranks(&[1.0, 1.0, 1.0, 1.0]), vec![0.0; 4]);
        assert_eq!(centered_ranks(&[0.0, 5.0, 5.0]), vec![-0.5, 0.25, 0.25]);
    }

    #[test]
    fn constant_fitness_keeps_theta() {
        let c = small(8);
        let mut theta = vec![0.3, -1.0, 2.0, 0.0];
        es_update(&mut theta, &[3.0; 8], &c, 0).unwrap();
        assert_eq!(theta, vec![0.3, -1.0, 2.0, 0.0]);
    }

    #[test]
    fn mirrored_pair_sign() {
        let c = small(2);
        let eps = sample_noise(&c, 1, 0, 0);
        let mut theta = vec![0.0];
        // Better fitness on whichever side points along +x.
        let f = if eps[0] > 0.0 { [1.0, 0.0] } else { [0.0, 1.0] };
        es_update(&mut theta, &f, &c, 0).unwrap();
        assert!(theta[0] > 0.0);
    }

    #[test]
    fn non_finite_fitness_reports_index() {
        let c = small(4);
        let mut theta = vec![0.0; 3];
        let err = es_update(&mut theta, &[0.0, 1.0, f64::NAN, 2.0], &c, 0).unwrap_err();
        assert!(matches!(err, Error::Evaluation { index: 2, .. }));
    }

    #[test]
    fn config_validation() {
        assert!(small(7).validate().is_err());
        assert!(small(0).validate().is_err());
        assert!(EsConfig { decay: 1.5, ..small(4) }.validate().is_err());
        assert!(EsConfig { sigma: 0.0, ..small(4) }.validate().is_err());
        assert!(EsConfig::default().validate().is_ok());
    }

    #[test]
    fn trivial_training_run() {
        let c = small(8);
        let run = train(&Constant, &c, vec![0.0; 4]).unwrap();
        assert_eq!(run.records.len(), 2);
        assert!(run.records.iter().all(|r| r.fitness.iter().all(|f| *f == 3.0) && r.std == 0.0));
        assert_eq!(run.state.theta, vec![0.0; 4]);
        assert_eq!(run.state.generation, 2);
    }

    #[test]
    fn schedule() {
        let c = EsConfig::default();
        for t in [0, 1, 10, 499] {
            assert!((c.alpha_at(t) - 0.1 * 0.999_f64.powi(t as i32)).abs() < 1e-12);
            assert!((c.sigma_at(t) - 0.1 * 0.999_f64.powi(t as i32)).abs() < 1e-12);
        }
    }
}
