//! The `train`, `eval`, `analyze` and `compare` verbs.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use plasticwalk::analysis::{attractor_class, pc_spread, pca, AttractorClass, EpisodeTrace, GATE_WINDOW};
use plasticwalk::walker::{DamageSpec, DynamicsPerturbation, Scenario, Terrain, TerrainKind, DEFAULT_BLOCK_HEIGHT};
use plasticwalk::{EpisodeOptions, GenerationRecord, Trainer, WalkerObjective};

use crate::checkpoint::{log_row, Checkpoint, RngCursor, CHECKPOINT_FORMAT_VERSION, LOG_HEADER};
use crate::config::{load_config, ResolvedConfig, TerrainSection};
use crate::error::{HarnessError, Result};

pub const LOG_FILE: &str = "generations.csv";
pub const CHECKPOINT_FILE: &str = "checkpoint.json";
pub const BEST_FILE: &str = "best_genome.json";

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::Runtime(format!("cannot create {}: {e}", dir.display())))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| HarnessError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| HarnessError::Runtime(e.to_string()))
}

#[derive(Debug, Clone, Default)]
pub struct TrainOptions {
    /// Continue from this checkpoint.
    pub resume: Option<PathBuf>,
    /// Overrides the config's `out_dir`.
    pub out_dir: Option<PathBuf>,
    /// Suppress per-generation progress lines.
    pub quiet: bool,
}

#[derive(Debug, Clone)]
pub struct TrainSummary {
    pub out_dir: PathBuf,
    pub log_path: PathBuf,
    pub checkpoint_path: PathBuf,
    pub records: Vec<GenerationRecord>,
    pub checkpoint: Checkpoint,
}

/// Best genome as written next to the checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestGenome {
    pub policy: String,
    pub topology: String,
    pub fitness: Option<f64>,
    pub genome: Vec<f64>,
}

fn checkpoint_of(cfg: &ResolvedConfig, trainer: &Trainer<'_, WalkerObjective>) -> Checkpoint {
    let s = trainer.state();
    Checkpoint {
        format_version: CHECKPOINT_FORMAT_VERSION,
        config_hash: cfg.config_hash(),
        policy: cfg.spec.kind.as_str().into(),
        topology: cfg.topology.as_str().into(),
        generation: s.generation,
        alpha: cfg.es.alpha_at(s.generation),
        sigma: cfg.es.sigma_at(s.generation),
        rng: RngCursor { master_seed: cfg.master_seed, next_generation: s.generation },
        genome: s.theta.clone(),
        best_genome: s.best_genome.clone(),
        best_fitness: s.best_fitness.is_finite().then_some(s.best_fitness),
    }
}

pub fn cmd_train(config_path: &Path, options: &TrainOptions) -> Result<TrainSummary> {
    let cfg = load_config(config_path)?;
    train_resolved(&cfg, options)
}

/// Trains from scratch or from `options.resume`, writing the generation log,
/// periodic checkpoints and the best genome under the output directory.
pub fn train_resolved(cfg: &ResolvedConfig, options: &TrainOptions) -> Result<TrainSummary> {
    let out_dir = options.out_dir.clone().unwrap_or_else(|| cfg.out_dir.clone());
    let ckpt_dir = out_dir.join("checkpoints");
    create_dir(&ckpt_dir)?;
    let log_path = out_dir.join(LOG_FILE);
    let objective = WalkerObjective::new(cfg.spec.clone(), cfg.scenario()?)?;

    let (mut trainer, log) = match &options.resume {
        Some(path) => {
            let ckpt = Checkpoint::load(path)?;
            if ckpt.config_hash != cfg.config_hash() {
                return Err(HarnessError::Config(format!(
                    "checkpoint {} was written by a different configuration (hash {} vs {})",
                    path.display(),
                    ckpt.config_hash,
                    cfg.config_hash()
                )));
            }
            let old = fs::read_to_string(&log_path).map_err(|e| {
                HarnessError::Runtime(format!("cannot read {} to resume: {e}", log_path.display()))
            })?;
            let kept: Vec<&str> = old.lines().take(ckpt.generation + 1).collect();
            if kept.first() != Some(&LOG_HEADER) || kept.len() != ckpt.generation + 1 {
                return Err(HarnessError::Runtime(format!(
                    "{} does not hold the {} generations recorded in the checkpoint",
                    log_path.display(),
                    ckpt.generation
                )));
            }
            let trainer = Trainer::resume(&objective, cfg.es.clone(), ckpt.trainer_state())?;
            (trainer, kept.join("\n") + "\n")
        }
        None => {
            let theta = cfg.spec.init_genome(cfg.init_seed())?;
            (Trainer::new(&objective, cfg.es.clone(), theta)?, format!("{LOG_HEADER}\n"))
        }
    };
    write_file(&log_path, log.as_bytes())?;

    let mut records = Vec::new();
    let checkpoint_path = out_dir.join(CHECKPOINT_FILE);
    while trainer.state().generation < cfg.es.generations {
        let record = trainer.step()?;
        let mut f = fs::OpenOptions::new().append(true).open(&log_path)?;
        f.write_all(log_row(&record, cfg.log_wall_time).as_bytes())?;
        if !options.quiet {
            println!(
                "gen {:>4}  best {:>10.4}  mean {:>10.4}  elite {:>10.4}  {} ms",
                record.generation, record.best, record.mean, record.elite_fitness, record.wall_ms
            );
        }
        let done = trainer.state().generation;
        if done % cfg.checkpoint_interval == 0 || done == cfg.es.generations {
            let ckpt = checkpoint_of(cfg, &trainer);
            ckpt.save(&ckpt_dir.join(format!("gen_{done:06}.json")))?;
            ckpt.save(&checkpoint_path)?;
        }
        records.push(record);
    }
    let checkpoint = checkpoint_of(cfg, &trainer);
    checkpoint.save(&checkpoint_path)?;
    let best = BestGenome {
        policy: checkpoint.policy.clone(),
        topology: checkpoint.topology.clone(),
        fitness: checkpoint.best_fitness,
        genome: checkpoint.best_genome.clone(),
    };
    write_file(&out_dir.join(BEST_FILE), to_json(&best)?.as_bytes())?;
    Ok(TrainSummary { out_dir, log_path, checkpoint_path, records, checkpoint })
}

/// Terrain, damage and dynamics an evaluation runs under.
#[derive(Debug, Clone)]
pub struct Condition {
    pub name: String,
    pub terrain: TerrainChoice,
    pub damage: DamageSpec,
    pub perturbation: Option<DynamicsPerturbation>,
}

#[derive(Debug, Clone)]
pub enum TerrainChoice {
    /// Generated per evaluation seed unless the section fixes a seed.
    Generated(TerrainSection),
    /// Loaded from a height-map file.
    Fixed(Terrain),
}

/// `flat`, `uneven` (blocks up to the default height), `blocks:H`, or a path
/// to a terrain CSV.
pub fn parse_terrain(value: &str) -> Result<TerrainChoice> {
    let section = |kind, h_max| TerrainChoice::Generated(TerrainSection { kind, h_max, seed: None });
    match value {
        "flat" => return Ok(section(TerrainKind::Flat, 0.0)),
        "uneven" | "blocks" => return Ok(section(TerrainKind::Blocks, DEFAULT_BLOCK_HEIGHT)),
        _ => {}
    }
    if let Some(h) = value.strip_prefix("blocks:") {
        let h_max: f64 = h
            .parse()
            .map_err(|_| HarnessError::Config(format!("--terrain: cannot read block height {h:?}")))?;
        if !(h_max >= 0.0) {
            return Err(HarnessError::Config(format!("--terrain: block height must be >= 0, got {h_max}")));
        }
        return Ok(section(TerrainKind::Blocks, h_max));
    }
    let path = Path::new(value);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        return Ok(TerrainChoice::Fixed(Terrain::from_csv(&text)?));
    }
    Err(HarnessError::Config(format!(
        "--terrain: expected flat, uneven, blocks:H or a terrain CSV file, got {value:?}"
    )))
}

/// Comma-separated seeds and `a..b` ranges, e.g. `0..3,10`.
pub fn parse_seeds(value: &str) -> Result<Vec<u64>> {
    let bad = || HarnessError::Config(format!("--seeds: cannot parse {value:?}"));
    let mut seeds = Vec::new();
    for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.parse().map_err(|_| bad())?;
            let b: u64 = b.parse().map_err(|_| bad())?;
            seeds.extend(a..b);
        } else {
            seeds.push(part.parse().map_err(|_| bad())?);
        }
    }
    if seeds.is_empty() {
        return Err(bad());
    }
    Ok(seeds)
}

impl Condition {
    /// The configuration's own training conditions.
    pub fn training(cfg: &ResolvedConfig) -> Self {
        Self {
            name: "train".into(),
            terrain: TerrainChoice::Generated(cfg.terrain.clone()),
            damage: cfg.damage.clone(),
            perturbation: None,
        }
    }

    fn scenario(&self, cfg: &ResolvedConfig, index: u64) -> Result<Scenario> {
        let terrain = match &self.terrain {
            TerrainChoice::Generated(section) => cfg.terrain_for(section, index)?,
            TerrainChoice::Fixed(t) => t.clone(),
        };
        let mut walker = cfg.walker.clone();
        if let Some(p) = &self.perturbation {
            walker.perturbation = p.clone();
        }
        Ok(Scenario::new(walker, terrain, self.damage.clone())?)
    }
}

/// The six-condition battery shared by every policy in a comparison.
pub fn battery(cfg: &ResolvedConfig) -> Result<Vec<Condition>> {
    let flat = TerrainChoice::Generated(TerrainSection { kind: TerrainKind::Flat, h_max: 0.0, seed: None });
    let mut out = vec![
        Condition { name: "flat".into(), terrain: flat.clone(), damage: DamageSpec::none(), perturbation: None },
        Condition { name: "uneven".into(), terrain: parse_terrain("uneven")?, damage: DamageSpec::none(), perturbation: None },
    ];
    for preset in ["lf", "rh", "lf_rf"] {
        out.push(Condition {
            name: preset.into(),
            terrain: flat.clone(),
            damage: DamageSpec::preset(preset, &cfg.walker)?,
            perturbation: None,
        });
    }
    out.push(Condition {
        name: "perturbed".into(),
        terrain: flat,
        damage: DamageSpec::none(),
        perturbation: Some(DynamicsPerturbation::asymmetric(&cfg.walker)),
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedMetrics {
    pub seed: u64,
    pub fitness: f64,
    pub x_displacement: f64,
    pub upright_violations: usize,
    pub yaw_violations: usize,
    pub steps: usize,
    pub fault: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub label: String,
    pub condition: String,
    pub seeds: Vec<SeedMetrics>,
    pub mean_fitness: f64,
    pub mean_x_displacement: f64,
    pub trace_paths: Vec<PathBuf>,
}

/// Runs `genome` once per evaluation seed. Seed `s` resets the policy with
/// `cfg.eval_seed(s)` and, for generated uneven terrain, lays out blocks
/// with a seed derived from `s`.
pub fn evaluate_genome(
    cfg: &ResolvedConfig,
    genome: &[f64],
    condition: &Condition,
    seeds: &[u64],
    trace_dir: Option<&Path>,
) -> Result<EvalReport> {
    if genome.len() != cfg.spec.genome_len()? {
        return Err(HarnessError::Config(format!(
            "genome of length {} does not fit a {} policy on the {} topology ({} parameters)",
            genome.len(),
            cfg.spec.kind.as_str(),
            cfg.topology.as_str(),
            cfg.spec.genome_len()?
        )));
    }
    let options = EpisodeOptions { record_trace: trace_dir.is_some(), ..Default::default() };
    let mut metrics = Vec::with_capacity(seeds.len());
    let mut trace_paths = Vec::new();
    for &s in seeds {
        let objective = WalkerObjective::new(cfg.spec.clone(), condition.scenario(cfg, s)?)?;
        let (o, trace) = objective.episode(genome, cfg.eval_seed(s), &options)?;
        if let (Some(dir), Some(mut trace)) = (trace_dir, trace) {
            trace.meta.topology = cfg.topology.as_str().into();
            trace.meta.seed = s;
            let path = dir.join(format!("{}_{}_seed{s}.trace", cfg.label, condition.name));
            let mut w = BufWriter::new(File::create(&path)?);
            trace.write_binary(&mut w)?;
            w.flush()?;
            trace_paths.push(path);
        }
        metrics.push(SeedMetrics {
            seed: s,
            fitness: o.fitness,
            x_displacement: o.x_displacement,
            upright_violations: o.upright_violations,
            yaw_violations: o.yaw_violations,
            steps: o.steps,
            fault: o.fault,
        });
    }
    let n = metrics.len() as f64;
    Ok(EvalReport {
        label: cfg.label.clone(),
        condition: condition.name.clone(),
        mean_fitness: metrics.iter().map(|m| m.fitness).sum::<f64>() / n,
        mean_x_displacement: metrics.iter().map(|m| m.x_displacement).sum::<f64>() / n,
        seeds: metrics,
        trace_paths,
    })
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub checkpoint: PathBuf,
    pub terrain: Option<String>,
    pub damage: Option<String>,
    pub seeds: Vec<u64>,
    pub trace: bool,
    pub out_dir: Option<PathBuf>,
}

/// Evaluates a checkpoint's best genome and writes `eval_<condition>.csv`
/// (plus traces when requested) to the output directory.
pub fn cmd_eval(config_path: &Path, options: &EvalOptions) -> Result<EvalReport> {
    let cfg = load_config(config_path)?;
    let ckpt = Checkpoint::load(&options.checkpoint)?;
    if ckpt.policy != cfg.spec.kind.as_str() || ckpt.topology != cfg.topology.as_str() {
        return Err(HarnessError::Config(format!(
            "checkpoint holds a {} policy for the {} topology but the config asks for {} on {}",
            ckpt.policy,
            ckpt.topology,
            cfg.spec.kind.as_str(),
            cfg.topology.as_str()
        )));
    }
    let mut condition = Condition::training(&cfg);
    let mut parts = Vec::new();
    if let Some(t) = &options.terrain {
        condition.terrain = parse_terrain(t)?;
        parts.push(Path::new(t).file_stem().and_then(|s| s.to_str()).unwrap_or(t).replace(':', "-"));
    }
    if let Some(d) = &options.damage {
        condition.damage =
            DamageSpec::preset(d, &cfg.walker).map_err(|e| HarnessError::Config(format!("--damage: {e}")))?;
        parts.push(d.clone());
    }
    condition.name = if parts.is_empty() { "train".into() } else { parts.join("_") };

    let out_dir = options.out_dir.clone().unwrap_or_else(|| cfg.out_dir.join("eval"));
    create_dir(&out_dir)?;
    let report = evaluate_genome(
        &cfg,
        &ckpt.best_genome,
        &condition,
        &options.seeds,
        options.trace.then_some(out_dir.as_path()),
    )?;
    let mut csv = String::from("seed,fitness,x_displacement,upright_violations,yaw_violations,steps,fault\n");
    for m in &report.seeds {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            m.seed,
            m.fitness,
            m.x_displacement,
            m.upright_violations,
            m.yaw_violations,
            m.steps,
            m.fault.as_deref().unwrap_or("")
        ));
    }
    write_file(&out_dir.join(format!("eval_{}.csv", condition.name)), csv.as_bytes())?;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub traces: Vec<PathBuf>,
    pub q: usize,
    pub skip: usize,
    /// Window length of the attractor classifier.
    pub window: usize,
    pub out_dir: PathBuf,
}

impl AnalyzeOptions {
    pub fn new(traces: Vec<PathBuf>, out_dir: PathBuf) -> Self {
        Self { traces, q: 3, skip: 100, window: GATE_WINDOW, out_dir }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceAnalysis {
    pub name: String,
    pub attractor: AttractorClass,
    pub variance_ratio: Vec<f64>,
    /// Population SD of each component's scores after `skip` steps.
    pub pc_spread: Vec<f64>,
}

pub fn read_trace(path: &Path) -> Result<EpisodeTrace> {
    let f = File::open(path).map_err(|e| HarnessError::Input(format!("cannot open trace {}: {e}", path.display())))?;
    EpisodeTrace::read_binary(BufReader::new(f))
        .map_err(|e| HarnessError::Input(format!("trace {}: {e}", path.display())))
}

/// PCA, attractor class and PC spread for each trace. Writes
/// `<name>_scores.csv`, `variance_ratio.json`, `attractors.json` and
/// `pc_spread.csv`.
pub fn cmd_analyze(options: &AnalyzeOptions) -> Result<Vec<TraceAnalysis>> {
    if options.traces.is_empty() {
        return Err(HarnessError::Config("analyze needs at least one trace".into()));
    }
    let traces = options.traces.iter().map(|p| read_trace(p)).collect::<Result<Vec<_>>>()?;
    let expected = traces[0].snapshot_len();
    let offenders: Vec<String> = options
        .traces
        .iter()
        .zip(&traces)
        .filter(|(_, t)| t.snapshot_len() != expected)
        .map(|(p, t)| format!("{} ({} values)", p.display(), t.snapshot_len()))
        .collect();
    if !offenders.is_empty() {
        return Err(HarnessError::Input(format!(
            "traces must share snapshot length {expected} (from {}); offending: {}",
            options.traces[0].display(),
            offenders.join(", ")
        )));
    }
    if options.q > expected {
        return Err(HarnessError::Input(format!("q = {} exceeds the snapshot length {expected}", options.q)));
    }
    create_dir(&options.out_dir)?;

    let mut names: Vec<String> = Vec::new();
    for p in &options.traces {
        let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("trace").to_string();
        let mut name = stem.clone();
        let mut k = 1;
        while names.contains(&name) {
            k += 1;
            name = format!("{stem}_{k}");
        }
        names.push(name);
    }

    let mut results = Vec::new();
    let mut spread_csv = String::from("trace,component,spread\n");
    for (name, trace) in names.iter().zip(&traces) {
        let p = pca(trace, options.q)?;
        let attractor = attractor_class(&p, options.window)?;
        let spreads = (0..p.q()).map(|c| pc_spread(&p, c, options.skip)).collect::<plasticwalk::Result<Vec<_>>>()?;
        let mut scores = String::from("step");
        for c in 0..p.q() {
            scores.push_str(&format!(",pc{}", c + 1));
        }
        scores.push('\n');
        for (t, row) in p.scores.iter().enumerate() {
            scores.push_str(&t.to_string());
            for v in row {
                scores.push_str(&format!(",{v}"));
            }
            scores.push('\n');
        }
        write_file(&options.out_dir.join(format!("{name}_scores.csv")), scores.as_bytes())?;
        for (c, s) in spreads.iter().enumerate() {
            spread_csv.push_str(&format!("{name},{},{s}\n", c + 1));
        }
        results.push(TraceAnalysis {
            name: name.clone(),
            attractor,
            variance_ratio: p.variance_ratio.clone(),
            pc_spread: spreads,
        });
    }
    let ratios: BTreeMap<&str, &[f64]> = results.iter().map(|r| (r.name.as_str(), r.variance_ratio.as_slice())).collect();
    let classes: BTreeMap<&str, &str> = results.iter().map(|r| (r.name.as_str(), r.attractor.as_str())).collect();
    write_file(&options.out_dir.join("variance_ratio.json"), to_json(&ratios)?.as_bytes())?;
    write_file(&options.out_dir.join("attractors.json"), to_json(&classes)?.as_bytes())?;
    write_file(&options.out_dir.join("pc_spread.csv"), spread_csv.as_bytes())?;
    Ok(results)
}

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub configs: Vec<PathBuf>,
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
    pub quiet: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub policy: String,
    pub condition: String,
    pub seed: u64,
    pub fitness: Option<f64>,
    pub x_displacement: Option<f64>,
    /// `ok` or `failed: <reason>`.
    pub status: String,
}

#[derive(Debug, Clone)]
pub struct CompareTable {
    pub rows: Vec<CompareRow>,
    pub failures: usize,
    pub path: PathBuf,
}

/// Reuses a finished run in the config's output directory, or trains one.
fn trained_genome(cfg: &ResolvedConfig, quiet: bool) -> Result<Vec<f64>> {
    let path = cfg.out_dir.join(CHECKPOINT_FILE);
    if let Ok(ckpt) = Checkpoint::load(&path) {
        if ckpt.config_hash == cfg.config_hash() && ckpt.generation >= cfg.es.generations {
            return Ok(ckpt.best_genome);
        }
    }
    let summary = train_resolved(cfg, &TrainOptions { quiet, ..Default::default() })?;
    Ok(summary.checkpoint.best_genome)
}

/// Trains or loads every config, runs the shared battery, and writes
/// `compare.csv` with one row per policy, condition and seed. Failed runs
/// leave rows marked `failed` and are counted in `failures`.
pub fn cmd_compare(options: &CompareOptions) -> Result<CompareTable> {
    if options.configs.len() < 2 {
        return Err(HarnessError::Config("compare needs at least two configs".into()));
    }
    let configs = options.configs.iter().map(|p| load_config(p)).collect::<Result<Vec<_>>>()?;
    create_dir(&options.out_dir)?;
    let mut rows = Vec::new();
    let mut failures = 0;
    for cfg in &configs {
        let conditions = battery(cfg)?;
        let genome = trained_genome(cfg, options.quiet);
        for condition in &conditions {
            let result = genome
                .as_ref()
                .map_err(|e| e.to_string())
                .and_then(|g| evaluate_genome(cfg, g, condition, &options.seeds, None).map_err(|e| e.to_string()));
            for &seed in &options.seeds {
                let row = match &result {
                    Ok(report) => {
                        let m = report.seeds.iter().find(|m| m.seed == seed).expect("every seed evaluated");
                        CompareRow {
                            policy: cfg.label.clone(),
                            condition: condition.name.clone(),
                            seed,
                            fitness: Some(m.fitness),
                            x_displacement: Some(m.x_displacement),
                            status: "ok".into(),
                        }
                    }
                    Err(reason) => {
                        failures += 1;
                        CompareRow {
                            policy: cfg.label.clone(),
                            condition: condition.name.clone(),
                            seed,
                            fitness: None,
                            x_displacement: None,
                            status: format!("failed: {}", reason.replace(',', ";")),
                        }
                    }
                };
                rows.push(row);
            }
        }
    }
    let mut csv = String::from("policy,condition,seed,fitness,x_displacement,status\n");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.policy,
            r.condition,
            r.seed,
            opt(r.fitness),
            opt(r.x_displacement),
            r.status
        ));
    }
    let path = options.out_dir.join("compare.csv");
    write_file(&path, csv.as_bytes())?;
    Ok(CompareTable { rows, failures, path })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_and_terrain_flags() {
        assert_eq!(parse_seeds("0..3,10").unwrap(), vec![0, 1, 2, 10]);
        assert!(parse_seeds("x").is_err());
        assert!(parse_seeds("").is_err());
        assert!(matches!(parse_terrain("flat").unwrap(), TerrainChoice::Generated(s) if s.kind == TerrainKind::Flat));
        assert!(matches!(parse_terrain("blocks:0.02").unwrap(), TerrainChoice::Generated(s) if s.h_max == 0.02));
        assert!(parse_terrain("blocks:-1").is_err());
        assert!(parse_terrain("nowhere").is_err());
    }
}
