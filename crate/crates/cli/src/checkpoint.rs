//! Checkpoint files and the generation log.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use plasticwalk::{GenerationRecord, TrainerState};

use crate::error::{HarnessError, Result};

pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;
pub const LOG_HEADER: &str = "generation,best,mean,std,alpha,sigma,wall_ms";

/// Where noise sampling resumes. Noise is a pure function of the master
/// seed, generation and individual, so these two values are the whole
/// random state of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RngCursor {
    pub master_seed: u64,
    pub next_generation: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub config_hash: String,
    pub policy: String,
    pub topology: String,
    /// Generations completed.
    pub generation: usize,
    /// Step size and noise scale for the next generation.
    pub alpha: f64,
    pub sigma: f64,
    pub rng: RngCursor,
    /// Center genome.
    pub genome: Vec<f64>,
    pub best_genome: Vec<f64>,
    /// Evaluation-seed fitness of `best_genome`; absent before any generation.
    pub best_fitness: Option<f64>,
}

impl Checkpoint {
    pub fn trainer_state(&self) -> TrainerState {
        TrainerState {
            theta: self.genome.clone(),
            generation: self.generation,
            best_genome: self.best_genome.clone(),
            best_fitness: self.best_fitness.unwrap_or(f64::NEG_INFINITY),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| HarnessError::Runtime(e.to_string()))?;
        std::fs::write(path, text + "\n")
            .map_err(|e| HarnessError::Runtime(format!("cannot write {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read checkpoint {}: {e}", path.display())))?;
        let c: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| HarnessError::Config(format!("checkpoint {}: {e}", path.display())))?;
        if c.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(HarnessError::Config(format!(
                "checkpoint {} has format version {}, expected {CHECKPOINT_FORMAT_VERSION}",
                path.display(),
                c.format_version
            )));
        }
        Ok(c)
    }
}

/// One CSV row; `wall_ms` is written as 0 unless requested so that logs
/// from identical runs compare equal byte for byte.
pub fn log_row(record: &GenerationRecord, wall_time: bool) -> String {
    let mut s = String::new();
    let wall = if wall_time { record.wall_ms } else { 0 };
    writeln!(
        s,
        "{},{},{},{},{},{},{}",
        record.generation, record.best, record.mean, record.std, record.alpha, record.sigma, wall
    )
    .expect("write to string");
    s
}

/// Parsed generation log row.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    pub std: f64,
    pub alpha: f64,
    pub sigma: f64,
    pub wall_ms: u64,
}

pub fn parse_log(text: &str) -> Result<Vec<LogRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(LOG_HEADER) {
        return Err(HarnessError::Input(format!("generation log must start with `{LOG_HEADER}`")));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || HarnessError::Input(format!("generation log line {}: {line:?}", i + 2));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(bad());
            }
            let num = |k: usize| f[k].parse::<f64>().map_err(|_| bad());
            Ok(LogRow {
                generation: f[0].parse().map_err(|_| bad())?,
                best: num(1)?,
                mean: num(2)?,
                std: num(3)?,
                alpha: num(4)?,
                sigma: num(5)?,
                wall_ms: f[6].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoint_roundtrip() {
        let c = Checkpoint {
            format_version: CHECKPOINT_FORMAT_VERSION,
            config_hash: "ab".into(),
            policy: "hebbian".into(),
            topology: "beetle".into(),
            generation: 3,
            alpha: 0.1 * 0.999_f64.powi(3),
            sigma: 0.0997002999,
            rng: RngCursor { master_seed: 9, next_generation: 3 },
            genome: vec![0.1, -1.0 / 3.0, 1e-300],
            best_genome: vec![0.0, 2.5, -7.0],
            best_fitness: None,
        };
        let dir = std::env::temp_dir().join(format!("pw-ckpt-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("c.json");
        c.save(&p).unwrap();
        assert_eq!(Checkpoint::load(&p).unwrap(), c);
        assert_eq!(c.trainer_state().best_fitness, f64::NEG_INFINITY);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn log_rows_parse_back() {
        let r = GenerationRecord {
            generation: 4,
            fitness: vec![1.0, 2.0],
            best: 2.0,
            mean: 1.5,
            std: 0.5,
            alpha: 0.0995,
            sigma: 0.0995,
            wall_ms: 77,
            elite_fitness: 1.0,
            flagged: vec![],
        };
        let text = format!("{LOG_HEADER}\n{}{}", log_row(&r, false), log_row(&r, true));
        let rows = parse_log(&text).unwrap();
        assert_eq!(rows[0].wall_ms, 0);
        assert_eq!(rows[1].wall_ms, 77);
        assert_eq!(rows[1].best, 2.0);
        assert!(parse_log("nope\n").is_err());
    }
}
