//! Per-step episode recordings and their on-disk formats.
//!
//! Binary layout: one line of JSON ([`TraceHeader`]) terminated by `\n`,
//! followed by `steps` rows of little-endian `f64`, each row holding
//! `observation | action | reward | snapshot`.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TRACE_FORMAT: &str = "plasticwalk-trace";
pub const TRACE_VERSION: u32 = 1;

/// Descriptive metadata carried with a trace.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub policy_kind: String,
    pub topology: String,
    pub terrain: String,
    pub damage: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub format: String,
    pub version: u32,
    #[serde(flatten)]
    pub meta: TraceMeta,
    pub observation_len: usize,
    pub action_len: usize,
    pub snapshot_len: usize,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub observation: Vec<f64>,
    pub action: Vec<f64>,
    pub reward: f64,
    pub snapshot: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeTrace {
    pub meta: TraceMeta,
    observation_len: usize,
    action_len: usize,
    snapshot_len: usize,
    steps: Vec<TraceStep>,
}

impl EpisodeTrace {
    pub fn new(meta: TraceMeta, observation_len: usize, action_len: usize, snapshot_len: usize) -> Self {
        Self { meta, observation_len, action_len, snapshot_len, steps: Vec::new() }
    }

    /// Builds a snapshot-only trace, e.g. from synthetic data.
    pub fn from_snapshots(meta: TraceMeta, snapshots: Vec<Vec<f64>>) -> Result<Self> {
        let len = snapshots.first().map_or(0, Vec::len);
        let mut t = Self::new(meta, 0, 0, len);
        for s in snapshots {
            t.push(TraceStep { observation: Vec::new(), action: Vec::new(), reward: 0.0, snapshot: s })?;
        }
        Ok(t)
    }

    pub fn push(&mut self, step: TraceStep) -> Result<()> {
        if step.observation.len() != self.observation_len
            || step.action.len() != self.action_len
            || step.snapshot.len() != self.snapshot_len
        {
            return Err(Error::Input(format!(
                "trace row sizes {}/{}/{} do not match {}/{}/{}",
                step.observation.len(),
                step.action.len(),
                step.snapshot.len(),
                self.observation_len,
                self.action_len,
                self.snapshot_len
            )));
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn observation_len(&self) -> usize {
        self.observation_len
    }

    pub fn action_len(&self) -> usize {
        self.action_len
    }

    pub fn snapshot_len(&self) -> usize {
        self.snapshot_len
    }

    pub fn total_reward(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }

    /// Steps × snapshot matrix.
    pub fn snapshot_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.steps.len(), self.snapshot_len, |t, k| self.steps[t].snapshot[k])
    }

    pub fn header(&self) -> TraceHeader {
        TraceHeader {
            format: TRACE_FORMAT.into(),
            version: TRACE_VERSION,
            meta: self.meta.clone(),
            observation_len: self.observation_len,
            action_len: self.action_len,
            snapshot_len: self.snapshot_len,
            steps: self.steps.len(),
        }
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer(&mut w, &self.header())?;
        w.write_all(b"\n")?;
        let mut buf = Vec::with_capacity(8 * (self.observation_len + self.action_len + 1 + self.snapshot_len));
        for s in &self.steps {
            buf.clear();
            for v in s.observation.iter().chain(&s.action).chain(std::iter::once(&s.reward)).chain(&s.snapshot) {
                buf.extend_from_slice(&v.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_binary<R: BufRead>(mut r: R) -> Result<Self> {
        let mut line = String::new();
        r.read_line(&mut line)?;
        let header: TraceHeader = serde_json::from_str(line.trim_end())?;
        if header.format != TRACE_FORMAT || header.version != TRACE_VERSION {
            return Err(Error::Input(format!(
                "unsupported trace format {} v{}",
                header.format, header.version
            )));
        }
        let (no, na, ns) = (header.observation_len, header.action_len, header.snapshot_len);
        let width = no + na + 1 + ns;
        let mut trace = Self::new(header.meta, no, na, ns);
        let mut bytes = vec![0u8; 8 * width];
        let mut row = vec![0.0; width];
        for t in 0..header.steps {
            r.read_exact(&mut bytes)
                .map_err(|e| Error::Input(format!("trace truncated at row {t}: {e}")))?;
            for (v, chunk) in row.iter_mut().zip(bytes.chunks_exact(8)) {
                *v = f64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
            }
            trace.steps.push(TraceStep {
                observation: row[..no].to_vec(),
                action: row[no..no + na].to_vec(),
                reward: row[no + na],
                snapshot: row[no + na + 1..].to_vec(),
            });
        }
        let mut rest = Vec::new();
        r.read_to_end(&mut rest)?;
        if !rest.is_empty() {
            return Err(Error::Input(format!("{} trailing bytes after trace rows", rest.len())));
        }
        Ok(trace)
    }

    /// CSV with columns `obs_*, act_*, reward, w_*`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut cols: Vec<String> = Vec::new();
        cols.extend((0..self.observation_len).map(|i| format!("obs_{i}")));
        cols.extend((0..self.action_len).map(|i| format!("act_{i}")));
        cols.push("reward".into());
        cols.extend((0..self.snapshot_len).map(|i| format!("w_{i}")));
        writeln!(w, "{}", cols.join(","))?;
        for s in &self.steps {
            let row: Vec<String> = s
                .observation
                .iter()
                .chain(&s.action)
                .chain(std::iter::once(&s.reward))
                .chain(&s.snapshot)
                .map(f64::to_string)
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}
