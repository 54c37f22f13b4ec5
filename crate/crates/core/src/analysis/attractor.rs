//! Heuristic classification of PC trajectories and spread statistics.

use serde::{Deserialize, Serialize};

use super::pca::PcaResult;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttractorClass {
    LimitCycle,
    FixedPoint,
    Drift,
    Flat,
}

impl AttractorClass {
    pub fn as_str(self) -> &'static str {
        match self {
            AttractorClass::LimitCycle => "limit_cycle",
            AttractorClass::FixedPoint => "fixed_point",
            AttractorClass::Drift => "drift",
            AttractorClass::Flat => "flat",
        }
    }
}

/// Thresholds for [`attractor_class_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttractorParams {
    /// Leading fraction of the trajectory discarded as transient.
    pub transient_fraction: f64,
    /// Minimum autocorrelation of the recurrence peak.
    pub recurrence_threshold: f64,
    /// Late-window extent may be at most this multiple of the early extent.
    pub range_factor: f64,
    /// Late per-step motion must fall below this fraction of early motion.
    pub decay_ratio: f64,
    /// Fraction of steps that must not move away from the end point.
    pub monotone_fraction: f64,
    /// Total variance below which the trajectory counts as flat.
    pub flat_variance: f64,
}

impl Default for AttractorParams {
    fn default() -> Self {
        Self {
            transient_fraction: 0.2,
            recurrence_threshold: 0.8,
            range_factor: 2.0,
            decay_ratio: 0.1,
            monotone_fraction: 0.8,
            flat_variance: 1e-12,
        }
    }
}

pub fn attractor_class(pca: &PcaResult, window: usize) -> Result<AttractorClass> {
    attractor_class_with(pca, window, &AttractorParams::default())
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Diagonal of the bounding box of a set of points.
fn extent(points: &[Vec<f64>]) -> f64 {
    let dims = points.first().map_or(0, Vec::len);
    (0..dims)
        .map(|k| {
            let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[k]), hi.max(p[k])));
            (hi - lo) * (hi - lo)
        })
        .sum::<f64>()
        .sqrt()
}

fn mean_step(points: &[Vec<f64>]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    points.windows(2).map(|w| dist(&w[0], &w[1])).sum::<f64>() / (points.len() - 1) as f64
}

/// Normalized multivariate autocorrelation for lags `0..=max_lag`.
pub fn autocorrelation(points: &[Vec<f64>], max_lag: usize) -> Vec<f64> {
    let n = points.len();
    let dims = points.first().map_or(0, Vec::len);
    let mean: Vec<f64> = (0..dims).map(|k| points.iter().map(|p| p[k]).sum::<f64>() / n as f64).collect();
    let c: Vec<Vec<f64>> = points.iter().map(|p| p.iter().zip(&mean).map(|(x, m)| x - m).collect()).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let var = c.iter().map(|v| dot(v, v)).sum::<f64>() / n as f64;
    (0..=max_lag.min(n.saturating_sub(1)))
        .map(|lag| {
            if var == 0.0 {
                return 0.0;
            }
            let s: f64 = (0..n - lag).map(|t| dot(&c[t], &c[t + lag])).sum();
            s / (n - lag) as f64 / var
        })
        .collect()
}

/// Highest autocorrelation at lag >= 2 found after the first zero crossing.
fn recurrence_peak(points: &[Vec<f64>]) -> Option<(usize, f64)> {
    let ac = autocorrelation(points, points.len() / 2);
    let first_negative = ac.iter().position(|r| *r < 0.0)?;
    ac.iter()
        .enumerate()
        .skip(first_negative.max(2))
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(lag, r)| (lag, *r))
}

/// Classifies the trajectory of the top two principal components.
///
/// After dropping the transient:
/// * `limit_cycle`: the autocorrelation, once it has crossed zero, peaks
///   above the recurrence threshold, and the late window's extent stays
///   within `range_factor` of the early window's;
/// * `fixed_point`: per-step motion in the late window is below
///   `decay_ratio` of the early window and the path mostly approaches its
///   end point;
/// * `flat`: no variance at all;
/// * `drift`: anything else.
pub fn attractor_class_with(pca: &PcaResult, window: usize, params: &AttractorParams) -> Result<AttractorClass> {
    let steps = pca.steps();
    if window == 0 || steps < 2 * window {
        return Err(Error::Input(format!(
            "trajectory of {steps} steps is too short for windows of {window}"
        )));
    }
    if pca.degenerate || pca.total_variance < params.flat_variance {
        return Ok(AttractorClass::Flat);
    }
    let dims = pca.q().min(2);
    let skip = ((steps as f64) * params.transient_fraction).floor() as usize;
    let points: Vec<Vec<f64>> = pca.scores[skip..].iter().map(|r| r[..dims].to_vec()).collect();
    let w = window.min(points.len() / 2).max(1);
    let early = &points[..w];
    let late = &points[points.len() - w..];

    if let Some((_, peak)) = recurrence_peak(&points) {
        if peak > params.recurrence_threshold && extent(late) <= params.range_factor * extent(early) {
            return Ok(AttractorClass::LimitCycle);
        }
    }

    let scale = pca.total_variance.sqrt();
    let (early_step, late_step) = (mean_step(early), mean_step(late));
    let settled = early_step <= 1e-9 * scale || late_step < params.decay_ratio * early_step;
    if settled {
        let end = points.last().expect("non-empty");
        let d: Vec<f64> = points.iter().map(|p| dist(p, end)).collect();
        let tol = 1e-12 * scale;
        let approaching = d.windows(2).filter(|w| w[1] <= w[0] + tol).count();
        if approaching as f64 >= params.monotone_fraction * (d.len() - 1) as f64 {
            return Ok(AttractorClass::FixedPoint);
        }
    }
    Ok(AttractorClass::Drift)
}

/// Population standard deviation of one component's scores after `skip` steps.
pub fn pc_spread(pca: &PcaResult, component: usize, skip: usize) -> Result<f64> {
    if component >= pca.q() {
        return Err(Error::Input(format!("component {component} not among the {} computed", pca.q())));
    }
    if skip >= pca.steps() {
        return Err(Error::Input(format!("skip {skip} leaves no steps out of {}", pca.steps())));
    }
    let xs: Vec<f64> = pca.scores[skip..].iter().map(|r| r[component]).collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    Ok((xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n).sqrt())
}
