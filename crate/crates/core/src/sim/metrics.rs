//! Per-frame performance metrics.

use crate::error::{ensure_len, Error, Result};

/// Lower clamp for misalignment values, in dB.
pub const MISALIGNMENT_FLOOR_DB: f64 = -300.0;
const POWER_FLOOR: f64 = 1e-12;

/// Normalized misalignment `10 log10(‖w − w_o‖² / ‖w_o‖²)`, clamped at −300 dB.
pub fn misalignment(w: &[f64], w_o: &[f64]) -> Result<f64> {
    ensure_len("misalignment weights", w_o.len(), w.len())?;
    let reference: f64 = w_o.iter().map(|v| v * v).sum();
    if reference == 0.0 {
        return Err(Error::ZeroReference);
    }
    let err: f64 = w.iter().zip(w_o).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(to_db(err / reference).max(MISALIGNMENT_FLOOR_DB))
}

fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

fn mean_power(x: &[f64]) -> f64 {
    if x.is_empty() {
        0.0
    } else {
        x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
    }
}

/// Echo return loss enhancement with exponentially smoothed frame powers.
#[derive(Debug, Clone)]
pub struct ErleMeter {
    smoothing: f64,
    desired: f64,
    residual: f64,
    primed: bool,
}

impl ErleMeter {
    pub fn new(smoothing: f64) -> Self {
        Self {
            smoothing,
            desired: 0.0,
            residual: 0.0,
            primed: false,
        }
    }

    /// Fold in one frame and return the current ERLE in dB.
    pub fn push(&mut self, d_frame: &[f64], e_frame: &[f64]) -> f64 {
        let pd = mean_power(d_frame);
        let pe = mean_power(e_frame);
        if self.primed {
            let s = self.smoothing;
            self.desired = s * self.desired + (1.0 - s) * pd;
            self.residual = s * self.residual + (1.0 - s) * pe;
        } else {
            self.desired = pd;
            self.residual = pe;
            self.primed = true;
        }
        to_db(self.desired.max(POWER_FLOOR) / self.residual.max(POWER_FLOOR))
    }
}

/// One-frame ERLE: `10 log10(P_d / P_e)` with both powers floored at 1e-12.
pub fn erle(d_frame: &[f64], e_frame: &[f64], smoothing: f64) -> f64 {
    ErleMeter::new(smoothing).push(d_frame, e_frame)
}

/// Metric time series of one run (or an ensemble mean when `seed` is `None`).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsTrace {
    pub algorithm: String,
    pub seed: Option<u64>,
    pub frame_index: Vec<usize>,
    pub misalignment_db: Vec<f64>,
    pub erle_db: Vec<f64>,
}

impl MetricsTrace {
    pub fn new(algorithm: impl Into<String>, seed: Option<u64>) -> Self {
        Self {
            algorithm: algorithm.into(),
            seed,
            frame_index: Vec::new(),
            misalignment_db: Vec::new(),
            erle_db: Vec::new(),
        }
    }

    pub fn push(&mut self, frame: usize, misalignment_db: f64, erle_db: f64) {
        self.frame_index.push(frame);
        self.misalignment_db.push(misalignment_db);
        self.erle_db.push(erle_db);
    }

    pub fn len(&self) -> usize {
        self.frame_index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame_index.is_empty()
    }

    /// Linear-power mean of the misalignment over `range`, in dB.
    pub fn mean_misalignment_db(&self, range: std::ops::Range<usize>) -> f64 {
        linear_mean_db(&self.misalignment_db[range])
    }
}

/// Frames averaged for a steady-state level: the last 10% (at least one).
pub fn steady_state_window(len: usize) -> std::ops::Range<usize> {
    len - (len / 10).max(1).min(len)..len
}

/// The last second of a run with `frames_per_second = fs / N`.
pub fn final_second_window(len: usize, fs: f64, n: usize) -> std::ops::Range<usize> {
    let per_second = ((fs / n as f64).round() as usize).max(1);
    len - per_second.min(len)..len
}

/// First frame whose value is at or below `level` dB.
pub fn first_frame_at_or_below(values_db: &[f64], level: f64) -> Option<usize> {
    values_db.iter().position(|&v| v <= level)
}

/// Average dB values in the linear power domain.
pub fn linear_mean_db(values: &[f64]) -> f64 {
    let mean = values.iter().map(|v| 10f64.powf(v / 10.0)).sum::<f64>() / values.len() as f64;
    to_db(mean)
}

/// Per-frame ensemble mean, averaged in the linear power domain.
pub fn ensemble_average(traces: &[MetricsTrace]) -> Result<MetricsTrace> {
    let first = traces.first().ok_or(Error::Empty("trace ensemble"))?;
    for t in traces {
        ensure_len("ensemble trace", first.len(), t.len())?;
        if t.algorithm != first.algorithm {
            return Err(Error::InvalidConfig(format!(
                "cannot average traces of '{}' and '{}'",
                first.algorithm, t.algorithm
            )));
        }
    }
    if traces.len() == 1 {
        return Ok(first.clone());
    }
    let mut out = MetricsTrace::new(first.algorithm.clone(), None);
    let mut column = Vec::with_capacity(traces.len());
    for k in 0..first.len() {
        column.clear();
        column.extend(traces.iter().map(|t| t.misalignment_db[k]));
        let m = linear_mean_db(&column);
        column.clear();
        column.extend(traces.iter().map(|t| t.erle_db[k]));
        let e = linear_mean_db(&column);
        out.push(first.frame_index[k], m, e);
    }
    Ok(out)
}
