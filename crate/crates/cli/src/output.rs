//! CSV artifacts and the console summary.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use fkf_core::sim::{steady_state_window, ScenarioResult};

pub const TRACE_HEADER: &str = "frame,time_s,algorithm,seed,misalignment_db,erle_db";
pub const TAPS_HEADER: &str = "tap,algorithm,value,wiener";

/// One row per frame per run, runs in result order.
pub fn trace_csv(result: &ScenarioResult) -> String {
    let mut out = String::new();
    out.push_str(TRACE_HEADER);
    out.push('\n');
    let frame_seconds = result.n as f64 / result.fs;
    for run in &result.runs {
        let t = &run.trace;
        let seed = t.seed.map(|s| s.to_string()).unwrap_or_default();
        for k in 0..t.len() {
            let frame = t.frame_index[k];
            let _ = writeln!(
                out,
                "{frame},{:.16e},{},{seed},{:.16e},{:.16e}",
                (frame + 1) as f64 * frame_seconds,
                t.algorithm,
                t.misalignment_db[k],
                t.erle_db[k],
            );
        }
    }
    out
}

/// Seed-averaged final taps of every algorithm next to the optimum.
pub fn taps_csv(result: &ScenarioResult) -> String {
    let mut out = String::new();
    out.push_str(TAPS_HEADER);
    out.push('\n');
    for label in &result.labels {
        let taps = result.mean_final_weights(label);
        for (i, (v, w)) in taps.iter().zip(&result.optimal).enumerate() {
            let _ = writeln!(out, "{i},{label},{v:.16e},{w:.16e}");
        }
    }
    out
}

pub fn write_artifacts(result: &ScenarioResult, dir: &Path) -> io::Result<()> {
    fs::write(dir.join("trace.csv"), trace_csv(result))?;
    fs::write(dir.join("steady_state_taps.csv"), taps_csv(result))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub label: String,
    pub steady_state_db: f64,
    pub final_erle_db: f64,
}

/// Steady-state misalignment and ERLE of each ensemble; empty runs are skipped.
pub fn summarize(result: &ScenarioResult) -> Vec<SummaryRow> {
    result
        .labels
        .iter()
        .filter_map(|label| {
            let trace = result.ensemble(label).ok()?;
            if trace.is_empty() {
                return None;
            }
            let window = steady_state_window(trace.len());
            Some(SummaryRow {
                label: label.clone(),
                steady_state_db: trace.mean_misalignment_db(window.clone()),
                final_erle_db: fkf_core::sim::linear_mean_db(&trace.erle_db[window]),
            })
        })
        .collect()
}

pub fn summary_table(rows: &[SummaryRow]) -> String {
    let width = rows.iter().map(|r| r.label.len()).max().unwrap_or(0).max("algorithm".len());
    let mut out = format!("{:<width$}  steady-state misalignment  steady-state ERLE\n", "algorithm");
    for r in rows {
        let _ = writeln!(
            out,
            "{:<width$}  {:>22.2} dB  {:>14.2} dB",
            r.label, r.steady_state_db, r.final_erle_db
        );
    }
    out
}
