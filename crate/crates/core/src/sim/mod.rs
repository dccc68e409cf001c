//! Simulation harness: sources, rooms, metrics and scenario execution.

pub mod metrics;
pub mod presets;
pub mod rir;
pub mod scenario;
pub mod source;
pub mod speech;

pub use metrics::{
    ensemble_average, erle, final_second_window, first_frame_at_or_below, linear_mean_db, misalignment,
    steady_state_window, ErleMeter, MetricsTrace,
};
pub use rir::synthetic_rir;
pub use scenario::{
    optimal_weights, prepare_streams, run_filter, run_scenario, FrameEvent, RunOutcome,
    ScenarioConfig, ScenarioResult, Streams, SystemSpec,
};
pub use source::{generate_source, read_wav, write_wav, SourceSpec, WavAudio};
