use fkf_core::filter::min_step;
use fkf_core::oracle::{reference_blocks, step_blocks, td_step};
use fkf_core::sim::presets::{fig1, sufficient_length};
use fkf_core::sim::{optimal_weights, prepare_streams, run_filter, run_scenario, write_wav};
use fkf_core::{ScenarioConfig, SourceSpec, SystemSpec, Variant};

#[test]
fn sufficient_length_runs_reach_the_system() {
    let result = run_scenario(&sufficient_length(vec![1, 2, 3])).unwrap();
    for run in &result.runs {
        let last = *run.trace.misalignment_db.last().unwrap();
        assert!(last < -60.0, "{} seed {:?}: {last} dB", run.trace.algorithm, run.trace.seed);
    }
}

#[test]
fn undermodeled_fkf_tracks_time_domain_iteration() {
    let mut cfg = fig1();
    cfg.frames = 1000;
    cfg.seeds = vec![1];
    let alg = cfg.algorithms[0];
    assert_eq!(alg.variant, Variant::Fkf);
    let streams = prepare_streams(&cfg, 1).unwrap();
    let w_o = optimal_weights(&cfg, &streams).unwrap();
    let n = cfg.n;
    let mut w_td = vec![0.0; n];
    let mut worst: f64 = 0.0;
    run_filter(&cfg, &alg, "FKF", 1, &streams, &w_o, |ev| {
        let d = &streams.d[ev.frame * n..(ev.frame + 1) * n];
        let xb = reference_blocks(&ev.filter.state().x_history).unwrap();
        let mb = step_blocks(&ev.result.mu).unwrap();
        let xi = min_step(&ev.result.mu).unwrap();
        w_td = td_step(Variant::Fkf, &w_td, d, &xb, &mb, alg.a, xi).unwrap().weights;
        for (a, b) in ev.weights.iter().zip(&w_td) {
            worst = worst.max((a - b).abs());
        }
    })
    .unwrap();
    assert!(worst < 1e-9, "{worst:e}");
}

#[test]
fn repeated_runs_are_bit_identical() {
    let mut cfg = fig1();
    cfg.frames = 300;
    cfg.seeds = vec![4, 5, 6];
    assert_eq!(run_scenario(&cfg).unwrap(), run_scenario(&cfg).unwrap());
}

#[test]
fn wav_source_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chirp.wav");
    let samples: Vec<f64> = (0..4000)
        .map(|i| 0.5 * (0.001 * (i * i) as f64).sin())
        .collect();
    write_wav(&path, &samples, 8000).unwrap();
    let mut cfg = sufficient_length(vec![1]);
    cfg.source = SourceSpec::Wav(path);
    cfg.system = SystemSpec::Taps(vec![0.7, -0.2, 0.1]);
    cfg.frames = usize::MAX;
    let result = run_scenario(&cfg).unwrap();
    assert_eq!(result.fs, 8000.0);
    let run = &result.runs[0];
    assert_eq!(run.trace.len(), 4000 / cfg.n);
    // The optimum of a sufficient-length fit is the system itself.
    for (a, b) in result.optimal.iter().zip([0.7, -0.2, 0.1, 0.0]) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn zero_frames_give_empty_traces() {
    let mut cfg: ScenarioConfig = fig1();
    cfg.frames = 0;
    cfg.seeds = vec![1];
    let result = run_scenario(&cfg).unwrap();
    assert!(result.runs.iter().all(|r| r.trace.is_empty()));
}
