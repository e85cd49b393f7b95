use beamtrack::config::{ExperimentConfig, MobilityChoice};
use beamtrack::harness::run_cell;
use beamtrack_core::frame::Schedule;
use beamtrack_core::sounder::Scheme;

/// Triggers per slot starting in `[lo, hi)`, averaged over runs.
fn density(frames: &[beamtrack_core::frame::FrameResult], lo: usize, hi: usize) -> f64 {
    let hits = frames
        .iter()
        .flat_map(|f| &f.events)
        .filter(|e| (lo..hi).contains(&e.slot))
        .count();
    hits as f64 / ((hi - lo) * frames.len()) as f64
}

#[test]
fn faster_drift_triggers_more_often() {
    let cfg = ExperimentConfig {
        mobility: MobilityChoice::Model2,
        ..ExperimentConfig::default()
    };
    let frame = cfg.frame_config(0.0).unwrap();
    for scheme in [Scheme::Cs, Scheme::Pcs] {
        let frames = run_cell(&frame, scheme, Schedule::Aperiodic, cfg.seed, 100).unwrap();
        let fast = density(&frames, 1, 2000);
        let slow = density(&frames, 4000, 10_001);
        assert!(fast > slow, "{scheme:?}: {fast} vs {slow}");
    }
}
