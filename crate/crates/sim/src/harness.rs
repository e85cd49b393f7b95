//! Monte Carlo orchestration.
//!
//! Run `r` of an experiment with seed `s` draws all of its randomness from
//! ChaCha8 generators keyed by `(s, r)`, one stream per source (sounders,
//! measurement noise, mobility, gain phase). Every algorithm, schedule and
//! SNR cell therefore replays the same trajectories, and a run's result does
//! not depend on how many runs or worker threads there are. Runs are
//! evaluated in parallel but aggregated sequentially in run order, so the
//! aggregates are bit-identical for any thread count.

use beamtrack_core::frame::{run_frame, FrameConfig, FrameResult, RngStreams, Schedule};
use beamtrack_core::sounder::Scheme;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::SimError;

const STREAM_SOUNDER: u64 = 0;
const STREAM_NOISE: u64 = 1;
const STREAM_MOBILITY: u64 = 2;
const STREAM_GAIN: u64 = 3;

fn stream(seed: u64, run: u64, id: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&run.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(id);
    rng
}

/// Generators for run `run` of an experiment seeded with `seed`.
pub fn run_streams(seed: u64, run: u64) -> RngStreams<ChaCha8Rng> {
    RngStreams {
        sounder: stream(seed, run, STREAM_SOUNDER),
        noise: stream(seed, run, STREAM_NOISE),
        mobility: stream(seed, run, STREAM_MOBILITY),
        gain: stream(seed, run, STREAM_GAIN),
    }
}

/// Runs `runs` independent frames of one cell, in parallel, returned in run order.
pub fn run_cell(
    frame: &FrameConfig,
    scheme: Scheme,
    schedule: Schedule,
    seed: u64,
    runs: usize,
) -> Result<Vec<FrameResult>, SimError> {
    (0..runs as u64)
        .into_par_iter()
        .map(|r| {
            run_frame(frame, scheme, schedule, &mut run_streams(seed, r)).map_err(SimError::from)
        })
        .collect()
}

/// Aggregates of one (algorithm, schedule, SNR) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub scheme: Scheme,
    pub schedule: Schedule,
    pub snr_db: f64,
    pub rmse_aod_deg: f64,
    pub rmse_aoa_deg: f64,
    /// Mean SE over all slots and runs.
    pub mean_se: f64,
    /// Mean fraction of slots spent sounding.
    pub overhead: f64,
    /// Per-slot SE averaged over runs.
    pub se_time_series: Vec<f64>,
    pub events: usize,
    pub runs: usize,
}

impl MetricsRow {
    /// Aggregates frames in the order given.
    pub fn from_frames(
        scheme: Scheme,
        schedule: Schedule,
        snr_db: f64,
        frames: &[FrameResult],
    ) -> Self {
        let runs = frames.len();
        let frame_len = frames.first().map_or(0, FrameResult::frame_len);
        let mut sq_aod = 0.0;
        let mut sq_aoa = 0.0;
        let mut events = 0;
        let mut overhead = 0.0;
        let mut series = vec![0.0; frame_len];
        for f in frames {
            for (e_aod, e_aoa) in f.angle_errors() {
                sq_aod += e_aod * e_aod;
                sq_aoa += e_aoa * e_aoa;
                events += 1;
            }
            overhead += f.overhead();
            for (acc, v) in series.iter_mut().zip(&f.se_per_slot) {
                *acc += v;
            }
        }
        let rmse = |sq: f64| {
            if events == 0 {
                0.0
            } else {
                (sq / events as f64).sqrt()
            }
        };
        let runs_f = runs.max(1) as f64;
        for v in &mut series {
            *v /= runs_f;
        }
        let mean_se = if frame_len == 0 {
            0.0
        } else {
            series.iter().sum::<f64>() / frame_len as f64
        };
        Self {
            scheme,
            schedule,
            snr_db,
            rmse_aod_deg: rmse(sq_aod),
            rmse_aoa_deg: rmse(sq_aoa),
            mean_se,
            overhead: overhead / runs_f,
            se_time_series: series,
            events,
            runs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsTable {
    pub rows: Vec<MetricsRow>,
}

impl MetricsTable {
    pub fn find(&self, scheme: Scheme, schedule: Schedule, snr_db: f64) -> Option<&MetricsRow> {
        self.rows
            .iter()
            .find(|r| r.scheme == scheme && r.schedule == schedule && r.snr_db == snr_db)
    }

    /// `(mean SE, o_max)` pairs of the periodic rows for one algorithm and SNR.
    pub fn periodic_pairs(&self, scheme: Scheme, snr_db: f64) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.scheme == scheme && r.snr_db == snr_db)
            .filter_map(|r| match r.schedule {
                Schedule::Periodic { o_max } => Some((r.mean_se, o_max)),
                Schedule::Aperiodic => None,
            })
            .collect()
    }
}

/// Runs every (algorithm, schedule, SNR) cell of the experiment.
/// Rows are ordered schedule-major, then SNR, then algorithm.
pub fn run_monte_carlo(cfg: &ExperimentConfig) -> Result<MetricsTable, SimError> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for schedule in cfg.schedules() {
        for &snr in &cfg.snr_db {
            let frame = cfg.frame_config(snr)?;
            for scheme in cfg.schemes() {
                let frames = run_cell(&frame, scheme, schedule, cfg.seed, cfg.mc_runs)?;
                rows.push(MetricsRow::from_frames(scheme, schedule, snr, &frames));
            }
        }
    }
    Ok(MetricsTable { rows })
}
