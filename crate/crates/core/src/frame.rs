//! One frame of interleaved tracking and data slots.
//!
//! Slots are numbered `1..=frame_len`. The channel evolves every slot. A
//! tracking event starting at slot `k` sounds the channel as it was at the
//! end of slot `k - 1`, occupies `M` slots with zero spectral efficiency,
//! and then switches the data beams to steering vectors at the new
//! estimate. Feedback to the base station is instantaneous and costs no
//! slots.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::array::{beamform, codebook, steering_vector, ArrayConfig, ChannelState};
use crate::estimate::{beamsweep_decision, ml_angle_search, Estimate};
use crate::linalg::CMatrix;
use crate::mobility::{redraw_gain_phase, MobilityModel};
use crate::schedule::{periodic_plan, AnglePair, Direction, PeriodSet, TrackerState};
use crate::sounder::{
    beamsweep_sounder, measure, pcs_tracking_sounder, Scheme, Sounder, TrackerSide,
};
use crate::{rad_to_deg, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// Periods adapt to the estimated angle change.
    Aperiodic,
    /// Fixed plan from [`periodic_plan`] under overhead budget `o_max`.
    Periodic { o_max: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameConfig {
    pub array: ArrayConfig,
    pub mobility: MobilityModel,
    pub snr_db: f64,
    pub first_period: u32,
    pub gamma_max_deg: f64,
    pub periods: PeriodSet,
    /// True angles at slot 0, also taken as the initial estimate.
    pub initial: AnglePair,
    pub initial_direction: Direction,
    /// Stop scheduling after this many tracking events.
    pub event_limit: Option<usize>,
}

impl FrameConfig {
    pub fn frame_len(&self) -> usize {
        self.mobility.frame_len
    }

    pub fn noise_var(&self) -> f64 {
        snr_to_noise_var(self.snr_db)
    }
}

/// `sigma^2 = 10^(-SNR/10)` for unit-modulus path gains.
pub fn snr_to_noise_var(snr_db: f64) -> f64 {
    libm::pow(10.0, -snr_db / 10.0)
}

/// Independent generators for each source of randomness, so that two runs
/// sharing the mobility stream see the same trajectory whatever the
/// algorithm or schedule.
#[derive(Debug, Clone)]
pub struct RngStreams<R> {
    pub sounder: R,
    pub noise: R,
    pub mobility: R,
    pub gain: R,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackingEvent {
    /// First sounding slot.
    pub slot: usize,
    pub estimate: Estimate,
    /// Angles the sounder observed.
    pub truth: AnglePair,
    /// Period adopted after this event (aperiodic schedule only).
    pub next_period: Option<u32>,
}

impl TrackingEvent {
    /// Signed AoD error, degrees.
    pub fn aod_error_deg(&self) -> f64 {
        rad_to_deg(self.estimate.aod - self.truth.aod)
    }

    /// Signed AoA error, degrees.
    pub fn aoa_error_deg(&self) -> f64 {
        rad_to_deg(self.estimate.aoa - self.truth.aoa)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameResult {
    pub scheme: Scheme,
    /// Spectral efficiency per slot, zero on tracking slots.
    pub se_per_slot: Vec<f64>,
    pub events: Vec<TrackingEvent>,
    pub tracking_slots: usize,
}

impl FrameResult {
    pub fn frame_len(&self) -> usize {
        self.se_per_slot.len()
    }

    pub fn data_slots(&self) -> usize {
        self.frame_len() - self.tracking_slots
    }

    pub fn overhead(&self) -> f64 {
        self.tracking_slots as f64 / self.frame_len() as f64
    }

    pub fn mean_se(&self) -> f64 {
        self.se_per_slot.iter().sum::<f64>() / self.frame_len() as f64
    }

    /// Signed `(AoD, AoA)` errors in degrees, one pair per event.
    pub fn angle_errors(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.events
            .iter()
            .map(|e| (e.aod_error_deg(), e.aoa_error_deg()))
    }
}

/// `log2(1 + |w^H H f|^2 / noise_var)`.
pub fn spectral_efficiency(
    h: &CMatrix,
    f: &[Complex64],
    w: &[Complex64],
    noise_var: f64,
) -> Result<f64> {
    se_from_gain(beamform(w, h, f)?, noise_var)
}

fn se_from_gain(gain: Complex64, noise_var: f64) -> Result<f64> {
    if !(noise_var > 0.0) {
        return Err(Error::InvalidNoiseVariance(noise_var));
    }
    Ok(libm::log2(1.0 + gain.norm_sqr() / noise_var))
}

/// `max over (SE, o_max) of max(0, 1 - n_users * o_max) * SE`; zero for no pairs.
pub fn effective_se(pairs: &[(f64, f64)], n_users: u32) -> f64 {
    pairs
        .iter()
        .map(|&(se, o_max)| (1.0 - f64::from(n_users) * o_max).max(0.0) * se)
        .fold(0.0, f64::max)
}

struct DataBeams {
    precoder: Vec<Complex64>,
    combiner: Vec<Complex64>,
}

impl DataBeams {
    fn steer(angles: AnglePair, cfg: &ArrayConfig) -> Self {
        Self {
            precoder: steering_vector(angles.aod, cfg.n_bs).into_inner(),
            combiner: steering_vector(angles.aoa, cfg.n_ms).into_inner(),
        }
    }
}

fn angles_of(state: &ChannelState) -> AnglePair {
    let p = &state.paths[0];
    AnglePair {
        aod: p.aod,
        aoa: p.aoa,
    }
}

struct Estimator<'a> {
    cfg: &'a FrameConfig,
    scheme: Scheme,
    cs: Sounder,
    grid_bs: Vec<f64>,
    grid_ms: Vec<f64>,
    noise_var: f64,
}

impl Estimator<'_> {
    fn track<R: Rng + ?Sized>(
        &self,
        snapshot: &ChannelState,
        tracker: &TrackerState,
        noise: &mut R,
    ) -> Result<Estimate> {
        let array = &self.cfg.array;
        let h = snapshot.channel_matrix(array);
        match self.scheme {
            Scheme::Cs => {
                let y = measure(&h, &self.cs, self.noise_var, noise)?;
                ml_angle_search(&y, &self.cs, &self.grid_bs, &self.grid_ms, array)
            }
            Scheme::Pcs => {
                let (dir_bs, dir_ms) = tracker.directions();
                let bs = TrackerSide {
                    angle: tracker.prev.aod,
                    direction: dir_bs,
                };
                let ms = TrackerSide {
                    angle: tracker.prev.aoa,
                    direction: dir_ms,
                };
                let sounder = pcs_tracking_sounder(bs, ms, array, &self.cs)?;
                let y = measure(&h, &sounder, self.noise_var, noise)?;
                ml_angle_search(&y, &sounder, &self.grid_bs, &self.grid_ms, array)
            }
            Scheme::BeamSweep => {
                let sweep = beamsweep_sounder(tracker.prev.aod, tracker.prev.aoa, array);
                let y = measure(&h, &sweep.sounder, self.noise_var, noise)?;
                beamsweep_decision(&y, &sweep.bs, &sweep.ms, array)
            }
        }
    }
}

/// Runs one frame, starting from perfect estimates at slot 0.
///
/// The CS sounder is drawn from `rngs.sounder` for every scheme (PCS reuses
/// its first columns), so the sounder stream stays aligned across schemes.
pub fn run_frame<R: Rng>(
    cfg: &FrameConfig,
    scheme: Scheme,
    schedule: Schedule,
    rngs: &mut RngStreams<R>,
) -> Result<FrameResult> {
    let frame_len = cfg.frame_len();
    let m = scheme.measurement_count();
    let estimator = Estimator {
        cfg,
        scheme,
        cs: Sounder::random_cs(&cfg.array, &mut rngs.sounder),
        grid_bs: codebook(cfg.array.q_bs),
        grid_ms: codebook(cfg.array.q_ms),
        noise_var: cfg.noise_var(),
    };
    if !(estimator.noise_var > 0.0) {
        return Err(Error::InvalidNoiseVariance(estimator.noise_var));
    }

    let mut state = ChannelState::single(
        rngs.gain.random_range(-PI..PI),
        cfg.initial.aod,
        cfg.initial.aoa,
    )?;
    let mut tracker = TrackerState::new(
        cfg.initial,
        cfg.first_period,
        cfg.gamma_max_deg,
        cfg.periods.clone(),
    )?;
    tracker.initial_direction = cfg.initial_direction;
    let mut beams = DataBeams::steer(cfg.initial, &cfg.array);

    let planned: Vec<usize> = match schedule {
        Schedule::Aperiodic => vec![cfg.first_period as usize],
        Schedule::Periodic { o_max } => periodic_plan(o_max, m, frame_len, &cfg.periods)?
            .event_slots()
            .map(|s| s.max(1))
            .collect(),
    };
    let mut planned = planned.into_iter();
    let mut next_event = planned.next();
    let limit = cfg.event_limit.unwrap_or(usize::MAX);

    let mut se = vec![0.0; frame_len];
    let mut events = Vec::new();
    let mut tracking_slots = 0;
    let mut k = 1;
    while k <= frame_len {
        let due = next_event.is_some_and(|s| s <= k);
        if due && events.len() < limit && k + m - 1 <= frame_len {
            state = redraw_gain_phase(&state, &mut rngs.gain);
            let truth = angles_of(&state);
            let estimate = estimator.track(&state, &tracker, &mut rngs.noise)?;
            for slot in k..k + m {
                cfg.mobility
                    .step_in_place(&mut state, slot, &mut rngs.mobility);
            }
            tracking_slots += m;

            let angles = AnglePair {
                aod: estimate.aod,
                aoa: estimate.aoa,
            };
            beams = DataBeams::steer(angles, &cfg.array);
            let next_period = match schedule {
                Schedule::Aperiodic => {
                    let p = tracker.update(angles);
                    next_event = Some(k + p as usize);
                    Some(p)
                }
                Schedule::Periodic { .. } => {
                    tracker.push_estimate(angles);
                    next_event = planned.next();
                    None
                }
            };
            events.push(TrackingEvent {
                slot: k,
                estimate,
                truth,
                next_period,
            });
            k += m;
            continue;
        }
        if due {
            // Event does not fit before the frame ends, or the limit is hit.
            next_event = None;
        }
        cfg.mobility
            .step_in_place(&mut state, k, &mut rngs.mobility);
        let gain = state.beamformed_gain(&beams.combiner, &beams.precoder, &cfg.array)?;
        se[k - 1] = se_from_gain(gain, estimator.noise_var)?;
        k += 1;
    }

    Ok(FrameResult {
        scheme,
        se_per_slot: se,
        events,
        tracking_slots,
    })
}
