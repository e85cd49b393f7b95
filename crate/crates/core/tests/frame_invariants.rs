use beamtrack_core::array::{codebook, ArrayConfig, ChannelState};
use beamtrack_core::deg_to_rad;
use beamtrack_core::frame::{run_frame, FrameConfig, RngStreams, Schedule};
use beamtrack_core::mobility::{MobilityKind, MobilityModel};
use beamtrack_core::schedule::{AnglePair, Direction, PeriodSet};
use beamtrack_core::sounder::Scheme;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SCHEMES: [Scheme; 3] = [Scheme::Cs, Scheme::Pcs, Scheme::BeamSweep];

fn streams(seed: u64) -> RngStreams<ChaCha8Rng> {
    let s = |id| {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        r.set_stream(id);
        r
    };
    RngStreams {
        sounder: s(0),
        noise: s(1),
        mobility: s(2),
        gain: s(3),
    }
}

fn config(kind: MobilityKind, snr_db: f64, initial: AnglePair) -> FrameConfig {
    FrameConfig {
        array: ArrayConfig::default(),
        mobility: MobilityModel::preset(kind, 10_000, 1e-4).unwrap(),
        snr_db,
        first_period: 560,
        gamma_max_deg: 2.5,
        periods: PeriodSet::default(),
        initial,
        initial_direction: Direction::Positive,
        event_limit: None,
    }
}

fn default_start() -> AnglePair {
    AnglePair {
        aod: deg_to_rad(12.0),
        aoa: deg_to_rad(15.0),
    }
}

#[test]
fn slots_are_conserved_and_se_is_bounded() {
    for snr in [-10.0, 0.0, 10.0] {
        let cfg = config(MobilityKind::Model2, snr, default_start());
        let bound = (1.0 + 1024.0 / cfg.noise_var()).log2();
        for scheme in SCHEMES {
            for schedule in [Schedule::Aperiodic, Schedule::Periodic { o_max: 0.05 }] {
                let r = run_frame(&cfg, scheme, schedule, &mut streams(5)).unwrap();
                assert_eq!(r.data_slots() + r.tracking_slots, 10_000);
                assert_eq!(
                    r.tracking_slots,
                    r.events.len() * scheme.measurement_count()
                );
                assert_eq!(
                    r.overhead(),
                    (r.events.len() * scheme.measurement_count()) as f64 / 10_000.0
                );
                assert!(r
                    .se_per_slot
                    .iter()
                    .all(|&v| (0.0..=bound + 1e-9).contains(&v)));
            }
        }
    }
}

#[test]
fn static_on_grid_channel_keeps_matched_beams() {
    let grid = codebook(256);
    let start = AnglePair {
        aod: grid[145],
        aoa: grid[149],
    };
    let cfg = config(MobilityKind::Static, 30.0, start);
    let bound = (1.0 + 1024.0 / cfg.noise_var()).log2();
    for scheme in [Scheme::Cs, Scheme::Pcs] {
        let r = run_frame(&cfg, scheme, Schedule::Aperiodic, &mut streams(8)).unwrap();
        assert!(!r.events.is_empty());
        for e in &r.events {
            assert_eq!((e.estimate.aod, e.estimate.aoa), (start.aod, start.aoa));
        }
        let mut tracking = vec![false; 10_000];
        for e in &r.events {
            tracking[e.slot - 1..e.slot - 1 + scheme.measurement_count()].fill(true);
        }
        for (se, busy) in r.se_per_slot.iter().zip(&tracking) {
            if *busy {
                assert_eq!(*se, 0.0);
            } else {
                assert!((se - bound).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn every_mode_sees_the_same_trajectory() {
    let cfg = config(MobilityKind::Model1, 0.0, default_start());
    let mut rng = streams(13).mobility;
    let mut state = ChannelState::single(0.0, cfg.initial.aod, cfg.initial.aoa).unwrap();
    let mut trajectory = vec![cfg.initial];
    for k in 1..=10_000 {
        cfg.mobility.step_in_place(&mut state, k, &mut rng);
        trajectory.push(AnglePair {
            aod: state.paths[0].aod,
            aoa: state.paths[0].aoa,
        });
    }
    for scheme in SCHEMES {
        for schedule in [Schedule::Aperiodic, Schedule::Periodic { o_max: 0.02 }] {
            let r = run_frame(&cfg, scheme, schedule, &mut streams(13)).unwrap();
            for e in &r.events {
                assert_eq!(e.truth, trajectory[e.slot - 1]);
            }
        }
    }
}
