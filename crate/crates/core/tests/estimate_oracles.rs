use beamtrack_core::array::{codebook, ArrayConfig, ChannelState};
use beamtrack_core::estimate::{ls_gain, ml_angle_search, z_vector};
use beamtrack_core::linalg::{inner, norm_sqr};
use beamtrack_core::schedule::Direction;
use beamtrack_core::sounder::{measure, pcs_tracking_sounder, Sounder, TrackerSide};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn brute_objective(y: &[Complex64], z: &[Complex64]) -> f64 {
    inner(z, y).norm_sqr() / norm_sqr(z)
}

fn residual(y: &[Complex64], g: Complex64, z: &[Complex64]) -> f64 {
    y.iter().zip(z).map(|(a, b)| (a - g * b).norm_sqr()).sum()
}

#[test]
fn factorized_objective_matches_brute_force_on_small_grids() {
    let cfg = ArrayConfig::new(8, 8, 8, 8).unwrap();
    let grid = codebook(8);
    for seed in 0..20 {
        let mut r = rng(seed);
        let s = Sounder::random_cs(&cfg, &mut r);
        let state = ChannelState::single(
            r.random_range(-3.0..3.0),
            r.random_range(-1.5..1.5),
            r.random_range(-1.5..1.5),
        )
        .unwrap();
        let y = measure(&state.channel_matrix(&cfg), &s, 0.5, &mut r).unwrap();

        let mut best = (0, 0, f64::NEG_INFINITY);
        for (i, &aod) in grid.iter().enumerate() {
            for (j, &aoa) in grid.iter().enumerate() {
                let brute = brute_objective(&y, &z_vector(aod, aoa, &s, &cfg));
                let single = ml_angle_search(&y, &s, &[aod], &[aoa], &cfg).unwrap();
                assert!((single.metric - brute).abs() <= 1e-9 * brute.max(1.0));
                if brute > best.2 {
                    best = (i, j, brute);
                }
            }
        }
        let est = ml_angle_search(&y, &s, &grid, &grid, &cfg).unwrap();
        assert_eq!((est.aod_index, est.aoa_index), (best.0, best.1));
        assert!((est.metric - best.2).abs() <= 1e-9 * best.2.max(1.0));
    }
}

#[test]
fn estimate_minimizes_residual_over_grid_pairs() {
    let cfg = ArrayConfig::default();
    let grid = codebook(cfg.q_bs);
    let mut r = rng(42);
    let s = Sounder::random_cs(&cfg, &mut r);
    let state = ChannelState::single(1.1, 0.3, -0.2).unwrap();
    let y = measure(&state.channel_matrix(&cfg), &s, 1.0, &mut r).unwrap();
    let est = ml_angle_search(&y, &s, &grid, &grid, &cfg).unwrap();
    let z_hat = z_vector(est.aod, est.aoa, &s, &cfg);
    assert!((est.gain - ls_gain(&y, &z_hat).unwrap()).norm() < 1e-9);
    let best = residual(&y, est.gain, &z_hat);
    for _ in 0..100 {
        let (i, j) = (r.random_range(0..grid.len()), r.random_range(0..grid.len()));
        let z = z_vector(grid[i], grid[j], &s, &cfg);
        let other = residual(&y, ls_gain(&y, &z).unwrap(), &z);
        assert!(best <= other + 1e-9 * other.max(1.0), "{best} > {other}");
    }
}

#[test]
fn noiseless_cs_recovers_on_grid_truth() {
    let cfg = ArrayConfig::default();
    let grid = codebook(cfg.q_bs);
    for seed in 0..50 {
        let mut r = rng(1000 + seed);
        let s = Sounder::random_cs(&cfg, &mut r);
        let (i, j) = (r.random_range(0..grid.len()), r.random_range(0..grid.len()));
        let state = ChannelState::single(r.random_range(-3.0..3.0), grid[i], grid[j]).unwrap();
        let y = measure(&state.channel_matrix(&cfg), &s, 0.0, &mut r).unwrap();
        let est = ml_angle_search(&y, &s, &grid, &grid, &cfg).unwrap();
        assert_eq!((est.aod_index, est.aoa_index), (i, j), "seed {seed}");
        assert!((est.gain - state.paths[0].gain).norm() < 1e-9);
    }
}

#[test]
fn noiseless_pcs_recovers_truth_near_previous_estimate() {
    let cfg = ArrayConfig::default();
    let grid = codebook(cfg.q_bs);
    // 2pi/N spans 2Q/N grid steps.
    let reach = 2 * cfg.q_bs / cfg.n_bs;
    for seed in 0..50 {
        let mut r = rng(2000 + seed);
        let cs = Sounder::random_cs(&cfg, &mut r);
        let prev = (
            r.random_range(reach..grid.len() - reach),
            r.random_range(reach..grid.len() - reach),
        );
        let i = prev.0 + r.random_range(0..=2 * reach) - reach;
        let j = prev.1 + r.random_range(0..=2 * reach) - reach;
        let dir = |t: usize, p: usize| {
            if t >= p {
                Direction::Positive
            } else {
                Direction::Negative
            }
        };
        let s = pcs_tracking_sounder(
            TrackerSide {
                angle: grid[prev.0],
                direction: dir(i, prev.0),
            },
            TrackerSide {
                angle: grid[prev.1],
                direction: dir(j, prev.1),
            },
            &cfg,
            &cs,
        )
        .unwrap();
        let state = ChannelState::single(r.random_range(-3.0..3.0), grid[i], grid[j]).unwrap();
        let y = measure(&state.channel_matrix(&cfg), &s, 0.0, &mut r).unwrap();
        let est = ml_angle_search(&y, &s, &grid, &grid, &cfg).unwrap();
        assert_eq!((est.aod_index, est.aoa_index), (i, j), "seed {seed}");
    }
}
