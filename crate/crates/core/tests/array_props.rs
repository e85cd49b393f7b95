use std::f64::consts::{FRAC_PI_2, PI};

use beamtrack_core::array::{beamform, codebook, steering_vector, ArrayConfig, ChannelState};
use beamtrack_core::linalg::{inner, norm};
use num_complex::Complex64;
use proptest::prelude::*;

fn angle() -> impl Strategy<Value = f64> {
    -FRAC_PI_2..=FRAC_PI_2
}

fn unit_vector(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(|v| {
        let v: Vec<Complex64> = v
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        let n = norm(&v).max(1e-12);
        v.into_iter().map(|x| x / n).collect()
    })
}

proptest! {
    #[test]
    fn steering_vectors_have_unit_norm(x in angle(), n in 1usize..128) {
        prop_assert!((norm(&steering_vector(x, n)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_path_frobenius_norm(psi in -PI..PI, aod in angle(), aoa in angle(), n_bs in 2usize..40, n_ms in 2usize..40) {
        let cfg = ArrayConfig::new(n_bs, n_ms, 16, 16).unwrap();
        let h = ChannelState::single(psi, aod, aoa).unwrap().channel_matrix(&cfg);
        prop_assert!((h.frobenius_norm() - ((n_bs * n_ms) as f64).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn full_and_factorized_beamforming_agree(
        psi in -PI..PI,
        aod in angle(),
        aoa in angle(),
        f in unit_vector(16),
        w in unit_vector(12),
    ) {
        let cfg = ArrayConfig::new(16, 12, 16, 16).unwrap();
        let state = ChannelState::single(psi, aod, aoa).unwrap();
        let full = beamform(&w, &state.channel_matrix(&cfg), &f).unwrap();
        let g = Complex64::from_polar(1.0, psi);
        let factored = g
            * inner(&w, &steering_vector(aoa, 12))
            * inner(&steering_vector(aod, 16), &f)
            * (16.0f64 * 12.0).sqrt();
        prop_assert!((full - factored).norm() < 1e-9);
        let via_state = state.beamformed_gain(&w, &f, &cfg).unwrap();
        prop_assert!((full - via_state).norm() < 1e-9);
    }

    #[test]
    fn codebook_is_uniform_and_increasing(q in 1usize..1024) {
        let grid = codebook(q);
        prop_assert_eq!(grid.len(), q);
        prop_assert_eq!(grid[0], -FRAC_PI_2);
        for pair in grid.windows(2) {
            prop_assert!(pair[1] > pair[0]);
            prop_assert!((pair[1] - pair[0] - PI / q as f64).abs() < 1e-12);
        }
        prop_assert!(*grid.last().unwrap() < FRAC_PI_2);
    }
}
