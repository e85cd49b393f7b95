//! Piecewise-linear angle drift with Gaussian random-walk perturbation, and
//! path-gain phase redraws.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::array::ChannelState;
use crate::{deg_to_rad, Error, Result};

pub const DEFAULT_FRAME_LEN: usize = 10_000;
/// Per-slot random-walk variance, degrees squared.
pub const DEFAULT_NOISE_VAR_DEG2: f64 = 1e-4;

/// Total angle drift per frame as a function of the slot index.
#[derive(Debug, Clone, PartialEq)]
pub enum Drift {
    Constant(f64),
    /// `(first_slot, drift_deg)` pairs with strictly increasing first slots,
    /// starting at slot 1. Each segment runs until the next one starts.
    Piecewise(Vec<(usize, f64)>),
}

impl Drift {
    pub fn at(&self, slot: usize) -> f64 {
        match self {
            Drift::Constant(d) => *d,
            Drift::Piecewise(segments) => segments
                .iter()
                .take_while(|(start, _)| *start <= slot)
                .last()
                .map_or(0.0, |(_, d)| *d),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Drift::Piecewise(segments) = self {
            if segments.first().map(|s| s.0) != Some(1) {
                return Err(Error::InvalidConfig("drift segments must start at slot 1"));
            }
            if segments.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::InvalidConfig("drift segment starts must increase"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobilityKind {
    /// 10 deg AoD and AoA drift per frame.
    Model1,
    /// 5 deg AoD drift; AoA drifts at 15, -5 and then 1 deg per frame.
    Model2,
    Static,
}

/// Angle evolution `x^k = x^{k-1} + drift(k) / frame_len + N(0, noise_var)`,
/// all in degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct MobilityModel {
    pub drift_aod: Drift,
    pub drift_aoa: Drift,
    pub noise_var_deg2: f64,
    pub frame_len: usize,
}

impl MobilityModel {
    pub fn new(
        drift_aod: Drift,
        drift_aoa: Drift,
        noise_var_deg2: f64,
        frame_len: usize,
    ) -> Result<Self> {
        if !(noise_var_deg2 >= 0.0) || !noise_var_deg2.is_finite() {
            return Err(Error::InvalidConfig(
                "mobility noise variance must be non-negative",
            ));
        }
        if frame_len == 0 {
            return Err(Error::InvalidConfig("frame length must be positive"));
        }
        drift_aod.validate()?;
        drift_aoa.validate()?;
        Ok(Self {
            drift_aod,
            drift_aoa,
            noise_var_deg2,
            frame_len,
        })
    }

    pub fn preset(kind: MobilityKind, frame_len: usize, noise_var_deg2: f64) -> Result<Self> {
        let (aod, aoa) = match kind {
            MobilityKind::Model1 => (Drift::Constant(10.0), Drift::Constant(10.0)),
            MobilityKind::Model2 => {
                let b1 = 2000.min(frame_len);
                let b2 = 4000.min(frame_len);
                let mut seg = vec![(1, 15.0)];
                if b1 > 1 {
                    seg.push((b1, -5.0));
                }
                if b2 > b1 {
                    seg.push((b2, 1.0));
                }
                (Drift::Constant(5.0), Drift::Piecewise(seg))
            }
            MobilityKind::Static => {
                return Self::new(Drift::Constant(0.0), Drift::Constant(0.0), 0.0, frame_len)
            }
        };
        Self::new(aod, aoa, noise_var_deg2, frame_len)
    }

    /// Advances every path to slot `k`. Two standard normals are drawn per
    /// path (AoD then AoA) regardless of the noise variance, so runs with
    /// different variances stay aligned.
    pub fn step<R: Rng + ?Sized>(
        &self,
        state: &ChannelState,
        k: usize,
        rng: &mut R,
    ) -> ChannelState {
        let mut next = state.clone();
        self.step_in_place(&mut next, k, rng);
        next
    }

    pub fn step_in_place<R: Rng + ?Sized>(&self, state: &mut ChannelState, k: usize, rng: &mut R) {
        let sigma = libm::sqrt(self.noise_var_deg2);
        let frame = self.frame_len as f64;
        let d_aod = self.drift_aod.at(k) / frame;
        let d_aoa = self.drift_aoa.at(k) / frame;
        for p in &mut state.paths {
            let n_aod: f64 = rng.sample(StandardNormal);
            let n_aoa: f64 = rng.sample(StandardNormal);
            p.aod = (p.aod + deg_to_rad(d_aod + sigma * n_aod)).clamp(-FRAC_PI_2, FRAC_PI_2);
            p.aoa = (p.aoa + deg_to_rad(d_aoa + sigma * n_aoa)).clamp(-FRAC_PI_2, FRAC_PI_2);
        }
    }
}

/// Replaces every path gain by `exp(j psi)`, `psi ~ U[-pi, pi)`.
pub fn redraw_gain_phase<R: Rng + ?Sized>(state: &ChannelState, rng: &mut R) -> ChannelState {
    let mut next = state.clone();
    for p in &mut next.paths {
        p.gain = Complex64::from_polar(1.0, rng.random_range(-PI..PI));
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rad_to_deg;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn start() -> ChannelState {
        ChannelState::single(0.0, deg_to_rad(12.0), deg_to_rad(15.0)).unwrap()
    }

    fn run(model: &MobilityModel, slots: usize, seed: u64) -> ChannelState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = start();
        for k in 1..=slots {
            model.step_in_place(&mut s, k, &mut rng);
        }
        s
    }

    #[test]
    fn model1_drifts_ten_degrees() {
        let m = MobilityModel::preset(MobilityKind::Model1, 10_000, 0.0).unwrap();
        let s = run(&m, 10_000, 1);
        assert!((rad_to_deg(s.paths[0].aod) - 22.0).abs() < 1e-9);
        assert!((rad_to_deg(s.paths[0].aoa) - 25.0).abs() < 1e-9);
    }

    #[test]
    fn model2_first_segment() {
        let m = MobilityModel::preset(MobilityKind::Model2, 10_000, 0.0).unwrap();
        let s = run(&m, 1999, 1);
        assert!((rad_to_deg(s.paths[0].aoa) - (15.0 + 15.0 * 0.1999)).abs() < 1e-9);
        let later = run(&m, 2100, 1);
        assert!(later.paths[0].aoa < s.paths[0].aoa + deg_to_rad(15.0 / 10_000.0));
    }

    #[test]
    fn static_model_is_identity() {
        let m = MobilityModel::preset(MobilityKind::Static, 10_000, 1e-4).unwrap();
        assert_eq!(run(&m, 500, 3), start());
    }

    #[test]
    fn drift_lookup() {
        let d = Drift::Piecewise(vec![(1, 15.0), (2000, -5.0), (4000, 1.0)]);
        assert_eq!(d.at(1), 15.0);
        assert_eq!(d.at(1999), 15.0);
        assert_eq!(d.at(2000), -5.0);
        assert_eq!(d.at(3999), -5.0);
        assert_eq!(d.at(10_000), 1.0);
    }

    #[test]
    fn validation() {
        assert!(MobilityModel::new(Drift::Constant(0.0), Drift::Constant(0.0), -1.0, 10).is_err());
        assert!(MobilityModel::new(
            Drift::Piecewise(vec![(2, 1.0)]),
            Drift::Constant(0.0),
            0.0,
            10
        )
        .is_err());
        assert!(MobilityModel::new(
            Drift::Piecewise(vec![(1, 1.0), (1, 2.0)]),
            Drift::Constant(0.0),
            0.0,
            10
        )
        .is_err());
    }

    #[test]
    fn angles_clamp_at_endfire() {
        let m = MobilityModel::new(Drift::Constant(1e6), Drift::Constant(-1e6), 0.0, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = m.step(&start(), 1, &mut rng);
        assert_eq!(s.paths[0].aod, FRAC_PI_2);
        assert_eq!(s.paths[0].aoa, -FRAC_PI_2);
    }

    #[test]
    fn redraw_keeps_unit_magnitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = redraw_gain_phase(&start(), &mut rng);
        assert!((s.paths[0].gain.norm() - 1.0).abs() < 1e-15);
        assert_eq!(s.paths[0].aod, start().paths[0].aod);
        let again = redraw_gain_phase(&start(), &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(s, again);
    }

    #[test]
    fn redraw_phase_averages_out() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = start();
        let n = 100_000;
        let mean: Complex64 = (0..n)
            .map(|_| redraw_gain_phase(&s, &mut rng).paths[0].gain)
            .sum::<Complex64>()
            / n as f64;
        assert!(mean.norm() < 0.02, "|mean| = {}", mean.norm());
    }
}
