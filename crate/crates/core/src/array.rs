//! Uniform linear arrays, angle codebooks and the geometric single-cluster
//! channel.
//!
//! All angles are radians. Steering vectors follow the half-wavelength ULA
//! response `a(x)[k] = exp(-j k pi sin x) / sqrt(N)`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::ops::Deref;

use num_complex::Complex64;

use crate::linalg::{inner, CMatrix};
use crate::{Error, Result};

/// Antenna counts and codebook sizes at both ends of the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArrayConfig {
    pub n_bs: usize,
    pub n_ms: usize,
    pub q_bs: usize,
    pub q_ms: usize,
}

impl Default for ArrayConfig {
    fn default() -> Self {
        Self {
            n_bs: 32,
            n_ms: 32,
            q_bs: 256,
            q_ms: 256,
        }
    }
}

impl ArrayConfig {
    pub fn new(n_bs: usize, n_ms: usize, q_bs: usize, q_ms: usize) -> Result<Self> {
        if n_bs < 2 || n_ms < 2 {
            return Err(Error::InvalidConfig("antenna counts must be at least 2"));
        }
        if q_bs < 2 || q_ms < 2 {
            return Err(Error::InvalidConfig("codebook sizes must be at least 2"));
        }
        Ok(Self {
            n_bs,
            n_ms,
            q_bs,
            q_ms,
        })
    }

    /// `sqrt(N_BS * N_MS)`, the matched-beam amplitude gain of a unit path.
    pub fn array_gain(&self) -> f64 {
        libm::sqrt((self.n_bs * self.n_ms) as f64)
    }
}

/// Unit-norm ULA response vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector(Vec<Complex64>);

impl SteeringVector {
    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }
}

impl Deref for SteeringVector {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl From<SteeringVector> for Vec<Complex64> {
    fn from(v: SteeringVector) -> Self {
        v.0
    }
}

/// ULA response toward `angle` for `n` elements. Defined for any real angle.
pub fn steering_vector(angle: f64, n: usize) -> SteeringVector {
    let scale = 1.0 / libm::sqrt(n as f64);
    let step = -PI * libm::sin(angle);
    SteeringVector(
        (0..n)
            .map(|k| {
                let (s, c) = libm::sincos(step * k as f64);
                Complex64::new(c * scale, s * scale)
            })
            .collect(),
    )
}

/// The `q` steerable angles `-pi/2 + j*pi/q`, `j = 0..q`, in ascending order.
///
/// Index `j` corresponds to `i = q - j` in the set notation
/// `{-pi/2 + (q - i) pi / q : i = 1..q}`.
pub fn codebook(q: usize) -> Vec<f64> {
    let step = PI / q as f64;
    (0..q).map(|j| -FRAC_PI_2 + j as f64 * step).collect()
}

/// One propagation path: unit-modulus gain, departure and arrival angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Path {
    pub gain: Complex64,
    pub aod: f64,
    pub aoa: f64,
}

/// Parameters of the sparse channel at one slot.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    pub paths: Vec<Path>,
}

impl ChannelState {
    /// Validates `|g| = 1` and angles within `[-pi/2, pi/2]`.
    pub fn new(paths: Vec<Path>) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::InvalidConfig("channel needs at least one path"));
        }
        for p in &paths {
            if (p.gain.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidConfig("path gains must have unit magnitude"));
            }
            if !(-FRAC_PI_2..=FRAC_PI_2).contains(&p.aod)
                || !(-FRAC_PI_2..=FRAC_PI_2).contains(&p.aoa)
            {
                return Err(Error::InvalidConfig(
                    "path angles must lie in [-pi/2, pi/2]",
                ));
            }
        }
        Ok(Self { paths })
    }

    /// Single path with gain `exp(j psi)`.
    pub fn single(psi: f64, aod: f64, aoa: f64) -> Result<Self> {
        Self::new(alloc::vec![Path {
            gain: Complex64::from_polar(1.0, psi),
            aod,
            aoa,
        }])
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    /// `H = sqrt(N_BS N_MS / L) sum_l g_l a_MS(aoa_l) a_BS(aod_l)^H`, shape `N_MS x N_BS`.
    pub fn channel_matrix(&self, cfg: &ArrayConfig) -> CMatrix {
        let scale = libm::sqrt((cfg.n_bs * cfg.n_ms) as f64 / self.paths.len() as f64);
        let mut h = CMatrix::zeros(cfg.n_ms, cfg.n_bs);
        for p in &self.paths {
            let a_ms = steering_vector(p.aoa, cfg.n_ms);
            let a_bs = steering_vector(p.aod, cfg.n_bs);
            for (r, am) in a_ms.iter().enumerate() {
                let left = p.gain * am * scale;
                for (c, ab) in a_bs.iter().enumerate() {
                    h[(r, c)] += left * ab.conj();
                }
            }
        }
        h
    }

    /// `w^H H f` evaluated path by path without forming `H`.
    pub fn beamformed_gain(
        &self,
        w: &[Complex64],
        f: &[Complex64],
        cfg: &ArrayConfig,
    ) -> Result<Complex64> {
        check_len(w.len(), cfg.n_ms)?;
        check_len(f.len(), cfg.n_bs)?;
        let scale = libm::sqrt((cfg.n_bs * cfg.n_ms) as f64 / self.paths.len() as f64);
        Ok(self
            .paths
            .iter()
            .map(|p| {
                let rx = inner(w, &steering_vector(p.aoa, cfg.n_ms));
                let tx = inner(&steering_vector(p.aod, cfg.n_bs), f);
                p.gain * rx * tx * scale
            })
            .sum())
    }
}

fn check_len(actual: usize, expected: usize) -> Result<()> {
    if actual == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// Noiseless post-beamforming scalar `w^H H f`.
pub fn beamform(w: &[Complex64], h: &CMatrix, f: &[Complex64]) -> Result<Complex64> {
    check_len(w.len(), h.rows())?;
    let hf = h.mul_vec(f)?;
    Ok(inner(w, &hf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm;
    use alloc::vec;

    const EPS: f64 = 1e-12;

    #[test]
    fn broadside_steering_is_flat() {
        let a = steering_vector(0.0, 4);
        for v in a.iter() {
            assert!((v - Complex64::new(0.5, 0.0)).norm() < EPS);
        }
    }

    #[test]
    fn endfire_steering_alternates() {
        let a = steering_vector(FRAC_PI_2, 2);
        let r = 1.0 / libm::sqrt(2.0);
        assert!((a[0] - Complex64::new(r, 0.0)).norm() < EPS);
        assert!((a[1] - Complex64::new(-r, 0.0)).norm() < EPS);
    }

    #[test]
    fn steering_has_unit_norm() {
        assert!((norm(&steering_vector(0.3, 32)) - 1.0).abs() < EPS);
    }

    #[test]
    fn codebook_small_sizes() {
        let q4 = codebook(4);
        let expected = [-FRAC_PI_2, -PI / 4.0, 0.0, PI / 4.0];
        for (a, b) in q4.iter().zip(expected) {
            assert!((a - b).abs() < EPS);
        }
        let q2 = codebook(2);
        assert!((q2[0] + FRAC_PI_2).abs() < EPS);
        assert!(q2[1].abs() < EPS);
    }

    #[test]
    fn broadside_channel_is_all_ones() {
        let cfg = ArrayConfig::new(2, 2, 4, 4).unwrap();
        let h = ChannelState::single(0.0, 0.0, 0.0)
            .unwrap()
            .channel_matrix(&cfg);
        for v in h.as_slice() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < EPS);
        }
    }

    #[test]
    fn single_path_channel_has_rank_one() {
        let cfg = ArrayConfig::default();
        let h = ChannelState::single(0.7, 0.2, -0.4)
            .unwrap()
            .channel_matrix(&cfg);
        // Every 2x2 minor of an outer product vanishes.
        for (r, c) in [(0, 0), (3, 7), (10, 20), (30, 1)] {
            let minor = h[(r, c)] * h[(r + 1, c + 1)] - h[(r, c + 1)] * h[(r + 1, c)];
            assert!(minor.norm() < 1e-9);
        }
    }

    #[test]
    fn zero_channel_beamforms_to_zero() {
        let cfg = ArrayConfig::default();
        let h = CMatrix::zeros(cfg.n_ms, cfg.n_bs);
        let y = beamform(&steering_vector(0.1, 32), &h, &steering_vector(-0.2, 32)).unwrap();
        assert_eq!(y, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn matched_beams_reach_full_gain() {
        let cfg = ArrayConfig::default();
        let (aod, aoa) = (0.21, -0.35);
        let h = ChannelState::single(0.0, aod, aoa)
            .unwrap()
            .channel_matrix(&cfg);
        let y = beamform(&steering_vector(aoa, 32), &h, &steering_vector(aod, 32)).unwrap();
        assert!((y - Complex64::new(32.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn beamform_rejects_bad_dimensions() {
        let cfg = ArrayConfig::default();
        let h = CMatrix::zeros(cfg.n_ms, cfg.n_bs);
        let short = vec![Complex64::new(1.0, 0.0); 3];
        assert!(matches!(
            beamform(&short, &h, &steering_vector(0.0, 32)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            beamform(&steering_vector(0.0, 32), &h, &short),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(ArrayConfig::new(1, 32, 256, 256).is_err());
        assert!(ArrayConfig::new(32, 32, 1, 256).is_err());
        assert!(ChannelState::single(0.0, 2.0, 0.0).is_err());
    }
}
