//! Precoder/combiner construction for the three training schemes, and the
//! diagonal measurement model `y_k = w_k^H H f_k + n_k`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::array::{beamform, codebook, steering_vector, ArrayConfig, SteeringVector};
use crate::linalg::{project_onto_span, CMatrix};
use crate::schedule::Direction;
use crate::{Error, Result};

/// Measurement slots per CS tracking event.
pub const M_CS: usize = 45;
/// Measurement slots per PCS tracking event (5 sequences x 4 projections).
pub const M_PCS: usize = 20;
/// Measurement slots per beam-sweep event (5 x 5 beam pairs).
pub const M_BS: usize = 25;

/// Random QPSK sequences reused by the PCS sounder.
pub const PCS_SEQUENCES: usize = 5;
/// Shifted triplets per sequence, with extra shifts `{0, 1/4, 1/2, 3/4} * 2pi/N`.
pub const PCS_PROJECTIONS: usize = 4;

/// Size of the coarse beam-sweep angle grid.
pub const SWEEP_GRID: usize = 32;
/// Beams swept on each side of the centre beam.
pub const SWEEP_HALF_WIDTH: usize = 2;
pub const SWEEP_BEAMS: usize = 2 * SWEEP_HALF_WIDTH + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Cs,
    Pcs,
    BeamSweep,
}

impl Scheme {
    /// Sounding slots consumed by one tracking event.
    pub fn measurement_count(self) -> usize {
        match self {
            Scheme::Cs => M_CS,
            Scheme::Pcs => M_PCS,
            Scheme::BeamSweep => M_BS,
        }
    }
}

/// Paired precoders and combiners; slot `k` uses column `k` of each.
#[derive(Debug, Clone, PartialEq)]
pub struct Sounder {
    pub precoders: Vec<Vec<Complex64>>,
    pub combiners: Vec<Vec<Complex64>>,
    pub scheme: Scheme,
}

impl Sounder {
    /// Number of measurement slots.
    pub fn len(&self) -> usize {
        self.precoders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.precoders.is_empty()
    }

    /// Initial CS sounder: `M_CS` random QPSK precoders followed by `M_CS`
    /// random QPSK combiners, drawn in that order from `rng`.
    pub fn random_cs<R: Rng + ?Sized>(cfg: &ArrayConfig, rng: &mut R) -> Self {
        let precoders = random_qpsk_sounder(cfg.n_bs, M_CS, rng);
        let combiners = random_qpsk_sounder(cfg.n_ms, M_CS, rng);
        Self {
            precoders,
            combiners,
            scheme: Scheme::Cs,
        }
    }
}

/// `m` columns of i.i.d. `{+-1 +-j} / sqrt(2n)` entries. Each column has unit norm.
pub fn random_qpsk_sounder<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Vec<Vec<Complex64>> {
    let scale = 1.0 / libm::sqrt(2.0 * n as f64);
    (0..m)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let re = if rng.random::<bool>() { scale } else { -scale };
                    let im = if rng.random::<bool>() { scale } else { -scale };
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect()
}

/// Three steering vectors at `center + shift + {0, +2pi/N, -2pi/N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripletMatrix {
    pub columns: [SteeringVector; 3],
    pub center_angle: f64,
    pub extra_shift: f64,
}

impl TripletMatrix {
    pub fn antenna_count(&self) -> usize {
        self.columns[0].len()
    }

    pub fn angles(&self) -> [f64; 3] {
        let spacing = 2.0 * PI / self.antenna_count() as f64;
        let base = self.center_angle + self.extra_shift;
        [base, base + spacing, base - spacing]
    }

    /// Pre-normalization projection `T T^+ f`.
    pub fn project(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        let cols: [&[Complex64]; 3] = [&self.columns[0], &self.columns[1], &self.columns[2]];
        project_onto_span(&cols, f)
    }

    /// Projection onto the same column space with linearly dependent columns
    /// dropped: columns are kept in order while the Gram matrix stays well
    /// conditioned. Near the endfire directions two triplet angles can mirror
    /// each other about `+-pi/2` (`sin(-pi/2 + x) = sin(-pi/2 - x)`), which
    /// makes their steering vectors identical.
    pub fn project_reduced(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut kept: Vec<&[Complex64]> = Vec::with_capacity(3);
        for col in &self.columns {
            kept.push(col);
            if project_onto_span(&kept, f).is_err() {
                kept.pop();
            }
        }
        project_onto_span(&kept, f)
    }
}

/// Builds the shifted triplet around `center`. Angles are not wrapped.
pub fn shifted_triplet(center: f64, extra_shift: f64, n: usize) -> TripletMatrix {
    let spacing = 2.0 * PI / n as f64;
    let base = center + extra_shift;
    TripletMatrix {
        columns: [
            steering_vector(base, n),
            steering_vector(base + spacing, n),
            steering_vector(base - spacing, n),
        ],
        center_angle: center,
        extra_shift,
    }
}

/// Projects `f` onto the triplet span and rescales every entry to magnitude
/// `1/sqrt(N)`, keeping its phase. Exact zeros get phase 0.
pub fn project_constant_modulus(
    f: &[Complex64],
    triplet: &TripletMatrix,
) -> Result<Vec<Complex64>> {
    Ok(constant_modulus(triplet.project(f)?))
}

fn constant_modulus(p: Vec<Complex64>) -> Vec<Complex64> {
    let modulus = 1.0 / libm::sqrt(p.len() as f64);
    p.into_iter()
        .map(|v| {
            let mag = v.norm();
            if mag == 0.0 {
                Complex64::new(modulus, 0.0)
            } else {
                v * (modulus / mag)
            }
        })
        .collect()
}

/// Previous estimate and scan direction for one side of the link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerSide {
    pub angle: f64,
    pub direction: Direction,
}

/// Extra angular shift of the `i`-th projection (`i = 0..4`).
pub fn pcs_extra_shift(i: usize, direction: Direction, n: usize) -> f64 {
    (i as f64 / PCS_PROJECTIONS as f64) * direction.signum() * 2.0 * PI / n as f64
}

fn pcs_side(
    base: &[Vec<Complex64>],
    side: TrackerSide,
    n: usize,
    reduced: bool,
) -> Result<Vec<Vec<Complex64>>> {
    let triplets: Vec<TripletMatrix> = (0..PCS_PROJECTIONS)
        .map(|i| shifted_triplet(side.angle, pcs_extra_shift(i, side.direction, n), n))
        .collect();
    let mut out = Vec::with_capacity(PCS_SEQUENCES * PCS_PROJECTIONS);
    for f in base.iter().take(PCS_SEQUENCES) {
        for t in &triplets {
            let p = if reduced {
                t.project_reduced(f)?
            } else {
                t.project(f)?
            };
            out.push(constant_modulus(p));
        }
    }
    Ok(out)
}

/// PCS sounder from the first [`PCS_SEQUENCES`] columns of the CS sounder
/// `base`. Columns are sequence-major: `[f^1_1..f^1_4, f^2_1, ..., f^5_4]`.
pub fn pcs_sounder(
    bs: TrackerSide,
    ms: TrackerSide,
    cfg: &ArrayConfig,
    base: &Sounder,
) -> Result<Sounder> {
    build_pcs(bs, ms, cfg, base, false)
}

/// [`pcs_sounder`] with [`TripletMatrix::project_reduced`] in place of the
/// full-rank projection, for previous estimates where a triplet degenerates.
pub fn pcs_sounder_reduced(
    bs: TrackerSide,
    ms: TrackerSide,
    cfg: &ArrayConfig,
    base: &Sounder,
) -> Result<Sounder> {
    build_pcs(bs, ms, cfg, base, true)
}

/// Sounder used by the tracker: [`pcs_sounder`], or [`pcs_sounder_reduced`]
/// if some triplet is rank deficient.
pub fn pcs_tracking_sounder(
    bs: TrackerSide,
    ms: TrackerSide,
    cfg: &ArrayConfig,
    base: &Sounder,
) -> Result<Sounder> {
    match pcs_sounder(bs, ms, cfg, base) {
        Err(Error::DegenerateGeometry { .. }) => pcs_sounder_reduced(bs, ms, cfg, base),
        other => other,
    }
}

fn build_pcs(
    bs: TrackerSide,
    ms: TrackerSide,
    cfg: &ArrayConfig,
    base: &Sounder,
    reduced: bool,
) -> Result<Sounder> {
    if base.len() < PCS_SEQUENCES {
        return Err(Error::DimensionMismatch {
            expected: PCS_SEQUENCES,
            actual: base.len(),
        });
    }
    Ok(Sounder {
        precoders: pcs_side(&base.precoders, bs, cfg.n_bs, reduced)?,
        combiners: pcs_side(&base.combiners, ms, cfg.n_ms, reduced)?,
        scheme: Scheme::Pcs,
    })
}

/// Five consecutive coarse-grid beams around a previous estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepWindow {
    pub indices: [usize; SWEEP_BEAMS],
    pub angles: [f64; SWEEP_BEAMS],
}

impl SweepWindow {
    /// Quantizes `prev` to the nearest [`SWEEP_GRID`]-point codebook angle and
    /// takes the beams `-2..=+2` steps away, shifting the window inward at
    /// the edges of the grid.
    pub fn around(prev: f64) -> Self {
        let grid = codebook(SWEEP_GRID);
        let step = PI / SWEEP_GRID as f64;
        let nearest = libm::round((prev + FRAC_PI_2) / step);
        let nearest = nearest.clamp(0.0, (SWEEP_GRID - 1) as f64) as usize;
        let first = nearest
            .saturating_sub(SWEEP_HALF_WIDTH)
            .min(SWEEP_GRID - SWEEP_BEAMS);
        let mut indices = [0; SWEEP_BEAMS];
        let mut angles = [0.0; SWEEP_BEAMS];
        for i in 0..SWEEP_BEAMS {
            indices[i] = first + i;
            angles[i] = grid[first + i];
        }
        Self { indices, angles }
    }
}

/// Beam-sweep sounder plus the windows it scans on each side.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSweep {
    pub sounder: Sounder,
    pub bs: SweepWindow,
    pub ms: SweepWindow,
}

/// All 25 beam pairs, BS-major: slot `5 * b + m` pairs BS beam `b` with MS beam `m`.
pub fn beamsweep_sounder(prev_bs_angle: f64, prev_ms_angle: f64, cfg: &ArrayConfig) -> BeamSweep {
    let bs = SweepWindow::around(prev_bs_angle);
    let ms = SweepWindow::around(prev_ms_angle);
    let mut precoders = Vec::with_capacity(M_BS);
    let mut combiners = Vec::with_capacity(M_BS);
    for &a in &bs.angles {
        for &b in &ms.angles {
            precoders.push(steering_vector(a, cfg.n_bs).into_inner());
            combiners.push(steering_vector(b, cfg.n_ms).into_inner());
        }
    }
    BeamSweep {
        sounder: Sounder {
            precoders,
            combiners,
            scheme: Scheme::BeamSweep,
        },
        bs,
        ms,
    }
}

/// `y_k = w_k^H H f_k + n_k` with `n_k ~ CN(0, noise_var)`.
///
/// Noise is drawn as real then imaginary part for each slot in order.
pub fn measure<R: Rng + ?Sized>(
    h: &CMatrix,
    sounder: &Sounder,
    noise_var: f64,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    if !(noise_var >= 0.0) || !noise_var.is_finite() {
        return Err(Error::InvalidNoiseVariance(noise_var));
    }
    let sigma = libm::sqrt(noise_var / 2.0);
    sounder
        .precoders
        .iter()
        .zip(&sounder.combiners)
        .map(|(f, w)| {
            let clean = beamform(w, h, f)?;
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Ok(clean + Complex64::new(re * sigma, im * sigma))
        })
        .collect()
}
