//! Least-squares gain and maximum-likelihood grid search over AoD/AoA
//! codebooks, plus the magnitude decision used by the beam sweep.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::array::{steering_vector, ArrayConfig};
use crate::linalg::{inner, norm_sqr};
use crate::sounder::{Sounder, SweepWindow, SWEEP_BEAMS};
use crate::{Error, Result};

/// Output of one estimation or tracking event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub gain: Complex64,
    pub aod: f64,
    pub aoa: f64,
    pub aod_index: usize,
    pub aoa_index: usize,
    /// Value of the search objective at the selected pair.
    pub metric: f64,
}

/// Unit-gain single-path response seen through the sounder:
/// `z_k = sqrt(N_BS N_MS) (w_k^H a_MS(aoa)) (a_BS(aod)^H f_k)`.
pub fn z_vector(aod: f64, aoa: f64, sounder: &Sounder, cfg: &ArrayConfig) -> Vec<Complex64> {
    let a_bs = steering_vector(aod, cfg.n_bs);
    let a_ms = steering_vector(aoa, cfg.n_ms);
    let scale = cfg.array_gain();
    sounder
        .precoders
        .iter()
        .zip(&sounder.combiners)
        .map(|(f, w)| inner(w, &a_ms) * inner(&a_bs, f) * scale)
        .collect()
}

/// `z^H y / ||z||^2`, the minimizer of `||y - g z||^2`.
pub fn ls_gain(y: &[Complex64], z: &[Complex64]) -> Result<Complex64> {
    if y.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            actual: y.len(),
        });
    }
    let energy = norm_sqr(z);
    if energy == 0.0 {
        return Err(Error::DegenerateResponse);
    }
    Ok(inner(z, y) / energy)
}

/// Grid search maximizing `|z(aod, aoa)^H y|^2 / ||z(aod, aoa)||^2`.
///
/// The objective is evaluated in factorized form: with
/// `A[i][k] = a_BS(aod_i)^H f_k` and `B[k][j] = w_k^H a_MS(aoa_j)`,
/// `z_k = s A[i][k] B[k][j]` and the scale `s` cancels. Ties resolve to the
/// lowest `(aod_index, aoa_index)`.
pub fn ml_angle_search(
    y: &[Complex64],
    sounder: &Sounder,
    grid_bs: &[f64],
    grid_ms: &[f64],
    cfg: &ArrayConfig,
) -> Result<Estimate> {
    let m = sounder.len();
    if y.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: y.len(),
        });
    }
    if m == 0 || grid_bs.is_empty() || grid_ms.is_empty() {
        return Err(Error::DegenerateResponse);
    }

    // tx[i*m + k] = A[i][k]
    let mut tx = Vec::with_capacity(grid_bs.len() * m);
    for &aod in grid_bs {
        let a = steering_vector(aod, cfg.n_bs);
        tx.extend(sounder.precoders.iter().map(|f| inner(&a, f)));
    }
    // rx_conj[j*m + k] = conj(B[k][j]), rx_pow[j*m + k] = |B[k][j]|^2
    let mut rx_conj = Vec::with_capacity(grid_ms.len() * m);
    let mut rx_pow = Vec::with_capacity(grid_ms.len() * m);
    for &aoa in grid_ms {
        let a = steering_vector(aoa, cfg.n_ms);
        for w in &sounder.combiners {
            let b = inner(w, &a);
            rx_conj.push(b.conj());
            rx_pow.push(b.norm_sqr());
        }
    }

    let mut best: Option<(usize, usize, f64, Complex64, f64)> = None;
    let mut weighted = Vec::with_capacity(m);
    let mut tx_pow = Vec::with_capacity(m);
    for (i, a_row) in tx.chunks_exact(m).enumerate() {
        weighted.clear();
        weighted.extend(a_row.iter().zip(y).map(|(a, yk)| a.conj() * yk));
        tx_pow.clear();
        tx_pow.extend(a_row.iter().map(|a| a.norm_sqr()));
        for (j, (b_conj, b_pow)) in rx_conj
            .chunks_exact(m)
            .zip(rx_pow.chunks_exact(m))
            .enumerate()
        {
            let mut corr = Complex64::new(0.0, 0.0);
            let mut energy = 0.0;
            for k in 0..m {
                corr += weighted[k] * b_conj[k];
                energy += tx_pow[k] * b_pow[k];
            }
            if energy <= 0.0 {
                continue;
            }
            let objective = corr.norm_sqr() / energy;
            if best.is_none_or(|(_, _, v, _, _)| objective > v) {
                best = Some((i, j, objective, corr, energy));
            }
        }
    }

    let (i, j, metric, corr, energy) = best.ok_or(Error::DegenerateResponse)?;
    Ok(Estimate {
        // z^H y / ||z||^2 = s corr / (s^2 energy)
        gain: corr / (energy * cfg.array_gain()),
        aod: grid_bs[i],
        aoa: grid_ms[j],
        aod_index: i,
        aoa_index: j,
        metric,
    })
}

/// Picks the swept pair with the largest `|y_k|`. `y` is BS-major as produced
/// by [`crate::sounder::beamsweep_sounder`]; ties go to the first pair.
pub fn beamsweep_decision(
    y: &[Complex64],
    bs: &SweepWindow,
    ms: &SweepWindow,
    cfg: &ArrayConfig,
) -> Result<Estimate> {
    if y.len() != SWEEP_BEAMS * SWEEP_BEAMS {
        return Err(Error::DimensionMismatch {
            expected: SWEEP_BEAMS * SWEEP_BEAMS,
            actual: y.len(),
        });
    }
    let mut k_best = 0;
    for (k, v) in y.iter().enumerate() {
        if v.norm_sqr() > y[k_best].norm_sqr() {
            k_best = k;
        }
    }
    let (b, m) = (k_best / SWEEP_BEAMS, k_best % SWEEP_BEAMS);
    Ok(Estimate {
        gain: y[k_best] / cfg.array_gain(),
        aod: bs.angles[b],
        aoa: ms.angles[m],
        aod_index: bs.indices[b],
        aoa_index: ms.indices[m],
        metric: y[k_best].norm_sqr(),
    })
}
