//! Tracking-period adaptation and the fixed-budget periodic planner.

use alloc::vec::Vec;

use crate::{rad_to_deg, Error, Result};

/// Tracking periodicities in slots.
pub const DEFAULT_PERIODS: [u32; 8] = [70, 140, 280, 560, 1120, 2240, 4480, 8960];

/// Largest tolerated angular change between tracking events, degrees.
pub const DEFAULT_GAMMA_MAX_DEG: f64 = 2.5;

/// Period used for the first tracking event after initial acquisition.
pub const DEFAULT_FIRST_PERIOD: u32 = 560;

/// Scan direction of one side, `sgn(x)` with `sgn(0) = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Positive,
    Negative,
}

impl Direction {
    pub fn signum(self) -> f64 {
        match self {
            Direction::Positive => 1.0,
            Direction::Negative => -1.0,
        }
    }
}

/// `sgn(curr - prev)`; an absent `prev` counts as `+1`.
pub fn direction_sign(curr: f64, prev: Option<f64>) -> Direction {
    match prev {
        Some(p) if curr - p < 0.0 => Direction::Negative,
        _ => Direction::Positive,
    }
}

/// Ordered set of admissible tracking periods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodSet {
    values: Vec<u32>,
}

impl Default for PeriodSet {
    fn default() -> Self {
        Self {
            values: DEFAULT_PERIODS.to_vec(),
        }
    }
}

impl PeriodSet {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.is_empty() || values[0] == 0 {
            return Err(Error::InvalidConfig(
                "period set must be non-empty and positive",
            ));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "period set must be strictly increasing",
            ));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn contains(&self, period: u32) -> bool {
        self.values.binary_search(&period).is_ok()
    }

    pub fn min(&self) -> u32 {
        self.values[0]
    }

    pub fn max(&self) -> u32 {
        self.values[self.values.len() - 1]
    }

    /// Maps a raw period to the member whose midpoint range contains it.
    /// Ranges are lower-inclusive: with the default set, `[1, 105) -> 70`,
    /// `[105, 210) -> 140`, ..., `[6720, inf) -> 8960`.
    pub fn quantize(&self, t_raw: u64) -> Result<u32> {
        if t_raw < 1 {
            return Err(Error::InvalidPeriod(t_raw));
        }
        let t = t_raw as f64;
        let idx = self
            .values
            .windows(2)
            .take_while(|w| t >= (f64::from(w[0]) + f64::from(w[1])) / 2.0)
            .count();
        Ok(self.values[idx])
    }
}

/// [`PeriodSet::quantize`] on the default period set.
pub fn quantize_period(t_raw: u64) -> Result<u32> {
    PeriodSet::default().quantize(t_raw)
}

/// AoD/AoA pair in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePair {
    pub aod: f64,
    pub aoa: f64,
}

/// Estimate memory and current period of the aperiodic scheduler.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackerState {
    pub prev: AnglePair,
    pub prev2: Option<AnglePair>,
    pub period: u32,
    pub gamma_max_deg: f64,
    pub periods: PeriodSet,
    /// Scan direction used while only one estimate is known.
    pub initial_direction: Direction,
}

impl TrackerState {
    pub fn new(
        initial: AnglePair,
        first_period: u32,
        gamma_max_deg: f64,
        periods: PeriodSet,
    ) -> Result<Self> {
        if !periods.contains(first_period) {
            return Err(Error::InvalidConfig(
                "first period must belong to the period set",
            ));
        }
        if !(gamma_max_deg > 0.0) {
            return Err(Error::InvalidConfig("gamma_max must be positive"));
        }
        Ok(Self {
            prev: initial,
            prev2: None,
            period: first_period,
            gamma_max_deg,
            periods,
            initial_direction: Direction::Positive,
        })
    }

    /// Scan directions `(BS, MS)` from the last two estimates.
    pub fn directions(&self) -> (Direction, Direction) {
        match self.prev2 {
            Some(p2) => (
                direction_sign(self.prev.aod, Some(p2.aod)),
                direction_sign(self.prev.aoa, Some(p2.aoa)),
            ),
            None => (self.initial_direction, self.initial_direction),
        }
    }

    /// Next period given the largest absolute angle change `delta_deg`:
    /// doubles (saturating at the largest member) when nothing moved,
    /// otherwise quantizes `ceil(gamma_max / delta * period)`.
    pub fn next_period(&self, delta_deg: f64) -> u32 {
        let raw = if delta_deg <= 0.0 {
            2 * u64::from(self.period)
        } else {
            // `as` saturates, so a vanishing delta lands in the top bin.
            libm::ceil(self.gamma_max_deg / delta_deg * f64::from(self.period)) as u64
        };
        // raw >= 1 here, so quantization cannot fail.
        self.periods
            .quantize(raw.max(1))
            .unwrap_or(self.periods.max())
    }

    /// Pushes a new estimate, returning the angle change in degrees.
    pub fn push_estimate(&mut self, est: AnglePair) -> f64 {
        let delta = rad_to_deg(libm::fabs(est.aod - self.prev.aod))
            .max(rad_to_deg(libm::fabs(est.aoa - self.prev.aoa)));
        self.prev2 = Some(self.prev);
        self.prev = est;
        delta
    }

    /// Records an estimate and adopts the adapted period, which is returned.
    pub fn update(&mut self, est: AnglePair) -> u32 {
        let delta = self.push_estimate(est);
        self.period = self.next_period(delta);
        self.period
    }
}

/// Fixed-period schedule meeting an overhead budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodicPlan {
    pub rounds: usize,
    pub period: u32,
    pub offset: usize,
}

impl PeriodicPlan {
    /// Start slots of the planned events.
    pub fn event_slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.rounds).map(move |r| self.offset + r * self.period as usize)
    }
}

/// Plans `R = floor(o_max * frame_len / m_per_event)` events at the largest
/// period that fits `R - 1` repetitions in the frame, centred by the offset
/// `ceil((frame_len - (R - 1) T) / 2)`.
///
/// If even the smallest period cannot fit `R` events, `R` is reduced to the
/// number that does fit.
pub fn periodic_plan(
    o_max: f64,
    m_per_event: usize,
    frame_len: usize,
    periods: &PeriodSet,
) -> Result<PeriodicPlan> {
    if !(o_max > 0.0 && o_max < 1.0) {
        return Err(Error::InvalidConfig("o_max must lie in (0, 1)"));
    }
    if m_per_event == 0 || frame_len == 0 {
        return Err(Error::InvalidConfig(
            "event length and frame length must be positive",
        ));
    }
    // Tolerance absorbs rounding such as 0.57 * 100 = 56.99999999999999.
    let budget = o_max * frame_len as f64 / m_per_event as f64;
    let mut rounds = libm::floor(budget + 1e-9) as usize;
    if rounds == 0 {
        return Err(Error::InfeasibleBudget {
            o_max,
            m_per_event,
            frame_len,
        });
    }
    rounds = rounds.min(frame_len / periods.min() as usize + 1);
    let span = |t: u32| (rounds - 1) * t as usize;
    let period = periods
        .values()
        .iter()
        .rev()
        .copied()
        .find(|&t| span(t) <= frame_len)
        .unwrap_or(periods.min());
    let offset = (frame_len - span(period)).div_ceil(2);
    Ok(PeriodicPlan {
        rounds,
        period,
        offset,
    })
}
