//! Experiment configuration: a flat TOML file whose keys mirror
//! [`ExperimentConfig`]. Every key is optional; angles are in degrees.
//!
//! ```toml
//! algorithm = "all"          # cs | pcs | beamsweep | all
//! schedule = "aperiodic"     # aperiodic | periodic
//! o_max = [0.01, 0.02, 0.05, 0.1]
//! snr_db = [-10, -5, 0, 5, 10]
//! mobility = "model1"        # model1 | model2 | static
//! mc_runs = 300
//! seed = 1
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use beamtrack_core::array::ArrayConfig;
use beamtrack_core::deg_to_rad;
use beamtrack_core::frame::{FrameConfig, Schedule};
use beamtrack_core::mobility::{
    Drift, MobilityKind, MobilityModel, DEFAULT_FRAME_LEN, DEFAULT_NOISE_VAR_DEG2,
};
use beamtrack_core::schedule::{
    AnglePair, Direction, PeriodSet, DEFAULT_FIRST_PERIOD, DEFAULT_GAMMA_MAX_DEG, DEFAULT_PERIODS,
};
use beamtrack_core::sounder::Scheme;
use serde::{Deserialize, Serialize};

use crate::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmChoice {
    Cs,
    Pcs,
    Beamsweep,
    All,
}

impl AlgorithmChoice {
    pub fn schemes(self) -> Vec<Scheme> {
        match self {
            AlgorithmChoice::Cs => vec![Scheme::Cs],
            AlgorithmChoice::Pcs => vec![Scheme::Pcs],
            AlgorithmChoice::Beamsweep => vec![Scheme::BeamSweep],
            AlgorithmChoice::All => vec![Scheme::Cs, Scheme::Pcs, Scheme::BeamSweep],
        }
    }
}

impl FromStr for AlgorithmChoice {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, SimError> {
        match s {
            "cs" => Ok(Self::Cs),
            "pcs" => Ok(Self::Pcs),
            "beamsweep" => Ok(Self::Beamsweep),
            "all" => Ok(Self::All),
            other => Err(SimError::Config(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    Aperiodic,
    Periodic,
}

impl FromStr for ScheduleKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, SimError> {
        match s {
            "aperiodic" => Ok(Self::Aperiodic),
            "periodic" => Ok(Self::Periodic),
            other => Err(SimError::Config(format!("unknown schedule {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MobilityChoice {
    Model1,
    Model2,
    Static,
}

impl From<MobilityChoice> for MobilityKind {
    fn from(m: MobilityChoice) -> Self {
        match m {
            MobilityChoice::Model1 => MobilityKind::Model1,
            MobilityChoice::Model2 => MobilityKind::Model2,
            MobilityChoice::Static => MobilityKind::Static,
        }
    }
}

/// Stable lowercase name used in CSV files.
pub fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::Cs => "cs",
        Scheme::Pcs => "pcs",
        Scheme::BeamSweep => "beamsweep",
    }
}

/// Schedule label: `aperiodic` or `periodic:<o_max>`.
pub struct ScheduleLabel(pub Schedule);

impl fmt::Display for ScheduleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Schedule::Aperiodic => f.write_str("aperiodic"),
            Schedule::Periodic { o_max } => write!(f, "periodic:{o_max}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_bs: usize,
    pub n_ms: usize,
    pub q_bs: usize,
    pub q_ms: usize,
    pub algorithm: AlgorithmChoice,
    pub schedule: ScheduleKind,
    /// Overhead budgets swept when `schedule = "periodic"`.
    pub o_max: Vec<f64>,
    pub snr_db: Vec<f64>,
    pub mobility: MobilityChoice,
    /// Overrides the model's AoD drift per frame (constant).
    pub drift_aod_deg: Option<f64>,
    /// Overrides the model's AoA drift per frame (constant).
    pub drift_aoa_deg: Option<f64>,
    pub noise_var_deg2: f64,
    pub mc_runs: usize,
    pub seed: u64,
    pub frame_len: usize,
    pub t1: u32,
    pub gamma_max_deg: f64,
    pub period_set: Vec<u32>,
    pub init_aod_deg: f64,
    pub init_aoa_deg: f64,
    /// Scan direction (+1 or -1) before two estimates exist.
    pub initial_direction: i8,
    /// Stop after this many tracking events per frame.
    pub event_limit: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let array = ArrayConfig::default();
        Self {
            n_bs: array.n_bs,
            n_ms: array.n_ms,
            q_bs: array.q_bs,
            q_ms: array.q_ms,
            algorithm: AlgorithmChoice::All,
            schedule: ScheduleKind::Aperiodic,
            o_max: vec![0.01, 0.02, 0.05, 0.1],
            snr_db: vec![-10.0, -5.0, 0.0, 5.0, 10.0],
            mobility: MobilityChoice::Model1,
            drift_aod_deg: None,
            drift_aoa_deg: None,
            noise_var_deg2: DEFAULT_NOISE_VAR_DEG2,
            mc_runs: 300,
            seed: 1,
            frame_len: DEFAULT_FRAME_LEN,
            t1: DEFAULT_FIRST_PERIOD,
            gamma_max_deg: DEFAULT_GAMMA_MAX_DEG,
            period_set: DEFAULT_PERIODS.to_vec(),
            init_aod_deg: 12.0,
            init_aoa_deg: 15.0,
            initial_direction: 1,
            event_limit: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, SimError> {
        let cfg: Self = toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, SimError> {
        let text = std::fs::read_to_string(path).map_err(|source| SimError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.mc_runs == 0 {
            return Err(SimError::Config("mc_runs must be at least 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(SimError::Config("snr_db must not be empty".into()));
        }
        if self.schedule == ScheduleKind::Periodic && self.o_max.is_empty() {
            return Err(SimError::Config(
                "periodic schedule needs at least one o_max".into(),
            ));
        }
        if self.initial_direction != 1 && self.initial_direction != -1 {
            return Err(SimError::Config("initial_direction must be 1 or -1".into()));
        }
        // Build one frame config to run the core validation.
        self.frame_config(self.snr_db[0])?;
        self.schedules().iter().try_for_each(|s| match s {
            Schedule::Periodic { o_max } if !(*o_max > 0.0 && *o_max < 1.0) => {
                Err(SimError::Config(format!("o_max {o_max} outside (0, 1)")))
            }
            _ => Ok(()),
        })
    }

    pub fn schemes(&self) -> Vec<Scheme> {
        self.algorithm.schemes()
    }

    pub fn schedules(&self) -> Vec<Schedule> {
        match self.schedule {
            ScheduleKind::Aperiodic => vec![Schedule::Aperiodic],
            ScheduleKind::Periodic => self
                .o_max
                .iter()
                .map(|&o_max| Schedule::Periodic { o_max })
                .collect(),
        }
    }

    pub fn mobility_model(&self) -> Result<MobilityModel, SimError> {
        let mut model =
            MobilityModel::preset(self.mobility.into(), self.frame_len, self.noise_var_deg2)?;
        if let Some(d) = self.drift_aod_deg {
            model.drift_aod = Drift::Constant(d);
        }
        if let Some(d) = self.drift_aoa_deg {
            model.drift_aoa = Drift::Constant(d);
        }
        Ok(model)
    }

    pub fn frame_config(&self, snr_db: f64) -> Result<FrameConfig, SimError> {
        let array = ArrayConfig::new(self.n_bs, self.n_ms, self.q_bs, self.q_ms)?;
        let periods = PeriodSet::new(self.period_set.clone())?;
        if !periods.contains(self.t1) {
            return Err(SimError::Config(format!(
                "t1 = {} is not in period_set",
                self.t1
            )));
        }
        if self.gamma_max_deg.is_nan() || self.gamma_max_deg <= 0.0 {
            return Err(SimError::Config("gamma_max_deg must be positive".into()));
        }
        if !snr_db.is_finite() {
            return Err(SimError::Config(format!("invalid SNR {snr_db}")));
        }
        let initial = AnglePair {
            aod: deg_to_rad(self.init_aod_deg),
            aoa: deg_to_rad(self.init_aoa_deg),
        };
        if initial.aod.abs() > std::f64::consts::FRAC_PI_2
            || initial.aoa.abs() > std::f64::consts::FRAC_PI_2
        {
            return Err(SimError::Config(
                "initial angles must lie in [-90, 90] degrees".into(),
            ));
        }
        Ok(FrameConfig {
            array,
            mobility: self.mobility_model()?,
            snr_db,
            first_period: self.t1,
            gamma_max_deg: self.gamma_max_deg,
            periods,
            initial,
            initial_direction: if self.initial_direction < 0 {
                Direction::Negative
            } else {
                Direction::Positive
            },
            event_limit: self.event_limit,
        })
    }
}
