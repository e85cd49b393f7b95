//! CSV and JSON result files.
//!
//! * `metrics.csv`: `algorithm,schedule,snr_db,rmse_aod_deg,rmse_aoa_deg,mean_se,overhead`
//! * `se_timeseries_<schedule>_snr<snr>.csv`: `slot,algorithm,mean_se`, one
//!   file per schedule and SNR cell
//! * `ese.csv`: `algorithm,snr_db,n_users,ese`, periodic experiments only
//! * `manifest.json`: configuration echo, seed and version
//!
//! Numbers are written in plain decimal with 6 significant digits.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use beamtrack_core::frame::{effective_se, Schedule};
use serde::Serialize;

use crate::config::{scheme_name, ExperimentConfig, ScheduleLabel};
use crate::harness::MetricsTable;
use crate::SimError;

pub const METRICS_HEADER: [&str; 7] = [
    "algorithm",
    "schedule",
    "snr_db",
    "rmse_aod_deg",
    "rmse_aoa_deg",
    "mean_se",
    "overhead",
];
pub const TIMESERIES_HEADER: [&str; 3] = ["slot", "algorithm", "mean_se"];
pub const ESE_HEADER: [&str; 4] = ["algorithm", "snr_db", "n_users", "ese"];

/// Largest user count written to `ese.csv`.
pub const ESE_MAX_USERS: u32 = 10;

/// Formats `x` in plain decimal rounded to `digits` significant digits,
/// without trailing zeros.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            "0".to_string()
        } else {
            x.to_string()
        };
    }
    // Round through scientific notation, which handles carries like 9.9999996 -> 10.
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let exp: i32 = sci
        .split_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific format");
    let rounded: f64 = sci.parse().expect("round trip");
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let mut s = format!("{rounded:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn num(x: f64) -> String {
    format_sig(x, 6)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SimError + '_ {
    move |source| SimError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> SimError + '_ {
    move |e| SimError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

fn schedule_tag(schedule: Schedule) -> String {
    match schedule {
        Schedule::Aperiodic => "aperiodic".to_string(),
        Schedule::Periodic { o_max } => format!("periodic-{}", num(o_max)),
    }
}

/// File name of the SE time series for one schedule and SNR.
pub fn timeseries_file_name(schedule: Schedule, snr_db: f64) -> String {
    format!(
        "se_timeseries_{}_snr{}.csv",
        schedule_tag(schedule),
        num(snr_db)
    )
}

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, SimError> {
    let file = File::create(path).map_err(io_err(path))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file)))
}

/// Writes `metrics.csv` into `dir`.
pub fn write_metrics(table: &MetricsTable, dir: &Path) -> Result<PathBuf, SimError> {
    let path = dir.join("metrics.csv");
    let mut w = writer(&path)?;
    w.write_record(METRICS_HEADER).map_err(csv_err(&path))?;
    for r in &table.rows {
        w.write_record([
            scheme_name(r.scheme).to_string(),
            ScheduleLabel(r.schedule).to_string(),
            num(r.snr_db),
            num(r.rmse_aod_deg),
            num(r.rmse_aoa_deg),
            num(r.mean_se),
            num(r.overhead),
        ])
        .map_err(csv_err(&path))?;
    }
    w.flush().map_err(io_err(&path))?;
    Ok(path)
}

/// Writes one time-series file per (schedule, SNR) present in the table.
pub fn write_timeseries(table: &MetricsTable, dir: &Path) -> Result<Vec<PathBuf>, SimError> {
    let mut cells: Vec<(Schedule, f64)> = Vec::new();
    for r in &table.rows {
        if !cells.contains(&(r.schedule, r.snr_db)) {
            cells.push((r.schedule, r.snr_db));
        }
    }
    let mut paths = Vec::new();
    for (schedule, snr) in cells {
        let path = dir.join(timeseries_file_name(schedule, snr));
        let mut w = writer(&path)?;
        w.write_record(TIMESERIES_HEADER).map_err(csv_err(&path))?;
        for r in table
            .rows
            .iter()
            .filter(|r| r.schedule == schedule && r.snr_db == snr)
        {
            for (i, v) in r.se_time_series.iter().enumerate() {
                w.write_record([
                    (i + 1).to_string(),
                    scheme_name(r.scheme).to_string(),
                    num(*v),
                ])
                .map_err(csv_err(&path))?;
            }
        }
        w.flush().map_err(io_err(&path))?;
        paths.push(path);
    }
    Ok(paths)
}

/// Writes `ese.csv` for user counts `0..=ESE_MAX_USERS` if the table holds
/// periodic rows; returns `None` otherwise.
pub fn write_ese(table: &MetricsTable, dir: &Path) -> Result<Option<PathBuf>, SimError> {
    let mut keys = Vec::new();
    for r in &table.rows {
        if matches!(r.schedule, Schedule::Periodic { .. }) && !keys.contains(&(r.scheme, r.snr_db))
        {
            keys.push((r.scheme, r.snr_db));
        }
    }
    if keys.is_empty() {
        return Ok(None);
    }
    let path = dir.join("ese.csv");
    let mut w = writer(&path)?;
    w.write_record(ESE_HEADER).map_err(csv_err(&path))?;
    for (scheme, snr) in keys {
        let pairs = table.periodic_pairs(scheme, snr);
        for n in 0..=ESE_MAX_USERS {
            w.write_record([
                scheme_name(scheme).to_string(),
                num(snr),
                n.to_string(),
                num(effective_se(&pairs, n)),
            ])
            .map_err(csv_err(&path))?;
        }
    }
    w.flush().map_err(io_err(&path))?;
    Ok(Some(path))
}

/// Writes every CSV output into `dir`, creating it if needed.
pub fn emit_results(table: &MetricsTable, dir: &Path) -> Result<Vec<PathBuf>, SimError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut paths = vec![write_metrics(table, dir)?];
    paths.extend(write_timeseries(table, dir)?);
    paths.extend(write_ese(table, dir)?);
    Ok(paths)
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    version: &'static str,
    seed: u64,
    definitions: Definitions,
    config: &'a ExperimentConfig,
    outputs: Vec<String>,
}

#[derive(Debug, Serialize)]
struct Definitions {
    snr: &'static str,
    spectral_efficiency: &'static str,
    rmse: &'static str,
}

pub fn version() -> &'static str {
    env!("BEAMTRACK_VERSION")
}

/// Writes `manifest.json` next to the CSV outputs.
pub fn write_manifest(
    cfg: &ExperimentConfig,
    outputs: &[PathBuf],
    dir: &Path,
) -> Result<PathBuf, SimError> {
    let path = dir.join("manifest.json");
    let manifest = Manifest {
        version: version(),
        seed: cfg.seed,
        definitions: Definitions {
            snr: "noise variance = 10^(-snr_db/10) with unit-modulus path gain",
            spectral_efficiency: "log2(1 + |w^H H f|^2 / noise variance), 0 on tracking slots",
            rmse:
                "root mean square of signed angle errors over all tracking events and runs, degrees",
        },
        config: cfg,
        outputs: outputs
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| SimError::Io {
        path: path.clone(),
        source: e.into(),
    })?;
    text.push('\n');
    let mut f = File::create(&path).map_err(io_err(&path))?;
    f.write_all(text.as_bytes()).map_err(io_err(&path))?;
    Ok(path)
}
