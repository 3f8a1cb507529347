//! Result tables, the run summary and their on-disk form.
//!
//! An output directory holds:
//!
//! * `slots.csv`: `run,slot,arch,ship_id,rate_bpshz,rx_dbm,los,throughput_bps`
//! * `energy.csv`: `run,slot,arch,comm_J,hover_J,mobility_J,total_J,cumulative_J`
//! * `cdf.csv`: `arch,rate,quantile`, one row per distinct pooled rate
//! * `summary.json`: config echo, per-slot means and comparisons
//!
//! Floats are written as the shortest decimal that parses back to the same
//! value, so every summary number can be recomputed from the CSV files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{percent_delta, rate_cdf};
use crate::positioning::Architecture;
use crate::scenario::{monte_carlo, AggregateResult, ScenarioConfig};

pub const SLOTS_HEADER: [&str; 8] = [
    "run",
    "slot",
    "arch",
    "ship_id",
    "rate_bpshz",
    "rx_dbm",
    "los",
    "throughput_bps",
];
pub const ENERGY_HEADER: [&str; 8] = [
    "run",
    "slot",
    "arch",
    "comm_J",
    "hover_J",
    "mobility_J",
    "total_J",
    "cumulative_J",
];
pub const CDF_HEADER: [&str; 3] = ["arch", "rate", "quantile"];

/// Every architecture's Monte Carlo outcome for one config.
#[derive(Debug, Clone)]
pub struct Study {
    pub config: ScenarioConfig,
    pub results: Vec<AggregateResult>,
}

pub fn run_study(config: &ScenarioConfig, archs: &[Architecture], n_runs: usize) -> Result<Study> {
    let results = archs
        .iter()
        .map(|&arch| {
            let mut c = config.clone();
            c.architecture = arch;
            monte_carlo(&c, n_runs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Study {
        config: config.clone(),
        results,
    })
}

impl Study {
    pub fn result(&self, arch: Architecture) -> Option<&AggregateResult> {
        self.results.iter().find(|r| r.architecture == arch)
    }

    pub fn report(&self) -> Result<RunReport> {
        let n_runs = self.results.first().map_or(0, |r| r.runs.len());
        let bandwidth = self.config.channel.bandwidth_hz;
        let architectures: Vec<ArchSummary> = self
            .results
            .iter()
            .map(|agg| {
                let mean_rate = agg.mean_rate();
                ArchSummary {
                    arch: agg.architecture,
                    mean_rate_bpshz: mean_rate,
                    mean_throughput_bps: mean_rate * bandwidth,
                    total_energy_j: agg.mean_total_energy(),
                    mean_slot_rate_bpshz: agg.mean_slot_rate.clone(),
                    mean_cumulative_energy_j: agg.mean_cumulative_energy.clone(),
                    los_ceiling_slots: agg
                        .runs
                        .iter()
                        .flat_map(|r| &r.slots)
                        .filter(|s| s.los_ceiling_hit)
                        .count(),
                }
            })
            .collect();
        let comparisons = comparisons(&architectures);
        Ok(RunReport {
            config: self.config.clone(),
            runs: n_runs,
            architectures,
            comparisons,
        })
    }

    pub fn slot_rows(&self) -> Vec<SlotRow> {
        let bandwidth = self.config.channel.bandwidth_hz;
        let mut rows = Vec::new();
        for agg in &self.results {
            for (run, ts) in agg.runs.iter().enumerate() {
                for slot in &ts.slots {
                    for link in &slot.links {
                        rows.push(SlotRow {
                            run,
                            slot: slot.slot_index,
                            arch: agg.architecture,
                            ship_id: link.ship_id,
                            rate_bpshz: link.rate,
                            rx_dbm: link.rx_dbm,
                            los: link.los.as_str().to_string(),
                            throughput_bps: link.rate * bandwidth,
                        });
                    }
                }
            }
        }
        rows
    }

    pub fn energy_rows(&self) -> Vec<EnergyRow> {
        let mut rows = Vec::new();
        for agg in &self.results {
            for (run, ts) in agg.runs.iter().enumerate() {
                for (slot, cumulative) in ts.slots.iter().zip(&ts.cumulative_energy) {
                    let e = slot.energy;
                    rows.push(EnergyRow {
                        run,
                        slot: slot.slot_index,
                        arch: agg.architecture,
                        comm_j: e.comm,
                        hover_j: e.hover,
                        mobility_j: e.mobility,
                        total_j: e.total,
                        cumulative_j: *cumulative,
                    });
                }
            }
        }
        rows
    }

    pub fn cdf_rows(&self) -> Result<Vec<CdfRow>> {
        let mut rows = Vec::new();
        for agg in &self.results {
            let pooled = agg.pooled_rates();
            if pooled.is_empty() {
                continue;
            }
            for (rate, quantile) in rate_cdf(&pooled)?.steps() {
                rows.push(CdfRow {
                    arch: agg.architecture,
                    rate,
                    quantile,
                });
            }
        }
        Ok(rows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotRow {
    pub run: usize,
    pub slot: usize,
    pub arch: Architecture,
    pub ship_id: usize,
    pub rate_bpshz: f64,
    pub rx_dbm: f64,
    pub los: String,
    pub throughput_bps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub run: usize,
    pub slot: usize,
    pub arch: Architecture,
    #[serde(rename = "comm_J")]
    pub comm_j: f64,
    #[serde(rename = "hover_J")]
    pub hover_j: f64,
    #[serde(rename = "mobility_J")]
    pub mobility_j: f64,
    #[serde(rename = "total_J")]
    pub total_j: f64,
    #[serde(rename = "cumulative_J")]
    pub cumulative_j: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfRow {
    pub arch: Architecture,
    pub rate: f64,
    pub quantile: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchSummary {
    pub arch: Architecture,
    /// Mean over every ship, slot and run.
    pub mean_rate_bpshz: f64,
    pub mean_throughput_bps: f64,
    /// Final cumulative energy, averaged over runs.
    pub total_energy_j: f64,
    pub mean_slot_rate_bpshz: Vec<f64>,
    pub mean_cumulative_energy_j: Vec<f64>,
    /// Slots in which the relay sat at the altitude ceiling without LoS to
    /// every node.
    pub los_ceiling_slots: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Rate,
    Energy,
}

/// `100 * (value(arch) - value(baseline)) / value(baseline)`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub metric: Metric,
    pub arch: Architecture,
    pub baseline: Architecture,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub runs: usize,
    pub architectures: Vec<ArchSummary>,
    pub comparisons: Vec<Comparison>,
}

impl RunReport {
    pub fn summary(&self, arch: Architecture) -> Option<&ArchSummary> {
        self.architectures.iter().find(|a| a.arch == arch)
    }
}

/// All ordered pairs of architectures; pairs with a zero baseline are left
/// out.
pub fn comparisons(summaries: &[ArchSummary]) -> Vec<Comparison> {
    let mut out = Vec::new();
    for metric in [Metric::Rate, Metric::Energy] {
        let value = |s: &ArchSummary| match metric {
            Metric::Rate => s.mean_rate_bpshz,
            Metric::Energy => s.total_energy_j,
        };
        for a in summaries {
            for b in summaries {
                if a.arch == b.arch {
                    continue;
                }
                if let Ok(percent) = percent_delta(value(a), value(b)) {
                    out.push(Comparison {
                        metric,
                        arch: a.arch,
                        baseline: b.arch,
                        percent,
                    });
                }
            }
        }
    }
    out
}

fn num(v: f64) -> String {
    v.to_string()
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Paths written by [`emit_results`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedFiles {
    pub slots: PathBuf,
    pub energy: PathBuf,
    pub summary: PathBuf,
    pub cdf: PathBuf,
}

pub fn emit_results(study: &Study, out_dir: impl AsRef<Path>) -> Result<EmittedFiles> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let files = EmittedFiles {
        slots: dir.join("slots.csv"),
        energy: dir.join("energy.csv"),
        summary: dir.join("summary.json"),
        cdf: dir.join("cdf.csv"),
    };

    write_csv(
        &files.slots,
        &SLOTS_HEADER,
        study.slot_rows().into_iter().map(|r| {
            vec![
                r.run.to_string(),
                r.slot.to_string(),
                r.arch.to_string(),
                r.ship_id.to_string(),
                num(r.rate_bpshz),
                num(r.rx_dbm),
                r.los,
                num(r.throughput_bps),
            ]
        }),
    )?;
    write_csv(
        &files.energy,
        &ENERGY_HEADER,
        study.energy_rows().into_iter().map(|r| {
            vec![
                r.run.to_string(),
                r.slot.to_string(),
                r.arch.to_string(),
                num(r.comm_j),
                num(r.hover_j),
                num(r.mobility_j),
                num(r.total_j),
                num(r.cumulative_j),
            ]
        }),
    )?;
    write_csv(
        &files.cdf,
        &CDF_HEADER,
        study
            .cdf_rows()?
            .into_iter()
            .map(|r| vec![r.arch.to_string(), num(r.rate), num(r.quantile)]),
    )?;

    let report = study.report()?;
    let mut json = serde_json::to_string_pretty(&report).map_err(|source| Error::Json {
        path: files.summary.clone(),
        source,
    })?;
    json.push('\n');
    fs::write(&files.summary, json).map_err(|source| Error::Io {
        path: files.summary.clone(),
        source,
    })?;
    Ok(files)
}

pub fn read_summary(path: impl AsRef<Path>) -> Result<RunReport> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(csv_err)
}

pub fn read_slot_rows(path: impl AsRef<Path>) -> Result<Vec<SlotRow>> {
    read_rows(path.as_ref())
}

pub fn read_energy_rows(path: impl AsRef<Path>) -> Result<Vec<EnergyRow>> {
    read_rows(path.as_ref())
}

pub fn read_cdf_rows(path: impl AsRef<Path>) -> Result<Vec<CdfRow>> {
    read_rows(path.as_ref())
}
