//! Field-style KPI datasets: CSV schema, a metadata sidecar, and a synthetic
//! generator whose hidden ground-truth parameters are recoverable by
//! calibration.
//!
//! Every cell of a dataset is keyed by `(site, band)`. Sites share the same
//! placement randomness per band, so two sites generated with identical
//! hidden parameters produce identical noise-free rows; the calibration
//! objective later rebuilds the same per-band stream from the metadata seed
//! and can therefore reproduce the targets exactly.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netsim::{simulate_series, NetworkLayout, SimConfig, SimError, SimParams};
use crate::objective::KpiSeries;
use crate::rng::SeededRng;
use crate::space::{MixedVector, SearchSpace, SpaceError};

pub const DATASET_HEADER: &str = "site,band,interval,active_ues,cell_load,dl_volume_mb";

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("metadata error: {0}")]
    Meta(#[from] serde_json::Error),
    #[error("cell ({site}, {band}): expected intervals 0..{expected}, found {found} rows")]
    IncompleteSeries {
        site: String,
        band: String,
        expected: usize,
        found: usize,
    },
    #[error("cell ({site}, {band}), interval {interval}: {reason}")]
    InvalidRow {
        site: String,
        band: String,
        interval: usize,
        reason: String,
    },
    #[error("dataset contains no rows")]
    EmptyDataset,
    #[error("hidden parameters are outside the search space: {0}")]
    InfeasibleHiddenParams(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// One CSV row of the dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRow {
    pub site: String,
    pub band: String,
    pub interval: usize,
    pub active_ues: f64,
    pub cell_load: f64,
    pub dl_volume_mb: f64,
}

/// Ground truth for one generated cell, kept in the metadata sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HiddenParamsEntry {
    pub site: String,
    pub band: String,
    pub params: SimParams,
}

/// Sidecar metadata written next to a generated CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub interval_minutes: f64,
    pub intervals: usize,
    /// Environment seed: per-band simulation streams derive from it.
    pub seed: u64,
    pub observation_noise: f64,
    /// Present only for synthetic data.
    #[serde(default)]
    pub hidden_params: Vec<HiddenParamsEntry>,
}

/// KPI series per (site, band) plus metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDataset {
    pub meta: DatasetMeta,
    pub cells: BTreeMap<(String, String), KpiSeries>,
}

impl FieldDataset {
    pub fn cell(&self, site: &str, band: &str) -> Option<&KpiSeries> {
        self.cells.get(&(site.to_owned(), band.to_owned()))
    }

    /// Rows in deterministic (site, band, interval) order.
    pub fn rows(&self) -> Vec<DatasetRow> {
        let mut rows = Vec::new();
        for ((site, band), series) in &self.cells {
            for i in 0..series.intervals() {
                rows.push(DatasetRow {
                    site: site.clone(),
                    band: band.clone(),
                    interval: i,
                    active_ues: series.active_ues()[i],
                    cell_load: series.cell_load()[i],
                    dl_volume_mb: series.dl_volume_mb()[i],
                });
            }
        }
        rows
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), DatasetError> {
        let mut writer = csv::Writer::from_path(path).map_err(DatasetError::from)?;
        for row in self.rows() {
            writer.serialize(row)?;
        }
        writer.flush().map_err(|source| DatasetError::Io {
            path: path.to_owned(),
            source,
        })?;
        Ok(())
    }

    /// Sidecar path for a CSV: `data.csv` -> `data.meta.json`.
    pub fn meta_path(csv_path: &Path) -> PathBuf {
        csv_path.with_extension("meta.json")
    }

    pub fn write_meta(&self, csv_path: &Path) -> Result<(), DatasetError> {
        let path = Self::meta_path(csv_path);
        let mut file = std::fs::File::create(&path).map_err(|source| DatasetError::Io {
            path: path.clone(),
            source,
        })?;
        let json = serde_json::to_string_pretty(&self.meta)?;
        file.write_all(json.as_bytes())
            .map_err(|source| DatasetError::Io { path, source })?;
        Ok(())
    }

    /// Load a dataset CSV, picking up the metadata sidecar when present.
    /// Without a sidecar the interval length defaults to 15 minutes and the
    /// environment seed to 0.
    pub fn read_csv(path: &Path) -> Result<FieldDataset, DatasetError> {
        let mut reader = csv::Reader::from_path(path).map_err(DatasetError::from)?;
        let mut grouped: BTreeMap<(String, String), Vec<DatasetRow>> = BTreeMap::new();
        for row in reader.deserialize::<DatasetRow>() {
            let row = row?;
            grouped
                .entry((row.site.clone(), row.band.clone()))
                .or_default()
                .push(row);
        }
        if grouped.is_empty() {
            return Err(DatasetError::EmptyDataset);
        }

        let meta_path = Self::meta_path(path);
        let meta: DatasetMeta = if meta_path.exists() {
            let text = std::fs::read_to_string(&meta_path).map_err(|source| DatasetError::Io {
                path: meta_path.clone(),
                source,
            })?;
            serde_json::from_str(&text)?
        } else {
            let intervals = grouped.values().map(Vec::len).max().unwrap_or(0);
            DatasetMeta {
                interval_minutes: 15.0,
                intervals,
                seed: 0,
                observation_noise: 0.0,
                hidden_params: Vec::new(),
            }
        };

        let mut cells = BTreeMap::new();
        for ((site, band), mut rows) in grouped {
            rows.sort_by_key(|r| r.interval);
            if rows.len() != meta.intervals
                || rows.iter().enumerate().any(|(i, r)| r.interval != i)
            {
                return Err(DatasetError::IncompleteSeries {
                    site,
                    band,
                    expected: meta.intervals,
                    found: rows.len(),
                });
            }
            let series = KpiSeries::new(
                rows.iter().map(|r| r.active_ues).collect(),
                rows.iter().map(|r| r.cell_load).collect(),
                rows.iter().map(|r| r.dl_volume_mb).collect(),
            )
            .map_err(|e| DatasetError::InvalidRow {
                site: site.clone(),
                band: band.clone(),
                interval: 0,
                reason: e.to_string(),
            })?;
            cells.insert((site, band), series);
        }
        Ok(FieldDataset { meta, cells })
    }
}

/// Simulation stream for one band of the environment identified by `seed`.
/// The generator and the calibration objective both use this, which is what
/// makes hidden parameters exactly recoverable on noise-free data.
pub fn cell_sim_rng(seed: u64, band_label: &str) -> SeededRng {
    SeededRng::from_seed(seed).derive_label(band_label)
}

/// Intra-day traffic shape applied to the hidden parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    /// Same parameters in every interval.
    Constant,
    /// One sinusoidal busy-hour cycle across the day: packet sizes and UE
    /// counts swell while inter-arrival gaps shrink, and back.
    Sinusoidal,
}

/// Synthetic-data generator settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub sites: Vec<String>,
    pub hidden_params: SimParams,
    /// Per-site overrides of the hidden parameters.
    pub overrides: BTreeMap<String, SimParams>,
    pub profile: ProfileKind,
    /// Relative swing of the sinusoidal profile, in [0, 1).
    pub profile_amplitude: f64,
    /// Multiplicative KPI observation noise (standard deviation).
    pub observation_noise: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            sites: vec!["site_a".into()],
            hidden_params: SimParams::default(),
            overrides: BTreeMap::new(),
            profile: ProfileKind::Constant,
            profile_amplitude: 0.0,
            observation_noise: 0.0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.sites.is_empty() {
            return Err("at least one site required".into());
        }
        if !(0.0..1.0).contains(&self.profile_amplitude) {
            return Err("profile_amplitude must lie in [0, 1)".into());
        }
        if self.observation_noise < 0.0 {
            return Err("observation_noise must be >= 0".into());
        }
        Ok(())
    }

    fn params_for(&self, site: &str) -> SimParams {
        self.overrides.get(site).copied().unwrap_or(self.hidden_params)
    }
}

/// Per-interval schedule for a site's hidden parameters, clamped into the
/// search space.
fn build_schedule(
    base: SimParams,
    gen: &GenConfig,
    space: &SearchSpace,
    intervals: usize,
) -> Result<Vec<SimParams>, DatasetError> {
    (0..intervals)
        .map(|i| {
            let scale = match gen.profile {
                ProfileKind::Constant => 1.0,
                ProfileKind::Sinusoidal => {
                    1.0 + gen.profile_amplitude
                        * (std::f64::consts::TAU * i as f64 / intervals as f64).sin()
                }
            };
            let raw = MixedVector::new(vec![
                base.packet_size_kb * scale,
                base.interarrival_mean_ms / scale,
                f64::from(base.ues_per_cell) * scale,
            ]);
            let clamped = space.clamp(&raw)?;
            SimParams::from_vector(&clamped).map_err(DatasetError::from)
        })
        .collect()
}

/// Generate a synthetic field dataset from hidden parameters. Calibrating a
/// noise-free dataset at exactly the hidden parameters yields zero error on
/// every KPI.
pub fn gen_field_dataset(
    layout: &NetworkLayout,
    sim: &SimConfig,
    gen: &GenConfig,
    space: &SearchSpace,
    seed: u64,
) -> Result<FieldDataset, DatasetError> {
    gen.validate().map_err(DatasetError::InfeasibleHiddenParams)?;
    for site in &gen.sites {
        let p = gen.params_for(site);
        if !space.contains(&p.to_vector()) {
            return Err(DatasetError::InfeasibleHiddenParams(format!(
                "site {site:?}: {p:?}"
            )));
        }
    }

    let noise_root = SeededRng::from_seed(seed).derive_label("observation-noise");
    let mut cells = BTreeMap::new();
    let mut hidden = Vec::new();
    for site in &gen.sites {
        let base = gen.params_for(site);
        let schedule = build_schedule(base, gen, space, sim.intervals)?;
        for band in &layout.bands {
            let series = simulate_series(layout, band, &schedule, sim, &cell_sim_rng(seed, &band.label))?;
            let series = if gen.observation_noise > 0.0 {
                let mut rng = noise_root.derive_label(site).derive_label(&band.label);
                apply_observation_noise(&series, gen.observation_noise, &mut rng)
            } else {
                series
            };
            cells.insert((site.clone(), band.label.clone()), series);
            hidden.push(HiddenParamsEntry {
                site: site.clone(),
                band: band.label.clone(),
                params: base,
            });
        }
    }

    Ok(FieldDataset {
        meta: DatasetMeta {
            interval_minutes: sim.interval_minutes,
            intervals: sim.intervals,
            seed,
            observation_noise: gen.observation_noise,
            hidden_params: hidden,
        },
        cells,
    })
}

fn apply_observation_noise(series: &KpiSeries, stddev: f64, rng: &mut SeededRng) -> KpiSeries {
    let jittered = |values: &[f64], rng: &mut SeededRng, upper: Option<f64>| -> Vec<f64> {
        values
            .iter()
            .map(|v| {
                let noisy = v * (1.0 + stddev * rng.standard_normal());
                match upper {
                    Some(hi) => noisy.clamp(0.0, hi),
                    None => noisy.max(0.0),
                }
            })
            .collect()
    };
    let active = jittered(series.active_ues(), rng, None);
    let load = jittered(series.cell_load(), rng, Some(1.0));
    let volume = jittered(series.dl_volume_mb(), rng, None);
    KpiSeries::new(active, load, volume).expect("noise clamping preserves validity")
}
