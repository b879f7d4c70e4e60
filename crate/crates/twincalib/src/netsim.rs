//! Desk-scale downlink OFDMA cell simulator.
//!
//! This is the black box `f` that calibration searches against: it maps
//! traffic parameters (packet size, inter-arrival mean, UE count) to the
//! three KPI time series of one cell. Radio capacity comes from a first-ring
//! interference geometry plus an equal-time processor-sharing view of a
//! proportional-fair scheduler; traffic is finite-load file transfer feeding
//! an M/G/1 processor-sharing queue.
//!
//! With `noise_stddev = 0` the model is a pure function of the parameters
//! and the placement seed, which is what lets brute-force oracles reproduce
//! optimizer evaluations exactly.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::objective::KpiSeries;
use crate::rng::SeededRng;
use crate::space::{DimensionSpec, MixedVector, SearchSpace};

pub const SECTORS_PER_GNB: usize = 3;
/// First-ring co-channel interferers in a hexagonal deployment.
pub const FIRST_RING_SIZE: usize = 6;
/// Spectral-efficiency ceiling, bit/s/Hz (256-QAM-class modulation limit).
pub const MAX_SPECTRAL_EFFICIENCY: f64 = 7.4;
/// UEs never land closer than this to the serving antenna.
pub const MIN_UE_DISTANCE_KM: f64 = 1e-3;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("path-loss distance must be positive, got {0} km")]
    NonPositiveDistance(f64),
    #[error("schedule has {actual} entries but the configuration expects {expected} intervals")]
    ScheduleMismatch { expected: usize, actual: usize },
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("parameter vector must have {expected} entries (packet size, inter-arrival mean, UE count), got {actual}")]
    BadParamVector { expected: usize, actual: usize },
    #[error("unknown band {0:?}")]
    UnknownBand(String),
}

/// One carrier of the deployment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Band {
    pub label: String,
    pub frequency_ghz: f64,
    pub bandwidth_mhz: f64,
    pub tx_power_dbm: f64,
    pub antenna_gain_dbi: f64,
}

impl Default for Band {
    fn default() -> Self {
        Self {
            label: "f1".into(),
            frequency_ghz: 2.1,
            bandwidth_mhz: 10.0,
            tx_power_dbm: 43.0,
            antenna_gain_dbi: 15.0,
        }
    }
}

/// Macro-cell deployment geometry. The default is a seven-site hexagonal
/// layout (centre plus first ring) with two carriers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NetworkLayout {
    pub num_gnbs: usize,
    pub inter_site_distance_km: f64,
    pub cell_radius_km: f64,
    pub bands: Vec<Band>,
}

impl Default for NetworkLayout {
    fn default() -> Self {
        let d = 0.5;
        Self {
            num_gnbs: 7,
            inter_site_distance_km: d,
            cell_radius_km: d / 3f64.sqrt(),
            bands: vec![
                Band::default(),
                Band {
                    label: "f2".into(),
                    frequency_ghz: 3.5,
                    bandwidth_mhz: 20.0,
                    ..Band::default()
                },
            ],
        }
    }
}

impl NetworkLayout {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.num_gnbs < 1 {
            return Err(SimError::InvalidLayout("num_gnbs must be >= 1".into()));
        }
        if !(self.inter_site_distance_km > 0.0) {
            return Err(SimError::InvalidLayout(
                "inter_site_distance_km must be > 0".into(),
            ));
        }
        if !(self.cell_radius_km > 0.0) {
            return Err(SimError::InvalidLayout("cell_radius_km must be > 0".into()));
        }
        if self.bands.is_empty() {
            return Err(SimError::InvalidLayout("at least one band required".into()));
        }
        for band in &self.bands {
            if !(band.bandwidth_mhz > 0.0) {
                return Err(SimError::InvalidLayout(format!(
                    "band {:?}: bandwidth must be > 0",
                    band.label
                )));
            }
        }
        Ok(())
    }

    pub fn band(&self, label: &str) -> Result<&Band, SimError> {
        self.bands
            .iter()
            .find(|b| b.label == label)
            .ok_or_else(|| SimError::UnknownBand(label.to_owned()))
    }

    /// Number of co-channel interferers seen by a cell: the first ring,
    /// bounded by how many other sites exist.
    pub fn num_interferers(&self) -> usize {
        (self.num_gnbs.saturating_sub(1)).min(FIRST_RING_SIZE)
    }
}

/// Decoded calibration parameters for one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimParams {
    pub packet_size_kb: f64,
    pub interarrival_mean_ms: f64,
    pub ues_per_cell: u32,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            packet_size_kb: 12.0,
            interarrival_mean_ms: 80.0,
            ues_per_cell: 20,
        }
    }
}

impl SimParams {
    /// The calibration search space: packet size and inter-arrival mean are
    /// continuous, the UE count is a discrete integer range.
    pub fn search_space() -> SearchSpace {
        SearchSpace::new(vec![
            DimensionSpec::continuous("packet_size", 0.05, 30.0, "kbytes"),
            DimensionSpec::continuous("interarrival_mean", 0.0, 300.0, "ms"),
            DimensionSpec::discrete("ues_per_cell", 3, 50, "ues"),
        ])
        .expect("calibration space is valid by construction")
    }

    pub fn from_vector(v: &MixedVector) -> Result<Self, SimError> {
        if v.len() != 3 {
            return Err(SimError::BadParamVector {
                expected: 3,
                actual: v.len(),
            });
        }
        Ok(Self {
            packet_size_kb: v[0],
            interarrival_mean_ms: v[1],
            ues_per_cell: v[2].round().max(0.0) as u32,
        })
    }

    pub fn to_vector(self) -> MixedVector {
        MixedVector::new(vec![
            self.packet_size_kb,
            self.interarrival_mean_ms,
            f64::from(self.ues_per_cell),
        ])
    }

    /// Offered traffic in bits per millisecond. An inter-arrival mean of
    /// zero means infinite offered load, i.e. forced saturation.
    pub fn offered_bits_per_ms(&self) -> f64 {
        if self.interarrival_mean_ms <= 0.0 {
            return f64::INFINITY;
        }
        f64::from(self.ues_per_cell) * self.packet_size_kb * 8000.0 / self.interarrival_mean_ms
    }
}

/// Simulation constants shared across all experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub interval_minutes: f64,
    pub intervals: usize,
    pub thermal_noise_dbm_hz: f64,
    pub mc_ue_drops: usize,
    pub noise_stddev: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            interval_minutes: 15.0,
            intervals: 96,
            thermal_noise_dbm_hz: -174.0,
            mc_ue_drops: 8,
            noise_stddev: 0.0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.intervals < 1 {
            return Err(SimError::InvalidConfig("intervals must be >= 1".into()));
        }
        if self.mc_ue_drops < 1 {
            return Err(SimError::InvalidConfig("mc_ue_drops must be >= 1".into()));
        }
        if !(self.interval_minutes > 0.0) {
            return Err(SimError::InvalidConfig(
                "interval_minutes must be > 0".into(),
            ));
        }
        if self.noise_stddev < 0.0 {
            return Err(SimError::InvalidConfig("noise_stddev must be >= 0".into()));
        }
        Ok(())
    }

    pub fn interval_ms(&self) -> f64 {
        self.interval_minutes * 60_000.0
    }
}

/// Macro-cell path loss in dB for a distance in km.
pub fn path_loss_db(distance_km: f64) -> Result<f64, SimError> {
    if !(distance_km > 0.0) {
        return Err(SimError::NonPositiveDistance(distance_km));
    }
    Ok(128.1 + 37.6 * distance_km.log10())
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Downlink SINR for a UE at `distance_km` from its serving site, with all
/// first-ring interferers taken at the inter-site distance.
pub fn sinr_at_distance(
    layout: &NetworkLayout,
    band: &Band,
    cfg: &SimConfig,
    distance_km: f64,
) -> Result<f64, SimError> {
    let eirp_dbm = band.tx_power_dbm + band.antenna_gain_dbi;
    let signal_mw = dbm_to_mw(eirp_dbm - path_loss_db(distance_km)?);
    let noise_mw =
        dbm_to_mw(cfg.thermal_noise_dbm_hz + 10.0 * (band.bandwidth_mhz * 1e6).log10());
    let interference_mw = layout.num_interferers() as f64
        * dbm_to_mw(eirp_dbm - path_loss_db(layout.inter_site_distance_km)?);
    Ok(signal_mw / (noise_mw + interference_mw))
}

/// Shannon efficiency capped at the modulation ceiling, bit/s/Hz.
pub fn spectral_efficiency(sinr: f64) -> f64 {
    (1.0 + sinr).log2().min(MAX_SPECTRAL_EFFICIENCY)
}

/// Cell capacity in bits per millisecond given the per-UE efficiencies.
/// Equal-time processor sharing makes the cell rate the bandwidth times the
/// harmonic mean of the per-UE efficiencies. An empty cell runs at the
/// efficiency ceiling.
pub fn capacity_from_efficiencies(bandwidth_mhz: f64, efficiencies: &[f64]) -> f64 {
    let eff = if efficiencies.is_empty() {
        MAX_SPECTRAL_EFFICIENCY
    } else {
        let inv_sum: f64 = efficiencies.iter().map(|e| 1.0 / e).sum();
        efficiencies.len() as f64 / inv_sum
    };
    bandwidth_mhz * 1e6 * eff / 1000.0
}

/// Cell capacity in bits per millisecond for UEs at the given distances.
pub fn cell_capacity(
    layout: &NetworkLayout,
    band: &Band,
    cfg: &SimConfig,
    ue_distances_km: &[f64],
) -> Result<f64, SimError> {
    let effs = ue_distances_km
        .iter()
        .map(|&d| Ok(spectral_efficiency(sinr_at_distance(layout, band, cfg, d)?)))
        .collect::<Result<Vec<_>, SimError>>()?;
    Ok(capacity_from_efficiencies(band.bandwidth_mhz, &effs))
}

/// Area-uniform UE distances within the cell disc.
pub fn draw_ue_distances(cell_radius_km: f64, count: usize, rng: &mut SeededRng) -> Vec<f64> {
    (0..count)
        .map(|_| (cell_radius_km * rng.gen::<f64>().sqrt()).max(MIN_UE_DISTANCE_KM))
        .collect()
}

/// Frozen UE placements: one distance list per Monte-Carlo drop, shared by
/// every interval of a series. Using a prefix of a drop's list for smaller
/// UE counts keeps the forward model monotone in the UE count per drop.
#[derive(Debug, Clone)]
pub struct PlacementPool {
    per_drop: Vec<Vec<f64>>,
}

impl PlacementPool {
    pub fn build(layout: &NetworkLayout, cfg: &SimConfig, max_ues: usize, rng: &SeededRng) -> Self {
        let root = rng.derive_label("placements");
        let per_drop = (0..cfg.mc_ue_drops)
            .map(|drop| {
                let mut drop_rng = root.derive(drop as u64);
                draw_ue_distances(layout.cell_radius_km, max_ues, &mut drop_rng)
            })
            .collect();
        Self { per_drop }
    }

    pub fn num_drops(&self) -> usize {
        self.per_drop.len()
    }

    pub fn distances(&self, drop: usize, ues: usize) -> &[f64] {
        let all = &self.per_drop[drop];
        &all[..ues.min(all.len())]
    }
}

/// KPIs of one interval for a given offered load and capacity:
/// `(active_ues, cell_load, dl_volume_mb)`.
///
/// Below saturation the M/G/1 processor-sharing mean number in system is
/// `rho / (1 - rho)`, capped by the UE population; at or above saturation
/// the cell is fully loaded and delivers exactly its capacity.
pub fn interval_kpis(
    offered_bits_per_ms: f64,
    capacity_bits_per_ms: f64,
    ues_per_cell: u32,
    interval_ms: f64,
) -> (f64, f64, f64) {
    let rho = offered_bits_per_ms / capacity_bits_per_ms;
    if rho < 1.0 {
        let active = (rho / (1.0 - rho)).min(f64::from(ues_per_cell));
        (active, rho, offered_bits_per_ms * interval_ms / 8e6)
    } else {
        (
            f64::from(ues_per_cell),
            1.0,
            capacity_bits_per_ms * interval_ms / 8e6,
        )
    }
}

fn kpis_from_pool(
    layout: &NetworkLayout,
    band: &Band,
    params: SimParams,
    cfg: &SimConfig,
    pool: &PlacementPool,
    capacity_cache: &mut HashMap<u32, Vec<f64>>,
    noise_rng: &mut SeededRng,
) -> Result<(f64, f64, f64), SimError> {
    let capacities = match capacity_cache.entry(params.ues_per_cell) {
        std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
        std::collections::hash_map::Entry::Vacant(e) => {
            let caps = (0..pool.num_drops())
                .map(|drop| {
                    cell_capacity(
                        layout,
                        band,
                        cfg,
                        pool.distances(drop, params.ues_per_cell as usize),
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            e.insert(caps)
        }
    };

    let offered = params.offered_bits_per_ms();
    let mut acc = (0.0, 0.0, 0.0);
    let mut capacity_sum = 0.0;
    for &capacity in capacities.iter() {
        let (a, l, v) = interval_kpis(offered, capacity, params.ues_per_cell, cfg.interval_ms());
        acc.0 += a;
        acc.1 += l;
        acc.2 += v;
        capacity_sum += capacity;
    }
    let n = pool.num_drops() as f64;
    let mut kpis = (acc.0 / n, acc.1 / n, acc.2 / n);

    if cfg.noise_stddev > 0.0 {
        // Noise never violates the model bounds.
        let volume_cap = (capacity_sum / n) * cfg.interval_ms() / 8e6;
        let jitter = |rng: &mut SeededRng| 1.0 + cfg.noise_stddev * rng.standard_normal();
        kpis.0 = (kpis.0 * jitter(noise_rng)).clamp(0.0, f64::from(params.ues_per_cell));
        kpis.1 = (kpis.1 * jitter(noise_rng)).clamp(0.0, 1.0);
        kpis.2 = (kpis.2 * jitter(noise_rng)).clamp(0.0, volume_cap);
    }
    Ok(kpis)
}

/// KPIs of a single interval: averages over fresh Monte-Carlo UE placements
/// derived from `rng`.
pub fn simulate_interval(
    layout: &NetworkLayout,
    band: &Band,
    params: SimParams,
    cfg: &SimConfig,
    rng: &SeededRng,
) -> Result<(f64, f64, f64), SimError> {
    let pool = PlacementPool::build(layout, cfg, params.ues_per_cell as usize, rng);
    let mut cache = HashMap::new();
    let mut noise_rng = rng.derive_label("noise");
    kpis_from_pool(layout, band, params, cfg, &pool, &mut cache, &mut noise_rng)
}

/// Forward model over a whole measurement window: one interval per schedule
/// entry, UE placements frozen across intervals so that constant parameters
/// produce a constant series and repeated runs are bit-identical.
pub fn simulate_series(
    layout: &NetworkLayout,
    band: &Band,
    schedule: &[SimParams],
    cfg: &SimConfig,
    rng: &SeededRng,
) -> Result<KpiSeries, SimError> {
    if schedule.len() != cfg.intervals {
        return Err(SimError::ScheduleMismatch {
            expected: cfg.intervals,
            actual: schedule.len(),
        });
    }
    let max_ues = schedule
        .iter()
        .map(|p| p.ues_per_cell as usize)
        .max()
        .unwrap_or(0);
    let pool = PlacementPool::build(layout, cfg, max_ues, rng);
    let mut cache = HashMap::new();
    let noise_root = rng.derive_label("noise");

    let mut active = Vec::with_capacity(schedule.len());
    let mut load = Vec::with_capacity(schedule.len());
    let mut volume = Vec::with_capacity(schedule.len());
    for (i, &params) in schedule.iter().enumerate() {
        let mut noise_rng = noise_root.derive(i as u64);
        let (a, l, v) = kpis_from_pool(layout, band, params, cfg, &pool, &mut cache, &mut noise_rng)?;
        active.push(a);
        load.push(l);
        volume.push(v);
    }
    KpiSeries::new(active, load, volume).map_err(|e| SimError::InvalidConfig(e.to_string()))
}

/// [`simulate_series`] with the same parameters in every interval, the shape
/// used when evaluating one calibration candidate.
pub fn simulate_constant(
    layout: &NetworkLayout,
    band: &Band,
    params: SimParams,
    cfg: &SimConfig,
    rng: &SeededRng,
) -> Result<KpiSeries, SimError> {
    let schedule = vec![params; cfg.intervals];
    simulate_series(layout, band, &schedule, cfg, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small_cfg() -> SimConfig {
        SimConfig {
            intervals: 4,
            mc_ue_drops: 3,
            ..SimConfig::default()
        }
    }

    #[test]
    fn path_loss_reference_points() {
        assert_eq!(path_loss_db(1.0).unwrap(), 128.1);
        assert_relative_eq!(path_loss_db(0.1).unwrap(), 90.5, epsilon = 1e-12);
        assert_relative_eq!(path_loss_db(10.0).unwrap(), 165.7, epsilon = 1e-12);
    }

    #[test]
    fn path_loss_rejects_nonpositive_distance() {
        assert!(matches!(
            path_loss_db(0.0),
            Err(SimError::NonPositiveDistance(_))
        ));
        assert!(path_loss_db(-1.0).is_err());
    }

    #[test]
    fn unit_sinr_gives_unit_efficiency_and_bandwidth_capacity() {
        assert_eq!(spectral_efficiency(1.0), 1.0);
        let band = Band::default();
        let cap = capacity_from_efficiencies(band.bandwidth_mhz, &[1.0]);
        assert_relative_eq!(cap, band.bandwidth_mhz * 1e6 / 1000.0);
    }

    #[test]
    fn harmonic_mean_capacity() {
        // Efficiencies 2 and 6 have harmonic mean 3.
        let cap = capacity_from_efficiencies(1.0, &[2.0, 6.0]);
        assert_relative_eq!(cap, 1.0 * 1e6 * 3.0 / 1000.0);
        // Equidistant UEs share the common efficiency.
        let cap_eq = capacity_from_efficiencies(1.0, &[4.0, 4.0, 4.0]);
        assert_relative_eq!(cap_eq, 1.0 * 1e6 * 4.0 / 1000.0);
    }

    #[test]
    fn single_gnb_layout_has_no_interference() {
        let layout = NetworkLayout {
            num_gnbs: 1,
            ..NetworkLayout::default()
        };
        assert_eq!(layout.num_interferers(), 0);
        assert_eq!(NetworkLayout::default().num_interferers(), 6);
    }

    #[test]
    fn sinr_decreases_with_distance() {
        let layout = NetworkLayout::default();
        let cfg = SimConfig::default();
        let band = &layout.bands[0];
        let mut last = f64::INFINITY;
        for d in [0.01, 0.05, 0.1, 0.2, 0.28] {
            let s = sinr_at_distance(&layout, band, &cfg, d).unwrap();
            assert!(s < last, "SINR not decreasing at {d} km");
            last = s;
        }
    }

    #[test]
    fn interval_kpis_at_half_load() {
        let (active, load, _) = interval_kpis(50.0, 100.0, 30, 900_000.0);
        assert_relative_eq!(active, 1.0);
        assert_relative_eq!(load, 0.5);
    }

    #[test]
    fn interval_kpis_saturate() {
        let (active, load, vol) = interval_kpis(500.0, 100.0, 30, 900_000.0);
        assert_eq!(active, 30.0);
        assert_eq!(load, 1.0);
        assert_relative_eq!(vol, 100.0 * 900_000.0 / 8e6);
    }

    #[test]
    fn interval_kpis_cap_active_ues_near_saturation() {
        let (active, _, _) = interval_kpis(99.0, 100.0, 5, 900_000.0);
        assert_eq!(active, 5.0);
    }

    #[test]
    fn vanishing_offered_load_gives_zero_kpis() {
        let params = SimParams {
            interarrival_mean_ms: f64::INFINITY,
            ..SimParams::default()
        };
        let layout = NetworkLayout::default();
        let cfg = small_cfg();
        let (a, l, v) = simulate_interval(
            &layout,
            &layout.bands[0],
            params,
            &cfg,
            &SeededRng::from_seed(1),
        )
        .unwrap();
        assert_eq!((a, l, v), (0.0, 0.0, 0.0));
    }

    #[test]
    fn zero_interarrival_mean_saturates() {
        let params = SimParams {
            interarrival_mean_ms: 0.0,
            ..SimParams::default()
        };
        assert_eq!(params.offered_bits_per_ms(), f64::INFINITY);
        let layout = NetworkLayout::default();
        let cfg = small_cfg();
        let (a, l, _) = simulate_interval(
            &layout,
            &layout.bands[0],
            params,
            &cfg,
            &SeededRng::from_seed(1),
        )
        .unwrap();
        assert_eq!(l, 1.0);
        assert_eq!(a, f64::from(params.ues_per_cell));
    }

    #[test]
    fn constant_params_give_constant_series() {
        let layout = NetworkLayout::default();
        let cfg = small_cfg();
        let series = simulate_constant(
            &layout,
            &layout.bands[0],
            SimParams::default(),
            &cfg,
            &SeededRng::from_seed(7),
        )
        .unwrap();
        for k in 0..3 {
            let col = series.kpi(k);
            assert!(col.iter().all(|&v| v == col[0]), "KPI {k} varies: {col:?}");
        }
    }

    #[test]
    fn series_is_deterministic() {
        let layout = NetworkLayout::default();
        let cfg = SimConfig {
            noise_stddev: 0.05,
            ..small_cfg()
        };
        let a = simulate_constant(
            &layout,
            &layout.bands[0],
            SimParams::default(),
            &cfg,
            &SeededRng::from_seed(3),
        )
        .unwrap();
        let b = simulate_constant(
            &layout,
            &layout.bands[0],
            SimParams::default(),
            &cfg,
            &SeededRng::from_seed(3),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn doubling_packet_size_doubles_volume_below_saturation() {
        let layout = NetworkLayout::default();
        let cfg = small_cfg();
        let base = SimParams {
            packet_size_kb: 2.0,
            interarrival_mean_ms: 200.0,
            ues_per_cell: 10,
        };
        let doubled = SimParams {
            packet_size_kb: 4.0,
            ..base
        };
        let rng = SeededRng::from_seed(11);
        let a = simulate_constant(&layout, &layout.bands[0], base, &cfg, &rng).unwrap();
        let b = simulate_constant(&layout, &layout.bands[0], doubled, &cfg, &rng).unwrap();
        assert!(b.cell_load().iter().all(|&l| l < 1.0), "saturated");
        for (x, y) in a.dl_volume_mb().iter().zip(b.dl_volume_mb()) {
            assert_relative_eq!(2.0 * x, *y, max_relative = 1e-12);
        }
    }

    #[test]
    fn schedule_length_must_match() {
        let layout = NetworkLayout::default();
        let cfg = small_cfg();
        let err = simulate_series(
            &layout,
            &layout.bands[0],
            &[SimParams::default(); 3],
            &cfg,
            &SeededRng::from_seed(0),
        )
        .unwrap_err();
        assert_eq!(
            err,
            SimError::ScheduleMismatch {
                expected: 4,
                actual: 3
            }
        );
    }

    #[test]
    fn param_vector_round_trip() {
        let p = SimParams {
            packet_size_kb: 3.5,
            interarrival_mean_ms: 120.0,
            ues_per_cell: 17,
        };
        assert_eq!(SimParams::from_vector(&p.to_vector()).unwrap(), p);
        assert!(SimParams::from_vector(&MixedVector::new(vec![1.0])).is_err());
    }
}
