//! Acceptance suite: one test per release criterion, each printing a line
//! with the measured values. Everything is seeded, so results are
//! bit-reproducible across runs and platforms.
//!
//! Criteria 5-7 run against synthetic datasets with a deliberate gap
//! between the data-generating environment and the calibration twin
//! (different UE placements, slightly different cell radius, and an
//! active-UE counting offset). A perfectly recoverable dataset has no
//! KPI conflicts, so preference and fairness effects only show up when
//! the twin cannot replicate everything at once - the regime field data
//! lives in.

use std::sync::OnceLock;
use std::time::Instant;

use twincalib::dataset::{cell_sim_rng, gen_field_dataset, GenConfig, ProfileKind};
use twincalib::experiment::{run_experiment, ExperimentConfig, ExperimentReport, SimContext};
use twincalib::netsim::{
    cell_capacity, interval_kpis, path_loss_db, simulate_constant, Band, NetworkLayout,
    PlacementPool, SimConfig, SimParams,
};
use twincalib::objective::{
    alpha_utility, jains_index, kpi_error_vector, mape, scalarized_objective, FairnessConfig,
    KpiSeries, PreferenceVector,
};
use twincalib::optim::{
    run, velocity_update, velocity_update_with, EvalError, Method, Particle, PsoConfig, RunConfig,
};
use twincalib::rng::SeededRng;
use twincalib::space::{DimensionSpec, MixedVector, SearchSpace};

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn single_band_layout() -> NetworkLayout {
    NetworkLayout {
        bands: vec![Band::default()],
        ..NetworkLayout::default()
    }
}

#[test]
fn criterion_1_unit_identities() {
    let started = Instant::now();

    let log_utility = FairnessConfig::new(1.0, 1e-6).unwrap();
    assert_eq!(alpha_utility(&log_utility, 1.0), 0.0, "U_1(1)");

    let identity = FairnessConfig::new(0.0, 1e-6).unwrap();
    for t in [0.5, 1.0, 7.0] {
        assert!(
            (alpha_utility(&identity, t) - t).abs() <= 1e-12,
            "U_0({t})"
        );
    }

    assert!((jains_index(&[3.7, 3.7, 3.7]) - 1.0).abs() <= 1e-12);
    assert!((jains_index(&[1.0, 0.0, 0.0]) - 1.0 / 3.0).abs() <= 1e-12);
    assert!((jains_index(&[1.0, 2.0, 3.0]) - 6.0 / 7.0).abs() <= 1e-12);

    let series = [4.0, 5.5, 9.25];
    assert_eq!(mape(&series, &series, 1e-6).unwrap(), 0.0);

    assert_eq!(path_loss_db(1.0).unwrap(), 128.1);

    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 1.0, "criterion 1 took {elapsed:.3} s");
    println!("PASS criterion 1: unit identities hold ({elapsed:.3} s)");
}

#[test]
fn criterion_2_pso_step_arithmetic() {
    let cfg = PsoConfig::default();
    assert_eq!(
        (cfg.inertia, cfg.cognitive, cfg.social),
        (1.1, 1.1, 0.8),
        "default coefficients"
    );

    // Wide bounds so the hand-derived value is not speed-limited.
    let space = SearchSpace::new(vec![DimensionSpec::continuous("x", -100.0, 100.0, "")]).unwrap();
    let mut particle = Particle::new(
        MixedVector::new(vec![0.0]),
        vec![1.0],
        SeededRng::from_seed(0),
    );
    particle.best_position = MixedVector::new(vec![1.0]);
    let global_best = MixedVector::new(vec![2.0]);
    let v = velocity_update_with(&cfg, &space, &particle, &global_best, &[1.0], &[1.0]);
    assert!(
        (v[0] - 3.8).abs() <= 1e-12,
        "hand example gave {} (expected 3.8)",
        v[0]
    );

    // With position = personal best = global best the attraction terms
    // vanish for every draw.
    let mut at_rest = Particle::new(
        MixedVector::new(vec![5.0]),
        vec![1.5],
        SeededRng::from_seed(0),
    );
    at_rest.best_position = at_rest.position.clone();
    let gb = at_rest.position.clone();
    let mut rng = SeededRng::from_seed(7);
    for _ in 0..1000 {
        let v = velocity_update(&cfg, &space, &at_rest, &gb, &mut rng);
        assert_eq!(v[0], cfg.inertia * 1.5);
    }
    println!("PASS criterion 2: velocity update arithmetic matches the hand derivation");
}

#[test]
fn criterion_3_brute_force_oracle_equivalence() {
    let started = Instant::now();
    let layout = single_band_layout();
    let sim = SimConfig {
        mc_ue_drops: 1,
        ..SimConfig::default()
    };
    let space = SearchSpace::new(vec![
        DimensionSpec::continuous("packet_size", 17.0, 22.0, "kbytes"),
        DimensionSpec::continuous("interarrival_mean", 90.0, 115.0, "ms"),
        DimensionSpec::discrete("ues_per_cell", 3, 15, "ues"),
    ])
    .unwrap();
    let gen = GenConfig {
        hidden_params: SimParams {
            packet_size_kb: 19.7,
            interarrival_mean_ms: 103.3,
            ues_per_cell: 7,
        },
        ..GenConfig::default()
    };
    let dataset_seed = 89;
    let dataset = gen_field_dataset(&layout, &sim, &gen, &space, dataset_seed).unwrap();
    let target = dataset.cell("site_a", "f1").unwrap().clone();
    let sim_rng = cell_sim_rng(dataset_seed, "f1");
    let preference = PreferenceVector::uniform();

    let objective = |x: &MixedVector| -> Result<f64, EvalError> {
        let params = SimParams::from_vector(x).map_err(|e| EvalError::new(e.to_string()))?;
        let series = simulate_constant(&layout, &layout.bands[0], params, &sim, &sim_rng)
            .map_err(|e| EvalError::new(e.to_string()))?;
        let errors = kpi_error_vector(&series, &target, 1e-6)
            .map_err(|e| EvalError::new(e.to_string()))?;
        Ok(scalarized_objective(&preference, &errors))
    };

    // Exhaustive 9x9x9 grid: the brute-force oracle.
    let axis = |d: &DimensionSpec| -> Vec<f64> {
        (0..9)
            .map(|k| {
                let v = d.lower + k as f64 * (d.upper - d.lower) / 8.0;
                if d.kind == twincalib::space::DimKind::Discrete {
                    v.round()
                } else {
                    v
                }
            })
            .collect()
    };
    let axes: Vec<Vec<f64>> = space.dims().iter().map(axis).collect();
    let mut grid_best = f64::INFINITY;
    for &s in &axes[0] {
        for &m in &axes[1] {
            for &u in &axes[2] {
                let value = objective(&MixedVector::new(vec![s, m, u])).unwrap();
                grid_best = grid_best.min(value);
            }
        }
    }
    assert!(
        grid_best.is_finite() && grid_best > 0.0,
        "grid optimum must be positive for a relative gap (got {grid_best})"
    );

    let cfg = RunConfig::default();
    let mut within = 0;
    for seed in 1..=20u64 {
        let outcome = run(
            Method::MvpsoFair,
            &space,
            objective,
            &cfg,
            &SeededRng::from_seed(seed),
        );
        if (outcome.best_value - grid_best) / grid_best <= 0.05 {
            within += 1;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "criterion 3 took {elapsed:.1} s (limit 120 s)");
    assert!(
        within >= 18,
        "only {within}/20 seeds within 5% of the grid optimum {grid_best:.4}"
    );
    println!(
        "PASS criterion 3: {within}/20 seeds within 5% of grid optimum {grid_best:.4} ({elapsed:.1} s)"
    );
}

#[test]
fn criterion_4_ground_truth_recovery() {
    let started = Instant::now();
    let layout = single_band_layout();
    let sim = SimConfig::default();
    let space = SimParams::search_space();
    let gen = GenConfig::default();
    let dataset_seed = 20240707;
    let dataset = gen_field_dataset(&layout, &sim, &gen, &space, dataset_seed).unwrap();
    let ctx = SimContext {
        layout,
        sim,
        space,
        sim_seed: dataset_seed,
    };
    let cfg = ExperimentConfig {
        methods: vec![Method::MvpsoFair],
        preferences: vec![PreferenceVector::uniform()],
        alpha: 1.0,
        seeds: (1..=10).collect(),
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&cfg, &ctx, &dataset, None).unwrap();
    let mapes: Vec<f64> = report.runs.iter().map(|r| r.mean_mape).collect();
    let recovered = mapes.iter().filter(|&&m| m <= 25.0).count();

    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 300.0, "criterion 4 took {elapsed:.1} s (limit 300 s)");
    assert!(
        recovered >= 8,
        "only {recovered}/10 seeds reached mean MAPE <= 25% ({mapes:?})"
    );
    println!(
        "PASS criterion 4: {recovered}/10 seeds with mean MAPE <= 25% (worst {:.1}%, {elapsed:.1} s)",
        mapes.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    );
}

/// Shared experiment for criteria 5 and 6: all four methods, the three
/// preference vectors, 20 matched seeds, on a dataset whose environment
/// deliberately differs from the calibration twin.
fn conflict_fixture() -> &'static (twincalib::FieldDataset, ExperimentReport) {
    static FIXTURE: OnceLock<(twincalib::FieldDataset, ExperimentReport)> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let gen_layout = single_band_layout();
        let sim = SimConfig {
            mc_ue_drops: 4,
            ..SimConfig::default()
        };
        let space = SimParams::search_space();
        let gen = GenConfig {
            hidden_params: SimParams {
                packet_size_kb: 5.4,
                interarrival_mean_ms: 60.0,
                ues_per_cell: 18,
            },
            profile: ProfileKind::Sinusoidal,
            profile_amplitude: 0.01,
            observation_noise: 0.01,
            ..GenConfig::default()
        };
        let mut dataset = gen_field_dataset(&gen_layout, &sim, &gen, &space, 99).unwrap();
        // Counting-rule gap: the field system reports fewer active UEs than
        // the queueing expectation the twin uses.
        for series in dataset.cells.values_mut() {
            *series = KpiSeries::new(
                series.active_ues().iter().map(|a| a * 0.7).collect(),
                series.cell_load().to_vec(),
                series.dl_volume_mb().to_vec(),
            )
            .unwrap();
        }
        // Geometry gap: the twin believes cells are slightly smaller, and
        // its UE placements come from a different stream.
        let cal_layout = NetworkLayout {
            cell_radius_km: gen_layout.cell_radius_km * 0.9,
            ..gen_layout
        };
        let ctx = SimContext {
            layout: cal_layout,
            sim,
            space,
            sim_seed: 7,
        };
        let cfg = ExperimentConfig {
            methods: Method::ALL.to_vec(),
            seeds: (1..=20).collect(),
            ..ExperimentConfig::default()
        };
        let report = run_experiment(&cfg, &ctx, &dataset, None).unwrap();
        (dataset, report)
    })
}

fn conflict_report() -> &'static ExperimentReport {
    &conflict_fixture().1
}

#[test]
fn criterion_5_fairness_improvement() {
    let report = conflict_report();
    let jain_of = |method: Method| -> Vec<f64> {
        report
            .runs
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.jains_index)
            .collect()
    };
    let fair = jain_of(Method::MvpsoFair);
    let standard = jain_of(Method::Pso);
    assert_eq!(fair.len(), standard.len());
    assert_eq!(fair.len(), 60, "20 seeds x 3 preference vectors");
    let diff = mean(&fair) - mean(&standard);
    assert!(
        diff > 0.0,
        "mean Jain mvpso-fair {:.4} vs standard PSO {:.4} (paired diff {diff:.4})",
        mean(&fair),
        mean(&standard)
    );
    println!(
        "PASS criterion 5: mean Jain mvpso-fair {:.3} > standard PSO {:.3} (paired diff +{diff:.4})",
        mean(&fair),
        mean(&standard)
    );
}

#[test]
fn criterion_6_preference_skew() {
    let report = conflict_report();

    // Baselines chase the preferred KPI: it must attain the smallest
    // per-KPI error in at least 70% of runs, per method and preference.
    for method in [Method::Random, Method::Bo, Method::Pso] {
        for kpi in 0..3 {
            let runs: Vec<_> = report
                .runs
                .iter()
                .filter(|r| r.method == method && r.preference[kpi] == 0.8)
                .collect();
            assert_eq!(runs.len(), 20);
            let hits = runs
                .iter()
                .filter(|r| {
                    let argmin = r
                        .per_kpi_mape
                        .iter()
                        .enumerate()
                        .min_by(|a, b| a.1.total_cmp(b.1))
                        .map(|(i, _)| i)
                        .unwrap();
                    argmin == kpi
                })
                .count();
            let fraction = hits as f64 / runs.len() as f64;
            assert!(
                fraction >= 0.7,
                "{method}, preference on KPI {kpi}: preferred KPI smallest in only {hits}/20 runs"
            );
            println!(
                "  criterion 6: {method} preference#{kpi} -> preferred KPI smallest in {hits}/20 runs"
            );
        }
    }

    // The fairness-driven search flattens the worst KPI relative to
    // standard PSO on matched (preference, seed) runs.
    let mut better = 0;
    let mut total = 0;
    for fair_run in report.runs.iter().filter(|r| r.method == Method::MvpsoFair) {
        let paired = report
            .runs
            .iter()
            .find(|r| {
                r.method == Method::Pso
                    && r.seed == fair_run.seed
                    && r.preference == fair_run.preference
                    && r.site == fair_run.site
                    && r.band == fair_run.band
            })
            .expect("matched standard-PSO run exists");
        let max_fair = fair_run.per_kpi_mape.iter().cloned().fold(f64::MIN, f64::max);
        let max_std = paired.per_kpi_mape.iter().cloned().fold(f64::MIN, f64::max);
        total += 1;
        if max_fair < max_std {
            better += 1;
        }
    }
    assert!(
        better * 2 > total,
        "mvpso-fair reduced the max per-KPI MAPE in only {better}/{total} matched runs"
    );
    println!(
        "PASS criterion 6: preference skew reproduced; mvpso-fair lowered the max per-KPI MAPE in {better}/{total} matched runs"
    );
}

#[test]
fn criterion_7_convergence_rate() {
    // Convergence is measured in the mild replication setting, where all
    // methods make steady progress toward a reachable optimum.
    let layout = single_band_layout();
    let sim = SimConfig::default();
    let space = SimParams::search_space();
    let gen = GenConfig {
        hidden_params: SimParams {
            packet_size_kb: 11.3,
            interarrival_mean_ms: 80.0,
            ues_per_cell: 20,
        },
        profile: ProfileKind::Sinusoidal,
        profile_amplitude: 0.15,
        ..GenConfig::default()
    };
    let dataset_seed = 99;
    let dataset = gen_field_dataset(&layout, &sim, &gen, &space, dataset_seed).unwrap();
    let ctx = SimContext {
        layout,
        sim,
        space,
        sim_seed: dataset_seed,
    };
    let cfg = ExperimentConfig {
        methods: vec![Method::MvpsoFair, Method::Random],
        seeds: (1..=20).collect(),
        convergence_tol: 0.05,
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&cfg, &ctx, &dataset, None).unwrap();
    let conv = |method: Method| -> Vec<f64> {
        report
            .runs
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.convergence_iteration as f64)
            .collect()
    };
    let fair_median = median(conv(Method::MvpsoFair));
    let random_median = median(conv(Method::Random));
    assert!(
        fair_median <= 10.0,
        "mvpso-fair median convergence iteration {fair_median}"
    );
    assert!(
        fair_median <= random_median,
        "mvpso-fair median {fair_median} vs random search {random_median}"
    );
    println!(
        "PASS criterion 7: median convergence iteration mvpso-fair {fair_median} <= 10 and <= random search {random_median}"
    );
}

#[test]
fn criterion_8_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.toml"),
        r#"
[sim]
intervals = 8
mc_ue_drops = 2

[experiment]
seeds = [1, 2]
iterations = 6

[experiment.pso]
iterations = 6
"#,
    )
    .unwrap();

    let run_cli = |args: &[&str]| {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_twincalib"))
            .current_dir(dir.path())
            .env_remove("TWINCALIB_SEED")
            .args(args)
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "{:?} failed: {}",
            args,
            String::from_utf8_lossy(&out.stderr)
        );
    };

    run_cli(&["gen-field", "--config", "cfg.toml", "--seed", "3", "--out", "d.csv"]);
    for out_dir in ["cmp_a", "cmp_b"] {
        run_cli(&[
            "compare",
            "--config",
            "cfg.toml",
            "--data",
            "d.csv",
            "--methods",
            "random,bo,pso,mvpso-fair",
            "--seeds",
            "1..2",
            "--parallel",
            "8",
            "--out",
            out_dir,
        ]);
    }

    let mut compared = 0;
    for file in [
        "report.json",
        "curves.csv",
        "mape_by_method.csv",
        "mape_per_kpi.csv",
        "config.toml",
    ] {
        let a = std::fs::read(dir.path().join("cmp_a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("cmp_b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
        compared += 1;
    }
    println!(
        "PASS criterion 8: compare with --parallel 8 produced bit-identical outputs twice ({compared} files)"
    );
}

#[test]
fn criterion_9_simulator_invariant_suite() {
    let layout = single_band_layout();
    let band = &layout.bands[0];
    let sim = SimConfig {
        mc_ue_drops: 3,
        ..SimConfig::default()
    };
    let space = SimParams::search_space();
    let interval_ms = sim.interval_ms();
    let mut rng = SeededRng::from_seed(20_000);
    let mut checked = 0usize;

    for draw in 0..10_000u64 {
        let x = space.sample_uniform(&mut rng);
        let params = SimParams::from_vector(&x).unwrap();
        let pool = PlacementPool::build(&layout, &sim, 51, &SeededRng::from_seed(draw));

        for drop in 0..sim.mc_ue_drops {
            let kpis_at = |p: SimParams| -> (f64, f64, f64, f64) {
                let capacity = cell_capacity(
                    &layout,
                    band,
                    &sim,
                    pool.distances(drop, p.ues_per_cell as usize),
                )
                .unwrap();
                let (active, load, volume) =
                    interval_kpis(p.offered_bits_per_ms(), capacity, p.ues_per_cell, interval_ms);
                (active, load, volume, capacity)
            };

            let (active, load, volume, capacity) = kpis_at(params);
            assert!((0.0..=1.0).contains(&load), "load {load} at {params:?}");
            assert!(
                active <= f64::from(params.ues_per_cell),
                "active {active} exceeds population at {params:?}"
            );
            assert!(
                volume <= capacity * interval_ms / 8e6 + 1e-9,
                "volume {volume} exceeds capacity bound at {params:?}"
            );

            // Monotonicity below saturation, against the same frozen drop.
            let mut check = |p2: SimParams, expect_geq: bool, what: &str| {
                let (_, load2, volume2, _) = kpis_at(p2);
                if load < 1.0 && load2 < 1.0 {
                    let ok = if expect_geq {
                        load2 >= load - 1e-12 && volume2 >= volume - 1e-12
                    } else {
                        load2 <= load + 1e-12 && volume2 <= volume + 1e-12
                    };
                    assert!(ok, "{what} violated monotonicity at {params:?}");
                    checked += 1;
                }
            };
            let bigger_files = SimParams {
                packet_size_kb: (params.packet_size_kb * 1.05).min(30.0),
                ..params
            };
            if bigger_files.packet_size_kb > params.packet_size_kb {
                check(bigger_files, true, "packet size increase");
            }
            if params.interarrival_mean_ms > 0.0 {
                let slower_arrivals = SimParams {
                    interarrival_mean_ms: (params.interarrival_mean_ms * 1.05).min(300.0),
                    ..params
                };
                if slower_arrivals.interarrival_mean_ms > params.interarrival_mean_ms {
                    check(slower_arrivals, false, "inter-arrival increase");
                }
            }
            if params.ues_per_cell < 50 {
                let more_ues = SimParams {
                    ues_per_cell: params.ues_per_cell + 1,
                    ..params
                };
                check(more_ues, true, "UE count increase");
            }
        }
    }
    println!(
        "PASS criterion 9: 10000 random draws x 3 drops satisfied all invariants ({checked} monotonicity comparisons, zero violations)"
    );
}

/// The metrics stored in a report replay exactly: re-simulating the best
/// parameters reproduces the recorded per-KPI errors bit-for-bit.
#[test]
fn report_replay_check() {
    let (dataset, report) = conflict_fixture();
    for run in report.runs.iter().step_by(17) {
        let band = report.context.layout.band(&run.band).unwrap();
        let params = SimParams::from_vector(&MixedVector::new(run.best_params.clone())).unwrap();
        let sim = simulate_constant(
            &report.context.layout,
            band,
            params,
            &report.context.sim,
            &cell_sim_rng(report.context.sim_seed, &run.band),
        )
        .unwrap();
        let target = dataset.cell(&run.site, &run.band).unwrap();
        let errors = kpi_error_vector(&sim, target, 1e-6).unwrap();
        assert_eq!(
            errors.per_kpi(),
            run.per_kpi_mape.as_slice(),
            "replayed errors differ for {} seed {}",
            run.method,
            run.seed
        );
    }
    println!("PASS replay: stored metrics reproduce from best parameters exactly");
}

/// Tables III-V shape: the aggregate section carries one row per method and
/// per (preference, method) pair, with Jain values inside [1/3, 1].
#[test]
fn report_table_shapes() {
    let report = conflict_report();
    assert_eq!(report.aggregates.by_method.len(), 4);
    assert_eq!(report.aggregates.per_kpi.len(), 3 * 4);
    for row in &report.aggregates.by_method {
        assert!(row.mean_jain >= 1.0 / 3.0 - 1e-12 && row.mean_jain <= 1.0 + 1e-12);
    }
}
