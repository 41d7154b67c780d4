use gsp_core::bench::{
    realization_rng, run_bound_experiment, run_mse_experiment, Bandwidth, GeoConfig, GeoInstance, MseGrid,
    QVariant, ReconMethod,
};
use gsp_core::degree_matrix;
use gsp_core::geometry::{voronoi_areas, NoiseSpec, SignalSpec};

#[test]
fn kernel_graphs_are_complete_with_positive_degrees() {
    let cfg = GeoConfig::default();
    for idx in 0..5 {
        let inst = GeoInstance::generate(&cfg, &mut realization_rng(3, idx)).unwrap();
        let w = inst.graph.weights();
        for i in 0..cfg.n {
            for j in 0..cfg.n {
                assert_eq!(w[(i, j)] > 0.0, i != j);
            }
        }
        degree_matrix(&inst.graph).unwrap();
        let areas = voronoi_areas(&inst.cloud).unwrap();
        assert!((areas.diagonal().sum() - 100.0).abs() <= 1e-6 * 100.0);
    }
}

#[test]
fn voronoi_bound_beats_degree_at_half_on_small_graphs() {
    let cfg = GeoConfig { n: 20, seed: 7, ..GeoConfig::default() };
    let table = run_bound_experiment(&cfg, 50, &[0.5]).unwrap();
    let c = table.find(QVariant::Voronoi, None, None, 10).unwrap();
    let d = table.find(QVariant::Degree, None, None, 10).unwrap();
    assert!(c.mean_value > d.mean_value, "C {} vs D {}", c.mean_value, d.mean_value);
}

#[test]
fn noiseless_smooth_signal_error_decreases_with_samples() {
    let cfg = GeoConfig { n: 60, seed: 5, ..GeoConfig::default() };
    let grid = MseGrid {
        fracs: vec![0.2, 0.4, 0.6, 0.8],
        signals: vec![SignalSpec::new(1).unwrap()],
        noises: vec![NoiseSpec::new(0.0).unwrap()],
        method: ReconMethod::ClosedForm,
        bandwidth: Bandwidth::Cutoff,
    };
    let table = run_mse_experiment(&cfg, 5, &grid).unwrap();
    for v in QVariant::ALL {
        let errs: Vec<f64> = cfg
            .sample_sizes(&grid.fracs)
            .iter()
            .map(|&size| table.find(v, Some(1), Some(0.0), size).unwrap().mean_value)
            .collect();
        for pair in errs.windows(2) {
            assert!(pair[1] < pair[0], "{}: {errs:?}", v.name());
        }
    }
}

#[test]
fn mse_tables_are_reproducible_and_metric_is_fixed() {
    let cfg = GeoConfig { n: 30, seed: 9, ..GeoConfig::default() };
    let grid = MseGrid {
        fracs: vec![0.3, 0.6],
        signals: vec![SignalSpec::new(2).unwrap()],
        noises: vec![NoiseSpec::new(0.2).unwrap()],
        method: ReconMethod::ClosedForm,
        bandwidth: Bandwidth::Cutoff,
    };
    let a = run_mse_experiment(&cfg, 3, &grid).unwrap();
    let b = run_mse_experiment(&cfg, 3, &grid).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());

    // a single variant run reports the same errors as that variant inside a full run
    let alone = GeoConfig { variants: vec![QVariant::Degree], ..cfg.clone() };
    let c = run_mse_experiment(&alone, 3, &grid).unwrap();
    for row in &c.rows {
        let full = a.find(row.variant, row.signal_cycles, row.noise_sigma, row.sample_size).unwrap();
        assert_eq!(row.mean_value.to_bits(), full.mean_value.to_bits());
    }
}
