//! Monte-Carlo experiments on random geometric graphs comparing inner products.
//!
//! Every realization draws its own point cloud from a stream seeded by
//! `mix(seed) ^ realization`. Realizations run in parallel; aggregation sums in realization
//! order, so tables are bit-identical for a given configuration.

use std::fmt::Write as _;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    add_noise, gaussian_kernel_graph, sample_points, sinewave_signal, voronoi_areas, NoiseSpec, PointCloud,
    SignalSpec,
};
use crate::graph::{combinatorial_laplacian, degree_matrix, Graph, InnerProduct};
use crate::reconstruction::{consistent_reconstruct, pocs_reconstruct, PocsParams};
use crate::sampling::{e_opt_metric, greedy_select, ProxyOrder, SamplingResult};
use crate::spectral::SpectralBasis;

/// Inner products compared by the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QVariant {
    Identity,
    Degree,
    Voronoi,
}

impl QVariant {
    pub const ALL: [QVariant; 3] = [QVariant::Identity, QVariant::Degree, QVariant::Voronoi];

    pub fn name(self) -> &'static str {
        match self {
            QVariant::Identity => "identity",
            QVariant::Degree => "degree",
            QVariant::Voronoi => "voronoi",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identity" | "i" => Some(QVariant::Identity),
            "degree" | "d" => Some(QVariant::Degree),
            "voronoi" | "c" | "voronoi_area" => Some(QVariant::Voronoi),
            _ => None,
        }
    }

    pub fn build(self, pc: &PointCloud, graph: &Graph) -> Result<InnerProduct> {
        match self {
            QVariant::Identity => Ok(InnerProduct::identity(graph.n())),
            QVariant::Degree => degree_matrix(graph),
            QVariant::Voronoi => voronoi_areas(pc),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoConfig {
    pub n: usize,
    pub side: f64,
    pub kernel_sigma: f64,
    pub seed: u64,
    pub variants: Vec<QVariant>,
    pub proxy_k: u32,
}

impl Default for GeoConfig {
    fn default() -> Self {
        Self { n: 100, side: 10.0, kernel_sigma: 1.0, seed: 0, variants: QVariant::ALL.to_vec(), proxy_k: 3 }
    }
}

impl GeoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidParameter("experiments need n >= 3".into()));
        }
        if !(self.kernel_sigma > 0.0) || !(self.side > 0.0) {
            return Err(Error::InvalidParameter("side and kernel sigma must be positive".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::InvalidParameter("no inner product variant selected".into()));
        }
        ProxyOrder::new(self.proxy_k)?;
        Ok(())
    }

    /// Sampling set sizes `round(frac * n)`, clamped to `[1, n - 1]`, deduplicated.
    pub fn sample_sizes(&self, fracs: &[f64]) -> Vec<usize> {
        let mut sizes: Vec<usize> =
            fracs.iter().map(|f| ((f * self.n as f64).round() as usize).clamp(1, self.n - 1)).collect();
        sizes.sort_unstable();
        sizes.dedup();
        sizes
    }
}

/// SplitMix64 finalizer. Without it, seeds differing only in low bits would share
/// the same set of realization streams.
fn mix(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG stream of one realization.
pub fn realization_rng(seed: u64, realization: usize) -> Xoshiro256StarStar {
    Xoshiro256StarStar::seed_from_u64(mix(seed) ^ realization as u64)
}

/// The graph and measures shared by all variants within a realization.
#[derive(Debug, Clone)]
pub struct GeoInstance {
    pub cloud: PointCloud,
    pub graph: Graph,
    pub laplacian: crate::graph::VariationMatrix,
}

impl GeoInstance {
    pub fn generate(cfg: &GeoConfig, rng: &mut Xoshiro256StarStar) -> Result<Self> {
        let cloud = sample_points(cfg.n, cfg.side, rng)?;
        let graph = gaussian_kernel_graph(&cloud, cfg.kernel_sigma)?;
        let laplacian = combinatorial_laplacian(&graph);
        Ok(Self { cloud, graph, laplacian })
    }
}

/// One aggregated cell of an experiment table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub variant: QVariant,
    pub signal_cycles: Option<u32>,
    pub noise_sigma: Option<f64>,
    pub sample_size: usize,
    pub mean_value: f64,
    pub stderr: f64,
    pub n_failed: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResultTable {
    pub rows: Vec<TableRow>,
}

pub type BoundTable = ResultTable;
pub type MseTable = ResultTable;

pub const CSV_HEADER: &str = "variant,signal_cycles,noise_sigma,sample_size,mean_value,stderr,n_failed";

/// 17 significant digits; `NaN` for empty cells.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_owned()
    } else {
        format!("{v:.16e}")
    }
}

impl ResultTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let cycles = r.signal_cycles.map(|c| c.to_string()).unwrap_or_default();
            let noise = r.noise_sigma.map(format_float).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.variant.name(),
                cycles,
                noise,
                r.sample_size,
                format_float(r.mean_value),
                format_float(r.stderr),
                r.n_failed
            );
        }
        out
    }

    pub fn total_failed(&self) -> usize {
        self.rows.iter().map(|r| r.n_failed).sum()
    }

    pub fn find(
        &self,
        variant: QVariant,
        signal_cycles: Option<u32>,
        noise_sigma: Option<f64>,
        sample_size: usize,
    ) -> Option<&TableRow> {
        self.rows.iter().find(|r| {
            r.variant == variant
                && r.signal_cycles == signal_cycles
                && r.noise_sigma == noise_sigma
                && r.sample_size == sample_size
        })
    }
}

/// Mean and standard error of the finite values, counted failures, in input order.
fn aggregate(values: impl Iterator<Item = Option<f64>>) -> (f64, f64, usize) {
    let mut ok = Vec::new();
    let mut failed = 0;
    for v in values {
        match v {
            Some(x) if x.is_finite() => ok.push(x),
            _ => failed += 1,
        }
    }
    if ok.is_empty() {
        return (f64::NAN, f64::NAN, failed);
    }
    let count = ok.len() as f64;
    let mean = ok.iter().sum::<f64>() / count;
    let stderr = if ok.len() > 1 {
        let var = ok.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1.0);
        (var / count).sqrt()
    } else {
        0.0
    };
    (mean, stderr, failed)
}

struct VariantRun {
    basis: SpectralBasis,
    q: InnerProduct,
    selection: SamplingResult,
}

fn run_variant(inst: &GeoInstance, variant: QVariant, k: ProxyOrder, max_size: usize) -> Result<VariantRun> {
    let q = variant.build(&inst.cloud, &inst.graph)?;
    let basis = SpectralBasis::compute(&inst.laplacian, &q)?;
    let selection = greedy_select(&inst.laplacian, &q, k, max_size)?;
    Ok(VariantRun { basis, q, selection })
}

/// σ_min of `Q_S^{1/2} U_{S,R}` with `R` the first `|S|` modes, for greedy sets of each size.
pub fn run_bound_experiment(cfg: &GeoConfig, realizations: usize, fracs: &[f64]) -> Result<BoundTable> {
    run_bound_experiment_with(cfg, realizations, fracs, |_| {})
}

/// As [`run_bound_experiment`], calling `on_done` with each finished realization index.
pub fn run_bound_experiment_with(
    cfg: &GeoConfig,
    realizations: usize,
    fracs: &[f64],
    on_done: impl Fn(usize) + Sync,
) -> Result<BoundTable> {
    cfg.validate()?;
    if realizations == 0 || fracs.is_empty() {
        return Err(Error::InvalidParameter("need realizations >= 1 and a nonempty grid".into()));
    }
    let sizes = cfg.sample_sizes(fracs);
    let max_size = *sizes.last().expect("nonempty grid");
    let k = ProxyOrder::new(cfg.proxy_k)?;

    // [realization][variant][size]
    let results: Vec<Vec<Vec<Option<f64>>>> = (0..realizations)
        .into_par_iter()
        .map(|idx| {
            let mut rng = realization_rng(cfg.seed, idx);
            let inst = GeoInstance::generate(cfg, &mut rng);
            let out = cfg
                .variants
                .iter()
                .map(|&variant| {
                    let run =
                        inst.as_ref().ok().and_then(|inst| run_variant(inst, variant, k, max_size).ok());
                    sizes
                        .iter()
                        .map(|&size| {
                            let run = run.as_ref()?;
                            let s = run.selection.prefix(cfg.n, size).ok()?;
                            e_opt_metric(&run.basis, &s, size).ok()
                        })
                        .collect()
                })
                .collect();
            on_done(idx);
            out
        })
        .collect();

    let mut rows = Vec::new();
    for (vi, &variant) in cfg.variants.iter().enumerate() {
        for (si, &size) in sizes.iter().enumerate() {
            let (mean_value, stderr, n_failed) = aggregate(results.iter().map(|r| r[vi][si]));
            rows.push(TableRow {
                variant,
                signal_cycles: None,
                noise_sigma: None,
                sample_size: size,
                mean_value,
                stderr,
                n_failed,
            });
        }
    }
    Ok(ResultTable { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReconMethod {
    ClosedForm,
    Pocs,
}

/// Number of modes used by the closed-form reconstruction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bandwidth {
    /// Modes with frequency below the cutoff estimate `Ω_k(S)` of the sampling set.
    #[default]
    Cutoff,
    /// `r = |S|`
    SampleSize,
    /// `r = min(value, |S|)`
    Fixed(usize),
}

impl Bandwidth {
    /// Band size for a sampling set of `sample_size` vertices with cutoff estimate
    /// `cutoff`; always within `[1, sample_size]`.
    pub fn modes(self, basis: &SpectralBasis, sample_size: usize, cutoff: f64) -> usize {
        let r = match self {
            Bandwidth::Cutoff => basis.frequencies().iter().filter(|&&l| l < cutoff).count(),
            Bandwidth::SampleSize => sample_size,
            Bandwidth::Fixed(r) => r,
        };
        r.clamp(1, sample_size)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MseGrid {
    pub fracs: Vec<f64>,
    pub signals: Vec<SignalSpec>,
    pub noises: Vec<NoiseSpec>,
    pub method: ReconMethod,
    pub bandwidth: Bandwidth,
}

/// Noisy measurements of every (signal, noise) pair, drawn in grid order after the cloud.
pub fn draw_measurements(
    inst: &GeoInstance,
    grid: &MseGrid,
    rng: &mut Xoshiro256StarStar,
) -> (Vec<DVector<f64>>, Vec<Vec<DVector<f64>>>) {
    let truths: Vec<DVector<f64>> = grid.signals.iter().map(|&s| sinewave_signal(&inst.cloud, s)).collect();
    let noisy =
        truths.iter().map(|t| grid.noises.iter().map(|&ns| add_noise(t, ns, rng)).collect()).collect();
    (truths, noisy)
}

/// Mean C-norm reconstruction error of greedy sampling under each inner product. The
/// error metric always uses the Voronoi-area matrix, whichever variant drove selection.
pub fn run_mse_experiment(cfg: &GeoConfig, realizations: usize, grid: &MseGrid) -> Result<MseTable> {
    run_mse_experiment_with(cfg, realizations, grid, |_| {})
}

pub fn run_mse_experiment_with(
    cfg: &GeoConfig,
    realizations: usize,
    grid: &MseGrid,
    on_done: impl Fn(usize) + Sync,
) -> Result<MseTable> {
    cfg.validate()?;
    if realizations == 0 || grid.fracs.is_empty() || grid.signals.is_empty() || grid.noises.is_empty() {
        return Err(Error::InvalidParameter(
            "need realizations >= 1 and nonempty fraction, signal and noise lists".into(),
        ));
    }
    let sizes = cfg.sample_sizes(&grid.fracs);
    let max_size = *sizes.last().expect("nonempty grid");
    let k = ProxyOrder::new(cfg.proxy_k)?;
    let (n_sig, n_noise) = (grid.signals.len(), grid.noises.len());

    // [realization][variant][signal][noise][size]
    type Cells = Vec<Vec<Vec<Vec<Option<f64>>>>>;
    let results: Vec<Cells> = (0..realizations)
        .into_par_iter()
        .map(|idx| {
            let mut rng = realization_rng(cfg.seed, idx);
            let empty = || vec![vec![vec![None; sizes.len()]; n_noise]; n_sig];
            let Ok(inst) = GeoInstance::generate(cfg, &mut rng) else {
                on_done(idx);
                return vec![empty(); cfg.variants.len()];
            };
            let (truths, noisy) = draw_measurements(&inst, grid, &mut rng);
            let metric = voronoi_areas(&inst.cloud).ok();
            let out = cfg
                .variants
                .iter()
                .map(|&variant| {
                    let (Some(c), Ok(run)) = (&metric, run_variant(&inst, variant, k, max_size)) else {
                        return empty();
                    };
                    let mut cells = empty();
                    for (si, &size) in sizes.iter().enumerate() {
                        let Ok(s) = run.selection.prefix(cfg.n, size) else { continue };
                        for sig in 0..n_sig {
                            for ni in 0..n_noise {
                                let y_s = s.gather(&noisy[sig][ni]);
                                let x_hat = reconstruct_cell(&inst, &run, grid, &s, &y_s, size);
                                cells[sig][ni][si] = x_hat.and_then(|x| c.norm(&(x - &truths[sig])).ok());
                            }
                        }
                    }
                    cells
                })
                .collect();
            on_done(idx);
            out
        })
        .collect();

    let mut rows = Vec::new();
    for (vi, &variant) in cfg.variants.iter().enumerate() {
        for (sig, spec) in grid.signals.iter().enumerate() {
            for (ni, noise) in grid.noises.iter().enumerate() {
                for (si, &size) in sizes.iter().enumerate() {
                    let (mean_value, stderr, n_failed) =
                        aggregate(results.iter().map(|r| r[vi][sig][ni][si]));
                    rows.push(TableRow {
                        variant,
                        signal_cycles: Some(spec.cycles),
                        noise_sigma: Some(noise.sigma),
                        sample_size: size,
                        mean_value,
                        stderr,
                        n_failed,
                    });
                }
            }
        }
    }
    Ok(ResultTable { rows })
}

fn reconstruct_cell(
    inst: &GeoInstance,
    run: &VariantRun,
    grid: &MseGrid,
    s: &crate::graph::VertexSet,
    y_s: &DVector<f64>,
    size: usize,
) -> Option<DVector<f64>> {
    match grid.method {
        ReconMethod::ClosedForm => {
            let r = grid.bandwidth.modes(&run.basis, size, run.selection.cutoffs[size - 1]);
            consistent_reconstruct(&run.basis, s, r, y_s).ok().map(|rep| rep.x_hat)
        }
        ReconMethod::Pocs => {
            let lambda_max = run.basis.lambda_max() * 1.01;
            let omega = run.selection.cutoffs[size - 1].min(lambda_max);
            let params = PocsParams::new(omega, lambda_max);
            pocs_reconstruct(&inst.laplacian, &run.q, s, y_s, &params, None).ok().map(|rep| rep.x_hat)
        }
    }
}
