use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::{Args, Subcommand};
use gsp_core::bench::{
    run_bound_experiment_with, run_mse_experiment_with, GeoConfig, MseGrid, ReconMethod, ResultTable,
};
use gsp_core::geometry::{NoiseSpec, SignalSpec};
use serde::Serialize;

use crate::args::{BandwidthArg, FracGrid, VariantList};
use crate::error::{CliError, CliResult};
use crate::files::{self, flag_float, RunManifest};
use crate::plot;
use crate::reconstruct::Method;

#[derive(Debug, Clone, Subcommand)]
pub enum BenchCommand {
    /// Smallest singular value of the sampled band for greedy sets of growing size.
    Bound(BoundArgs),
    /// Reconstruction error of noisy sinewaves in the Voronoi-area norm.
    Mse(MseArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 10.0)]
    pub side: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kernel_sigma: f64,
    /// Spectral proxy order.
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[arg(long, default_value = "all")]
    pub q: VariantList,
    /// Sample fractions: `start:stop:step` or a comma list.
    #[arg(long, default_value = "0.1:0.9:0.1")]
    pub fracs: FracGrid,
    /// Overridden by GSP_SEED when set.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the available cores.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// Suppress the progress counter.
    #[arg(long)]
    pub quiet: bool,
    #[arg(long, default_value = "bench-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub realizations: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MseArgs {
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub realizations: u64,
    /// Sinewave cycles across the square, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
    pub signals: Vec<u32>,
    /// Noise standard deviations, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.4")]
    pub noises: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Method::ClosedForm)]
    pub method: Method,
    /// Closed-form band size: `cutoff` (modes below the selection's cutoff estimate),
    /// `size` (as many modes as samples) or a fixed count.
    #[arg(long, default_value = "cutoff")]
    pub bandwidth: BandwidthArg,
    /// Logarithmic error axis in the charts.
    #[arg(long)]
    pub log_scale: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(cmd: &BenchCommand) -> CliResult<()> {
    let common = match cmd {
        BenchCommand::Bound(a) => &a.common,
        BenchCommand::Mse(a) => &a.common,
    };
    match common.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(|| dispatch(cmd)),
        None => dispatch(cmd),
    }
}

fn dispatch(cmd: &BenchCommand) -> CliResult<()> {
    match cmd {
        BenchCommand::Bound(a) => run_bound(a),
        BenchCommand::Mse(a) => run_mse(a),
    }
}

fn geo_config(c: &CommonArgs, seed: u64) -> GeoConfig {
    GeoConfig {
        n: c.n,
        side: c.side,
        kernel_sigma: c.kernel_sigma,
        seed,
        variants: c.q.0.clone(),
        proxy_k: c.k,
    }
}

fn common_flags(c: &CommonArgs, seed: u64, threads: bool) -> Vec<String> {
    let mut out = vec![
        "--n".into(),
        c.n.to_string(),
        "--side".into(),
        flag_float(c.side),
        "--kernel-sigma".into(),
        flag_float(c.kernel_sigma),
        "--k".into(),
        c.k.to_string(),
        "--q".into(),
        c.q.to_flag(),
        "--fracs".into(),
        c.fracs.to_flag(),
        "--seed".into(),
        seed.to_string(),
        "--out".into(),
        c.out.display().to_string(),
    ];
    if let (true, Some(t)) = (threads, c.threads) {
        out.extend(["--threads".into(), t.to_string()]);
    }
    out
}

/// Per-realization counter on stderr.
struct Progress {
    done: AtomicUsize,
    total: usize,
    quiet: bool,
}

impl Progress {
    fn new(total: usize, quiet: bool) -> Self {
        Self { done: AtomicUsize::new(0), total, quiet }
    }

    fn tick(&self) {
        let done = self.done.fetch_add(1, Ordering::Relaxed) + 1;
        if !self.quiet {
            let mut err = std::io::stderr().lock();
            let _ = write!(err, "\rrealization {done}/{}", self.total);
            if done == self.total {
                let _ = writeln!(err);
            }
        }
    }
}

/// CSV, one chart per panel, then the total-failure check.
fn write_outputs<C: Serialize>(
    dir: &Path,
    name: &str,
    table: &ResultTable,
    y_label: &str,
    log_y: bool,
    manifest: RunManifest<C>,
) -> CliResult<()> {
    files::create_dir(dir)?;
    let csv_path = dir.join(format!("{name}.csv"));
    files::write_text(&csv_path, &table.to_csv())?;
    let csv_text = std::fs::read_to_string(&csv_path)
        .map_err(|source| CliError::MissingInput { path: csv_path.clone(), source })?;
    for (stem, chart) in plot::charts_from_csv(&csv_text, y_label, log_y)? {
        files::write_text(&dir.join(format!("{stem}.svg")), &plot::render(&chart))?;
    }
    manifest.write(&dir.join(files::MANIFEST_FILE))?;
    eprintln!("wrote {}", csv_path.display());

    if table.rows.iter().all(|r| !r.mean_value.is_finite()) {
        return Err(CliError::TotalFailure(table.total_failed()));
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundConfig<'a> {
    geo: &'a GeoConfig,
    realizations: u64,
    fracs: &'a [f64],
    sample_sizes: Vec<usize>,
    threads: Option<u64>,
}

fn run_bound(a: &BoundArgs) -> CliResult<()> {
    let seed = files::resolve_seed(a.common.seed)?;
    let cfg = geo_config(&a.common, seed);
    let progress = Progress::new(a.realizations as usize, a.common.quiet);
    let table =
        run_bound_experiment_with(&cfg, a.realizations as usize, &a.common.fracs.0, |_| progress.tick())?;

    let mut command =
        vec!["bench".into(), "bound".into(), "--realizations".into(), a.realizations.to_string()];
    command.extend(common_flags(&a.common, seed, true));
    let config = BoundConfig {
        geo: &cfg,
        realizations: a.realizations,
        fracs: &a.common.fracs.0,
        sample_sizes: cfg.sample_sizes(&a.common.fracs.0),
        threads: a.common.threads,
    };
    let manifest = RunManifest::new(command, Some(seed), config)
        .note("band size r equals the sample size |S| for every cell");
    write_outputs(&a.common.out, "bound", &table, "mean smallest singular value", false, manifest)
}

#[derive(Serialize)]
struct MseConfig<'a> {
    geo: &'a GeoConfig,
    realizations: u64,
    grid: &'a MseGrid,
    sample_sizes: Vec<usize>,
    threads: Option<u64>,
    log_scale: bool,
}

fn run_mse(a: &MseArgs) -> CliResult<()> {
    let seed = files::resolve_seed(a.common.seed)?;
    let cfg = geo_config(&a.common, seed);
    let grid = MseGrid {
        fracs: a.common.fracs.0.clone(),
        signals: a.signals.iter().map(|&c| SignalSpec::new(c)).collect::<Result<_, _>>()?,
        noises: a.noises.iter().map(|&s| NoiseSpec::new(s)).collect::<Result<_, _>>()?,
        method: match a.method {
            Method::ClosedForm => ReconMethod::ClosedForm,
            Method::Pocs => ReconMethod::Pocs,
        },
        bandwidth: a.bandwidth.0,
    };
    let progress = Progress::new(a.realizations as usize, a.common.quiet);
    let table = run_mse_experiment_with(&cfg, a.realizations as usize, &grid, |_| progress.tick())?;

    let mut command = vec![
        "bench".into(),
        "mse".into(),
        "--realizations".into(),
        a.realizations.to_string(),
        "--signals".into(),
        a.signals.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
        "--noises".into(),
        a.noises.iter().map(|&s| flag_float(s)).collect::<Vec<_>>().join(","),
        "--method".into(),
        match a.method {
            Method::ClosedForm => "closed-form".into(),
            Method::Pocs => "pocs".into(),
        },
        "--bandwidth".into(),
        a.bandwidth.to_flag(),
    ];
    if a.log_scale {
        command.push("--log-scale".into());
    }
    command.extend(common_flags(&a.common, seed, true));
    let config = MseConfig {
        geo: &cfg,
        realizations: a.realizations,
        grid: &grid,
        sample_sizes: cfg.sample_sizes(&grid.fracs),
        threads: a.common.threads,
        log_scale: a.log_scale,
    };
    let manifest = RunManifest::new(command, Some(seed), config)
        .note("error is measured in the Voronoi-area norm for every variant");
    write_outputs(&a.common.out, "mse", &table, "mean error (Voronoi-area norm)", a.log_scale, manifest)
}
