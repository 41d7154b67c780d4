use std::path::PathBuf;

use clap::Args;
use gsp_core::bench::{realization_rng, GeoConfig, GeoInstance};
use serde::Serialize;

use crate::args::VariantList;
use crate::error::CliResult;
use crate::files::{self, flag_float, RunManifest};

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// Number of vertices.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Side of the square holding the points.
    #[arg(long, default_value_t = 10.0)]
    pub side: f64,
    /// Length scale of the Gaussian kernel weights.
    #[arg(long, default_value_t = 1.0)]
    pub kernel_sigma: f64,
    /// Overridden by GSP_SEED when set.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Inner products to write: `all` or a comma list of identity, degree, voronoi.
    #[arg(long, default_value = "all")]
    pub q: VariantList,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct GenConfig<'a> {
    n: u64,
    side: f64,
    kernel_sigma: f64,
    variants: Vec<&'a str>,
    out: String,
}

/// Draws the point cloud of realization 0 for the seed, so `gen --seed s` yields the
/// first graph of `bench --seed s`.
pub fn run(args: &GenArgs) -> CliResult<()> {
    let seed = files::resolve_seed(args.seed)?;
    let cfg = GeoConfig {
        n: args.n as usize,
        side: args.side,
        kernel_sigma: args.kernel_sigma,
        seed,
        ..GeoConfig::default()
    };
    let inst = GeoInstance::generate(&cfg, &mut realization_rng(seed, 0))?;
    let qs = args
        .q
        .0
        .iter()
        .map(|&v| Ok((v, v.build(&inst.cloud, &inst.graph)?)))
        .collect::<CliResult<Vec<_>>>()?;

    files::create_dir(&args.out)?;
    files::write_json(&args.out.join(files::GRAPH_FILE), &inst.graph.to_file())?;
    files::write_json(&args.out.join(files::POINTS_FILE), &inst.cloud)?;
    for (v, q) in &qs {
        files::write_json(&args.out.join(files::q_file(*v)), &q.to_file())?;
    }

    let command = vec![
        "gen".into(),
        "--n".into(),
        args.n.to_string(),
        "--side".into(),
        flag_float(args.side),
        "--kernel-sigma".into(),
        flag_float(args.kernel_sigma),
        "--seed".into(),
        seed.to_string(),
        "--q".into(),
        args.q.to_flag(),
        "--out".into(),
        args.out.display().to_string(),
    ];
    let config = GenConfig {
        n: args.n,
        side: args.side,
        kernel_sigma: args.kernel_sigma,
        variants: args.q.0.iter().map(|v| v.name()).collect(),
        out: args.out.display().to_string(),
    };
    RunManifest::new(command, Some(seed), config).write(&args.out.join(files::MANIFEST_FILE))?;
    eprintln!("wrote {} vertices to {}", args.n, args.out.display());
    Ok(())
}
