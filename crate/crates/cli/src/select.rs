use std::path::{Path, PathBuf};

use clap::Args;
use gsp_core::bench::QVariant;
use gsp_core::{
    combinatorial_laplacian, greedy_select, Graph, GraphFile, InnerProduct, InnerProductFile, ProxyOrder,
    VariationMatrix,
};
use serde::Serialize;

use crate::args::parse_variant;
use crate::error::CliResult;
use crate::files::{self, RunManifest};

#[derive(Debug, Clone, Args)]
pub struct SelectArgs {
    /// Directory written by `gen`.
    #[arg(long, default_value = ".")]
    pub dir: PathBuf,
    #[arg(long, value_parser = parse_variant)]
    pub q: QVariant,
    /// Number of vertices to select.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    /// Spectral proxy order.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    /// Defaults to `<dir>/selection_<q>.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Laplacian and inner product of a generated graph.
pub fn load_problem(dir: &Path, q: QVariant) -> CliResult<(VariationMatrix, InnerProduct)> {
    let graph: GraphFile = files::read_json(&dir.join(files::GRAPH_FILE))?;
    let qf: InnerProductFile = files::read_json(&dir.join(files::q_file(q)))?;
    let graph = Graph::from_file(&graph)?;
    let q = InnerProduct::from_file(&qf)?;
    if q.n() != graph.n() {
        return Err(gsp_core::Error::DimensionMismatch { expected: graph.n(), found: q.n() }.into());
    }
    Ok((combinatorial_laplacian(&graph), q))
}

#[derive(Serialize)]
struct SelectConfig {
    dir: String,
    q: &'static str,
    m: u64,
    k: u32,
    out: String,
}

pub fn run(args: &SelectArgs) -> CliResult<()> {
    let (m, q) = load_problem(&args.dir, args.q)?;
    let result = greedy_select(&m, &q, ProxyOrder::new(args.k)?, args.m as usize)?;
    let out = args.out.clone().unwrap_or_else(|| args.dir.join(files::selection_file(args.q)));
    files::write_json(&out, &result)?;

    let command = vec![
        "select".into(),
        "--dir".into(),
        args.dir.display().to_string(),
        "--q".into(),
        args.q.name().into(),
        "--m".into(),
        args.m.to_string(),
        "--k".into(),
        args.k.to_string(),
        "--out".into(),
        out.display().to_string(),
    ];
    let config = SelectConfig {
        dir: args.dir.display().to_string(),
        q: args.q.name(),
        m: args.m,
        k: args.k,
        out: out.display().to_string(),
    };
    RunManifest::new(command, None, config).write(&files::manifest_beside(&out))?;

    let last = result.cutoffs.last().copied().unwrap_or(f64::NAN);
    println!("selected {} vertices; cutoff estimate Omega_{} = {last:.10e}", result.order.len(), args.k);
    Ok(())
}
