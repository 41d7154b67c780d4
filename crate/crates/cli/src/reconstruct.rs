use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gsp_core::bench::QVariant;
use gsp_core::reconstruction::{
    consistent_reconstruct, default_alpha, estimate_lambda_max, pocs_reconstruct, PocsParams,
};
use gsp_core::{SamplingResult, SpectralBasis};
use nalgebra::DVector;
use serde::Serialize;

use crate::args::parse_variant;
use crate::error::{CliError, CliResult};
use crate::files::{self, flag_float, RunManifest};
use crate::select::load_problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Pocs,
}

#[derive(Debug, Clone, Args)]
pub struct ReconstructArgs {
    /// Directory written by `gen`.
    #[arg(long, default_value = ".")]
    pub dir: PathBuf,
    #[arg(long, value_parser = parse_variant)]
    pub q: QVariant,
    /// JSON array of sampled values, aligned with the first entries of the selection order.
    #[arg(long)]
    pub samples: PathBuf,
    /// Defaults to `<dir>/selection_<q>.json`.
    #[arg(long)]
    pub selection: Option<PathBuf>,
    /// JSON array with the full ground-truth signal; adds `q_error` to the report.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::ClosedForm)]
    pub method: Method,
    /// Band size for the closed form; defaults to the number of samples.
    #[arg(long)]
    pub r: Option<usize>,
    /// Low-pass cutoff for POCS; defaults to the selection's cutoff estimate.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Sigmoid sharpness for POCS; defaults to a transition over a tenth of the spectrum.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 60)]
    pub cheb_order: usize,
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
    /// Defaults to `<dir>/reconstruction_<q>.json`; the report goes beside it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Report {
    method: Method,
    sample_size: usize,
    r: Option<usize>,
    pocs: Option<PocsParams>,
    iters: usize,
    converged: bool,
    residual_s: f64,
    last_change: Option<f64>,
    q_error: Option<f64>,
    relative_q_error: Option<f64>,
}

fn read_vector(path: &std::path::Path) -> CliResult<DVector<f64>> {
    let values: Vec<f64> = files::read_json(path)?;
    Ok(DVector::from_vec(values))
}

pub fn run(args: &ReconstructArgs) -> CliResult<()> {
    let (m, q) = load_problem(&args.dir, args.q)?;
    let n = m.n();
    let selection_path =
        args.selection.clone().unwrap_or_else(|| args.dir.join(files::selection_file(args.q)));
    let selection: SamplingResult = files::read_json(&selection_path)?;
    let y_s = read_vector(&args.samples)?;
    let truth = args.truth.as_deref().map(read_vector).transpose()?;
    if y_s.is_empty() || y_s.len() > selection.order.len() {
        return Err(CliError::Usage(format!(
            "{} holds {} samples but the selection has {} vertices",
            args.samples.display(),
            y_s.len(),
            selection.order.len()
        )));
    }
    let s = selection.prefix(n, y_s.len())?;
    // the vertex set is sorted; samples arrive in selection order
    let y_s = DVector::from_iterator(
        s.len(),
        s.iter().map(|v| y_s[selection.order.iter().position(|&o| o == v).unwrap()]),
    );

    let (report, r, pocs) = match args.method {
        Method::ClosedForm => {
            let r = args.r.unwrap_or(s.len());
            let basis = SpectralBasis::compute(&m, &q)?;
            (consistent_reconstruct(&basis, &s, r, &y_s)?, Some(r), None)
        }
        Method::Pocs => {
            let lambda_max = estimate_lambda_max(&m, &q)?;
            let omega = args.omega.unwrap_or(selection.cutoffs[s.len() - 1].min(lambda_max));
            let params = PocsParams {
                omega,
                alpha: args.alpha.unwrap_or_else(|| default_alpha(lambda_max)),
                cheb_order: args.cheb_order,
                max_iters: args.max_iters,
                rel_tol: args.rel_tol,
                lambda_max,
            };
            (pocs_reconstruct(&m, &q, &s, &y_s, &params, None)?, None, Some(params))
        }
    };
    let report = match &truth {
        Some(t) => report.with_truth(t, &q)?,
        None => report,
    };
    let relative_q_error = match (&truth, report.q_error) {
        (Some(t), Some(e)) => Some(e / q.norm(t)?),
        _ => None,
    };

    let out =
        args.out.clone().unwrap_or_else(|| args.dir.join(format!("reconstruction_{}.json", args.q.name())));
    files::write_json(&out, report.x_hat.as_slice())?;
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let summary = Report {
        method: args.method,
        sample_size: s.len(),
        r,
        pocs,
        iters: report.iters,
        converged: report.converged,
        residual_s: report.residual_s,
        last_change: report.last_change,
        q_error: report.q_error,
        relative_q_error,
    };
    files::write_json(&out.with_file_name(format!("{stem}.report.json")), &summary)?;

    let mut command = vec![
        "reconstruct".into(),
        "--dir".into(),
        args.dir.display().to_string(),
        "--q".into(),
        args.q.name().into(),
        "--samples".into(),
        args.samples.display().to_string(),
        "--selection".into(),
        selection_path.display().to_string(),
    ];
    if let Some(t) = &args.truth {
        command.extend(["--truth".into(), t.display().to_string()]);
    }
    match (r, &pocs) {
        (Some(r), _) => {
            command.extend(["--method".into(), "closed-form".into(), "--r".into(), r.to_string()])
        }
        (None, Some(p)) => command.extend([
            "--method".into(),
            "pocs".into(),
            "--omega".into(),
            flag_float(p.omega),
            "--alpha".into(),
            flag_float(p.alpha),
            "--cheb-order".into(),
            p.cheb_order.to_string(),
            "--max-iters".into(),
            p.max_iters.to_string(),
            "--rel-tol".into(),
            flag_float(p.rel_tol),
        ]),
        (None, None) => unreachable!("one method ran"),
    }
    command.extend(["--out".into(), out.display().to_string()]);
    RunManifest::new(command, None, &summary).write(&files::manifest_beside(&out))?;

    match summary.q_error {
        Some(e) => println!("{} samples, {} iterations, q_error = {e:.6e}", s.len(), report.iters),
        None => println!("{} samples, {} iterations", s.len(), report.iters),
    }
    Ok(())
}
