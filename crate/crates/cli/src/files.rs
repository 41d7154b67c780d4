//! JSON artifacts and the run manifest written next to every output.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use gsp_core::bench::QVariant;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const GRAPH_FILE: &str = "graph.json";
pub const POINTS_FILE: &str = "points.json";
pub const MANIFEST_FILE: &str = "manifest.json";

pub fn q_file(variant: QVariant) -> String {
    format!("q_{}.json", variant.name())
}

pub fn selection_file(variant: QVariant) -> String {
    format!("selection_{}.json", variant.name())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::MissingInput { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::BadInput { path: path.to_owned(), source })
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.to_owned(), source })
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("artifacts serialize");
    text.push('\n');
    write_text(path, &text)
}

pub fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.to_owned(), source })
}

/// `foo/bar.json` -> `foo/bar.manifest.json`
pub fn manifest_beside(output: &Path) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    output.with_file_name(format!("{stem}.manifest.json"))
}

/// Resolved configuration of a run. `command` holds every flag explicitly, so passing
/// it back to the binary reproduces the outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub timestamp_unix: u64,
    pub config: C,
    pub notes: Vec<String>,
}

impl<C: Serialize> RunManifest<C> {
    pub fn new(command: Vec<String>, seed: Option<u64>, config: C) -> Self {
        let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            timestamp_unix,
            config,
            notes: Vec::new(),
        }
    }

    pub fn note(mut self, text: &str) -> Self {
        self.notes.push(text.to_owned());
        self
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        write_json(path, self)
    }
}

/// `GSP_SEED` wins over the flag when set.
pub fn resolve_seed(flag: u64) -> CliResult<u64> {
    match std::env::var("GSP_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("GSP_SEED={v:?} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

/// Shortest decimal form that parses back to the same value.
pub fn flag_float(v: f64) -> String {
    format!("{v:?}")
}
