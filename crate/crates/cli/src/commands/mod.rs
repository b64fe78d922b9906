mod denoise;
mod diagnostics;
mod signal;
mod simulate;

use std::path::{Path, PathBuf};

use anyhow::Context;
use chrono::{DateTime, SecondsFormat, Utc};
use clap::Args;
use gsh_shrink::Execution;
use serde::Serialize;

use crate::manifest::RunManifest;

pub use denoise::{run as denoise, DenoiseArgs, Padding};
pub use diagnostics::{prior, risk, PriorArgs, RiskArgs};
pub use signal::{run as signal, SignalArgs};
pub use simulate::{run as simulate, SimulateArgs};

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Directory for the output files; created if missing.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write the outputs here instead of the recorded directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

pub(crate) struct Invocation {
    pub argv: Vec<String>,
    pub working_directory: PathBuf,
    pub exec: Execution,
    pub jobs: Option<usize>,
}

/// Output files of one run, finished off by the manifest.
pub(crate) struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
    started: DateTime<Utc>,
}

impl Outputs {
    pub fn create(dir: &Path) -> anyhow::Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new(), started: Utc::now() })
    }

    pub fn csv<T: Serialize>(
        &mut self,
        name: &str,
        rows: impl IntoIterator<Item = T>,
    ) -> anyhow::Result<PathBuf> {
        let path = self.dir.join(name);
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn text(&mut self, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn finish(
        self,
        inv: &Invocation,
        command: &str,
        config: impl Serialize,
        seed: Option<u64>,
        summary: impl Serialize,
    ) -> anyhow::Result<PathBuf> {
        let path = self.dir.join("manifest.json");
        let manifest = RunManifest {
            command: command.to_string(),
            argv: inv.argv.clone(),
            working_directory: inv.working_directory.clone(),
            config: serde_json::to_value(config)?,
            seed,
            jobs: inv.jobs,
            software_version: env!("CARGO_PKG_VERSION").to_string(),
            started_at: self.started.to_rfc3339_opts(SecondsFormat::Millis, true),
            finished_at: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
            outputs: self.written,
            summary: serde_json::to_value(summary)?,
        };
        manifest.write(&path)?;
        println!("manifest: {}", path.display());
        Ok(path)
    }
}

/// `points` equally spaced values from `lo` to `hi` inclusive.
pub(crate) fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| if i + 1 == points { hi } else { lo + h * i as f64 }).collect()
}
