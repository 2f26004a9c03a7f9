//! Reproducibility sidecars written next to every output file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::LoadedConfig;
use crate::CliError;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_path: String,
    pub config_sha256: String,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub paths: Option<u64>,
    pub horizon: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_step: Option<f64>,
    pub output: String,
}

impl RunManifest {
    pub fn new(command: &str, config: &LoadedConfig, output: &Path) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config_path: config.path.display().to_string(),
            config_sha256: config.digest.clone(),
            seed: None,
            samples: None,
            paths: None,
            horizon: None,
            grid_max: None,
            grid_step: None,
            output: output.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        }
    }

    pub fn write_beside(&self, output: &Path) -> Result<PathBuf, CliError> {
        let path = sidecar_path(output);
        let mut json = serde_json::to_string_pretty(self).expect("manifest serialises");
        json.push('\n');
        fs::write(&path, json).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}

/// `out.csv` becomes `out.manifest.json`.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    output.with_file_name(format!("{stem}.manifest.json"))
}
