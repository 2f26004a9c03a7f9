//! JSON model configuration.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use shockrisk::{AggregateModel, CountingModel, ExponentialClaim, RiskModel};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ClaimConfig {
    Exponential { mean: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimsConfig {
    pub y1: ClaimConfig,
    pub y2: ClaimConfig,
    pub y3: ClaimConfig,
    pub y4: ClaimConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub claims: ClaimsConfig,
    pub premium_rate: f64,
    #[serde(default)]
    pub initial_capital: f64,
}

/// A parsed configuration together with its source and digest.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub path: PathBuf,
    pub config: ModelConfig,
    pub model: RiskModel,
    /// Hex SHA-256 of the raw file bytes.
    pub digest: String,
}

impl ModelConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            let line = e.line();
            let source = text.lines().nth(line.saturating_sub(1)).unwrap_or("");
            let full = e.to_string();
            let message = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m);
            CliError::Config(format!("line {line}, column {}: {message}\n  {line} | {source}", e.column()))
        })
    }

    /// Checks the documented field constraints and builds the risk model.
    ///
    /// A rate of zero switches the corresponding stream off.
    pub fn to_model(&self) -> Result<RiskModel, CliError> {
        let bad = |field: &str, why: &str, v: f64| CliError::Config(format!("field `{field}`: {why}, got {v}"));
        for (field, v) in [("lambda0", self.lambda0), ("lambda1", self.lambda1), ("lambda2", self.lambda2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(bad(field, "rate must be finite and nonnegative", v));
            }
        }
        if self.lambda0 + self.lambda1 + self.lambda2 <= 0.0 {
            return Err(CliError::Config("at least one of lambda0, lambda1, lambda2 must be positive".into()));
        }
        let claims = [
            ("claims.y1", self.claims.y1),
            ("claims.y2", self.claims.y2),
            ("claims.y3", self.claims.y3),
            ("claims.y4", self.claims.y4),
        ];
        let mut means = [0.0; 4];
        for (slot, (field, claim)) in means.iter_mut().zip(claims) {
            let ClaimConfig::Exponential { mean } = claim;
            if !(mean.is_finite() && mean > 0.0) {
                return Err(bad(&format!("{field}.mean"), "mean must be finite and positive", mean));
            }
            *slot = mean;
        }
        if !(self.premium_rate.is_finite() && self.premium_rate > 0.0) {
            return Err(bad("premium_rate", "premium must be finite and positive", self.premium_rate));
        }
        if !(self.initial_capital.is_finite() && self.initial_capital >= 0.0) {
            return Err(bad("initial_capital", "capital must be finite and nonnegative", self.initial_capital));
        }
        let counting = CountingModel::new(self.lambda0, self.lambda1, self.lambda2)?;
        let y = means.map(|m| ExponentialClaim::new(m).expect("validated mean"));
        let aggregate = AggregateModel::new(counting, y[0], y[1], y[2], y[3]);
        Ok(RiskModel::new(aggregate, self.premium_rate, self.initial_capital)?)
    }
}

pub fn load(path: &Path) -> Result<LoadedConfig, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let text =
        std::str::from_utf8(&bytes).map_err(|e| CliError::Config(format!("{} is not UTF-8: {e}", path.display())))?;
    let config = ModelConfig::parse(text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    let model = config.to_model()?;
    Ok(LoadedConfig { path: path.to_path_buf(), config, model, digest: hex::encode(Sha256::digest(&bytes)) })
}
