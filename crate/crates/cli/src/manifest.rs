use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Result;
use multibump_core::config::ModelConfig;
use serde::{Deserialize, Serialize};

/// Record of one command run, written after every other output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: ModelConfig,
    pub version: String,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<PathBuf>,
    /// Assertion group -> passed.
    pub assertions: BTreeMap<String, bool>,
    /// Error that stopped the run, if any.
    pub failure: Option<String>,
}

impl RunManifest {
    pub fn path(out: &Path, command: &str) -> PathBuf {
        out.join(format!("manifest_{command}.json"))
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.assertions.values().all(|&v| v)
    }

    /// Temp file then rename, so a reader never sees a partial manifest.
    pub fn write(&self, out: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(out)?;
        let path = Self::path(out, &self.command);
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_vec_pretty(self)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

/// A config file is either a bare config object or a manifest carrying one.
pub fn read_config(path: &Path) -> Result<ModelConfig> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let inner = match value.get("command").and(value.get("config")) {
        Some(c) => c.clone(),
        None => value,
    };
    Ok(serde_json::from_value(inner)?)
}
