use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{usage, CliError, Format};
use crate::fixnum::{Fix32, Layer};
use crate::prng::{GeneratorConfig, ReseedPolicy, Seed64};

/// Everything needed to reproduce a `gen` run bit for bit, plus provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    /// 16 upper-case hex digits.
    pub seed: String,
    /// Where the seed came from, for the record only.
    pub seed_source: String,
    pub layer: Layer,
    pub dt: String,
    pub warmup: u64,
    pub steps_per_output: u64,
    pub reseed_policy: ReseedPolicy,
    pub n: u64,
    pub format: Format,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub reseed_events: u64,
    pub wraps: u64,
    pub unassigned_trig: u64,
}

pub(crate) fn now_unix() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl RunManifest {
    pub fn seed64(&self) -> Result<Seed64, String> {
        if self.seed.len() != 16 {
            return Err(format!("manifest seed {:?} is not 16 hex digits", self.seed));
        }
        self.seed.parse().map_err(|e| format!("manifest seed {:?}: {e}", self.seed))
    }

    pub fn config(&self) -> Result<GeneratorConfig, String> {
        let dt: Fix32 = self.dt.parse().map_err(|e| format!("manifest dt {:?}: {e}", self.dt))?;
        let cfg = GeneratorConfig {
            layer: self.layer,
            dt,
            warmup_steps: self.warmup,
            steps_per_output: self.steps_per_output,
            reseed_policy: self.reseed_policy,
        };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<RunManifest, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct serializes")
    }
}

/// `<path>.manifest.json`, keeping the full file name of `path`.
pub(crate) fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    path.with_file_name(name)
}
