//! `manifest.json`, written once per output directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: PathBuf,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<InputRecord>,
    /// The parsed options, config file values included.
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub versions: serde_json::Value,
    pub outputs: Vec<PathBuf>,
    /// Wall-clock seconds; the only field that differs between reruns.
    pub timings: Vec<StageTiming>,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            inputs: Vec::new(),
            config,
            seed,
            versions: serde_json::json!({
                "maxtile": env!("CARGO_PKG_VERSION"),
                "model_format": crate::model_file::FORMAT_VERSION,
            }),
            outputs: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) {
        let bytes = fs::metadata(path).map(|m| m.len()).unwrap_or(0);
        self.inputs.push(InputRecord {
            path: path.to_path_buf(),
            bytes,
        });
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    /// Runs `f` and records how long it took under `stage`.
    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push(StageTiming {
            stage: stage.to_string(),
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<PathBuf> {
        let path = dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}
