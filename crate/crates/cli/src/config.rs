//! JSON config file mirroring the command-line flags. A flag given on the
//! command line wins over the same key in the file.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

use scanpath_core::harness::SweepGrid;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    // saliency
    pub backend: Option<String>,
    pub size: Option<String>,
    // rollout
    pub n: Option<usize>,
    pub decay: Option<String>,
    pub gamma: Option<f64>,
    pub radius: Option<f64>,
    pub side: Option<usize>,
    // eval
    pub rho: Option<f64>,
    pub min_line_len: Option<usize>,
    pub dtw_scale: Option<f64>,
    pub dims: Option<String>,
    pub pred_dims: Option<String>,
    // sweep and analyze
    pub manifest: Option<PathBuf>,
    pub axis: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub serial: Option<bool>,
    pub reduction: Option<String>,
    pub partition: Option<String>,
    pub grid: Option<SweepGrid>,
    pub predict: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
