//! Dataset manifests and the per-image files they reference.
//!
//! Manifest JSON:
//!
//! ```json
//! {
//!   "max_fixations": 15,
//!   "entries": [{
//!     "image_id": "web_01",
//!     "image_path": "images/web_01.png",
//!     "gui_type": "web",
//!     "scanpath_paths": ["scanpaths/web_01.csv"],
//!     "element_box_path": "boxes/web_01.json",
//!     "density_map_path": "maps/web_01.txt",
//!     "partition": "test",
//!     "screen_width": 1920,
//!     "screen_height": 1200
//!   }]
//! }
//! ```
//!
//! Relative paths resolve against the manifest's directory. `screen_*`
//! give the pixel space of the scanpath files and default to the image size.
//! `max_fixations` truncates ground-truth scanpaths on load.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{validate_scanpath, ElementBox, GuiType, ImageDims, RawFixation, Scanpath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Test,
}

impl std::str::FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Partition::Train),
            "test" => Ok(Partition::Test),
            _ => Err(Error::UnknownVariant {
                kind: "partition",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub image_id: String,
    pub image_path: PathBuf,
    pub gui_type: GuiType,
    pub scanpath_paths: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_box_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density_map_path: Option<PathBuf>,
    pub partition: Partition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screen_width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screen_height: Option<usize>,
}

impl ManifestEntry {
    fn referenced_paths(&self) -> impl Iterator<Item = &PathBuf> {
        std::iter::once(&self.image_path)
            .chain(&self.scanpath_paths)
            .chain(&self.element_box_path)
            .chain(&self.density_map_path)
    }

    /// Pixel space of the ground-truth files.
    pub fn screen_dims(&self) -> Result<ImageDims> {
        match (self.screen_width, self.screen_height) {
            (Some(w), Some(h)) => ImageDims::new(w, h),
            _ => {
                let (w, h) = image::image_dimensions(&self.image_path).map_err(|source| Error::Image {
                    path: self.image_path.clone(),
                    source,
                })?;
                ImageDims::new(w as usize, h as usize)
            }
        }
    }

    /// Ground-truth scanpaths, one per viewer, plus the number of clamped
    /// fixations.
    pub fn load_scanpaths(&self, max_fixations: Option<usize>) -> Result<(Vec<Scanpath>, usize)> {
        let dims = self.screen_dims()?;
        let mut out = Vec::new();
        let mut clamped = 0;
        for path in &self.scanpath_paths {
            for (viewer, raw) in read_scanpath_csv(path)? {
                let v = validate_scanpath(&raw, dims)?;
                clamped += v.clamped;
                let mut sp = v.scanpath.with_ids(&self.image_id, Some(viewer));
                if let Some(n) = max_fixations {
                    sp = sp.truncated(n);
                }
                out.push(sp);
            }
        }
        if out.is_empty() {
            return Err(Error::NoGroundTruth {
                image_id: self.image_id.clone(),
            });
        }
        Ok((out, clamped))
    }

    pub fn load_boxes(&self) -> Result<Option<Vec<ElementBox>>> {
        self.element_box_path.as_ref().map(|p| read_boxes(p)).transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_fixations: Option<usize>,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    /// Checks id uniqueness, ground truth presence and that every referenced
    /// file exists. Missing files are collected across all entries.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for e in &self.entries {
            if !seen.insert(e.image_id.as_str()) {
                return Err(Error::DuplicateImageId(e.image_id.clone()));
            }
            if e.scanpath_paths.is_empty() {
                return Err(Error::NoGroundTruth {
                    image_id: e.image_id.clone(),
                });
            }
        }
        let missing: Vec<String> = self
            .entries
            .iter()
            .flat_map(|e| {
                e.referenced_paths()
                    .filter(|p| !p.exists())
                    .map(move |p| format!("{}: {}", e.image_id, p.display()))
            })
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingFiles(missing));
        }
        Ok(())
    }

    fn resolve_against(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for e in &mut self.entries {
            fix(&mut e.image_path);
            e.scanpath_paths.iter_mut().for_each(fix);
            e.element_box_path.iter_mut().for_each(fix);
            e.density_map_path.iter_mut().for_each(fix);
        }
    }

    pub fn entries_in(&self, partition: Option<Partition>) -> impl Iterator<Item = &ManifestEntry> {
        self.entries
            .iter()
            .filter(move |e| partition.map_or(true, |p| e.partition == p))
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut manifest: DatasetManifest = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    manifest.resolve_against(base);
    manifest.validate()?;
    Ok(manifest)
}

#[derive(Debug, Serialize, Deserialize)]
struct ScanpathRecord {
    viewer_id: String,
    idx: usize,
    x_px: f64,
    y_px: f64,
    t_ms: Option<f64>,
    duration_ms: Option<f64>,
}

/// Reads `viewer_id,idx,x_px,y_px,t_ms,duration_ms` rows. Returns one
/// fixation list per viewer, viewers in order of first appearance and
/// fixations ordered by `idx`.
pub fn read_scanpath_csv(path: impl AsRef<Path>) -> Result<Vec<(String, Vec<RawFixation>)>> {
    let path = path.as_ref();
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_err)?;
    let mut order: Vec<String> = Vec::new();
    let mut by_viewer: BTreeMap<String, Vec<(usize, RawFixation)>> = BTreeMap::new();
    for rec in reader.deserialize::<ScanpathRecord>() {
        let rec = rec.map_err(csv_err)?;
        if !by_viewer.contains_key(&rec.viewer_id) {
            order.push(rec.viewer_id.clone());
        }
        by_viewer.entry(rec.viewer_id).or_default().push((
            rec.idx,
            RawFixation {
                x_px: rec.x_px,
                y_px: rec.y_px,
                t_ms: rec.t_ms,
                duration_ms: rec.duration_ms,
            },
        ));
    }
    Ok(order
        .into_iter()
        .map(|v| {
            let mut fx = by_viewer.remove(&v).unwrap_or_default();
            fx.sort_by_key(|(i, _)| *i);
            (v, fx.into_iter().map(|(_, f)| f).collect())
        })
        .collect())
}

/// Writes scanpaths in pixel coordinates of `dims`.
pub fn write_scanpath_csv<W: std::io::Write>(out: W, scanpaths: &[Scanpath], dims: ImageDims) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (k, sp) in scanpaths.iter().enumerate() {
        let viewer = sp.viewer_id().map(str::to_string).unwrap_or_else(|| format!("v{k}"));
        for (idx, f) in sp.fixations().iter().enumerate() {
            let (x_px, y_px) = dims.denormalize(f.x(), f.y());
            w.serialize(ScanpathRecord {
                viewer_id: viewer.clone(),
                idx,
                x_px,
                y_px,
                t_ms: f.t_ms(),
                duration_ms: f.duration_ms(),
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_boxes(path: impl AsRef<Path>) -> Result<Vec<ElementBox>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}
