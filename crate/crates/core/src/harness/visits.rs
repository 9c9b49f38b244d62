//! Visit/revisit ratios per element category over a dataset, for viewer
//! scanpaths and for model rollouts.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::manifest::{DatasetManifest, ManifestEntry};
use super::sweep::{ImageDiagnostic, ImageStatus, SweepOptions};
use crate::analysis::{map_fixations_to_elements, visit_revisit, CategoryVisits, GuiGroup, VisitStats};
use crate::error::{Error, Result};
use crate::saliency::{itti_koch_saliency_with, load_density_map, resize, GuiImage, SaliencyBackend};
use crate::scanpath_gen::rollout;
use crate::types::{ElementBox, ElementCategory, SaliencyMap, Scanpath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanpathSource {
    GroundTruth,
    Predicted,
}

impl fmt::Display for ScanpathSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanpathSource::GroundTruth => "ground_truth",
            ScanpathSource::Predicted => "predicted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisitRow {
    pub source: ScanpathSource,
    pub gui_type: GuiGroup,
    pub category: ElementCategory,
    /// Number of (scanpath, image) pairs pooled into the row.
    pub scanpaths: usize,
    #[serde(flatten)]
    pub visits: CategoryVisits,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VisitReport {
    pub rows: Vec<VisitRow>,
    pub diagnostics: Vec<ImageDiagnostic>,
}

impl VisitReport {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "source",
            "gui_type",
            "category",
            "scanpaths",
            "element_count",
            "visited_count",
            "revisited_count",
            "visited_ratio",
            "revisited_ratio",
        ])
        .expect("writing to memory");
        for r in &self.rows {
            w.write_record([
                r.source.to_string(),
                r.gui_type.to_string(),
                r.category.to_string(),
                r.scanpaths.to_string(),
                r.visits.element_count.to_string(),
                r.visits.visited_count.to_string(),
                r.visits.revisited_count.to_string(),
                r.visits.visited_ratio.to_string(),
                r.visits.revisited_ratio.to_string(),
            ])
            .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
    }
}

fn predicted_scanpath(entry: &ManifestEntry, opts: &SweepOptions) -> Result<Scanpath> {
    let side = opts.base.image_side;
    let map: SaliencyMap = match &opts.backend {
        SaliencyBackend::IttiKoch(p) => itti_koch_saliency_with(&resize(&GuiImage::open(&entry.image_path)?, side, side)?, p)?,
        SaliencyBackend::DensityFile => {
            let path = entry
                .density_map_path
                .as_ref()
                .ok_or_else(|| Error::MissingFiles(vec![format!("{}: no density_map_path", entry.image_id)]))?;
            load_density_map(path, Some((side, side)), true)?
        }
    };
    rollout(&map, &opts.base)
}

type ImageVisits = (Vec<VisitStats>, Option<VisitStats>);

fn image_visits(entry: &ManifestEntry, boxes: &[ElementBox], max_fix: Option<usize>, opts: &SweepOptions, with_pred: bool) -> Result<ImageVisits> {
    let (truths, _) = entry.load_scanpaths(max_fix)?;
    let gt = truths
        .iter()
        .map(|sp| visit_revisit(&map_fixations_to_elements(sp, boxes), boxes))
        .collect();
    let pred = if with_pred {
        let sp = predicted_scanpath(entry, opts)?;
        Some(visit_revisit(&map_fixations_to_elements(&sp, boxes), boxes))
    } else {
        None
    };
    Ok((gt, pred))
}

/// Pools visit counts over every scanpath per GUI type and overall. Entries
/// without an element-box file are reported as failed. `with_predictions`
/// adds rows for rollouts at `opts.base`.
pub fn analyze_visits(manifest: &DatasetManifest, opts: &SweepOptions, with_predictions: bool) -> Result<VisitReport> {
    let mut pooled: BTreeMap<(ScanpathSource, GuiGroup), Vec<VisitStats>> = BTreeMap::new();
    let mut diagnostics = Vec::new();
    for entry in manifest.entries_in(opts.partition) {
        let outcome = entry
            .load_boxes()
            .and_then(|b| b.ok_or_else(|| Error::MissingFiles(vec![format!("{}: no element_box_path", entry.image_id)])))
            .and_then(|boxes| image_visits(entry, &boxes, manifest.max_fixations, opts, with_predictions));
        let mut diag = ImageDiagnostic {
            config: "visits".into(),
            image_id: entry.image_id.clone(),
            gui_type: entry.gui_type,
            status: ImageStatus::Succeeded,
            viewers: 0,
            clamped: 0,
            fallback_steps: 0,
            message: String::new(),
        };
        match outcome {
            Ok((gt, pred)) => {
                diag.viewers = gt.len();
                for group in [GuiGroup::Type(entry.gui_type), GuiGroup::All] {
                    pooled
                        .entry((ScanpathSource::GroundTruth, group))
                        .or_default()
                        .extend(gt.iter().cloned());
                    if let Some(p) = &pred {
                        pooled.entry((ScanpathSource::Predicted, group)).or_default().push(p.clone());
                    }
                }
            }
            Err(e) => {
                diag.status = ImageStatus::Failed;
                diag.message = e.to_string();
            }
        }
        diagnostics.push(diag);
    }
    if pooled.is_empty() {
        return Err(Error::NoSuccessfulImages { config: "visits".into() });
    }
    let rows = pooled
        .iter()
        .flat_map(|((source, group), stats)| {
            VisitStats::pooled(stats).into_iter().map(move |(category, visits)| VisitRow {
                source: *source,
                gui_type: *group,
                category,
                scanpaths: stats.len(),
                visits,
            })
        })
        .collect();
    Ok(VisitReport { rows, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixture::generate_fixture;
    use crate::harness::manifest::load_manifest;

    #[test]
    fn fixture_visits_cover_all_groups() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = load_manifest(generate_fixture(dir.path()).unwrap()).unwrap();
        let opts = SweepOptions {
            backend: SaliencyBackend::DensityFile,
            ..SweepOptions::default()
        };
        let report = analyze_visits(&manifest, &opts, true).unwrap();
        // 2 sources x 5 groups x 3 categories.
        assert_eq!(report.rows.len(), 30);
        assert!(report.diagnostics.iter().all(|d| d.status == ImageStatus::Succeeded));
        for r in &report.rows {
            assert!(r.visits.visited_count <= r.visits.element_count);
            assert!(r.visits.revisited_count <= r.visits.visited_count);
            assert!((0.0..=1.0).contains(&r.visits.visited_ratio));
        }
        let all_gt: Vec<_> = report
            .rows
            .iter()
            .filter(|r| r.source == ScanpathSource::GroundTruth && r.gui_type == GuiGroup::All)
            .collect();
        assert!(all_gt.iter().all(|r| r.scanpaths == 24));
        assert!(report.to_csv().starts_with("source,gui_type,category,scanpaths,"));
    }
}
