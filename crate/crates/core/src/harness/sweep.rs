//! One-axis-at-a-time parameter sweeps.
//!
//! Every configuration runs resize → saliency → rollout → metrics on each
//! manifest image and compares the prediction with every viewer's scanpath.
//! Work items are independent; results are gathered in input order, so the
//! serial and parallel paths produce identical output.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::manifest::{DatasetManifest, ManifestEntry, Partition};
use crate::analysis::{aggregate, mean, paired_t_test, GuiGroup, PairedTestResult};
use crate::error::{Error, Result};
use crate::metrics::{evaluate_pair, EvalConfig, Metric, RecurrenceConfig};
use crate::saliency::{itti_koch_saliency_with, load_density_map, resize, GuiImage, IttiKochParams, SaliencyBackend};
use crate::scanpath_gen::rollout_with_trace;
use crate::types::{DecayKind, GuiType, RolloutConfig, SaliencyMap, Scanpath};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    /// Square resolutions for the size study.
    pub image_sides: Vec<usize>,
    /// Widths for the aspect study, all at `aspect_height`.
    pub widths_for_aspect_study: Vec<usize>,
    pub aspect_height: usize,
    pub gammas: Vec<f64>,
    pub radii: Vec<f64>,
    pub fixation_counts: Vec<usize>,
    /// Decay kinds compared pairwise by the IOR study.
    pub decay_kinds: Vec<DecayKind>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            image_sides: vec![128, 225, 512],
            widths_for_aspect_study: vec![128, 225, 512],
            aspect_height: 225,
            gammas: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            radii: vec![0.05, 0.1, 0.15, 0.2, 0.3],
            fixation_counts: (5..=10).collect(),
            decay_kinds: vec![DecayKind::BaselineLinear, DecayKind::ExponentialGamma],
        }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidGrid(what.to_string()));
        if self.image_sides.is_empty()
            || self.widths_for_aspect_study.is_empty()
            || self.gammas.is_empty()
            || self.radii.is_empty()
            || self.fixation_counts.is_empty()
            || self.decay_kinds.is_empty()
        {
            return bad("every grid list must be non-empty");
        }
        let min = crate::saliency::MIN_IMAGE_SIDE;
        if self
            .image_sides
            .iter()
            .chain(&self.widths_for_aspect_study)
            .chain(std::iter::once(&self.aspect_height))
            .any(|&s| s < min)
        {
            return bad(&format!("image sides must be at least {min} px"));
        }
        if self.gammas.iter().chain(&self.radii).any(|&v| !(v > 0.0 && v < 1.0)) {
            return bad("gammas and radii must lie in (0, 1)");
        }
        if self.fixation_counts.contains(&0) {
            return bad("fixation counts must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Size,
    Aspect,
    Gamma,
    Radius,
    #[serde(rename = "nfix")]
    NFixations,
    IorCompare,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 6] = [
        SweepAxis::Size,
        SweepAxis::Aspect,
        SweepAxis::Gamma,
        SweepAxis::Radius,
        SweepAxis::NFixations,
        SweepAxis::IorCompare,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::Size => "size",
            SweepAxis::Aspect => "aspect",
            SweepAxis::Gamma => "gamma",
            SweepAxis::Radius => "radius",
            SweepAxis::NFixations => "nfix",
            SweepAxis::IorCompare => "ior_compare",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n_fixations" => Ok(SweepAxis::NFixations),
            _ => SweepAxis::ALL
                .into_iter()
                .find(|a| a.as_str() == s)
                .ok_or_else(|| Error::UnknownVariant {
                    kind: "sweep axis",
                    value: s.to_string(),
                }),
        }
    }
}

/// One evaluated configuration: evaluation resolution plus rollout settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigPoint {
    pub id: String,
    pub width: usize,
    pub height: usize,
    pub rollout: RolloutConfig,
}

impl ConfigPoint {
    pub fn square(id: impl Into<String>, rollout: RolloutConfig) -> Self {
        Self {
            id: id.into(),
            width: rollout.image_side,
            height: rollout.image_side,
            rollout,
        }
    }
}

/// Configurations for `axis`, all other parameters taken from `base`.
///
/// For non-square resolutions the masking radius is measured against the
/// longer side.
pub fn axis_configs(grid: &SweepGrid, axis: SweepAxis, base: &RolloutConfig) -> Result<Vec<ConfigPoint>> {
    grid.validate()?;
    base.validate()?;
    let with = |f: &dyn Fn(&mut RolloutConfig)| {
        let mut c = *base;
        f(&mut c);
        c
    };
    let points: Vec<ConfigPoint> = match axis {
        SweepAxis::Size => grid
            .image_sides
            .iter()
            .map(|&s| ConfigPoint::square(format!("size={s}x{s}"), with(&|c| c.image_side = s)))
            .collect(),
        SweepAxis::Aspect => grid
            .widths_for_aspect_study
            .iter()
            .map(|&w| {
                let h = grid.aspect_height;
                ConfigPoint {
                    id: format!("aspect={w}x{h}"),
                    width: w,
                    height: h,
                    rollout: with(&|c| c.image_side = w.max(h)),
                }
            })
            .collect(),
        SweepAxis::Gamma => grid
            .gammas
            .iter()
            .map(|&g| ConfigPoint::square(format!("gamma={g}"), with(&|c| c.gamma = g)))
            .collect(),
        SweepAxis::Radius => grid
            .radii
            .iter()
            .map(|&r| ConfigPoint::square(format!("radius={r}"), with(&|c| c.mask_radius_frac = r)))
            .collect(),
        SweepAxis::NFixations => grid
            .fixation_counts
            .iter()
            .map(|&n| ConfigPoint::square(format!("nfix={n}"), with(&|c| c.n_fixations = n)))
            .collect(),
        SweepAxis::IorCompare => grid
            .decay_kinds
            .iter()
            .map(|&d| ConfigPoint::square(format!("decay={d}"), with(&|c| c.decay = d)))
            .collect(),
    };
    for (k, p) in points.iter().enumerate() {
        p.rollout.validate()?;
        if points[..k].iter().any(|q| q.id == p.id) {
            return Err(Error::InvalidGrid(format!("duplicate configuration {}", p.id)));
        }
    }
    Ok(points)
}

/// How the metrics against several viewers reduce to one value per image.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViewerReduction {
    #[default]
    Mean,
    Min,
}

impl ViewerReduction {
    fn apply(&self, values: &[f64]) -> f64 {
        match self {
            ViewerReduction::Mean => mean(values),
            ViewerReduction::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

impl FromStr for ViewerReduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(ViewerReduction::Mean),
            "min" => Ok(ViewerReduction::Min),
            _ => Err(Error::UnknownVariant {
                kind: "viewer reduction",
                value: s.to_string(),
            }),
        }
    }
}

/// Coordinate scale applied to reported DTW values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DtwScale {
    /// Multiply normalized coordinates by the rollout grid side / 100, so
    /// DTW is reported in percent of the grid.
    GridPercent,
    Factor(f64),
}

impl DtwScale {
    pub fn factor(self, grid_side: usize) -> f64 {
        match self {
            DtwScale::GridPercent => grid_side as f64 / 100.0,
            DtwScale::Factor(f) => f,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    /// Values of every parameter not under study.
    pub base: RolloutConfig,
    pub backend: SaliencyBackend,
    pub recurrence: RecurrenceConfig,
    pub dtw_scale: DtwScale,
    pub reduction: ViewerReduction,
    /// Restrict to one partition; `None` uses every entry.
    pub partition: Option<Partition>,
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            base: RolloutConfig::default(),
            backend: SaliencyBackend::default(),
            recurrence: RecurrenceConfig::default(),
            dtw_scale: DtwScale::GridPercent,
            reduction: ViewerReduction::Mean,
            partition: None,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageStatus {
    Succeeded,
    Failed,
}

impl ImageStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ImageStatus::Succeeded => "succeeded",
            ImageStatus::Failed => "failed",
        }
    }
}

/// Outcome of one (configuration, image) work item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageDiagnostic {
    pub config: String,
    pub image_id: String,
    pub gui_type: GuiType,
    pub status: ImageStatus,
    pub viewers: usize,
    /// Ground-truth fixations clamped into the image.
    pub clamped: usize,
    /// Rollout steps that fell back to the unsuppressed map.
    pub fallback_steps: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub config: String,
    pub gui_type: GuiGroup,
    pub metric: Metric,
    pub mean: f64,
    pub sd: f64,
    pub n: usize,
}

/// Paired comparison of two configurations on per-image values
/// (`config_a - config_b`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub config_a: String,
    pub config_b: String,
    pub metric: Metric,
    /// `None` when the test is undefined, e.g. identical per-image values.
    pub result: Option<PairedTestResult>,
    pub note: String,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool: String,
    pub version: String,
    pub axis: Option<SweepAxis>,
    pub configs: Vec<ConfigPoint>,
    pub defaults: RolloutConfig,
    pub grid: Option<SweepGrid>,
    pub backend: String,
    pub itti_koch: Option<IttiKochParams>,
    pub rho: f64,
    pub min_line_len: usize,
    pub dtw_scale: DtwScale,
    pub viewer_reduction: ViewerReduction,
    pub reduction_order: String,
    pub partition: Option<Partition>,
    pub max_fixations: Option<usize>,
    pub n_images: usize,
    pub determinism: String,
}

impl Default for RunMetadata {
    fn default() -> Self {
        Self::new(&SweepOptions::default(), None, None, Vec::new(), None, 0)
    }
}

impl RunMetadata {
    fn new(
        opts: &SweepOptions,
        axis: Option<SweepAxis>,
        grid: Option<&SweepGrid>,
        configs: Vec<ConfigPoint>,
        max_fixations: Option<usize>,
        n_images: usize,
    ) -> Self {
        Self {
            tool: "scanpath".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            axis,
            configs,
            defaults: opts.base,
            grid: grid.cloned(),
            backend: opts.backend.name().into(),
            itti_koch: match &opts.backend {
                SaliencyBackend::IttiKoch(p) => Some(p.clone()),
                SaliencyBackend::DensityFile => None,
            },
            rho: opts.recurrence.rho,
            min_line_len: opts.recurrence.min_line_len,
            dtw_scale: opts.dtw_scale,
            viewer_reduction: opts.reduction,
            reduction_order: "per image: reduce over viewers; per group: mean and sample sd over images".into(),
            partition: opts.partition,
            max_fixations,
            n_images,
            determinism: "no random state; every stage is a pure function of its inputs and results are \
                          sorted canonically, so reruns and parallel runs give identical output"
                .into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub metadata: RunMetadata,
    pub rows: Vec<ResultRow>,
    pub tests: Vec<TestRecord>,
    pub diagnostics: Vec<ImageDiagnostic>,
}

impl SweepResult {
    pub fn failed_images(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.status == ImageStatus::Failed).count()
    }

    pub fn row(&self, config: &str, gui: GuiGroup, metric: Metric) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.config == config && r.gui_type == gui && r.metric == metric)
    }
}

struct PreparedImage<'m> {
    entry: &'m ManifestEntry,
    truth: std::result::Result<(Vec<Scanpath>, usize), String>,
}

type MapCache = HashMap<(usize, usize, usize), std::result::Result<SaliencyMap, String>>;

fn par_map<T: Sync, R: Send>(items: &[T], parallel: bool, f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

fn prepare<'m>(manifest: &'m DatasetManifest, opts: &SweepOptions) -> Vec<PreparedImage<'m>> {
    let entries: Vec<&ManifestEntry> = manifest.entries_in(opts.partition).collect();
    par_map(&entries, opts.parallel, |e| PreparedImage {
        entry: e,
        truth: e.load_scanpaths(manifest.max_fixations).map_err(|err| err.to_string()),
    })
}

fn saliency_for(entry: &ManifestEntry, w: usize, h: usize, backend: &SaliencyBackend) -> Result<SaliencyMap> {
    match backend {
        SaliencyBackend::IttiKoch(params) => {
            let img = GuiImage::open(&entry.image_path)?;
            itti_koch_saliency_with(&resize(&img, w, h)?, params)
        }
        SaliencyBackend::DensityFile => {
            let path = entry
                .density_map_path
                .as_ref()
                .ok_or_else(|| Error::MissingFiles(vec![format!("{}: no density_map_path", entry.image_id)]))?;
            load_density_map(path, Some((w, h)), true)
        }
    }
}

/// Saliency maps for every image at every requested resolution.
fn compute_maps(images: &[PreparedImage<'_>], dims: &[(usize, usize)], opts: &SweepOptions) -> MapCache {
    let items: Vec<(usize, usize, usize)> = (0..images.len())
        .flat_map(|i| dims.iter().map(move |&(w, h)| (i, w, h)))
        .collect();
    let maps = par_map(&items, opts.parallel, |&(i, w, h)| {
        saliency_for(images[i].entry, w, h, &opts.backend).map_err(|e| e.to_string())
    });
    items.into_iter().zip(maps).collect()
}

struct ImageEval {
    diagnostic: ImageDiagnostic,
    values: Option<[f64; 4]>,
}

fn eval_image(img: &PreparedImage<'_>, map: &std::result::Result<SaliencyMap, String>, cp: &ConfigPoint, opts: &SweepOptions) -> ImageEval {
    let mut diagnostic = ImageDiagnostic {
        config: cp.id.clone(),
        image_id: img.entry.image_id.clone(),
        gui_type: img.entry.gui_type,
        status: ImageStatus::Failed,
        viewers: 0,
        clamped: 0,
        fallback_steps: 0,
        message: String::new(),
    };
    let mut run = || -> std::result::Result<[f64; 4], String> {
        let (truths, clamped) = img.truth.as_ref().map_err(Clone::clone)?;
        diagnostic.viewers = truths.len();
        diagnostic.clamped = *clamped;
        let map = map.as_ref().map_err(Clone::clone)?;
        let trace = rollout_with_trace(map, &cp.rollout).map_err(|e| e.to_string())?;
        diagnostic.fallback_steps = trace.fallback_steps;
        let pred = trace.scanpath.with_ids(&img.entry.image_id, Some("model".into()));
        let eval = EvalConfig {
            recurrence: opts.recurrence,
            dtw_scale: opts.dtw_scale.factor(cp.rollout.image_side),
        };
        let reports = truths
            .iter()
            .map(|t| evaluate_pair(&pred, t, &eval))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        Ok(Metric::ALL.map(|m| {
            let per_viewer: Vec<f64> = reports.iter().map(|r| m.of(r)).collect();
            opts.reduction.apply(&per_viewer)
        }))
    };
    let outcome = run();
    let values = match outcome {
        Ok(v) => {
            diagnostic.status = ImageStatus::Succeeded;
            Some(v)
        }
        Err(msg) => {
            diagnostic.message = msg;
            None
        }
    };
    ImageEval { diagnostic, values }
}

struct ConfigOutcome {
    diagnostics: Vec<ImageDiagnostic>,
    /// Per-image metric values keyed by image id.
    per_image: BTreeMap<String, (GuiType, [f64; 4])>,
}

fn evaluate_prepared(
    images: &[PreparedImage<'_>],
    maps: &MapCache,
    configs: &[ConfigPoint],
    opts: &SweepOptions,
) -> Result<Vec<ConfigOutcome>> {
    let items: Vec<(usize, usize)> = (0..configs.len())
        .flat_map(|c| (0..images.len()).map(move |i| (c, i)))
        .collect();
    let evals = par_map(&items, opts.parallel, |&(c, i)| {
        let cp = &configs[c];
        eval_image(&images[i], &maps[&(i, cp.width, cp.height)], cp, opts)
    });
    let mut outcomes: Vec<ConfigOutcome> = configs
        .iter()
        .map(|_| ConfigOutcome {
            diagnostics: Vec::new(),
            per_image: BTreeMap::new(),
        })
        .collect();
    for (&(c, _), ev) in items.iter().zip(evals) {
        let out = &mut outcomes[c];
        if let Some(v) = ev.values {
            out.per_image
                .insert(ev.diagnostic.image_id.clone(), (ev.diagnostic.gui_type, v));
        }
        out.diagnostics.push(ev.diagnostic);
    }
    for (cp, out) in configs.iter().zip(&outcomes) {
        if out.per_image.is_empty() {
            return Err(Error::NoSuccessfulImages { config: cp.id.clone() });
        }
    }
    Ok(outcomes)
}

fn summarize_rows(configs: &[ConfigPoint], outcomes: &[ConfigOutcome]) -> Result<Vec<ResultRow>> {
    let mut samples = Vec::new();
    for (c, out) in outcomes.iter().enumerate() {
        for (gui, values) in out.per_image.values() {
            for (m, v) in Metric::ALL.iter().zip(values) {
                samples.push(((c, *m), *gui, *v));
            }
        }
    }
    let mut keyed: Vec<_> = aggregate(&samples)?.into_iter().collect();
    keyed.sort_by_key(|(((c, m), g), _)| (*c, *g, *m));
    Ok(keyed
        .into_iter()
        .map(|(((c, metric), gui_type), s)| ResultRow {
            config: configs[c].id.clone(),
            gui_type,
            metric,
            mean: s.mean,
            sd: s.sd,
            n: s.n,
        })
        .collect())
}

fn pairwise_tests(configs: &[ConfigPoint], outcomes: &[ConfigOutcome]) -> Vec<TestRecord> {
    let mut tests = Vec::new();
    for a in 0..configs.len() {
        for b in a + 1..configs.len() {
            let shared: Vec<(&[f64; 4], &[f64; 4])> = outcomes[a]
                .per_image
                .iter()
                .filter_map(|(id, (_, va))| outcomes[b].per_image.get(id).map(|(_, vb)| (va, vb)))
                .collect();
            for (k, metric) in Metric::ALL.into_iter().enumerate() {
                let x: Vec<f64> = shared.iter().map(|(va, _)| va[k]).collect();
                let y: Vec<f64> = shared.iter().map(|(_, vb)| vb[k]).collect();
                let (result, note) = match paired_t_test(&x, &y) {
                    Ok(r) => (Some(r), String::new()),
                    Err(e) => (None, e.to_string()),
                };
                tests.push(TestRecord {
                    config_a: configs[a].id.clone(),
                    config_b: configs[b].id.clone(),
                    metric,
                    result,
                    note,
                });
            }
        }
    }
    tests
}

/// Evaluates explicit configurations. Per-image failures become
/// diagnostics; a configuration with no successful image is an error.
pub fn evaluate_configs(
    manifest: &DatasetManifest,
    configs: &[ConfigPoint],
    opts: &SweepOptions,
    with_tests: bool,
) -> Result<SweepResult> {
    let images = prepare(manifest, opts);
    let mut dims: Vec<(usize, usize)> = configs.iter().map(|c| (c.width, c.height)).collect();
    dims.sort_unstable();
    dims.dedup();
    let maps = compute_maps(&images, &dims, opts);
    let outcomes = evaluate_prepared(&images, &maps, configs, opts)?;
    let rows = summarize_rows(configs, &outcomes)?;
    let tests = if with_tests { pairwise_tests(configs, &outcomes) } else { Vec::new() };
    let diagnostics = outcomes.into_iter().flat_map(|o| o.diagnostics).collect();
    Ok(SweepResult {
        metadata: RunMetadata::new(opts, None, None, configs.to_vec(), manifest.max_fixations, images.len()),
        rows,
        tests,
        diagnostics,
    })
}

/// Evaluates one rollout configuration at the square resolution
/// `cfg.image_side`.
pub fn evaluate_config(manifest: &DatasetManifest, cfg: &RolloutConfig, opts: &SweepOptions) -> Result<SweepResult> {
    let point = ConfigPoint::square(format!("side={}", cfg.image_side), *cfg);
    evaluate_configs(manifest, &[point], opts, false)
}

/// Runs every configuration of `axis`. The IOR study also attaches paired
/// t-tests over per-image values for each pair of decay kinds.
pub fn run_sweep(manifest: &DatasetManifest, grid: &SweepGrid, axis: SweepAxis, opts: &SweepOptions) -> Result<SweepResult> {
    let configs = axis_configs(grid, axis, &opts.base)?;
    log::info!("sweep {axis}: {} configurations", configs.len());
    let mut result = evaluate_configs(manifest, &configs, opts, axis == SweepAxis::IorCompare)?;
    result.metadata.axis = Some(axis);
    result.metadata.grid = Some(grid.clone());
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dtw_scale_resolves_per_grid() {
        assert_eq!(DtwScale::GridPercent.factor(225), 2.25);
        assert_eq!(DtwScale::GridPercent.factor(512), 5.12);
        assert_eq!(DtwScale::Factor(1.0).factor(512), 1.0);
        assert_eq!(serde_json::to_string(&DtwScale::Factor(2.0)).unwrap(), r#"{"factor":2.0}"#);
    }

    #[test]
    fn default_grid_matches_studied_values() {
        let g = SweepGrid::default();
        g.validate().unwrap();
        assert_eq!(g.image_sides, [128, 225, 512]);
        assert_eq!(g.widths_for_aspect_study, [128, 225, 512]);
        assert_eq!(g.fixation_counts, [5, 6, 7, 8, 9, 10]);
    }

    #[test]
    fn grid_validation() {
        let mut g = SweepGrid::default();
        g.gammas.clear();
        assert!(g.validate().is_err());
        let g = SweepGrid {
            radii: vec![1.0],
            ..SweepGrid::default()
        };
        assert!(g.validate().is_err());
        let g = SweepGrid {
            image_sides: vec![4],
            ..SweepGrid::default()
        };
        assert!(g.validate().is_err());
    }

    #[test]
    fn gamma_axis_cardinality() {
        let g = SweepGrid {
            gammas: vec![0.1, 0.5, 0.9],
            ..SweepGrid::default()
        };
        let c = axis_configs(&g, SweepAxis::Gamma, &RolloutConfig::default()).unwrap();
        let ids: Vec<_> = c.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["gamma=0.1", "gamma=0.5", "gamma=0.9"]);
    }

    #[test]
    fn size_and_aspect_resolutions() {
        let g = SweepGrid::default();
        let base = RolloutConfig::default();
        let size: Vec<_> = axis_configs(&g, SweepAxis::Size, &base)
            .unwrap()
            .iter()
            .map(|p| (p.width, p.height))
            .collect();
        assert_eq!(size, [(128, 128), (225, 225), (512, 512)]);
        let aspect: Vec<_> = axis_configs(&g, SweepAxis::Aspect, &base)
            .unwrap()
            .iter()
            .map(|p| (p.width, p.height))
            .collect();
        assert_eq!(aspect, [(128, 225), (225, 225), (512, 225)]);
    }

    #[test]
    fn non_axis_parameters_stay_at_base() {
        let g = SweepGrid::default();
        let base = RolloutConfig::default();
        for axis in SweepAxis::ALL {
            for p in axis_configs(&g, axis, &base).unwrap() {
                let r = p.rollout;
                let changed = [
                    r.image_side != base.image_side || (p.width, p.height) != (225, 225),
                    r.gamma != base.gamma,
                    r.mask_radius_frac != base.mask_radius_frac,
                    r.n_fixations != base.n_fixations,
                    r.decay != base.decay,
                ];
                let allowed = match axis {
                    SweepAxis::Size | SweepAxis::Aspect => 0,
                    SweepAxis::Gamma => 1,
                    SweepAxis::Radius => 2,
                    SweepAxis::NFixations => 3,
                    SweepAxis::IorCompare => 4,
                };
                for (k, c) in changed.iter().enumerate() {
                    assert!(!c || k == allowed, "{axis}: {} changes parameter {k}", p.id);
                }
            }
        }
    }

    #[test]
    fn duplicate_grid_values_are_rejected() {
        let g = SweepGrid {
            fixation_counts: vec![5, 5],
            ..SweepGrid::default()
        };
        assert!(matches!(
            axis_configs(&g, SweepAxis::NFixations, &RolloutConfig::default()),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn axis_names_round_trip() {
        for a in SweepAxis::ALL {
            assert_eq!(a.as_str().parse::<SweepAxis>().unwrap(), a);
            let json = serde_json::to_string(&a).unwrap();
            assert_eq!(json, format!("\"{}\"", a.as_str()));
        }
        assert!("depth".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn viewer_reduction() {
        assert_eq!(ViewerReduction::Mean.apply(&[1.0, 3.0]), 2.0);
        assert_eq!(ViewerReduction::Min.apply(&[1.0, 3.0]), 1.0);
    }
}
