//! Domain types shared across the crate.
//!
//! All positions are held in normalized `[0, 1]²` coordinates. Pixel
//! coordinates only appear at I/O boundaries, see [`validate_scanpath`] and
//! [`ImageDims`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { field, value })
    }
}

fn check_unit(field: &'static str, value: f64) -> Result<()> {
    check_finite(field, value)?;
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            field,
            value,
            expected: "[0, 1]",
        })
    }
}

fn check_non_negative(field: &'static str, value: Option<f64>) -> Result<()> {
    if let Some(v) = value {
        check_finite(field, v)?;
        if v < 0.0 {
            return Err(Error::OutOfRange {
                field,
                value: v,
                expected: "[0, inf)",
            });
        }
    }
    Ok(())
}

/// A single gaze point in normalized image coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FixationRepr")]
pub struct Fixation {
    x: f64,
    y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    duration_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_ms: Option<f64>,
}

#[derive(Deserialize)]
struct FixationRepr {
    x: f64,
    y: f64,
    #[serde(default)]
    duration_ms: Option<f64>,
    #[serde(default)]
    t_ms: Option<f64>,
}

impl TryFrom<FixationRepr> for Fixation {
    type Error = Error;

    fn try_from(r: FixationRepr) -> Result<Self> {
        Fixation::with_timing(r.x, r.y, r.duration_ms, r.t_ms)
    }
}

impl Fixation {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        Self::with_timing(x, y, None, None)
    }

    pub fn with_timing(x: f64, y: f64, duration_ms: Option<f64>, t_ms: Option<f64>) -> Result<Self> {
        check_unit("x", x)?;
        check_unit("y", y)?;
        check_non_negative("duration_ms", duration_ms)?;
        check_non_negative("t_ms", t_ms)?;
        Ok(Self {
            x,
            y,
            duration_ms,
            t_ms,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn duration_ms(&self) -> Option<f64> {
        self.duration_ms
    }

    pub fn t_ms(&self) -> Option<f64> {
        self.t_ms
    }

    /// Euclidean distance in normalized units.
    pub fn distance(&self, other: &Fixation) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Ordered fixations recorded (or predicted) on one image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScanpathRepr")]
pub struct Scanpath {
    fixations: Vec<Fixation>,
    image_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    viewer_id: Option<String>,
}

#[derive(Deserialize)]
struct ScanpathRepr {
    fixations: Vec<Fixation>,
    image_id: String,
    #[serde(default)]
    viewer_id: Option<String>,
}

impl TryFrom<ScanpathRepr> for Scanpath {
    type Error = Error;

    fn try_from(r: ScanpathRepr) -> Result<Self> {
        Scanpath::new(r.fixations, r.image_id, r.viewer_id)
    }
}

impl Scanpath {
    pub fn new(
        fixations: Vec<Fixation>,
        image_id: impl Into<String>,
        viewer_id: Option<String>,
    ) -> Result<Self> {
        if fixations.is_empty() {
            return Err(Error::EmptyScanpath);
        }
        if fixations.iter().all(|f| f.t_ms.is_some()) {
            for (i, w) in fixations.windows(2).enumerate() {
                if w[1].t_ms < w[0].t_ms {
                    return Err(Error::NonMonotonicTime { index: i + 1 });
                }
            }
        }
        Ok(Self {
            fixations,
            image_id: image_id.into(),
            viewer_id,
        })
    }

    /// Builds an untimed scanpath from normalized `(x, y)` pairs.
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        let fixations = points
            .iter()
            .map(|&(x, y)| Fixation::new(x, y))
            .collect::<Result<Vec<_>>>()?;
        Self::new(fixations, "", None)
    }

    pub fn fixations(&self) -> &[Fixation] {
        &self.fixations
    }

    pub fn len(&self) -> usize {
        self.fixations.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.fixations.is_empty()
    }

    pub fn image_id(&self) -> &str {
        &self.image_id
    }

    pub fn viewer_id(&self) -> Option<&str> {
        self.viewer_id.as_deref()
    }

    pub fn with_ids(mut self, image_id: impl Into<String>, viewer_id: Option<String>) -> Self {
        self.image_id = image_id.into();
        self.viewer_id = viewer_id;
        self
    }

    /// Keeps only the first `n` fixations (no-op when shorter).
    pub fn truncated(mut self, n: usize) -> Self {
        self.fixations.truncate(n.max(1));
        self
    }
}

/// Pixel extent of the screen or image a set of raw records refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageDims {
    pub width: usize,
    pub height: usize,
}

impl ImageDims {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions {
                width,
                height,
                reason: "both sides must be positive",
            });
        }
        Ok(Self { width, height })
    }

    /// Pixel position to normalized coordinates, without clamping.
    pub fn normalize(&self, x_px: f64, y_px: f64) -> (f64, f64) {
        (x_px / self.width as f64, y_px / self.height as f64)
    }

    pub fn denormalize(&self, x: f64, y: f64) -> (f64, f64) {
        (x * self.width as f64, y * self.height as f64)
    }
}

impl fmt::Display for ImageDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl FromStr for ImageDims {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownVariant {
            kind: "dimensions (expected WxH)",
            value: s.to_string(),
        };
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let w = w.trim().parse().map_err(|_| bad())?;
        let h = h.trim().parse().map_err(|_| bad())?;
        ImageDims::new(w, h)
    }
}

/// A fixation as read from a recording, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawFixation {
    pub x_px: f64,
    pub y_px: f64,
    #[serde(default)]
    pub t_ms: Option<f64>,
    #[serde(default)]
    pub duration_ms: Option<f64>,
}

impl RawFixation {
    pub fn at(x_px: f64, y_px: f64) -> Self {
        Self {
            x_px,
            y_px,
            t_ms: None,
            duration_ms: None,
        }
    }
}

/// Result of [`validate_scanpath`]: the scanpath plus how many coordinates
/// had to be clamped into the image.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedScanpath {
    pub scanpath: Scanpath,
    pub clamped: usize,
}

/// Normalizes raw pixel records against `dims`.
///
/// Points that fall outside the image are clamped to the border and counted,
/// since trackers routinely overshoot the screen edge by a few pixels.
pub fn validate_scanpath(raw: &[RawFixation], dims: ImageDims) -> Result<ValidatedScanpath> {
    if raw.is_empty() {
        return Err(Error::EmptyScanpath);
    }
    let mut clamped = 0;
    let mut fixations = Vec::with_capacity(raw.len());
    for r in raw {
        check_finite("x_px", r.x_px)?;
        check_finite("y_px", r.y_px)?;
        let (x, y) = dims.normalize(r.x_px, r.y_px);
        let cx = x.clamp(0.0, 1.0);
        let cy = y.clamp(0.0, 1.0);
        if cx != x || cy != y {
            clamped += 1;
        }
        fixations.push(Fixation::with_timing(cx, cy, r.duration_ms, r.t_ms)?);
    }
    if clamped > 0 {
        log::debug!("clamped {clamped} out-of-bounds fixation(s) into {dims}");
    }
    Ok(ValidatedScanpath {
        scanpath: Scanpath::new(fixations, "", None)?,
        clamped,
    })
}

/// Row/column position of one cell in a saliency grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridCell {
    pub row: usize,
    pub col: usize,
}

impl GridCell {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn distance(&self, other: &GridCell) -> f64 {
        (self.row as f64 - other.row as f64).hypot(self.col as f64 - other.col as f64)
    }
}

/// Non-negative attention density over a `width × height` grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl SaliencyMap {
    /// Validates and wraps a row-major grid. All-zero grids are rejected.
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        let map = Self::with_zeros_allowed(width, height, values)?;
        if map.values.iter().all(|&v| v == 0.0) {
            return Err(Error::AllZeroMap);
        }
        Ok(map)
    }

    /// Like [`SaliencyMap::new`] but accepts an all-zero grid. Suppressed
    /// working copies produced by inhibition of return may be entirely zero.
    pub(crate) fn with_zeros_allowed(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions {
                width,
                height,
                reason: "both sides must be positive",
            });
        }
        if values.len() != width * height {
            return Err(Error::InvalidDimensions {
                width,
                height,
                reason: "value count does not match width*height",
            });
        }
        for (idx, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidSaliencyValue {
                    row: idx / width,
                    col: idx % width,
                    value,
                });
            }
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn uniform(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, cell: GridCell) -> f64 {
        self.values[cell.row * self.width + cell.col]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Largest cell; ties go to the smallest row, then the smallest column.
    pub fn argmax(&self) -> GridCell {
        self.argmax_where(|_| true)
            .expect("saliency map has at least one cell")
    }

    /// Largest cell among those accepted by `keep`, with the same tie-break
    /// as [`SaliencyMap::argmax`].
    pub fn argmax_where(&self, mut keep: impl FnMut(GridCell) -> bool) -> Option<GridCell> {
        let mut best: Option<(usize, f64)> = None;
        for (idx, &v) in self.values.iter().enumerate() {
            let cell = GridCell::new(idx / self.width, idx % self.width);
            if !keep(cell) {
                continue;
            }
            // Strict comparison keeps the first (row-major) cell on ties.
            if best.map_or(true, |(_, b)| v > b) {
                best = Some((idx, v));
            }
        }
        best.map(|(idx, _)| GridCell::new(idx / self.width, idx % self.width))
    }

    /// Normalized coordinates of the center of `cell`.
    pub fn cell_center(&self, cell: GridCell) -> (f64, f64) {
        (
            (cell.col as f64 + 0.5) / self.width as f64,
            (cell.row as f64 + 0.5) / self.height as f64,
        )
    }
}

/// Stimulus category of a screenshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GuiType {
    Poster,
    Desktop,
    Mobile,
    Web,
}

impl GuiType {
    pub const ALL: [GuiType; 4] = [GuiType::Poster, GuiType::Desktop, GuiType::Mobile, GuiType::Web];

    pub fn as_str(&self) -> &'static str {
        match self {
            GuiType::Poster => "poster",
            GuiType::Desktop => "desktop",
            GuiType::Mobile => "mobile",
            GuiType::Web => "web",
        }
    }
}

impl fmt::Display for GuiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GuiType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "poster" => Ok(GuiType::Poster),
            "desktop" => Ok(GuiType::Desktop),
            "mobile" => Ok(GuiType::Mobile),
            "web" | "webpage" => Ok(GuiType::Web),
            _ => Err(Error::UnknownVariant {
                kind: "GUI type",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementCategory {
    Image,
    Text,
    Face,
}

impl ElementCategory {
    pub const ALL: [ElementCategory; 3] = [ElementCategory::Image, ElementCategory::Text, ElementCategory::Face];

    pub fn as_str(&self) -> &'static str {
        match self {
            ElementCategory::Image => "image",
            ElementCategory::Text => "text",
            ElementCategory::Face => "face",
        }
    }
}

impl fmt::Display for ElementCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ElementCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "image" => Ok(ElementCategory::Image),
            "text" => Ok(ElementCategory::Text),
            "face" => Ok(ElementCategory::Face),
            _ => Err(Error::UnknownVariant {
                kind: "element category",
                value: s.to_string(),
            }),
        }
    }
}

/// Axis-aligned GUI element in normalized coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ElementBoxRepr")]
pub struct ElementBox {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub category: ElementCategory,
    pub element_id: String,
}

#[derive(Deserialize)]
struct ElementBoxRepr {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    category: ElementCategory,
    #[serde(default)]
    element_id: Option<String>,
}

impl TryFrom<ElementBoxRepr> for ElementBox {
    type Error = Error;

    fn try_from(r: ElementBoxRepr) -> Result<Self> {
        let id = r.element_id.unwrap_or_else(|| {
            format!("{}@{},{},{},{}", r.category, r.x0, r.y0, r.x1, r.y1)
        });
        ElementBox::new(r.x0, r.y0, r.x1, r.y1, r.category, id)
    }
}

impl ElementBox {
    pub fn new(
        x0: f64,
        y0: f64,
        x1: f64,
        y1: f64,
        category: ElementCategory,
        element_id: impl Into<String>,
    ) -> Result<Self> {
        let element_id = element_id.into();
        let coords = [x0, y0, x1, y1];
        if coords.iter().any(|v| !v.is_finite() || !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidBox {
                element_id,
                reason: "corners must lie in [0, 1]",
            });
        }
        if x0 >= x1 || y0 >= y1 {
            return Err(Error::InvalidBox {
                element_id,
                reason: "requires x0 < x1 and y0 < y1",
            });
        }
        Ok(Self {
            x0,
            y0,
            x1,
            y1,
            category,
            element_id,
        })
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    /// Edges are inclusive.
    pub fn contains(&self, f: &Fixation) -> bool {
        (self.x0..=self.x1).contains(&f.x()) && (self.y0..=self.y1).contains(&f.y())
    }
}

/// How the weight of an older fixation evolves as more fixations are
/// predicted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayKind {
    /// `1 - 0.1 (n - i - 1)`; turns negative once more than 12 fixations
    /// are predicted.
    BaselineLinear,
    /// `gamma^(n - i - 1)`.
    ExponentialGamma,
    /// Constant weight 1: every earlier fixation stays fully suppressed.
    Full,
}

impl DecayKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecayKind::BaselineLinear => "linear",
            DecayKind::ExponentialGamma => "gamma",
            DecayKind::Full => "full",
        }
    }
}

impl fmt::Display for DecayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecayKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "baseline" | "baseline_linear" => Ok(DecayKind::BaselineLinear),
            "gamma" | "exponential" | "exponential_gamma" => Ok(DecayKind::ExponentialGamma),
            "full" => Ok(DecayKind::Full),
            _ => Err(Error::UnknownVariant {
                kind: "decay kind",
                value: s.to_string(),
            }),
        }
    }
}

/// Parameters of one greedy scanpath rollout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RolloutConfigRepr")]
pub struct RolloutConfig {
    pub n_fixations: usize,
    pub decay: DecayKind,
    pub gamma: f64,
    pub mask_radius_frac: f64,
    pub image_side: usize,
}

#[derive(Deserialize)]
struct RolloutConfigRepr {
    n_fixations: usize,
    decay: DecayKind,
    gamma: f64,
    mask_radius_frac: f64,
    image_side: usize,
}

impl TryFrom<RolloutConfigRepr> for RolloutConfig {
    type Error = Error;

    fn try_from(r: RolloutConfigRepr) -> Result<Self> {
        RolloutConfig::new(r.n_fixations, r.decay, r.gamma, r.mask_radius_frac, r.image_side)
    }
}

impl Default for RolloutConfig {
    fn default() -> Self {
        Self {
            n_fixations: 10,
            decay: DecayKind::ExponentialGamma,
            gamma: 0.1,
            mask_radius_frac: 0.1,
            image_side: 225,
        }
    }
}

impl RolloutConfig {
    pub fn new(
        n_fixations: usize,
        decay: DecayKind,
        gamma: f64,
        mask_radius_frac: f64,
        image_side: usize,
    ) -> Result<Self> {
        let cfg = Self {
            n_fixations,
            decay,
            gamma,
            mask_radius_frac,
            image_side,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_fixations == 0 {
            return Err(Error::OutOfRange {
                field: "n_fixations",
                value: 0.0,
                expected: "[1, inf)",
            });
        }
        if self.image_side == 0 {
            return Err(Error::OutOfRange {
                field: "image_side",
                value: 0.0,
                expected: "[1, inf)",
            });
        }
        for (field, value) in [("gamma", self.gamma), ("mask_radius_frac", self.mask_radius_frac)] {
            check_finite(field, value)?;
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::OutOfRange {
                    field,
                    value,
                    expected: "(0, 1)",
                });
            }
        }
        Ok(())
    }

    /// Masking radius in grid cells.
    pub fn radius_px(&self) -> f64 {
        self.mask_radius_frac * self.image_side as f64
    }
}
