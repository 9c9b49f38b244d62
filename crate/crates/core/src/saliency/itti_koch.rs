//! Bottom-up saliency after the classic Itti-Koch-Niebur architecture.
//!
//! Pipeline:
//! 1. Intensity `I = (r + g + b) / 3` and broadly tuned color channels
//!    `R, G, B, Y` (hue normalized by intensity where `I > 0.1 max I`).
//! 2. Gaussian pyramids (5-tap binomial blur, then a center-aligned bilinear
//!    2:1 decimation) of up to `levels` scales.
//! 3. Feature maps: `|X(c) - X(s)|` for `c` in `centers`, `s = c + δ`,
//!    with the surround upsampled to the center scale. Channels are
//!    intensity, `R - G`, `B - Y` and four Gabor orientations.
//! 4. Each feature map passes through the normalization operator `N`,
//!    which rescales to `[0, 1]` and multiplies by `(1 - m̄)²` where `m̄` is
//!    the mean of the non-global local maxima.
//! 5. Maps are added across scales at `output_level` (1/16 resolution by
//!    default), normalized into conspicuity maps, averaged, upsampled to the
//!    input size and min-max normalized to `[0, 1]`.
//!
//! Every filter is symmetric under 180° rotation and borders replicate the
//! edge pixel, so rotating the input rotates the map.

use serde::{Deserialize, Serialize};

use super::resize::resize_plane;
use super::{GuiImage, Plane};
use crate::error::Result;
use crate::types::SaliencyMap;

/// Binomial pyramid blur.
const BLUR_TAPS: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];

/// Local maxima below this fraction of the map maximum are ignored by `N`.
const LOCAL_MAX_THRESHOLD: f64 = 0.1;

/// Neighbours closer than this count as equal when finding local maxima, so
/// rounding noise on flat plateaus does not change which points qualify.
const PLATEAU_TOLERANCE: f64 = 1e-9;

/// Orientation channels in degrees.
pub const ORIENTATIONS: [u32; 4] = [0, 45, 90, 135];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IttiKochParams {
    pub levels: usize,
    pub centers: Vec<usize>,
    pub deltas: Vec<usize>,
    /// Pyramid level at which feature maps are combined.
    pub output_level: usize,
    pub gabor: GaborKernel,
}

impl Default for IttiKochParams {
    fn default() -> Self {
        Self {
            levels: 9,
            centers: vec![2, 3, 4],
            deltas: vec![3, 4],
            output_level: 4,
            gabor: GaborKernel::default(),
        }
    }
}

/// Even (cosine) Gabor filter with an isotropic Gaussian envelope.
///
/// With an isotropic envelope each orientation is an exact sum of separable
/// terms: `cos(a(x ± y)) = cos(ax)cos(ay) ∓ sin(ax)sin(ay)`. The DC response
/// is removed by subtracting a scaled Gaussian, which is separable too.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaborKernel {
    pub half_width: usize,
    pub sigma: f64,
    pub wavelength: f64,
}

impl Default for GaborKernel {
    fn default() -> Self {
        Self {
            half_width: 4,
            sigma: 2.0,
            wavelength: 4.0,
        }
    }
}

/// One separable term: `weight * (row_taps ⊗ col_taps)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableTerm {
    pub weight: f64,
    pub row_taps: Vec<f64>,
    pub col_taps: Vec<f64>,
}

impl GaborKernel {
    fn offsets(&self) -> impl Iterator<Item = f64> {
        let h = self.half_width as i64;
        (-h..=h).map(|k| k as f64)
    }

    pub fn envelope(&self) -> Vec<f64> {
        let s2 = 2.0 * self.sigma * self.sigma;
        self.offsets().map(|x| (-x * x / s2).exp()).collect()
    }

    fn modulated(&self, freq: f64, f: fn(f64) -> f64) -> Vec<f64> {
        self.envelope()
            .iter()
            .zip(self.offsets())
            .map(|(g, x)| g * f(freq * x))
            .collect()
    }

    /// Separable decomposition of the zero-mean kernel for `degrees`
    /// (one of 0, 45, 90, 135). Row taps run along x, column taps along y.
    pub fn terms(&self, degrees: u32) -> Vec<SeparableTerm> {
        let omega = 2.0 * std::f64::consts::PI / self.wavelength;
        let g = self.envelope();
        let norm: f64 = g.iter().sum::<f64>().powi(2);
        let mut terms = match degrees {
            0 => vec![(1.0, self.modulated(omega, f64::cos), g.clone())],
            90 => vec![(1.0, g.clone(), self.modulated(omega, f64::cos))],
            45 | 135 => {
                let a = omega / std::f64::consts::SQRT_2;
                let c = self.modulated(a, f64::cos);
                let s = self.modulated(a, f64::sin);
                // 45°: cos(a(x + y)); 135°: cos(a(x - y)).
                let sign = if degrees == 45 { -1.0 } else { 1.0 };
                vec![(1.0, c.clone(), c), (sign, s.clone(), s)]
            }
            other => panic!("unsupported orientation {other}"),
        };
        let dc: f64 = terms
            .iter()
            .map(|(w, r, c)| w * r.iter().sum::<f64>() * c.iter().sum::<f64>())
            .sum();
        terms.push((-dc / norm, g.clone(), g));
        terms
            .into_iter()
            .map(|(w, r, c)| SeparableTerm {
                weight: w / norm,
                row_taps: r,
                col_taps: c,
            })
            .collect()
    }

    fn apply(&self, p: &Plane, degrees: u32) -> Plane {
        let mut out = Plane::zeros(p.width, p.height);
        for t in self.terms(degrees) {
            let mut part = p.convolve_separable(&t.row_taps, &t.col_taps);
            part.scale(t.weight);
            out.add_assign(&part);
        }
        out.data.iter_mut().for_each(|v| *v = v.abs());
        out
    }
}

fn pyramid(base: Plane, max_levels: usize) -> Vec<Plane> {
    let mut levels = vec![base];
    while levels.len() < max_levels {
        let last = levels.last().unwrap();
        if last.width == 1 && last.height == 1 {
            break;
        }
        let blurred = last.convolve_separable(&BLUR_TAPS, &BLUR_TAPS);
        let next = resize_plane(&blurred, last.width.div_ceil(2), last.height.div_ceil(2));
        levels.push(next);
    }
    levels
}

/// Center/surround scale pairs that fit a pyramid of `depth` levels.
fn scale_pairs(params: &IttiKochParams, depth: usize) -> Vec<(usize, usize)> {
    let pairs: Vec<_> = params
        .centers
        .iter()
        .flat_map(|&c| params.deltas.iter().map(move |&d| (c, c + d)))
        .filter(|&(_, s)| s < depth)
        .collect();
    if !pairs.is_empty() {
        return pairs;
    }
    // Small inputs: fall back to the finest scales available.
    let mut fallback = Vec::new();
    for c in 0..depth.saturating_sub(1).min(3) {
        for s in c + 1..(c + 3).min(depth) {
            fallback.push((c, s));
        }
    }
    fallback
}

fn center_surround(center: &Plane, surround: &Plane) -> Plane {
    let up = resize_plane(surround, center.width, center.height);
    center.zip_map(&up, |a, b| (a - b).abs())
}

/// The map normalization operator `N`.
fn normalize_map(p: &Plane) -> Plane {
    let max = p.max();
    if !(max > 0.0) {
        return Plane::zeros(p.width, p.height);
    }
    let mut out = p.clone();
    out.data.iter_mut().for_each(|v| *v /= max);

    let (w, h) = (out.width as isize, out.height as isize);
    let mut maxima = Vec::new();
    for r in 0..h {
        for c in 0..w {
            let v = out.data[(r * w + c) as usize];
            if v < LOCAL_MAX_THRESHOLD || v >= 1.0 - 1e-9 {
                continue;
            }
            let mut is_max = true;
            'nb: for dr in -1..=1 {
                for dc in -1..=1 {
                    let (rr, cc) = (r + dr, c + dc);
                    if (dr, dc) == (0, 0) || rr < 0 || cc < 0 || rr >= h || cc >= w {
                        continue;
                    }
                    if out.data[(rr * w + cc) as usize] > v + PLATEAU_TOLERANCE {
                        is_max = false;
                        break 'nb;
                    }
                }
            }
            if is_max {
                maxima.push(v);
            }
        }
    }
    // Sorted so the sum does not depend on scan order.
    maxima.sort_by(f64::total_cmp);
    let mean = if maxima.is_empty() { 0.0 } else { maxima.iter().sum::<f64>() / maxima.len() as f64 };
    out.scale((1.0 - mean).powi(2));
    out
}

struct Channels {
    intensity: Vec<Plane>,
    red_green: Vec<Plane>,
    blue_yellow: Vec<Plane>,
}

fn channels(img: &GuiImage, levels: usize) -> Channels {
    let n = img.width() * img.height();
    let mut intensity = Vec::with_capacity(n);
    let mut rgb = Vec::with_capacity(n);
    for p in img.pixels() {
        let [r, g, b] = p.map(|v| v as f64 / 255.0);
        intensity.push((r + g + b) / 3.0);
        rgb.push((r, g, b));
    }
    let i_max = intensity.iter().copied().fold(0.0, f64::max);
    let mut rg = Vec::with_capacity(n);
    let mut by = Vec::with_capacity(n);
    for (&i, &(r, g, b)) in intensity.iter().zip(&rgb) {
        let (r, g, b) = if i > 0.1 * i_max && i > 0.0 {
            (r / i, g / i, b / i)
        } else {
            (0.0, 0.0, 0.0)
        };
        let red = (r - (g + b) / 2.0).max(0.0);
        let green = (g - (r + b) / 2.0).max(0.0);
        let blue = (b - (r + g) / 2.0).max(0.0);
        let yellow = ((r + g) / 2.0 - (r - g).abs() / 2.0 - b).max(0.0);
        rg.push(red - green);
        by.push(blue - yellow);
    }
    let (w, h) = (img.width(), img.height());
    Channels {
        intensity: pyramid(Plane::new(w, h, intensity), levels),
        red_green: pyramid(Plane::new(w, h, rg), levels),
        blue_yellow: pyramid(Plane::new(w, h, by), levels),
    }
}

fn across_scale_sum(
    maps: impl IntoIterator<Item = Plane>,
    out_w: usize,
    out_h: usize,
) -> Plane {
    let mut acc = Plane::zeros(out_w, out_h);
    for m in maps {
        acc.add_assign(&resize_plane(&normalize_map(&m), out_w, out_h));
    }
    acc
}

/// Itti-Koch saliency with default parameters.
pub fn itti_koch_saliency(img: &GuiImage) -> Result<SaliencyMap> {
    itti_koch_saliency_with(img, &IttiKochParams::default())
}

pub fn itti_koch_saliency_with(img: &GuiImage, params: &IttiKochParams) -> Result<SaliencyMap> {
    let ch = channels(img, params.levels.max(2));
    let depth = ch.intensity.len();
    let pairs = scale_pairs(params, depth);
    let out_level = params.output_level.min(depth - 1);
    let (ow, oh) = (ch.intensity[out_level].width, ch.intensity[out_level].height);

    let intensity = across_scale_sum(
        pairs
            .iter()
            .map(|&(c, s)| center_surround(&ch.intensity[c], &ch.intensity[s])),
        ow,
        oh,
    );
    let color = across_scale_sum(
        pairs.iter().flat_map(|&(c, s)| {
            [
                center_surround(&ch.red_green[c], &ch.red_green[s]),
                center_surround(&ch.blue_yellow[c], &ch.blue_yellow[s]),
            ]
        }),
        ow,
        oh,
    );

    let mut orientation = Plane::zeros(ow, oh);
    let levels_needed = pairs.iter().map(|&(_, s)| s).max().unwrap_or(0) + 1;
    for deg in ORIENTATIONS {
        let responses: Vec<Plane> = ch.intensity[..levels_needed]
            .iter()
            .map(|p| params.gabor.apply(p, deg))
            .collect();
        let per_angle = across_scale_sum(
            pairs
                .iter()
                .map(|&(c, s)| center_surround(&responses[c], &responses[s])),
            ow,
            oh,
        );
        orientation.add_assign(&normalize_map(&per_angle));
    }

    let mut combined = normalize_map(&intensity);
    combined.add_assign(&normalize_map(&color));
    combined.add_assign(&normalize_map(&orientation));
    combined.scale(1.0 / 3.0);

    let full = resize_plane(&combined, img.width(), img.height());
    let (lo, hi) = (full.min(), full.max());
    let values = if hi - lo > 1e-12 * hi.abs().max(1.0) {
        full.data.iter().map(|v| ((v - lo) / (hi - lo)).clamp(0.0, 1.0)).collect()
    } else {
        vec![1.0; full.data.len()]
    };
    SaliencyMap::new(img.width(), img.height(), values)
}
