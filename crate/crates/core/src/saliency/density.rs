//! Density-map files.
//!
//! Text format: the first line is `width height`, followed by `height`
//! lines of `width` whitespace-separated decimal values. Values are written
//! with the shortest representation that round-trips, so save/load is
//! lossless.
//!
//! Image format: a single-channel 16-bit grayscale PNG whose samples are
//! divided by 65535 on load.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::resize::resize_map;
use crate::error::{Error, Result};
use crate::types::SaliencyMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityFormat {
    Text,
    Png16,
}

impl DensityFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("png") => DensityFormat::Png16,
            _ => DensityFormat::Text,
        }
    }
}

/// Parses the text grid format. `path` is only used in error messages.
pub fn parse_density_text(text: &str, path: &Path) -> Result<SaliencyMap> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `width height` header".into()))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let [w, h] = dims.as_slice() else {
        return Err(parse_err(hline, format!("expected `width height`, got `{header}`")));
    };
    let width: usize = w
        .parse()
        .map_err(|_| parse_err(hline, format!("bad width `{w}`")))?;
    let height: usize = h
        .parse()
        .map_err(|_| parse_err(hline, format!("bad height `{h}`")))?;
    if width == 0 || height == 0 {
        return Err(parse_err(hline, "width and height must be positive".into()));
    }

    let mut values = Vec::with_capacity(width * height);
    for row in 0..height {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| parse_err(hline + row + 1, format!("expected {height} rows, found {row}")))?;
        let mut count = 0;
        for (col, tok) in line.split_whitespace().enumerate() {
            let v: f64 = tok.parse().map_err(|_| {
                parse_err(lineno, format!("row {row}, column {col}: `{tok}` is not a number"))
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidSaliencyValue { row, col, value: v });
            }
            values.push(v);
            count += 1;
        }
        if count != width {
            return Err(parse_err(lineno, format!("row {row} has {count} values, expected {width}")));
        }
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(parse_err(lineno, format!("more than {height} rows")));
    }
    SaliencyMap::new(width, height, values)
}

fn read_png16(path: &Path) -> Result<SaliencyMap> {
    let img = image::open(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })?;
    let gray = img.to_luma16();
    let values = gray.pixels().map(|p| p.0[0] as f64 / 65535.0).collect();
    SaliencyMap::new(gray.width() as usize, gray.height() as usize, values)
}

/// Loads a density map and checks it against `expected` dimensions
/// `(width, height)`. A mismatch is an error unless `allow_resize` is set,
/// in which case the map is bilinearly resized.
pub fn load_density_map(
    path: impl AsRef<Path>,
    expected: Option<(usize, usize)>,
    allow_resize: bool,
) -> Result<SaliencyMap> {
    let path = path.as_ref();
    let map = match DensityFormat::from_path(path) {
        DensityFormat::Png16 => read_png16(path)?,
        DensityFormat::Text => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            parse_density_text(&text, path)?
        }
    };
    match expected {
        Some((w, h)) if (w, h) != (map.width(), map.height()) => {
            if allow_resize {
                resize_map(&map, w, h)
            } else {
                Err(Error::DimensionMismatch {
                    found_w: map.width(),
                    found_h: map.height(),
                    expected_w: w,
                    expected_h: h,
                })
            }
        }
        _ => Ok(map),
    }
}

pub fn density_to_text(map: &SaliencyMap) -> String {
    let mut out = format!("{} {}\n", map.width(), map.height());
    for row in map.values().chunks(map.width()) {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Writes `map` in the format implied by the extension. PNG output is scaled
/// so the maximum maps to 65535 and is therefore lossy.
pub fn save_density_map(map: &SaliencyMap, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    match DensityFormat::from_path(path) {
        DensityFormat::Text => fs::write(path, density_to_text(map)).map_err(|e| Error::io(path, e)),
        DensityFormat::Png16 => {
            let max = map.max();
            let data: Vec<u16> = map
                .values()
                .iter()
                .map(|v| (v / max * 65535.0).round() as u16)
                .collect();
            let img = image::ImageBuffer::<image::Luma<u16>, _>::from_raw(
                map.width() as u32,
                map.height() as u32,
                data,
            )
            .expect("buffer size matches dimensions");
            img.save_with_format(path, image::ImageFormat::Png)
                .map_err(|source| Error::Image {
                    path: path.to_path_buf(),
                    source,
                })
        }
    }
}
