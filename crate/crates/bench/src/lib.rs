//! Deterministic inputs shared by the benchmarks.

use scanpath_core::{GuiImage, SaliencyMap, Scanpath};

/// A scanpath of `n` points on a Lissajous curve, shifted by `phase`.
pub fn lissajous(n: usize, phase: f64) -> Scanpath {
    let points: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = k as f64 / n as f64 * std::f64::consts::TAU;
            (0.5 + 0.45 * (3.0 * t + phase).sin(), 0.5 + 0.45 * (2.0 * t).cos())
        })
        .collect();
    Scanpath::from_points(&points).expect("points lie in the unit square")
}

/// A square GUI-like image: grey page, dark header bar, and a few blocks.
pub fn gui_image(side: usize) -> GuiImage {
    let mut img = GuiImage::filled(side, side, [235, 235, 235]).expect("side >= 8");
    img.fill_rect(0, 0, side, side / 10, [40, 40, 60]);
    for k in 0..4 {
        let x = side / 8 + k * side / 5;
        let y = side / 4 + (k % 2) * side / 3;
        img.fill_rect(x, y, x + side / 8, y + side / 6, [200 - 40 * k as u8, 60 + 30 * k as u8, 90]);
    }
    img
}

/// A smooth two-peak density map with a faint ripple so ties are rare.
pub fn density_map(side: usize) -> SaliencyMap {
    let s = side as f64;
    let values = (0..side * side)
        .map(|i| {
            let (r, c) = ((i / side) as f64 / s, (i % side) as f64 / s);
            let peak = |cr: f64, cc: f64, w: f64| (-((r - cr).powi(2) + (c - cc).powi(2)) / w).exp();
            0.05 + peak(0.3, 0.7, 0.02) + 0.6 * peak(0.7, 0.25, 0.05) + 0.01 * (17.0 * r + 23.0 * c).sin().abs()
        })
        .collect();
    SaliencyMap::new(side, side, values).expect("finite non-negative values")
}
