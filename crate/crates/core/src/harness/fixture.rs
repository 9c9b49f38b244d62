//! Bundled synthetic dataset: geometric GUI mock-ups with element boxes,
//! flat density maps and synthetic viewer scanpaths.
//!
//! Generation is seeded, so the same files come out on every run.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::manifest::{DatasetManifest, ManifestEntry, Partition};
use crate::error::{Error, Result};
use crate::saliency::{save_density_map, GuiImage};
use crate::types::{validate_scanpath, ElementBox, ElementCategory, GuiType, ImageDims, RawFixation, SaliencyMap};

pub const FIXTURE_SEED: u64 = 0x5CA9_9A7A;
pub const IMAGES_PER_TYPE: usize = 3;
pub const VIEWERS_PER_IMAGE: usize = 2;
pub const FIXATIONS_PER_VIEWER: usize = 8;
const DENSITY_SIDE: usize = 16;

fn canvas(gui: GuiType) -> (usize, usize) {
    match gui {
        GuiType::Poster => (240, 320),
        GuiType::Desktop => (320, 200),
        GuiType::Mobile => (180, 320),
        GuiType::Web => (320, 240),
    }
}

struct Layout {
    image: GuiImage,
    boxes: Vec<ElementBox>,
}

fn draw_layout(id: &str, gui: GuiType, rng: &mut ChaCha8Rng) -> Result<Layout> {
    let (w, h) = canvas(gui);
    let shade = rng.gen_range(225..=250);
    let mut image = GuiImage::filled(w, h, [shade, shade, shade])?;
    let mut boxes = Vec::new();

    // Header bar across the top.
    let header_h = h / 10;
    image.fill_rect(0, 0, w, header_h, [40, 40, 60]);
    boxes.push(ElementBox::new(0.0, 0.0, 1.0, header_h as f64 / h as f64, ElementCategory::Text, format!("{id}_header"))?);

    // Remaining elements go into distinct cells of a 3x3 grid below it.
    let mut cells: Vec<(usize, usize)> = (0..3).flat_map(|r| (0..3).map(move |c| (r, c))).collect();
    cells.shuffle(rng);
    let mut kinds = vec![ElementCategory::Face, ElementCategory::Image, ElementCategory::Text, ElementCategory::Text];
    if rng.gen_bool(0.5) {
        kinds.push(ElementCategory::Image);
    }
    let (cw, ch) = (w / 3, (h - header_h) / 3);
    for (k, (cat, (r, c))) in kinds.iter().zip(cells).enumerate() {
        let margin_x = rng.gen_range(cw / 10..cw / 4);
        let margin_y = rng.gen_range(ch / 10..ch / 4);
        let x0 = c * cw + margin_x;
        let y0 = header_h + r * ch + margin_y;
        let x1 = (c + 1) * cw - margin_x / 2;
        let y1 = header_h + (r + 1) * ch - margin_y / 2;
        match cat {
            ElementCategory::Text => {
                // Stripes of dark "text lines".
                let mut y = y0;
                while y + 3 <= y1 {
                    image.fill_rect(x0, y, x1, y + 3, [30, 30, 30]);
                    y += 7;
                }
            }
            ElementCategory::Image => {
                let rgb = [rng.gen_range(0..=255), rng.gen_range(0..=255), rng.gen_range(0..=255)];
                image.fill_rect(x0, y0, x1, y1, rgb);
            }
            ElementCategory::Face => {
                image.fill_rect(x0, y0, x1, y1, [224, 172, 105]);
                let (fw, fh) = (x1 - x0, y1 - y0);
                let eye_y = y0 + fh / 3;
                image.fill_rect(x0 + fw / 4, eye_y, x0 + fw / 4 + 3, eye_y + 3, [20, 20, 20]);
                image.fill_rect(x1 - fw / 4 - 3, eye_y, x1 - fw / 4, eye_y + 3, [20, 20, 20]);
                image.fill_rect(x0 + fw / 3, y1 - fh / 4, x1 - fw / 3, y1 - fh / 4 + 2, [150, 40, 40]);
            }
        }
        boxes.push(ElementBox::new(
            x0 as f64 / w as f64,
            y0 as f64 / h as f64,
            x1 as f64 / w as f64,
            y1 as f64 / h as f64,
            *cat,
            format!("{id}_{}{k}", cat.as_str()),
        )?);
    }
    Ok(Layout { image, boxes })
}

fn attention_weight(cat: ElementCategory) -> f64 {
    match cat {
        ElementCategory::Face => 3.0,
        ElementCategory::Image => 2.0,
        ElementCategory::Text => 1.0,
    }
}

/// Viewer fixations in pixels. Viewer 0 overshoots the right edge once.
fn synth_viewer(boxes: &[ElementBox], w: usize, h: usize, viewer: usize, rng: &mut ChaCha8Rng) -> Vec<RawFixation> {
    let mut t = 0.0;
    let mut out = Vec::with_capacity(FIXATIONS_PER_VIEWER);
    for k in 0..FIXATIONS_PER_VIEWER {
        let (x, y) = if rng.gen_bool(0.1) {
            (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0))
        } else {
            let b = boxes
                .choose_weighted(rng, |b| attention_weight(b.category))
                .expect("fixture layouts have boxes");
            (rng.gen_range(b.x0..b.x1), rng.gen_range(b.y0..b.y1))
        };
        let duration = rng.gen_range(150.0..350.0f64).round();
        let (mut x_px, y_px) = ((x * w as f64).round(), (y * h as f64).round());
        if viewer == 0 && k == FIXATIONS_PER_VIEWER / 2 {
            x_px = w as f64 + 3.0;
        }
        out.push(RawFixation {
            x_px,
            y_px,
            t_ms: Some(t),
            duration_ms: Some(duration),
        });
        t += duration + rng.gen_range(20.0..60.0f64).round();
    }
    out
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes the synthetic dataset under `dir` and returns the manifest path.
///
/// Three images per GUI type, each with two viewers of eight fixations.
/// The first image of each type is in the train partition.
pub fn generate_fixture(dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    for sub in ["images", "scanpaths", "boxes", "maps"] {
        let p = dir.join(sub);
        fs::create_dir_all(&p).map_err(|e| Error::io(&p, e))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(FIXTURE_SEED);
    let mut entries = Vec::new();
    let flat = SaliencyMap::uniform(DENSITY_SIDE, DENSITY_SIDE, 1.0)?;
    for gui in GuiType::ALL {
        for k in 0..IMAGES_PER_TYPE {
            let id = format!("{}_{:02}", gui.as_str(), k + 1);
            let layout = draw_layout(&id, gui, &mut rng)?;
            let (w, h) = (layout.image.width(), layout.image.height());
            let dims = ImageDims::new(w, h)?;

            let image_rel = PathBuf::from(format!("images/{id}.png"));
            layout.image.save_png(dir.join(&image_rel))?;

            let box_rel = PathBuf::from(format!("boxes/{id}.json"));
            let json = serde_json::to_string_pretty(&layout.boxes).expect("boxes serialize") + "\n";
            write_file(&dir.join(&box_rel), json)?;

            let map_rel = PathBuf::from(format!("maps/{id}.txt"));
            save_density_map(&flat, dir.join(&map_rel))?;

            let mut raw = Vec::new();
            for v in 0..VIEWERS_PER_IMAGE {
                let fx = synth_viewer(&layout.boxes, w, h, v, &mut rng);
                validate_scanpath(&fx, dims)?;
                raw.push(fx);
            }
            let sp_rel = PathBuf::from(format!("scanpaths/{id}.csv"));
            write_raw_scanpaths(&dir.join(&sp_rel), &raw)?;

            entries.push(ManifestEntry {
                image_id: id,
                image_path: image_rel,
                gui_type: gui,
                scanpath_paths: vec![sp_rel],
                element_box_path: Some(box_rel),
                density_map_path: Some(map_rel),
                partition: if k == 0 { Partition::Train } else { Partition::Test },
                screen_width: Some(w),
                screen_height: Some(h),
            });
        }
    }
    let manifest = DatasetManifest {
        max_fixations: None,
        entries,
    };
    let path = dir.join("manifest.json");
    write_file(&path, serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n")?;
    Ok(path)
}

/// Writes raw pixel values so the overshoot survives into the files.
fn write_raw_scanpaths(path: &Path, viewers: &[Vec<RawFixation>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    w.write_record(["viewer_id", "idx", "x_px", "y_px", "t_ms", "duration_ms"])
        .map_err(csv_err)?;
    for (v, fx) in viewers.iter().enumerate() {
        for (idx, f) in fx.iter().enumerate() {
            w.write_record([
                format!("v{v}"),
                idx.to_string(),
                f.x_px.to_string(),
                f.y_px.to_string(),
                f.t_ms.map(|t| t.to_string()).unwrap_or_default(),
                f.duration_ms.map(|t| t.to_string()).unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    write_file(path, bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::manifest::load_manifest;

    #[test]
    fn fixture_loads_and_is_deterministic() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let ma = generate_fixture(a.path()).unwrap();
        let mb = generate_fixture(b.path()).unwrap();
        let manifest = load_manifest(&ma).unwrap();
        assert_eq!(manifest.entries.len(), 12);
        for t in GuiType::ALL {
            assert_eq!(manifest.entries.iter().filter(|e| e.gui_type == t).count(), 3);
        }
        for rel in ["manifest.json", "scanpaths/web_02.csv", "boxes/poster_01.json", "images/mobile_03.png"] {
            assert_eq!(fs::read(a.path().join(rel)).unwrap(), fs::read(b.path().join(rel)).unwrap(), "{rel}");
        }
        assert_eq!(fs::read(ma).unwrap(), fs::read(mb).unwrap());
    }

    #[test]
    fn every_image_has_clamped_overshoot_and_all_categories() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = load_manifest(generate_fixture(dir.path()).unwrap()).unwrap();
        for e in &manifest.entries {
            let (sps, clamped) = e.load_scanpaths(None).unwrap();
            assert_eq!(sps.len(), VIEWERS_PER_IMAGE);
            assert!(sps.iter().all(|s| s.len() == FIXATIONS_PER_VIEWER));
            assert_eq!(clamped, 1, "{}", e.image_id);
            let boxes = e.load_boxes().unwrap().unwrap();
            for cat in ElementCategory::ALL {
                assert!(boxes.iter().any(|b| b.category == cat));
            }
        }
    }
}
