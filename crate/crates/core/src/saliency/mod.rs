//! Saliency sources: the built-in Itti-Koch backend and precomputed density
//! maps exported by external models.

mod density;
mod itti_koch;
mod plane;
mod resize;

use std::path::Path;

pub use density::{density_to_text, load_density_map, parse_density_text, save_density_map, DensityFormat};
pub use itti_koch::{itti_koch_saliency, itti_koch_saliency_with, GaborKernel, IttiKochParams};
pub use resize::{resize, resize_map, sample_bilinear};

pub(crate) use plane::Plane;

use crate::error::{Error, Result};

/// Smallest side accepted for a screenshot.
pub const MIN_IMAGE_SIDE: usize = 8;

/// An 8-bit RGB screenshot, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuiImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl GuiImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width < MIN_IMAGE_SIDE || height < MIN_IMAGE_SIDE {
            return Err(Error::InvalidDimensions {
                width,
                height,
                reason: "GUI images must be at least 8x8",
            });
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidDimensions {
                width,
                height,
                reason: "pixel count does not match width*height",
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        Self::new(width, height, vec![rgb; width * height])
    }

    /// Decodes a PNG or JPEG file.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let img = image::open(path).map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_rgb_image(&img.to_rgb8())
    }

    pub fn from_rgb_image(img: &image::RgbImage) -> Result<Self> {
        let pixels = img.pixels().map(|p| p.0).collect();
        Self::new(img.width() as usize, img.height() as usize, pixels)
    }

    pub fn to_rgb_image(&self) -> image::RgbImage {
        let mut out = image::RgbImage::new(self.width as u32, self.height as u32);
        for (dst, src) in out.pixels_mut().zip(&self.pixels) {
            dst.0 = *src;
        }
        out
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.to_rgb_image()
            .save_with_format(path, image::ImageFormat::Png)
            .map_err(|source| Error::Image {
                path: path.to_path_buf(),
                source,
            })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        self.pixels[row * self.width + col]
    }

    pub fn set_pixel(&mut self, row: usize, col: usize, rgb: [u8; 3]) {
        self.pixels[row * self.width + col] = rgb;
    }

    /// Fills the half-open pixel rectangle `[x0, x1) × [y0, y1)`, clipped to
    /// the image.
    pub fn fill_rect(&mut self, x0: usize, y0: usize, x1: usize, y1: usize, rgb: [u8; 3]) {
        for row in y0.min(self.height)..y1.min(self.height) {
            for col in x0.min(self.width)..x1.min(self.width) {
                self.set_pixel(row, col, rgb);
            }
        }
    }

    pub fn rotated_180(&self) -> Self {
        let mut pixels = self.pixels.clone();
        pixels.reverse();
        Self {
            width: self.width,
            height: self.height,
            pixels,
        }
    }
}

/// Where saliency maps come from during an evaluation run.
#[derive(Debug, Clone, PartialEq)]
pub enum SaliencyBackend {
    IttiKoch(IttiKochParams),
    /// Precomputed density maps referenced by the dataset manifest, resized
    /// to the evaluation resolution.
    DensityFile,
}

impl SaliencyBackend {
    pub fn name(&self) -> &'static str {
        match self {
            SaliencyBackend::IttiKoch(_) => "ittikoch",
            SaliencyBackend::DensityFile => "file",
        }
    }
}

impl Default for SaliencyBackend {
    fn default() -> Self {
        SaliencyBackend::IttiKoch(IttiKochParams::default())
    }
}
