//! Image file loading and saving, bridging the `image` crate to our raster
//! types. Only 8-bit grayscale and RGB inputs are accepted; anything else is
//! reported as unsupported rather than silently requantized.

use std::path::Path;

use image::{ColorType, DynamicImage, ImageReader};

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage, RgbRaster};

/// A decoded input image, kept in its native channel layout.
#[derive(Debug, Clone)]
pub enum LoadedImage {
    Gray(GrayImage),
    Rgb(RgbRaster),
}

impl LoadedImage {
    pub fn width(&self) -> usize {
        match self {
            LoadedImage::Gray(g) => g.width(),
            LoadedImage::Rgb(r) => r.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            LoadedImage::Gray(g) => g.height(),
            LoadedImage::Rgb(r) => r.height(),
        }
    }
}

/// Decode a PNG/JPEG/PGM/etc. file from disk.
pub fn load_image(path: &Path) -> Result<LoadedImage> {
    let reader = ImageReader::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let img = reader.decode().map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    match img {
        DynamicImage::ImageLuma8(g) => {
            let (w, h) = (g.width() as usize, g.height() as usize);
            Ok(LoadedImage::Gray(GrayImage::from_raw(w, h, g.into_raw())?))
        }
        DynamicImage::ImageRgb8(rgb) => {
            let (w, h) = (rgb.width() as usize, rgb.height() as usize);
            Ok(LoadedImage::Rgb(RgbRaster::from_raw(w, h, rgb.into_raw())?))
        }
        // Alpha carries no information for a fish on a lit table; drop it.
        DynamicImage::ImageLumaA8(g) => {
            let (w, h) = (g.width() as usize, g.height() as usize);
            let data = g.into_raw().chunks_exact(2).map(|p| p[0]).collect();
            Ok(LoadedImage::Gray(GrayImage::from_raw(w, h, data)?))
        }
        DynamicImage::ImageRgba8(rgba) => {
            let (w, h) = (rgba.width() as usize, rgba.height() as usize);
            let data = rgba
                .into_raw()
                .chunks_exact(4)
                .flat_map(|p| [p[0], p[1], p[2]])
                .collect();
            Ok(LoadedImage::Rgb(RgbRaster::from_raw(w, h, data)?))
        }
        other => Err(Error::UnsupportedFormat(format!(
            "{:?} pixels in {}; expected 8-bit grayscale or RGB",
            other.color(),
            path.display()
        ))),
    }
}

/// Write a grayscale image as PNG (or PGM when the extension says so).
pub fn save_gray(img: &GrayImage, path: &Path) -> Result<()> {
    image::save_buffer(
        path,
        img.as_slice(),
        img.width() as u32,
        img.height() as u32,
        ColorType::L8,
    )
    .map_err(|e| Error::io(path.display().to_string(), std::io::Error::other(e.to_string())))
}

/// Write a binary mask as a 0/255 grayscale PNG.
pub fn save_mask(mask: &BinaryMask, path: &Path) -> Result<()> {
    save_gray(&mask.to_gray(), path)
}

/// Write an RGB image as PNG.
pub fn save_rgb(img: &RgbRaster, path: &Path) -> Result<()> {
    image::save_buffer(
        path,
        img.as_slice(),
        img.width() as u32,
        img.height() as u32,
        ColorType::Rgb8,
    )
    .map_err(|e| Error::io(path.display().to_string(), std::io::Error::other(e.to_string())))
}
