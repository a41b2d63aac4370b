//! In-memory raster types and the resampling / color primitives everything
//! else builds on. Coordinates are image-style: x grows rightward, y grows
//! downward, origin at the top-left pixel center.

use crate::error::{Error, Result};

/// Single-channel 8-bit image, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        check_dims(width, height)?;
        Ok(GrayImage {
            width,
            height,
            data: vec![0; width * height],
        })
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        check_dims(width, height)?;
        if data.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "pixel buffer length {} does not match {}x{}",
                data.len(),
                width,
                height
            )));
        }
        Ok(GrayImage {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        check_dims(width, height)?;
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Ok(GrayImage {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    /// Remap every pixel through a 256-entry lookup table.
    pub fn map_lut(&self, lut: &[u8; 256]) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| lut[v as usize]).collect(),
        }
    }

    /// Copy of the rectangle starting at (x0, y0), `w` by `h` pixels.
    /// The window must lie inside the image.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<GrayImage> {
        if x0 + w > self.width || y0 + h > self.height || w == 0 || h == 0 {
            return Err(Error::InvalidInput(format!(
                "crop {}x{}+{}+{} outside {}x{} image",
                w, h, x0, y0, self.width, self.height
            )));
        }
        let mut data = Vec::with_capacity(w * h);
        for y in y0..y0 + h {
            data.extend_from_slice(&self.data[y * self.width + x0..y * self.width + x0 + w]);
        }
        Ok(GrayImage {
            width: w,
            height: h,
            data,
        })
    }

    /// Top row becomes the bottom row; an exact reindexing, no resampling.
    pub fn flip_vertical(&self) -> GrayImage {
        let mut data = Vec::with_capacity(self.data.len());
        for y in (0..self.height).rev() {
            data.extend_from_slice(self.row(y));
        }
        GrayImage {
            width: self.width,
            height: self.height,
            data,
        }
    }

    /// Leftmost column becomes the rightmost column.
    pub fn flip_horizontal(&self) -> GrayImage {
        let mut data = Vec::with_capacity(self.data.len());
        for y in 0..self.height {
            data.extend(self.row(y).iter().rev());
        }
        GrayImage {
            width: self.width,
            height: self.height,
            data,
        }
    }
}

impl std::fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GrayImage({}x{})", self.width, self.height)
    }
}

/// Interleaved 8-bit RGB image.
#[derive(Clone, PartialEq, Eq)]
pub struct RgbRaster {
    width: usize,
    height: usize,
    data: Vec<u8>, // r, g, b per pixel
}

impl RgbRaster {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        check_dims(width, height)?;
        Ok(RgbRaster {
            width,
            height,
            data: vec![0; width * height * 3],
        })
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        check_dims(width, height)?;
        if data.len() != width * height * 3 {
            return Err(Error::InvalidInput(format!(
                "RGB buffer length {} does not match {}x{}x3",
                data.len(),
                width,
                height
            )));
        }
        Ok(RgbRaster {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [u8; 3],
    ) -> Result<Self> {
        check_dims(width, height)?;
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Ok(RgbRaster {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }
}

impl std::fmt::Debug for RgbRaster {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RgbRaster({}x{})", self.width, self.height)
    }
}

/// Boolean raster; `true` marks object pixels.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        check_dims(width, height)?;
        Ok(BinaryMask {
            width,
            height,
            bits: vec![false; width * height],
        })
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        check_dims(width, height)?;
        if bits.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "mask buffer length {} does not match {}x{}",
                bits.len(),
                width,
                height
            )));
        }
        Ok(BinaryMask {
            width,
            height,
            bits,
        })
    }

    /// Build from a predicate over every pixel of a gray image.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        check_dims(width, height)?;
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        Ok(BinaryMask {
            width,
            height,
            bits,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits[y * self.width + x] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn complement(&self) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    /// True when every active pixel of `self` is also active in `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.width == other.width
            && self.height == other.height
            && self
                .bits
                .iter()
                .zip(&other.bits)
                .all(|(&a, &b)| !a || b)
    }

    /// Tight bounding box of active pixels as (x0, y0, x1, y1), inclusive.
    pub fn bounding_box(&self) -> Option<(usize, usize, usize, usize)> {
        let mut x0 = usize::MAX;
        let mut y0 = usize::MAX;
        let mut x1 = 0usize;
        let mut y1 = 0usize;
        let mut any = false;
        for y in 0..self.height {
            let row = &self.bits[y * self.width..(y + 1) * self.width];
            if let Some(first) = row.iter().position(|&b| b) {
                let last = self.width - 1 - row.iter().rev().position(|&b| b).unwrap();
                any = true;
                x0 = x0.min(first);
                x1 = x1.max(last);
                if y0 == usize::MAX {
                    y0 = y;
                }
                y1 = y;
            }
        }
        if any {
            Some((x0, y0, x1, y1))
        } else {
            None
        }
    }

    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<BinaryMask> {
        if x0 + w > self.width || y0 + h > self.height || w == 0 || h == 0 {
            return Err(Error::InvalidInput(format!(
                "crop {}x{}+{}+{} outside {}x{} mask",
                w, h, x0, y0, self.width, self.height
            )));
        }
        let mut bits = Vec::with_capacity(w * h);
        for y in y0..y0 + h {
            bits.extend_from_slice(&self.bits[y * self.width + x0..y * self.width + x0 + w]);
        }
        Ok(BinaryMask {
            width: w,
            height: h,
            bits,
        })
    }

    pub fn flip_vertical(&self) -> BinaryMask {
        let mut bits = Vec::with_capacity(self.bits.len());
        for y in (0..self.height).rev() {
            bits.extend_from_slice(&self.bits[y * self.width..(y + 1) * self.width]);
        }
        BinaryMask {
            width: self.width,
            height: self.height,
            bits,
        }
    }

    pub fn flip_horizontal(&self) -> BinaryMask {
        let mut bits = Vec::with_capacity(self.bits.len());
        for y in 0..self.height {
            bits.extend(self.bits[y * self.width..(y + 1) * self.width].iter().rev());
        }
        BinaryMask {
            width: self.width,
            height: self.height,
            bits,
        }
    }

    /// Render as a 0/255 gray image (handy for debug dumps).
    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect(),
        }
    }
}

impl std::fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BinaryMask({}x{}, {} active)",
            self.width,
            self.height,
            self.count()
        )
    }
}

/// Integer pixel location.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub fn new(x: i32, y: i32) -> Self {
        Point { x, y }
    }

    pub fn translated(self, dx: i32, dy: i32) -> Self {
        Point {
            x: self.x + dx,
            y: self.y + dy,
        }
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidInput(format!(
            "zero-sized raster {}x{}",
            width, height
        )));
    }
    Ok(())
}

/// Rec. 601 luma: L = 0.299 R + 0.587 G + 0.114 B, rounded to nearest.
pub fn to_luminance(rgb: &RgbRaster) -> GrayImage {
    let mut data = Vec::with_capacity(rgb.width() * rgb.height());
    for px in rgb.as_slice().chunks_exact(3) {
        let l = 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
        data.push(l.round().clamp(0.0, 255.0) as u8);
    }
    GrayImage {
        width: rgb.width(),
        height: rgb.height(),
        data,
    }
}

/// Bilinear resample to a fixed number of lines, preserving aspect ratio.
///
/// Output height is exactly `target_lines`; output width is
/// `round(width * target_lines / height)`. When the image is already at the
/// target height the pixels are returned unchanged, so the operation is
/// idempotent.
pub fn scale_to_height(img: &GrayImage, target_lines: usize) -> Result<GrayImage> {
    if target_lines == 0 {
        return Err(Error::InvalidInput("target height must be positive".into()));
    }
    let (w, h) = (img.width(), img.height());
    let out_w = ((w as f64) * (target_lines as f64) / (h as f64)).round().max(1.0) as usize;
    if target_lines == h && out_w == w {
        return Ok(img.clone());
    }
    let out_h = target_lines;
    let sx = w as f64 / out_w as f64;
    let sy = h as f64 / out_h as f64;
    let mut data = Vec::with_capacity(out_w * out_h);
    for oy in 0..out_h {
        // Map destination pixel centers back into the source grid.
        let fy = ((oy as f64 + 0.5) * sy - 0.5).clamp(0.0, (h - 1) as f64);
        let y0 = fy.floor() as usize;
        let y1 = (y0 + 1).min(h - 1);
        let ty = fy - y0 as f64;
        for ox in 0..out_w {
            let fx = ((ox as f64 + 0.5) * sx - 0.5).clamp(0.0, (w - 1) as f64);
            let x0 = fx.floor() as usize;
            let x1 = (x0 + 1).min(w - 1);
            let tx = fx - x0 as f64;
            let p00 = img.get(x0, y0) as f64;
            let p10 = img.get(x1, y0) as f64;
            let p01 = img.get(x0, y1) as f64;
            let p11 = img.get(x1, y1) as f64;
            let top = p00 + (p10 - p00) * tx;
            let bot = p01 + (p11 - p01) * tx;
            let v = top + (bot - top) * ty;
            data.push(v.round().clamp(0.0, 255.0) as u8);
        }
    }
    Ok(GrayImage {
        width: out_w,
        height: out_h,
        data,
    })
}
