//! Grayscale segmentation of a dark specimen on a bright table.
//!
//! The approach is threshold, normalize, threshold again: a first Otsu pass
//! estimates where the background starts, a gamma correction pushes the
//! background up to a fixed brightness level, and a second Otsu pass on the
//! corrected image yields the final cut between specimen and table. Pixels at
//! or below the second threshold form the specimen mask.

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage};

/// 256-bin intensity histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; 256],
}

impl Histogram {
    pub fn of(img: &GrayImage) -> Histogram {
        let mut counts = [0u64; 256];
        for &v in img.as_slice() {
            counts[v as usize] += 1;
        }
        Histogram { counts }
    }

    pub fn from_counts(counts: [u64; 256]) -> Histogram {
        Histogram { counts }
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Otsu's threshold: the split that maximizes between-class variance, with
/// level `t` assigning intensities `<= t` to the lower class.
///
/// Between-class variance is proportional to `A^2 / (W0 * W1)` where
/// `A = S0 * N - S * W0` (N, S: total count and intensity sum; W0, S0: count
/// and sum at or below `t`). All aggregates are integers, so `A` is computed
/// exactly and only the final ratio goes through floating point; the argmax
/// is therefore reproducible bit for bit. Ties pick the smallest threshold.
pub fn otsu_threshold(hist: &Histogram) -> Result<u8> {
    let counts = hist.counts();
    let n: i128 = counts.iter().map(|&c| c as i128).sum();
    let s: i128 = counts
        .iter()
        .enumerate()
        .map(|(v, &c)| v as i128 * c as i128)
        .sum();
    let mut w0: i128 = 0;
    let mut s0: i128 = 0;
    let mut best: Option<(u8, f64)> = None;
    for t in 0..=254usize {
        w0 += counts[t] as i128;
        s0 += t as i128 * counts[t] as i128;
        let w1 = n - w0;
        if w0 == 0 || w1 == 0 {
            continue;
        }
        let a = s0 * n - s * w0;
        let score = (a as f64) * (a as f64) / ((w0 * w1) as f64);
        if best.map_or(true, |(_, b)| score > b) {
            best = Some((t as u8, score));
        }
    }
    best.map(|(t, _)| t).ok_or(Error::DegenerateHistogram)
}

/// Exponent that maps a background threshold onto a target brightness:
/// `gamma = ln(max_level) / ln(u0 / 255)`. Raising normalized intensities to
/// this power sends `u0` to `max_level * 255`, so everything brighter than
/// the first threshold lands in the top `1 - max_level` band.
pub fn gamma_for_background(u0: u8, max_level: f64) -> Result<f64> {
    if !(max_level > 0.0 && max_level < 1.0) {
        return Err(Error::InvalidInput(format!(
            "background level must be in (0, 1), got {max_level}"
        )));
    }
    if u0 == 0 || u0 == 255 {
        return Err(Error::DegenerateThreshold(u0));
    }
    Ok(max_level.ln() / (u0 as f64 / 255.0).ln())
}

/// 256-entry lookup table for `v -> round(255 * (v / 255)^gamma)`.
pub fn gamma_lut(gamma: f64) -> [u8; 256] {
    let mut lut = [0u8; 256];
    for (v, out) in lut.iter_mut().enumerate() {
        let norm = v as f64 / 255.0;
        *out = (255.0 * norm.powf(gamma)).round().clamp(0.0, 255.0) as u8;
    }
    lut
}

/// Apply a gamma curve to every pixel.
pub fn apply_gamma(img: &GrayImage, gamma: f64) -> GrayImage {
    img.map_lut(&gamma_lut(gamma))
}

/// Mask of pixels at or below `t`.
pub fn threshold_below(img: &GrayImage, t: u8) -> BinaryMask {
    BinaryMask::from_fn(img.width(), img.height(), |x, y| img.get(x, y) <= t)
        .expect("image dims already validated")
}

/// Everything the two-pass segmentation computed, for logging and debugging.
#[derive(Debug, Clone)]
pub struct SegmentationReport {
    /// First Otsu threshold, on the raw image.
    pub first_threshold: u8,
    /// Gamma used to normalize the background.
    pub gamma: f64,
    /// Second Otsu threshold, on the corrected image.
    pub second_threshold: u8,
    /// Gamma-corrected image the final threshold was taken from.
    pub corrected: GrayImage,
    /// Specimen mask: corrected pixels at or below the second threshold.
    pub mask: BinaryMask,
}

/// Two-pass segmentation: Otsu, background normalization, Otsu again.
pub fn segment_specimen(img: &GrayImage, max_level: f64) -> Result<SegmentationReport> {
    let u0 = otsu_threshold(&Histogram::of(img))?;
    let gamma = gamma_for_background(u0, max_level)?;
    let corrected = apply_gamma(img, gamma);
    let u1 = otsu_threshold(&Histogram::of(&corrected))?;
    let mask = threshold_below(&corrected, u1);
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    Ok(SegmentationReport {
        first_threshold: u0,
        gamma,
        second_threshold: u1,
        corrected,
        mask,
    })
}

/// Reference Otsu that recomputes every aggregate from scratch per level.
/// Shares the exact-integer score with the production routine so the two are
/// comparable bit for bit; used by tests.
#[doc(hidden)]
pub fn otsu_threshold_reference(hist: &Histogram) -> Option<u8> {
    let counts = hist.counts();
    let n: i128 = counts.iter().map(|&c| c as i128).sum();
    let s: i128 = counts
        .iter()
        .enumerate()
        .map(|(v, &c)| v as i128 * c as i128)
        .sum();
    let mut best: Option<(u8, f64)> = None;
    for t in 0..=254usize {
        let w0: i128 = counts[..=t].iter().map(|&c| c as i128).sum();
        let w1 = n - w0;
        if w0 == 0 || w1 == 0 {
            continue;
        }
        let s0: i128 = counts[..=t]
            .iter()
            .enumerate()
            .map(|(v, &c)| v as i128 * c as i128)
            .sum();
        let a = s0 * n - s * w0;
        let score = (a as f64) * (a as f64) / ((w0 * w1) as f64);
        if best.map_or(true, |(_, b)| score > b) {
            best = Some((t as u8, score));
        }
    }
    best.map(|(t, _)| t)
}
