//! Right-edge contour extraction and the head region of interest.
//!
//! A specimen laid out nose-right is summarized by one value per row: the
//! rightmost mask pixel. The global maximum of that signal is the nose tip,
//! and a window just left of the nose is re-segmented at full contrast to
//! give the head mask every later stage works on.

use crate::error::{Error, Result};
use crate::morph::clean_mask;
use crate::raster::{BinaryMask, GrayImage, Point};
use crate::segment::segment_specimen;

/// Rightmost active x per row over the tight row extent of a mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContourSignal {
    y_start: usize,
    xs: Vec<i64>,
    valid: Vec<bool>,
}

impl ContourSignal {
    /// First row of the extent.
    pub fn y_start(&self) -> usize {
        self.y_start
    }

    /// Last row of the extent, inclusive.
    pub fn y_end(&self) -> usize {
        self.y_start + self.xs.len() - 1
    }

    /// Number of rows in the extent.
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Rightmost x at extent index `i`, or None for a row with no pixels.
    pub fn x_at(&self, i: usize) -> Option<i64> {
        if self.valid[i] {
            Some(self.xs[i])
        } else {
            None
        }
    }

    /// True when every row of the extent has at least one pixel, which holds
    /// for any single 8-connected component.
    pub fn fully_valid(&self) -> bool {
        self.valid.iter().all(|&v| v)
    }

    /// Index of an absolute row inside the extent.
    pub fn index_of_row(&self, y: usize) -> Option<usize> {
        if y < self.y_start || y > self.y_end() {
            None
        } else {
            Some(y - self.y_start)
        }
    }

    /// Assemble a signal directly from row values; test scaffolding only.
    #[cfg(test)]
    pub(crate) fn from_parts(y_start: usize, xs: Vec<i64>) -> ContourSignal {
        let valid = vec![true; xs.len()];
        ContourSignal { y_start, xs, valid }
    }

    /// All (x, y) contour points top to bottom, skipping invalid rows.
    pub fn points(&self) -> Vec<Point> {
        self.xs
            .iter()
            .zip(&self.valid)
            .enumerate()
            .filter(|(_, (_, &v))| v)
            .map(|(i, (&x, _))| Point::new(x as i32, (self.y_start + i) as i32))
            .collect()
    }
}

/// Build the rightmost-pixel signal of a mask.
pub fn rightmost_contour(mask: &BinaryMask) -> Result<ContourSignal> {
    let (_, y0, _, y1) = mask.bounding_box().ok_or(Error::EmptyMask)?;
    let mut xs = Vec::with_capacity(y1 - y0 + 1);
    let mut valid = Vec::with_capacity(y1 - y0 + 1);
    for y in y0..=y1 {
        let mut found = None;
        for x in (0..mask.width()).rev() {
            if mask.get(x, y) {
                found = Some(x as i64);
                break;
            }
        }
        valid.push(found.is_some());
        xs.push(found.unwrap_or(0));
    }
    Ok(ContourSignal {
        y_start: y0,
        xs,
        valid,
    })
}

/// Nose tip: the contour's global maximum. When several rows share the
/// maximum the middle one is taken, biased toward the lower row for an even
/// count.
pub fn nose_point(contour: &ContourSignal) -> Result<Point> {
    let best = contour
        .xs
        .iter()
        .zip(&contour.valid)
        .filter(|(_, &v)| v)
        .map(|(&x, _)| x)
        .max()
        .ok_or_else(|| Error::DegenerateContour("no valid rows".into()))?;
    let rows: Vec<usize> = (0..contour.len())
        .filter(|&i| contour.valid[i] && contour.xs[i] == best)
        .collect();
    let mid = rows[rows.len() / 2];
    Ok(Point::new(
        contour.xs[mid] as i32,
        (contour.y_start + mid) as i32,
    ))
}

/// Head window parameters. Radii are given at the reference image height and
/// shrink proportionally for smaller windows.
#[derive(Debug, Clone)]
pub struct RoiParams {
    /// Window width as a fraction of the specimen bounding-box width.
    pub width_fraction: f64,
    /// Extra rows above and below the specimen, as a fraction of image height.
    pub row_margin_fraction: f64,
    /// Background level for the window's own two-pass segmentation.
    pub max_level: f64,
    /// Opening radius at the reference height.
    pub open_radius: usize,
    /// Closing radius at the reference height; zero skips closing.
    pub close_radius: usize,
    /// Image height the radii are calibrated for.
    pub reference_lines: usize,
}

impl Default for RoiParams {
    fn default() -> Self {
        RoiParams {
            width_fraction: 0.50,
            row_margin_fraction: 0.02,
            max_level: 0.80,
            open_radius: 20,
            close_radius: 10,
            reference_lines: 2000,
        }
    }
}

/// The head region of interest: a re-segmented window ending at the nose
/// column.
#[derive(Debug, Clone)]
pub struct Roi {
    /// Left edge of the window in image coordinates.
    pub x0: usize,
    /// Top edge of the window in image coordinates.
    pub y0: usize,
    /// Head mask in window coordinates.
    pub mask: BinaryMask,
    /// Nose tip in window coordinates, carried over from the full image.
    pub nose: Point,
}

impl Roi {
    /// Translate a window-local point back to image coordinates.
    pub fn to_image(&self, p: Point) -> Point {
        Point::new(p.x + self.x0 as i32, p.y + self.y0 as i32)
    }
}

/// Cut the head window out of the grayscale image and segment it afresh.
///
/// The window spans the half of the bounding box next to the nose plus a
/// small row margin; thresholding it in isolation gives better local
/// contrast than reusing the full-frame mask. The nose found on the full
/// frame is carried over unchanged.
pub fn extract_roi(
    gray: &GrayImage,
    mask: &BinaryMask,
    nose: Point,
    params: &RoiParams,
) -> Result<Roi> {
    let (bx0, by0, bx1, by1) = mask.bounding_box().ok_or(Error::EmptyMask)?;
    let bbox_w = bx1 - bx0 + 1;
    let span = (params.width_fraction * bbox_w as f64).round() as i64;
    let x1 = nose.x as i64;
    let x0 = (x1 - span).max(0);
    let margin = (params.row_margin_fraction * gray.height() as f64).round() as i64;
    let y0 = (by0 as i64 - margin).max(0);
    let y1 = (by1 as i64 + margin).min(gray.height() as i64 - 1);
    let w = (x1 - x0 + 1) as usize;
    let h = (y1 - y0 + 1) as usize;
    let window = gray.crop(x0 as usize, y0 as usize, w, h)?;
    let report = segment_specimen(&window, params.max_level)?;
    let scale = h as f64 / params.reference_lines as f64;
    let open_r = scaled_radius(params.open_radius, scale);
    let close_r = if params.close_radius == 0 {
        0
    } else {
        scaled_radius(params.close_radius, scale)
    };
    let cleaned = clean_mask(&report.mask, open_r, close_r)?;
    Ok(Roi {
        x0: x0 as usize,
        y0: y0 as usize,
        mask: cleaned,
        nose: Point::new(nose.x - x0 as i32, nose.y - y0 as i32),
    })
}

fn scaled_radius(radius: usize, scale: f64) -> usize {
    ((radius as f64 * scale).round() as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask_from_rows(width: usize, rows: &[(usize, usize, usize)]) -> BinaryMask {
        // rows: (y, x_from, x_to)
        let height = rows.iter().map(|&(y, _, _)| y).max().unwrap() + 2;
        let mut m = BinaryMask::new(width, height).unwrap();
        for &(y, a, b) in rows {
            for x in a..=b {
                m.set(x, y, true);
            }
        }
        m
    }

    #[test]
    fn contour_reads_the_right_edge_over_a_tight_extent() {
        let m = mask_from_rows(20, &[(3, 2, 10), (4, 2, 14), (5, 3, 12)]);
        let c = rightmost_contour(&m).unwrap();
        assert_eq!(c.y_start(), 3);
        assert_eq!(c.y_end(), 5);
        assert_eq!(c.x_at(0), Some(10));
        assert_eq!(c.x_at(1), Some(14));
        assert_eq!(c.x_at(2), Some(12));
        assert!(c.fully_valid());
        assert_eq!(
            c.points(),
            vec![Point::new(10, 3), Point::new(14, 4), Point::new(12, 5)]
        );
    }

    #[test]
    fn contour_of_empty_mask_fails() {
        let m = BinaryMask::new(8, 8).unwrap();
        match rightmost_contour(&m) {
            Err(Error::EmptyMask) => {}
            other => panic!("expected EmptyMask, got {:?}", other),
        }
    }

    #[test]
    fn gap_rows_are_flagged_invalid() {
        let mut m = BinaryMask::new(10, 10).unwrap();
        m.set(4, 2, true);
        m.set(5, 6, true); // two separate blobs leave rows 3..=5 empty
        let c = rightmost_contour(&m).unwrap();
        assert_eq!(c.len(), 5);
        assert!(!c.fully_valid());
        assert_eq!(c.x_at(0), Some(4));
        assert_eq!(c.x_at(1), None);
        assert_eq!(c.x_at(4), Some(5));
    }

    #[test]
    fn nose_is_the_global_rightmost_point() {
        let m = mask_from_rows(30, &[(2, 0, 12), (3, 0, 20), (4, 0, 15)]);
        let c = rightmost_contour(&m).unwrap();
        assert_eq!(nose_point(&c).unwrap(), Point::new(20, 3));
    }

    #[test]
    fn nose_ties_resolve_to_the_middle_row() {
        let m = mask_from_rows(30, &[(1, 0, 18), (2, 0, 18), (3, 0, 18), (4, 0, 10)]);
        let c = rightmost_contour(&m).unwrap();
        assert_eq!(nose_point(&c).unwrap(), Point::new(18, 2));
    }

    #[test]
    fn roi_window_is_rebinarized_and_keeps_the_nose() {
        // Dark ellipse on a bright field, nose at its right extreme.
        let (w, h) = (200, 100);
        let mut gray = GrayImage::new(w, h).unwrap();
        let mut mask = BinaryMask::new(w, h).unwrap();
        let (cx, cy, ax, ay) = (90.0, 50.0, 70.0, 30.0);
        for y in 0..h {
            for x in 0..w {
                let dx = (x as f64 - cx) / ax;
                let dy = (y as f64 - cy) / ay;
                let inside = dx * dx + dy * dy <= 1.0;
                mask.set(x, y, inside);
                gray.set(x, y, if inside { 60 } else { 230 });
            }
        }
        let contour = rightmost_contour(&mask).unwrap();
        let nose = nose_point(&contour).unwrap();
        assert_eq!(nose.x, 160);
        let params = RoiParams {
            open_radius: 4,
            close_radius: 2,
            reference_lines: 100,
            ..RoiParams::default()
        };
        let roi = extract_roi(&gray, &mask, nose, &params).unwrap();
        // window ends at the nose column
        assert_eq!(roi.x0 + roi.mask.width() - 1, nose.x as usize);
        // carried-over nose is active in the window mask
        assert!(roi.mask.get(roi.nose.x as usize, roi.nose.y as usize));
        // and maps back to the global nose
        assert_eq!(roi.to_image(roi.nose), nose);
        // the window mask agrees with the head part of the true mask
        for y in 0..roi.mask.height() {
            for x in 0..roi.mask.width() {
                assert_eq!(
                    roi.mask.get(x, y),
                    mask.get(x + roi.x0, y + roi.y0),
                    "at window ({x},{y})"
                );
            }
        }
    }
}
