//! Binary morphology on specimen masks: erosion and dilation by digital
//! disks, geodesic reconstruction, connected components, and the cleanup
//! sequence that turns a raw threshold mask into a single solid specimen.
//!
//! Out-of-bounds pixels count as background everywhere. Erosion therefore
//! fails near the borders (a disk that sticks out cannot be all-foreground)
//! while dilation simply clamps its window.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::raster::BinaryMask;

/// Digital disk: all offsets with `dx^2 + dy^2 <= r^2`.
#[derive(Debug, Clone)]
pub struct StructuringElement {
    radius: usize,
    offsets: Vec<(i32, i32)>,
    /// Chord half-width per |dy|: the widest `|dx|` still inside the disk.
    half_widths: Vec<i64>,
}

impl StructuringElement {
    pub fn disk(radius: usize) -> StructuringElement {
        let r = radius as i64;
        let mut offsets = Vec::new();
        let mut half_widths = Vec::with_capacity(radius + 1);
        for dy in 0..=r {
            let hw = ((r * r - dy * dy) as f64).sqrt().floor() as i64;
            half_widths.push(hw);
        }
        for dy in -r..=r {
            let hw = half_widths[dy.unsigned_abs() as usize];
            for dx in -hw..=hw {
                offsets.push((dx as i32, dy as i32));
            }
        }
        StructuringElement {
            radius,
            offsets,
            half_widths,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn area(&self) -> usize {
        self.offsets.len()
    }

    pub fn offsets(&self) -> &[(i32, i32)] {
        &self.offsets
    }

    fn half_width(&self, abs_dy: usize) -> i64 {
        self.half_widths[abs_dy]
    }
}

/// Per-pixel count of foreground pixels under the disk, window clamped to
/// the image. Shared machinery for erosion and dilation; row prefix sums
/// keep it exact and O(pixels * diameter).
fn disk_counts(mask: &BinaryMask, se: &StructuringElement) -> Vec<u32> {
    let (w, h) = (mask.width(), mask.height());
    let stride = w + 1;
    let mut pre = vec![0u32; stride * h];
    for y in 0..h {
        let base = y * stride;
        let mut acc = 0u32;
        for x in 0..w {
            acc += mask.get(x, y) as u32;
            pre[base + x + 1] = acc;
        }
    }
    let r = se.radius() as i64;
    let mut counts = vec![0u32; w * h];
    for y in 0..h as i64 {
        let row = &mut counts[y as usize * w..(y as usize + 1) * w];
        for dy in -r..=r {
            let sy = y + dy;
            if sy < 0 || sy >= h as i64 {
                continue;
            }
            let hw = se.half_width(dy.unsigned_abs() as usize);
            let base = sy as usize * stride;
            for (x, cell) in row.iter_mut().enumerate() {
                let lo = (x as i64 - hw).max(0) as usize;
                let hi = ((x as i64 + hw + 1) as usize).min(w);
                *cell += pre[base + hi] - pre[base + lo];
            }
        }
    }
    counts
}

/// Erosion: a pixel survives only when the whole disk around it is
/// foreground. Any part of the disk hanging off the image kills the pixel.
pub fn erode(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    let area = se.area() as u32;
    let counts = disk_counts(mask, se);
    let (w, h) = (mask.width(), mask.height());
    BinaryMask::from_bits(w, h, counts.into_iter().map(|c| c == area).collect())
        .expect("dims preserved")
}

/// Dilation: a pixel turns on when any foreground pixel lies under the disk.
pub fn dilate(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    let counts = disk_counts(mask, se);
    let (w, h) = (mask.width(), mask.height());
    BinaryMask::from_bits(w, h, counts.into_iter().map(|c| c > 0).collect())
        .expect("dims preserved")
}

/// Geodesic reconstruction by dilation under 8-connectivity: grow the
/// marker inside the mask until stable. Equivalently, the union of mask
/// components that touch the marker.
pub fn reconstruct(marker: &BinaryMask, mask: &BinaryMask) -> Result<BinaryMask> {
    if marker.width() != mask.width() || marker.height() != mask.height() {
        return Err(Error::InvalidInput(format!(
            "marker {}x{} does not match mask {}x{}",
            marker.width(),
            marker.height(),
            mask.width(),
            mask.height()
        )));
    }
    let (w, h) = (mask.width(), mask.height());
    let mut out = BinaryMask::new(w, h)?;
    let mut queue = VecDeque::new();
    for y in 0..h {
        for x in 0..w {
            if marker.get(x, y) && mask.get(x, y) {
                out.set(x, y, true);
                queue.push_back((x, y));
            }
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let nx = x as i64 + dx;
                let ny = y as i64 + dy;
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let (nx, ny) = (nx as usize, ny as usize);
                if mask.get(nx, ny) && !out.get(nx, ny) {
                    out.set(nx, ny, true);
                    queue.push_back((nx, ny));
                }
            }
        }
    }
    Ok(out)
}

/// Opening by reconstruction: erode, then grow the survivors back to the
/// full shape of every component they came from. Removes blobs too small to
/// hold the disk without rounding the survivors' outlines.
pub fn open_by_reconstruction(mask: &BinaryMask, radius: usize) -> Result<BinaryMask> {
    if radius == 0 {
        return Ok(mask.clone());
    }
    let marker = erode(mask, &StructuringElement::disk(radius));
    reconstruct(&marker, mask)
}

/// Closing by reconstruction, the dual: fills every background pocket too
/// small to hold the disk while leaving the outline untouched elsewhere.
pub fn close_by_reconstruction(mask: &BinaryMask, radius: usize) -> Result<BinaryMask> {
    if radius == 0 {
        return Ok(mask.clone());
    }
    Ok(open_by_reconstruction(&mask.complement(), radius)?.complement())
}

/// Connected-component labels, 8-connectivity. Labels are assigned in
/// raster-scan order of each component's first pixel, starting at 1;
/// 0 marks background.
#[derive(Debug, Clone)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    sizes: Vec<usize>,
}

impl LabelMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of components.
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn label(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    /// Pixel count per component, indexed by `label - 1`.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Mask of one component.
    pub fn component(&self, label: u32) -> Result<BinaryMask> {
        if label == 0 || label as usize > self.sizes.len() {
            return Err(Error::InvalidInput(format!(
                "label {} out of range 1..={}",
                label,
                self.sizes.len()
            )));
        }
        BinaryMask::from_bits(
            self.width,
            self.height,
            self.labels.iter().map(|&l| l == label).collect(),
        )
    }
}

pub fn label_components(mask: &BinaryMask) -> LabelMap {
    let (w, h) = (mask.width(), mask.height());
    let mut labels = vec![0u32; w * h];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    let mut next = 1u32;
    for y in 0..h {
        for x in 0..w {
            if !mask.get(x, y) || labels[y * w + x] != 0 {
                continue;
            }
            let label = next;
            next += 1;
            let mut size = 0usize;
            labels[y * w + x] = label;
            queue.push_back((x, y));
            while let Some((cx, cy)) = queue.pop_front() {
                size += 1;
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        if dx == 0 && dy == 0 {
                            continue;
                        }
                        let nx = cx as i64 + dx;
                        let ny = cy as i64 + dy;
                        if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                            continue;
                        }
                        let (nx, ny) = (nx as usize, ny as usize);
                        if mask.get(nx, ny) && labels[ny * w + nx] == 0 {
                            labels[ny * w + nx] = label;
                            queue.push_back((nx, ny));
                        }
                    }
                }
            }
            sizes.push(size);
        }
    }
    LabelMap {
        width: w,
        height: h,
        labels,
        sizes,
    }
}

/// Mask of the biggest component. Size ties resolve to the component whose
/// first pixel comes earliest in raster order.
pub fn largest_component(mask: &BinaryMask) -> Result<BinaryMask> {
    let map = label_components(mask);
    let best = map
        .sizes()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i as u32 + 1)
        .ok_or(Error::EmptyMask)?;
    map.component(best)
}

/// Standard cleanup for a raw threshold mask: drop specks and stains that
/// cannot hold the opening disk, fill pores smaller than the closing disk,
/// then keep only the biggest remaining region. A closing radius of zero
/// skips the fill step.
pub fn clean_mask(mask: &BinaryMask, open_radius: usize, close_radius: usize) -> Result<BinaryMask> {
    let opened = open_by_reconstruction(mask, open_radius)?;
    if opened.is_empty() {
        return Err(Error::NoSpecimen);
    }
    let closed = close_by_reconstruction(&opened, close_radius)?;
    largest_component(&closed).map_err(|e| match e {
        Error::EmptyMask => Error::NoSpecimen,
        other => other,
    })
}
