//! Straight-line voting over the contour and the peak analysis that turns
//! line distances into critical points.
//!
//! The head profile is dominated by two straight stretches meeting near the
//! nose. Voting happens in a frame whose ordinate is measured from a caller
//! chosen origin; the detector passes the contour midline, which makes a
//! vertically flipped specimen produce an exactly permuted accumulator
//! (theta -> 180 - theta, rho -> -rho, with theta = 0 fixed), so detections
//! mirror bit for bit. The tables below are built symmetric for that reason,
//! and rho is binned with round-half-away-from-zero, which commutes with
//! negation.

use std::collections::VecDeque;

use crate::contour::ContourSignal;
use crate::error::{Error, Result};
use crate::raster::Point;

/// One-degree angular resolution.
pub const THETA_BINS: usize = 180;
/// Neighborhood suppressed around the first peak when looking for the second.
const NMS_THETA_BINS: i64 = 10;
const NMS_RHO_BINS: i64 = 20;
/// A contour point supports a line when it lies within this distance.
const INLIER_TOLERANCE_PX: f64 = 2.0;
/// Minimum fraction of contour points that must support each line.
const MIN_SUPPORT_FRACTION: f64 = 0.10;

/// cos/sin lookup with exact half-turn symmetry: cos[180-k] is the bitwise
/// negation of cos[k] and sin[180-k] equals sin[k], with cos[90] forced to
/// zero. Plain libm evaluation at 91..179 degrees would miss this by an ulp.
fn trig_tables() -> ([f64; THETA_BINS], [f64; THETA_BINS]) {
    let mut cos = [0.0; THETA_BINS];
    let mut sin = [0.0; THETA_BINS];
    for k in 0..=90 {
        let a = (k as f64).to_radians();
        cos[k] = if k == 90 { 0.0 } else { a.cos() };
        sin[k] = a.sin();
    }
    for k in 91..THETA_BINS {
        cos[k] = -cos[THETA_BINS - k];
        sin[k] = sin[THETA_BINS - k];
    }
    (cos, sin)
}

/// A voted line in normal form: `x cos(theta) + (y - y_origin) sin(theta) = rho`.
#[derive(Debug, Clone, Copy)]
pub struct HoughLine {
    /// Angle bin in degrees, 0..180.
    pub theta_idx: usize,
    pub cos_t: f64,
    pub sin_t: f64,
    /// Signed distance in the accumulator's own frame.
    pub rho: f64,
    /// Contour points within the inlier tolerance.
    pub support: usize,
}

impl HoughLine {
    /// Perpendicular distance from a point given in the accumulator frame.
    pub fn distance(&self, x: f64, y_centered: f64) -> f64 {
        (x * self.cos_t + y_centered * self.sin_t - self.rho).abs()
    }

    /// Rho re-expressed against a different ordinate origin (pass the
    /// accumulator's `y_origin` to get the plain image-frame value).
    pub fn rho_in_frame(&self, y_origin: f64) -> f64 {
        self.rho + y_origin * self.sin_t
    }
}

/// Vote table over (theta, rho) for one contour.
pub struct HoughAccumulator {
    votes: Vec<u32>,
    n_rho: usize,
    rho_offset: i64,
    cos: [f64; THETA_BINS],
    sin: [f64; THETA_BINS],
    points: Vec<(f64, f64)>,
    y_origin: f64,
}

/// Accumulate votes from every valid contour point. The ordinate used for
/// voting is `y - y_origin`; pass 0.0 to vote in raw image coordinates.
pub fn hough_accumulate(contour: &ContourSignal, y_origin: f64) -> Result<HoughAccumulator> {
    let mut points = Vec::with_capacity(contour.len());
    for i in 0..contour.len() {
        if let Some(x) = contour.x_at(i) {
            let y = (contour.y_start() + i) as f64 - y_origin;
            points.push((x as f64, y));
        }
    }
    if points.is_empty() {
        return Err(Error::DegenerateContour("no contour points to vote".into()));
    }
    let reach = points
        .iter()
        .map(|&(x, y)| x.hypot(y))
        .fold(0.0f64, f64::max);
    let rho_offset = reach.ceil() as i64 + 1;
    let n_rho = (2 * rho_offset + 1) as usize;
    let (cos, sin) = trig_tables();
    let mut votes = vec![0u32; THETA_BINS * n_rho];
    for &(x, y) in &points {
        for k in 0..THETA_BINS {
            let rho = x * cos[k] + y * sin[k];
            let idx = (rho.round() as i64 + rho_offset) as usize;
            votes[k * n_rho + idx] += 1;
        }
    }
    Ok(HoughAccumulator {
        votes,
        n_rho,
        rho_offset,
        cos,
        sin,
        points,
        y_origin,
    })
}

impl HoughAccumulator {
    pub fn y_origin(&self) -> f64 {
        self.y_origin
    }

    /// Votes in one cell; rho is the signed integer bin value.
    pub fn votes_at(&self, theta_idx: usize, rho: i64) -> u32 {
        let idx = rho + self.rho_offset;
        if theta_idx >= THETA_BINS || idx < 0 || idx as usize >= self.n_rho {
            return 0;
        }
        self.votes[theta_idx * self.n_rho + idx as usize]
    }

    pub fn rho_range(&self) -> std::ops::RangeInclusive<i64> {
        -self.rho_offset..=self.rho_offset
    }

    fn best_cell(&self, skip: impl Fn(usize, i64) -> bool) -> Option<(usize, i64, u32)> {
        let mut best: Option<(usize, i64, u32)> = None;
        for k in 0..THETA_BINS {
            for i in 0..self.n_rho {
                let v = self.votes[k * self.n_rho + i];
                if v == 0 {
                    continue;
                }
                let r = i as i64 - self.rho_offset;
                if skip(k, r) {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bk, br, bv)) => v > bv || (v == bv && tie_key(k, r) < tie_key(bk, br)),
                };
                if better {
                    best = Some((k, r, v));
                }
            }
        }
        best
    }

    fn line_from_cell(&self, k: usize, r: i64) -> HoughLine {
        let rho = r as f64;
        let (c, s) = (self.cos[k], self.sin[k]);
        let support = self
            .points
            .iter()
            .filter(|&&(x, y)| (x * c + y * s - rho).abs() <= INLIER_TOLERANCE_PX)
            .count();
        HoughLine {
            theta_idx: k,
            cos_t: c,
            sin_t: s,
            rho,
            support,
        }
    }

    /// The two strongest distinct lines. The second search suppresses a
    /// neighborhood of the first, treating theta as cyclic (theta + 180
    /// describes the same family with rho negated). Each line must gather at
    /// least a tenth of the contour as inliers; raw bin votes are not used
    /// for that check because a clean line's votes can straddle two rho bins.
    /// The line nearer the upper half of the contour comes first.
    pub fn dominant_lines(&self) -> Result<(HoughLine, HoughLine)> {
        let (k1, r1, _) = self
            .best_cell(|_, _| false)
            .ok_or_else(|| Error::DegenerateContour("no line votes".into()))?;
        let suppressed = move |k: usize, r: i64| {
            let dk = (k as i64 - k1 as i64).abs();
            (dk <= NMS_THETA_BINS && (r - r1).abs() <= NMS_RHO_BINS)
                || (THETA_BINS as i64 - dk <= NMS_THETA_BINS && (r + r1).abs() <= NMS_RHO_BINS)
        };
        let (k2, r2, _) = self
            .best_cell(suppressed)
            .ok_or_else(|| Error::DegenerateContour("no second line".into()))?;
        let a = self.line_from_cell(k1, r1);
        let b = self.line_from_cell(k2, r2);
        let needed = (MIN_SUPPORT_FRACTION * self.points.len() as f64).ceil() as usize;
        for line in [&a, &b] {
            if line.support < needed {
                return Err(Error::DegenerateContour(format!(
                    "line at {} deg has {} inliers, needs {}",
                    line.theta_idx, line.support, needed
                )));
            }
        }
        // Order by closeness to the upper half so output is reproducible.
        let upper: Vec<&(f64, f64)> = self.points.iter().filter(|&&(_, y)| y < 0.0).collect();
        if !upper.is_empty() {
            let mean = |l: &HoughLine| {
                upper.iter().map(|&&(x, y)| l.distance(x, y)).sum::<f64>() / upper.len() as f64
            };
            if mean(&b) < mean(&a) {
                return Ok((b, a));
            }
        }
        Ok((a, b))
    }
}

fn tie_key(k: usize, r: i64) -> (usize, i64, usize, i64) {
    // Vote ties are broken by quantities a vertical flip leaves unchanged
    // (the flip maps theta to 180 - theta and negates rho), falling back to
    // scan order only between cells the flip cannot distinguish.
    (k.min(THETA_BINS - k), r.abs(), k, r)
}

/// Per-row distance from the contour to the nearer of the two lines,
/// measured in the accumulator frame.
pub fn distance_signal(
    contour: &ContourSignal,
    lines: &(HoughLine, HoughLine),
    y_origin: f64,
) -> Result<Vec<f64>> {
    if !contour.fully_valid() {
        return Err(Error::DegenerateContour("contour has gap rows".into()));
    }
    let mut s = Vec::with_capacity(contour.len());
    for i in 0..contour.len() {
        let x = contour.x_at(i).unwrap() as f64;
        let y = (contour.y_start() + i) as f64 - y_origin;
        s.push(lines.0.distance(x, y).min(lines.1.distance(x, y)));
    }
    Ok(s)
}

fn sliding_extreme(s: &[f64], w: usize, greater: impl Fn(f64, f64) -> bool) -> Vec<f64> {
    let size = 2 * w + 1;
    let mut deque: VecDeque<usize> = VecDeque::new();
    let mut out = Vec::with_capacity(s.len().saturating_sub(2 * w));
    for j in 0..s.len() {
        while let Some(&back) = deque.back() {
            if !greater(s[back], s[j]) {
                deque.pop_back();
            } else {
                break;
            }
        }
        deque.push_back(j);
        if j + 1 >= size {
            let lo = j + 1 - size;
            while *deque.front().unwrap() < lo {
                deque.pop_front();
            }
            out.push(s[*deque.front().unwrap()]);
        }
    }
    out
}

/// Indices of local maxima: the sample must equal the maximum of its
/// surrounding window and rise at least `prominence` above the window
/// minimum. The window half-width is `round(window_fraction * len)`, at
/// least 1. Samples whose window would leave the signal are never reported,
/// which keeps monotone end ramps from registering as peaks.
pub fn detect_peaks(signal: &[f64], window_fraction: f64, prominence: f64) -> Vec<usize> {
    let n = signal.len();
    let w = ((window_fraction * n as f64).round() as usize).max(1);
    if n < 2 * w + 1 {
        return Vec::new();
    }
    let maxs = sliding_extreme(signal, w, |a, b| a > b);
    let mins = sliding_extreme(signal, w, |a, b| a < b);
    let mut peaks = Vec::new();
    for i in w..n - w {
        if signal[i] == maxs[i - w] && signal[i] - mins[i - w] >= prominence {
            peaks.push(i);
        }
    }
    peaks
}

/// Indices of local minima, same rules as [`detect_peaks`] on the negated
/// signal.
pub fn detect_minima(signal: &[f64], window_fraction: f64, prominence: f64) -> Vec<usize> {
    let negated: Vec<f64> = signal.iter().map(|&v| -v).collect();
    detect_peaks(&negated, window_fraction, prominence)
}

/// Tunables for the line-distance analysis.
#[derive(Debug, Clone)]
pub struct HoughParams {
    /// Peak window half-width as a fraction of the contour length.
    pub peak_window_fraction: f64,
    /// Minimum rise over the window for a peak or minimum to count.
    ///
    /// The distance signal is never clean even on a perfectly straight
    /// edge: theta is quantized to 1 degree and rho to 1 px, so the best
    /// cell can sit up to half a bin off the true line and leave a
    /// residual ramp of roughly `0.0087 * half_stretch_length` px, about
    /// 3 px where straight runs reach 600 px. Wherever the profile then
    /// bends away, the top of that ramp is a genuine local maximum of the
    /// signal. The default floor of 4 px keeps such artifacts out while
    /// staying well under real head relief, which starts near 5 px.
    pub peak_prominence: f64,
    /// Rows around the nose excluded from the head-end search, as a
    /// fraction of the contour length.
    pub nose_exclusion_fraction: f64,
}

impl Default for HoughParams {
    fn default() -> Self {
        HoughParams {
            peak_window_fraction: 0.02,
            peak_prominence: 4.0,
            nose_exclusion_fraction: 0.05,
        }
    }
}

/// Critical points found by the line-distance route.
#[derive(Debug, Clone)]
pub struct HoughDetection {
    /// Start of the cut: the notch on the eye side.
    pub head_begin: Point,
    /// End of the cut on the opposite side.
    pub head_end: Point,
    /// Nose tip, carried through from preprocessing.
    pub nose: Point,
    /// True when the eye-side notch lies toward the bottom of the frame.
    pub eyes_reversed: bool,
    /// The two dominant profile lines, for diagnostics and overlays.
    pub lines: (HoughLine, HoughLine),
    /// Ordinate origin the lines' rho values refer to.
    pub y_origin: f64,
    /// The per-row distance signal the peaks were read from.
    pub signal: Vec<f64>,
}

/// Find head-begin and head-end from the contour's distance to its two
/// dominant lines.
///
/// Head-begin is the distance peak closest to either end of the contour:
/// the eye-side notch is cut deep into an otherwise straight stretch far
/// from the nose. Head-end is the first local minimum on the other side of
/// the nose, skipping a small exclusion zone around the nose itself where
/// the two lines cross.
pub fn critical_points_hough(
    contour: &ContourSignal,
    nose: Point,
    params: &HoughParams,
) -> Result<HoughDetection> {
    if !contour.fully_valid() {
        return Err(Error::DegenerateContour("contour has gap rows".into()));
    }
    let len = contour.len();
    let y_origin = (contour.y_start() + contour.y_end()) as f64 / 2.0;
    let acc = hough_accumulate(contour, y_origin)?;
    let lines = acc.dominant_lines()?;
    let signal = distance_signal(contour, &lines, y_origin)?;
    let peaks = detect_peaks(&signal, params.peak_window_fraction, params.peak_prominence);
    let head_begin_idx = peaks
        .iter()
        .copied()
        .min_by(|&a, &b| {
            let da = a.min(len - 1 - a);
            let db = b.min(len - 1 - b);
            da.cmp(&db)
                .then_with(|| signal[b].total_cmp(&signal[a]))
                .then_with(|| a.cmp(&b))
        })
        .ok_or(Error::DetectionFailure("head_begin"))?;
    let nose_idx = contour
        .index_of_row(nose.y as usize)
        .ok_or_else(|| Error::DegenerateContour("nose row outside contour extent".into()))?;
    if head_begin_idx == nose_idx {
        return Err(Error::DetectionFailure("head_begin"));
    }
    let eyes_reversed = len - 1 - head_begin_idx < head_begin_idx;
    let excl = (params.nose_exclusion_fraction * len as f64).round() as usize;
    let minima = detect_minima(&signal, params.peak_window_fraction, params.peak_prominence);
    let head_end_idx = if head_begin_idx < nose_idx {
        minima
            .iter()
            .copied()
            .filter(|&i| i > nose_idx + excl)
            .min()
    } else {
        minima
            .iter()
            .copied()
            .filter(|&i| i + excl < nose_idx)
            .max()
    }
    .ok_or(Error::DetectionFailure("head_end"))?;
    let point_at = |i: usize| {
        Point::new(
            contour.x_at(i).unwrap() as i32,
            (contour.y_start() + i) as i32,
        )
    };
    Ok(HoughDetection {
        head_begin: point_at(head_begin_idx),
        head_end: point_at(head_end_idx),
        nose,
        eyes_reversed,
        lines,
        y_origin,
        signal,
    })
}
