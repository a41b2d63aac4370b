//! Robot-facing output: pixel-to-millimeter conversion, the XML wire
//! format consumed by the cutting controller, and an overlay renderer for
//! visual inspection.

use std::fmt::Write as _;

use crate::curve::{CurveKind, CuttingCurve};
use crate::error::{Error, Result};
use crate::raster::{GrayImage, Point, RgbRaster};

/// Pixel-to-world mapping for the fixed overhead camera.
#[derive(Debug, Clone, Copy)]
pub struct Calibration {
    pub mm_per_px_x: f64,
    pub mm_per_px_y: f64,
    /// Pixel that maps to the world origin.
    pub origin_px: (f64, f64),
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration {
            mm_per_px_x: 1.0,
            mm_per_px_y: 1.0,
            origin_px: (0.0, 0.0),
        }
    }
}

impl Calibration {
    pub fn validate(&self) -> Result<()> {
        if !(self.mm_per_px_x > 0.0) || !(self.mm_per_px_y > 0.0) {
            return Err(Error::InvalidInput(format!(
                "calibration scales must be positive, got {} x {}",
                self.mm_per_px_x, self.mm_per_px_y
            )));
        }
        if !self.origin_px.0.is_finite() || !self.origin_px.1.is_finite() {
            return Err(Error::InvalidInput("calibration origin must be finite".into()));
        }
        Ok(())
    }

    pub fn to_millimeters(&self, points: &[(f64, f64)]) -> Vec<(f64, f64)> {
        points
            .iter()
            .map(|&(x, y)| {
                (
                    (x - self.origin_px.0) * self.mm_per_px_x,
                    (y - self.origin_px.1) * self.mm_per_px_y,
                )
            })
            .collect()
    }
}

/// Detection method recorded in the output header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    Hull,
    Hough,
}

impl MethodTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            MethodTag::Hull => "hull",
            MethodTag::Hough => "hough",
        }
    }
}

fn curve_tag(kind: CurveKind) -> &'static str {
    match kind {
        CurveKind::Parabola => "parabola",
        CurveKind::Ellipse => "ellipse",
    }
}

/// Serialize a cutting curve, already converted to millimeters, in the
/// controller's XML dialect. The layout is fixed: declaration, one
/// `cuttingCurve` element carrying the method, curve form and point count,
/// then one self-closing `point` per sample with coordinates at two
/// decimals. Output always ends with a newline.
pub fn write_cut_xml(
    points_mm: &[(f64, f64)],
    method: MethodTag,
    kind: CurveKind,
) -> Result<String> {
    let mut out = String::with_capacity(64 + points_mm.len() * 48);
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<cuttingCurve units=\"mm\" method=\"{}\" curve=\"{}\" pointCount=\"{}\">",
        method.as_str(),
        curve_tag(kind),
        points_mm.len()
    );
    for (i, &(x, y)) in points_mm.iter().enumerate() {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Serialization(format!(
                "point {i} is not finite: ({x}, {y})"
            )));
        }
        let _ = writeln!(out, "  <point index=\"{i}\" x=\"{x:.2}\" y=\"{y:.2}\"/>");
    }
    out.push_str("</cuttingCurve>\n");
    Ok(out)
}

/// Parsed form of the XML produced by [`write_cut_xml`].
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCut {
    pub method: String,
    pub curve: String,
    pub points: Vec<(f64, f64)>,
}

fn attr<'a>(line: &'a str, name: &str) -> Result<&'a str> {
    // Require a leading space so `x="` cannot match the tail of `index="`.
    let pat = format!(" {name}=\"");
    let start = line
        .find(&pat)
        .ok_or_else(|| Error::Serialization(format!("missing attribute {name:?} in {line:?}")))?
        + pat.len();
    let end = line[start..]
        .find('"')
        .ok_or_else(|| Error::Serialization(format!("unterminated attribute {name:?}")))?;
    Ok(&line[start..start + end])
}

/// Strict reader for the controller dialect; used to round-trip outputs in
/// tests and to inspect files from the field. Not a general XML parser.
pub fn parse_cut_xml(text: &str) -> Result<ParsedCut> {
    let mut lines = text.lines();
    match lines.next() {
        Some(l) if l.trim() == "<?xml version=\"1.0\" encoding=\"UTF-8\"?>" => {}
        other => {
            return Err(Error::Serialization(format!(
                "expected XML declaration, got {other:?}"
            )))
        }
    }
    let header = lines
        .next()
        .ok_or_else(|| Error::Serialization("missing cuttingCurve element".into()))?;
    if !header.trim_start().starts_with("<cuttingCurve ") {
        return Err(Error::Serialization(format!(
            "expected cuttingCurve element, got {header:?}"
        )));
    }
    let method = attr(header, "method")?.to_string();
    let curve = attr(header, "curve")?.to_string();
    let declared: usize = attr(header, "pointCount")?
        .parse()
        .map_err(|e| Error::Serialization(format!("bad pointCount: {e}")))?;
    let mut points = Vec::with_capacity(declared);
    for line in lines {
        let t = line.trim();
        if t == "</cuttingCurve>" {
            if points.len() != declared {
                return Err(Error::Serialization(format!(
                    "pointCount says {declared} but found {} points",
                    points.len()
                )));
            }
            return Ok(ParsedCut { method, curve, points });
        }
        if !t.starts_with("<point ") {
            return Err(Error::Serialization(format!("unexpected line {t:?}")));
        }
        let idx: usize = attr(t, "index")?
            .parse()
            .map_err(|e| Error::Serialization(format!("bad index: {e}")))?;
        if idx != points.len() {
            return Err(Error::Serialization(format!(
                "point index {idx} out of order, expected {}",
                points.len()
            )));
        }
        let x: f64 = attr(t, "x")?
            .parse()
            .map_err(|e| Error::Serialization(format!("bad x: {e}")))?;
        let y: f64 = attr(t, "y")?
            .parse()
            .map_err(|e| Error::Serialization(format!("bad y: {e}")))?;
        points.push((x, y));
    }
    Err(Error::Serialization("missing closing tag".into()))
}

/// Color of the cut polyline in overlays.
pub const CURVE_COLOR: [u8; 3] = [255, 210, 0];
/// Color of the landmark crosses.
pub const MARKER_COLOR: [u8; 3] = [255, 0, 0];

fn put(raster: &mut RgbRaster, x: i64, y: i64, color: [u8; 3]) {
    if x >= 0 && y >= 0 && (x as usize) < raster.width() && (y as usize) < raster.height() {
        raster.set(x as usize, y as usize, color);
    }
}

fn draw_cross(raster: &mut RgbRaster, p: Point, color: [u8; 3]) {
    for d in -2i64..=2 {
        put(raster, p.x as i64 + d, p.y as i64, color);
        put(raster, p.x as i64, p.y as i64 + d, color);
    }
}

fn draw_segment(raster: &mut RgbRaster, a: (f64, f64), b: (f64, f64), color: [u8; 3]) {
    let steps = (b.0 - a.0).abs().max((b.1 - a.1).abs()).ceil() as usize + 1;
    for i in 0..=steps {
        let t = i as f64 / steps as f64;
        let x = (a.0 + (b.0 - a.0) * t).round() as i64;
        let y = (a.1 + (b.1 - a.1) * t).round() as i64;
        put(raster, x, y, color);
    }
}

/// Paint landmarks and the cut onto a copy of the grayscale frame.
/// Markers go down first and the curve last, so curve pixels are never
/// overdrawn.
pub fn render_overlay(
    gray: &GrayImage,
    markers: &[Point],
    curve: &CuttingCurve,
) -> RgbRaster {
    let mut raster = RgbRaster::from_fn(gray.width(), gray.height(), |x, y| {
        let v = gray.get(x, y);
        [v, v, v]
    })
    .expect("overlay dimensions come from a valid image");
    for &m in markers {
        draw_cross(&mut raster, m, MARKER_COLOR);
    }
    for w in curve.points.windows(2) {
        draw_segment(&mut raster, w[0], w[1], CURVE_COLOR);
    }
    raster
}
