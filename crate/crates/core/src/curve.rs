//! Cutting-curve synthesis. Given the two notch points and the nose, build
//! a smooth planar curve x = f(y) joining the notches, bowed either into
//! the body (the usual cut) or toward the nose.

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, Point};

/// Fewest samples a curve is ever emitted with; short spans are upsampled.
const MIN_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Parabola,
    Ellipse,
}

/// Which way the curve bows, relative to the nose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bulge {
    /// Bow away from the nose, into the body: removes the least flesh.
    Body,
    /// Bow toward the nose.
    Nose,
}

#[derive(Debug, Clone)]
pub enum CurveParams {
    /// x = a y^2 + b y + c
    Parabola { a: f64, b: f64, c: f64 },
    Ellipse {
        center: (f64, f64),
        semi_major: f64,
        semi_minor: f64,
    },
}

impl CurveParams {
    /// Eccentricity, for the elliptical form.
    pub fn eccentricity(&self) -> Option<f64> {
        match self {
            CurveParams::Ellipse {
                semi_major,
                semi_minor,
                ..
            } => Some((1.0 - (semi_minor / semi_major).powi(2)).sqrt()),
            CurveParams::Parabola { .. } => None,
        }
    }
}

/// A sampled cutting curve, ordered from the head-begin ending to the
/// head-end ending.
#[derive(Debug, Clone)]
pub struct CuttingCurve {
    pub kind: CurveKind,
    pub bulge: Bulge,
    pub params: CurveParams,
    /// (x, y) samples in pixels, monotone in y.
    pub points: Vec<(f64, f64)>,
    /// True when the analytic curve leaves the frame horizontally.
    pub clipped: bool,
}

fn sample_rows(y_from: i32, y_to: i32) -> Vec<f64> {
    let span = y_from.abs_diff(y_to) as usize;
    if span + 1 >= MIN_SAMPLES {
        let step: i32 = if y_to >= y_from { 1 } else { -1 };
        let mut ys = Vec::with_capacity(span + 1);
        let mut y = y_from;
        loop {
            ys.push(y as f64);
            if y == y_to {
                break;
            }
            y += step;
        }
        ys
    } else {
        (0..MIN_SAMPLES)
            .map(|i| {
                let t = i as f64 / (MIN_SAMPLES - 1) as f64;
                y_from as f64 + (y_to as f64 - y_from as f64) * t
            })
            .collect()
    }
}

/// Parabola through both notches and a third point placed three notch-nose
/// gaps behind the nose (or in front of it for a nose-side bulge). The gap
/// `d` is the larger horizontal distance from a notch to the nose.
///
/// Evaluation uses the Newton form anchored at the notch rows, which keeps
/// the fit stable far from the origin; the standard-form coefficients are
/// reported in the parameters.
pub fn parabola_curve(
    head_begin: Point,
    head_end: Point,
    nose: Point,
    bulge: Bulge,
    frame_width: usize,
) -> Result<CuttingCurve> {
    let (y1, y2, y3) = (head_begin.y, head_end.y, nose.y);
    if y1 == y2 || y1 == y3 || y2 == y3 {
        return Err(Error::SingularSystem(format!(
            "rows {y1}, {y2}, {y3} do not define a parabola in y"
        )));
    }
    let d = (nose.x - head_begin.x)
        .abs()
        .max((nose.x - head_end.x).abs()) as f64;
    let x3 = match bulge {
        Bulge::Body => nose.x as f64 - 3.0 * d,
        Bulge::Nose => nose.x as f64 + 3.0 * d,
    };
    let (x1, x2) = (head_begin.x as f64, head_end.x as f64);
    let (fy1, fy2, fy3) = (y1 as f64, y2 as f64, y3 as f64);
    let c1 = (x2 - x1) / (fy2 - fy1);
    let c23 = (x3 - x2) / (fy3 - fy2);
    let c2 = (c23 - c1) / (fy3 - fy1);
    let eval = |y: f64| x1 + c1 * (y - fy1) + c2 * (y - fy1) * (y - fy2);
    let points = sample_rows(y1, y2)
        .into_iter()
        .map(|y| (eval(y), y))
        .collect();
    let clipped = x3 < 0.0 || x3 >= frame_width as f64;
    Ok(CuttingCurve {
        kind: CurveKind::Parabola,
        bulge,
        params: CurveParams::Parabola {
            a: c2,
            b: c1 - c2 * (fy1 + fy2),
            c: x1 - c1 * fy1 + c2 * fy1 * fy2,
        },
        points,
        clipped,
    })
}

/// Put both curve endings on one column so an elliptical arc can close on
/// them.
///
/// The notch nearer the nose (larger x) is trusted; the other ending is
/// moved onto that column, at the boundary crossing found by walking the
/// column from the nose row out toward the far side until the mask runs
/// out. When the notches already agree within one pixel, both rows are kept
/// and only the abscissa is unified.
pub fn align_endings(
    mask: &BinaryMask,
    head_begin: Point,
    head_end: Point,
    nose: Point,
) -> Result<(Point, Point)> {
    let x_true = head_begin.x.max(head_end.x);
    if (head_begin.x - head_end.x).abs() <= 1 {
        return Ok((
            Point::new(x_true, head_begin.y),
            Point::new(x_true, head_end.y),
        ));
    }
    let substituted = if head_begin.x < head_end.x {
        head_begin
    } else {
        head_end
    };
    if substituted.y == nose.y {
        return Err(Error::AlignmentFailure(
            "ending to substitute sits on the nose row".into(),
        ));
    }
    let step: i32 = if substituted.y < nose.y { -1 } else { 1 };
    let (w, h) = (mask.width() as i32, mask.height() as i32);
    if x_true < 0 || x_true >= w || nose.y < 0 || nose.y >= h {
        return Err(Error::AlignmentFailure(format!(
            "column {x_true} at nose row {} is outside the mask",
            nose.y
        )));
    }
    if !mask.get(x_true as usize, nose.y as usize) {
        return Err(Error::AlignmentFailure(format!(
            "column {x_true} is already outside the specimen at the nose row"
        )));
    }
    let mut y = nose.y;
    let crossing = loop {
        let next = y + step;
        if next < 0 || next >= h {
            break None;
        }
        if !mask.get(x_true as usize, next as usize) {
            break Some(y);
        }
        y = next;
    };
    let y_sub = crossing.ok_or_else(|| {
        Error::AlignmentFailure(format!(
            "column {x_true} never leaves the specimen toward row {}",
            substituted.y
        ))
    })?;
    let aligned = Point::new(x_true, y_sub);
    if head_begin.x < head_end.x {
        Ok((aligned, Point::new(x_true, head_end.y)))
    } else {
        Ok((Point::new(x_true, head_begin.y), aligned))
    }
}

/// Half-ellipse between two endings on a shared column. The vertical span
/// fixes the semi-minor axis; the semi-major axis is twice that, giving a
/// flat arc with eccentricity sqrt(3)/2. The arc bows left of the column
/// for a body bulge and right of it toward the nose.
pub fn ellipse_curve(
    endings: (Point, Point),
    bulge: Bulge,
    frame_width: usize,
) -> Result<CuttingCurve> {
    let (p1, p2) = endings;
    if p1.x != p2.x {
        return Err(Error::InvalidInput(format!(
            "ellipse endings must share a column, got {} and {}",
            p1.x, p2.x
        )));
    }
    if p1.y == p2.y {
        return Err(Error::DegenerateGeometry(
            "ellipse endings on the same row".into(),
        ));
    }
    let cx = p1.x as f64;
    let cy = (p1.y as f64 + p2.y as f64) / 2.0;
    let semi_minor = (p2.y as f64 - p1.y as f64).abs() / 2.0;
    let semi_major = 2.0 * semi_minor;
    let sign = match bulge {
        Bulge::Body => -1.0,
        Bulge::Nose => 1.0,
    };
    let points: Vec<(f64, f64)> = sample_rows(p1.y, p2.y)
        .into_iter()
        .map(|y| {
            let t = (y - cy) / semi_minor;
            let x = cx + sign * semi_major * (1.0 - t * t).max(0.0).sqrt();
            (x, y)
        })
        .collect();
    let clipped = match bulge {
        Bulge::Body => cx - semi_major < 0.0,
        Bulge::Nose => cx + semi_major >= frame_width as f64,
    };
    Ok(CuttingCurve {
        kind: CurveKind::Ellipse,
        bulge,
        params: CurveParams::Ellipse {
            center: (cx, cy),
            semi_major,
            semi_minor,
        },
        points,
        clipped,
    })
}
