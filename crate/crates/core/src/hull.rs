//! Convex-hull route to the critical points: where the head profile falls
//! short of its own convex hull, a notch has been cut into it. The deepest
//! deficiency above the nose row and the deepest below it are the two cut
//! landmarks.

use crate::contour::ContourSignal;
use crate::error::{Error, Result};
use crate::raster::Point;

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.x as i64 - o.x as i64) * (b.y as i64 - o.y as i64)
        - (a.y as i64 - o.y as i64) * (b.x as i64 - o.x as i64)
}

/// Convex hull by monotone chain with strict turns: no vertex lies on the
/// segment between its neighbors. Vertices come back in counterclockwise
/// order (x right, y up) starting from the smallest-y vertex, ties broken
/// toward smaller x. Inputs that do not span two dimensions are rejected.
pub fn convex_hull(points: &[Point]) -> Result<Vec<Point>> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by_key(|p| (p.x, p.y));
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::DegenerateGeometry(format!(
            "{} distinct points cannot span a hull",
            pts.len()
        )));
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::DegenerateGeometry("all points are collinear".into()));
    }
    let start = lower
        .iter()
        .enumerate()
        .min_by_key(|(_, p)| (p.y, p.x))
        .map(|(i, _)| i)
        .unwrap();
    lower.rotate_left(start);
    Ok(lower)
}

/// Rightmost boundary abscissa of the hull at ordinate `y`, rounded to the
/// nearest pixel; None outside the hull's vertical span. Interpolation uses
/// exact integer differences so a vertically flipped hull gives bitwise
/// identical values.
pub fn hull_rightmost(hull: &[Point], y: i64) -> Option<i64> {
    let mut best: Option<f64> = None;
    let n = hull.len();
    for i in 0..n {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        let (ya, yb) = (a.y as i64, b.y as i64);
        if y < ya.min(yb) || y > ya.max(yb) {
            continue;
        }
        let x = if ya == yb {
            a.x.max(b.x) as f64
        } else {
            let num = (b.x as i64 - a.x as i64) * (y - ya);
            let den = yb - ya;
            a.x as f64 + num as f64 / den as f64
        };
        best = Some(best.map_or(x, |cur: f64| cur.max(x)));
    }
    best.map(|x| x.round() as i64)
}

/// Per-row shortfall of the contour against its hull; never negative.
pub fn hull_deficiency(contour: &ContourSignal, hull: &[Point]) -> Result<Vec<f64>> {
    if !contour.fully_valid() {
        return Err(Error::DegenerateContour("contour has gap rows".into()));
    }
    let mut diff = Vec::with_capacity(contour.len());
    for i in 0..contour.len() {
        let y = (contour.y_start() + i) as i64;
        let hx = hull_rightmost(hull, y).ok_or_else(|| {
            Error::DegenerateGeometry(format!("hull does not cover row {y}"))
        })?;
        let d = hx - contour.x_at(i).unwrap();
        debug_assert!(d >= 0, "hull left of contour at row {y}");
        diff.push(d as f64);
    }
    Ok(diff)
}

/// Critical points found by the hull-deficiency route.
#[derive(Debug, Clone)]
pub struct HullDetection {
    /// Deepest deficiency above the nose row.
    pub head_begin: Point,
    /// Deepest deficiency below the nose row.
    pub head_end: Point,
    /// Nose tip, carried through from preprocessing.
    pub nose: Point,
    /// True when the notch above the nose sits farther right than the one
    /// below, i.e. the eye side points down.
    pub eyes_reversed: bool,
    /// Hull vertices, for diagnostics and overlays.
    pub hull: Vec<Point>,
    /// The per-row deficiency the notches were read from.
    pub deficiency: Vec<f64>,
}

/// Locate the two notches as the deepest hull deficiencies on either side
/// of the nose row. A side whose deficiency never reaches `min_notch_depth`
/// pixels has no usable notch and fails detection.
pub fn critical_points_hull(
    contour: &ContourSignal,
    nose: Point,
    min_notch_depth: f64,
) -> Result<HullDetection> {
    let hull = convex_hull(&contour.points())?;
    let deficiency = hull_deficiency(contour, &hull)?;
    let nose_idx = contour
        .index_of_row(nose.y as usize)
        .ok_or_else(|| Error::DegenerateContour("nose row outside contour extent".into()))?;
    let deepest = |lo: usize, hi: usize, which: &'static str| -> Result<usize> {
        let idx = (lo..hi)
            .max_by(|&a, &b| {
                deficiency[a].total_cmp(&deficiency[b]).then_with(|| {
                    // tie: prefer the row nearer the nose
                    let da = a.abs_diff(nose_idx);
                    let db = b.abs_diff(nose_idx);
                    db.cmp(&da)
                })
            })
            .ok_or(Error::DetectionFailure(which))?;
        if deficiency[idx] < min_notch_depth {
            return Err(Error::DetectionFailure(which));
        }
        Ok(idx)
    };
    let up = deepest(0, nose_idx, "head_begin")?;
    let down = deepest(nose_idx + 1, contour.len(), "head_end")?;
    let point_at = |i: usize| {
        Point::new(
            contour.x_at(i).unwrap() as i32,
            (contour.y_start() + i) as i32,
        )
    };
    let head_begin = point_at(up);
    let head_end = point_at(down);
    Ok(HullDetection {
        eyes_reversed: head_begin.x > head_end.x,
        head_begin,
        head_end,
        nose,
        hull,
        deficiency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(x: i32, y: i32) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn square_hull_drops_edge_and_interior_points() {
        let pts = vec![
            p(0, 0),
            p(4, 0),
            p(4, 4),
            p(0, 4),
            p(2, 0), // on an edge
            p(2, 2), // interior
            p(0, 2),
        ];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull, vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4)]);
    }

    #[test]
    fn hull_starts_at_the_lowest_then_leftmost_vertex() {
        let pts = vec![p(3, 7), p(-2, 1), p(5, 1), p(0, 9)];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull[0], p(-2, 1));
        // counterclockwise with y up: next vertex heads right
        assert_eq!(hull[1], p(5, 1));
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(convex_hull(&[p(0, 0), p(1, 1)]).is_err());
        assert!(convex_hull(&[p(0, 0), p(2, 2), p(5, 5), p(9, 9)]).is_err());
        assert!(convex_hull(&[p(1, 1), p(1, 1), p(1, 1)]).is_err());
    }

    #[test]
    fn every_input_point_lies_inside_the_hull() {
        let mut rng = ChaCha8Rng::seed_from_u64(313);
        for _ in 0..50 {
            let pts: Vec<Point> = (0..rng.random_range(3..60))
                .map(|_| p(rng.random_range(-40..40), rng.random_range(-40..40)))
                .collect();
            match convex_hull(&pts) {
                Ok(hull) => {
                    for &q in &pts {
                        for i in 0..hull.len() {
                            let a = hull[i];
                            let b = hull[(i + 1) % hull.len()];
                            assert!(cross(a, b, q) >= 0, "{:?} outside edge {:?}-{:?}", q, a, b);
                        }
                    }
                    // hull of hull is itself
                    assert_eq!(convex_hull(&hull).unwrap(), hull);
                }
                Err(Error::DegenerateGeometry(_)) => {
                    // acceptable only when the distinct points are collinear
                    let mut distinct = pts.clone();
                    distinct.sort_by_key(|q| (q.x, q.y));
                    distinct.dedup();
                    let degenerate = distinct.len() < 3
                        || distinct[2..]
                            .iter()
                            .all(|&q| cross(distinct[0], distinct[1], q) == 0);
                    assert!(degenerate, "hull refused a non-degenerate set {:?}", pts);
                }
                Err(e) => panic!("unexpected error {:?}", e),
            }
        }
    }

    #[test]
    fn rightmost_interpolates_between_vertices() {
        // diamond centered at (10, 10), radius 4
        let hull = convex_hull(&[p(10, 6), p(14, 10), p(10, 14), p(6, 10)]).unwrap();
        assert_eq!(hull_rightmost(&hull, 6), Some(10));
        assert_eq!(hull_rightmost(&hull, 8), Some(12));
        assert_eq!(hull_rightmost(&hull, 10), Some(14));
        assert_eq!(hull_rightmost(&hull, 13), Some(11));
        assert_eq!(hull_rightmost(&hull, 5), None);
        assert_eq!(hull_rightmost(&hull, 15), None);
    }

    #[test]
    fn rightmost_handles_horizontal_top_and_bottom_edges() {
        let hull = convex_hull(&[p(0, 0), p(6, 0), p(6, 4), p(0, 4)]).unwrap();
        assert_eq!(hull_rightmost(&hull, 0), Some(6));
        assert_eq!(hull_rightmost(&hull, 4), Some(6));
        assert_eq!(hull_rightmost(&hull, 2), Some(6));
    }

    /// Wedge profile with a notch on the upper edge and a bulge-then-dip on
    /// the lower edge; same construction as the line-distance tests.
    fn landmark_contour() -> Vec<i64> {
        let apex = 120usize;
        (0..240usize)
            .map(|i| {
                let base = if i <= apex {
                    300.0 - (apex - i) as f64 * 0.6
                } else {
                    300.0 - (i - apex) as f64 * 0.8
                };
                let mut v = base;
                let d = (i as f64 - 40.0).abs();
                if d <= 6.0 {
                    v -= 12.0 * (1.0 - d / 6.0);
                }
                if (130..=160).contains(&i) {
                    let t = (i - 130) as f64 / 30.0;
                    v += 40.0 * t * (1.0 - t);
                }
                if (160..=176).contains(&i) {
                    let t = (i - 160) as f64 / 16.0;
                    v -= 32.0 * t * (1.0 - t);
                }
                v.round() as i64
            })
            .collect()
    }

    #[test]
    fn deficiency_is_nonnegative_and_zero_on_hull_vertices() {
        let contour = ContourSignal::from_parts(10, landmark_contour());
        let hull = convex_hull(&contour.points()).unwrap();
        let diff = hull_deficiency(&contour, &hull).unwrap();
        assert!(diff.iter().all(|&d| d >= 0.0));
        // the apex is on the hull
        assert_eq!(diff[120], 0.0);
        // the notch bottom is well off it
        assert!(diff[40] >= 11.0, "notch depth {}", diff[40]);
    }

    #[test]
    fn notches_are_found_on_both_sides_of_the_nose() {
        let xs = landmark_contour();
        let contour = ContourSignal::from_parts(0, xs.clone());
        let nose = Point::new(xs[120] as i32, 120);
        let det = critical_points_hull(&contour, nose, 2.0).unwrap();
        assert_eq!(det.head_begin.y, 40);
        assert!(
            (164..=171).contains(&(det.head_end.y as usize)),
            "head_end at {}",
            det.head_end.y
        );
        assert!(!det.eyes_reversed);

        // flipped: labels swap sides, the flag toggles
        let mut rev = xs.clone();
        rev.reverse();
        let flipped = ContourSignal::from_parts(0, rev);
        let nose_f = Point::new(nose.x, (xs.len() - 1 - 120) as i32);
        let det_f = critical_points_hull(&flipped, nose_f, 2.0).unwrap();
        assert!(det_f.eyes_reversed);
        assert_eq!(det_f.head_begin.y as usize, xs.len() - 1 - det.head_end.y as usize);
        assert_eq!(det_f.head_end.y as usize, xs.len() - 1 - det.head_begin.y as usize);
        assert_eq!(det_f.head_begin.x, det.head_end.x);
        assert_eq!(det_f.head_end.x, det.head_begin.x);
    }

    #[test]
    fn a_smooth_side_fails_with_the_missing_point_named() {
        // pure wedge, no notches at all
        let apex = 100usize;
        let xs: Vec<i64> = (0..200)
            .map(|i| {
                if i <= apex {
                    (250 - (apex - i)) as i64
                } else {
                    (250 - (i - apex) * 2) as i64
                }
            })
            .collect();
        let contour = ContourSignal::from_parts(0, xs.clone());
        let nose = Point::new(xs[apex] as i32, apex as i32);
        match critical_points_hull(&contour, nose, 2.0) {
            Err(Error::DetectionFailure("head_begin")) => {}
            other => panic!("expected DetectionFailure(head_begin), got {:?}", other.map(|_| ())),
        }
    }
}
