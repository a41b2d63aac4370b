//! Synthetic flatfish scenes with exact ground truth.
//!
//! Real captures are scarce and carry no labels, so the regression corpus
//! is generated: a fish-shaped silhouette on a bright gradient table, with
//! procedural skin texture, a few dark stains on the table, and the two
//! head landmarks placed analytically. The right-hand profile is built
//! from explicit curve pieces, which makes every landmark position exact
//! by construction:
//!
//! * a straight upper head edge carrying a triangular cut (the eye-side
//!   landmark),
//! * a cheek bulge and shallow gill valley below the nose (the blind-side
//!   landmark),
//! * long concave tapers to the tips, and a superellipse back boundary.
//!
//! One marker pixel extends the nose by a single column so the rightmost
//! point of the silhouette is unique under rounding. Hidden-notch scenes
//! (no blind-side relief at all) instead get an integer apex with steep
//! approaches, since a marker overhang next to a dead-straight edge would
//! itself read as a faint concavity.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage, Point};

/// Canvas width of every generated scene.
pub const SCENE_WIDTH: usize = 3000;
/// Canvas height of every generated scene; matches the pipeline's working
/// resolution so scaling is the identity and landmarks stay exact.
pub const SCENE_HEIGHT: usize = 2000;

/// Rows of recovery from the gill valley back to the straight lower edge.
const VALLEY_RECOVERY_ROWS: i64 = 40;
/// Straight run between the cut shoulder and the upper taper.
const UPPER_SHOULDER_ROWS: i64 = 60;

/// Fully determined silhouette geometry. All offsets are relative to the
/// head center `(cx, cy)`; the nose points toward +x and `dy` grows
/// downward.
#[derive(Debug, Clone)]
pub struct SpecimenSpec {
    pub cx: i64,
    pub cy: i64,
    /// Horizontal semi-axis of the superellipse body boundary.
    pub body_a: f64,
    /// Vertical semi-extent of the silhouette.
    pub body_b: i64,
    /// Superellipse exponent of the back boundary.
    pub superellipse_n: f64,
    /// Nose extension beyond the body semi-axis.
    pub nose_extent: f64,
    /// Slope of the straight upper head edge (px of x per row).
    pub upper_slope: f64,
    /// Row offset of the triangular cut center above the nose row.
    pub cut_offset: i64,
    /// Depth of the triangular cut, in pixels.
    pub cut_depth: i64,
    /// Half-width of the triangular cut, in rows.
    pub cut_half_width: i64,
    /// Slope of the straight lower head edge.
    pub lower_slope: f64,
    /// Row offset of the gill valley below the nose row.
    pub valley_offset: i64,
    /// Depth of the gill valley below the lower edge line.
    pub valley_depth: f64,
    /// Height of the cheek bulge that precedes the valley.
    pub cheek_height: f64,
    /// Rows of straight lower edge between valley recovery and the taper.
    pub straight_rows: i64,
    /// Suppress the cheek/valley relief entirely: the blind-side landmark
    /// is genuinely absent and detection is expected to fail.
    pub hidden_lower_notch: bool,
    /// Seed for the procedural skin texture.
    pub texture_seed: u64,
}

impl SpecimenSpec {
    /// Abscissa of the nose apex before the marker pixel.
    fn x_nose(&self) -> f64 {
        self.cx as f64 + self.body_a + self.nose_extent
    }

    /// First row offset of the upper taper.
    fn upper_taper_start(&self) -> i64 {
        self.cut_offset + self.cut_half_width + UPPER_SHOULDER_ROWS
    }

    /// First row offset of the lower taper.
    fn lower_taper_start(&self) -> i64 {
        self.valley_offset + VALLEY_RECOVERY_ROWS + self.straight_rows
    }

    fn upper_taper_coeff(&self) -> f64 {
        let span = (self.body_b - self.upper_taper_start()) as f64;
        (self.body_a + self.nose_extent - 6.0 - self.upper_slope * self.body_b as f64)
            / (span * span)
    }

    fn lower_taper_coeff(&self) -> f64 {
        let span = (self.body_b - self.lower_taper_start()) as f64;
        (self.body_a + self.nose_extent - 6.0 - self.lower_slope * self.body_b as f64)
            / (span * span)
    }

    /// Rightmost silhouette abscissa at signed row offset `dy` (positive
    /// downward), or None beyond the body.
    pub fn right_profile(&self, dy: i64) -> Option<i64> {
        if dy.abs() > self.body_b {
            return None;
        }
        let xn = self.x_nose();
        if dy == 0 {
            // The marker pixel keeps the apex unique after rounding when the
            // approach slopes may be shallow. Hidden-notch scenes skip it:
            // their apex must be a plain convex corner (the marker would sit
            // one pixel proud of the straight lower edge and the convex hull
            // would read that overhang as a shallow concavity), so their
            // sampler guarantees uniqueness with integer xn and slopes
            // above one half instead.
            let marker = if self.hidden_lower_notch { 0 } else { 1 };
            return Some(xn.round() as i64 + marker);
        }
        let x = if dy < 0 {
            let u = (-dy) as f64;
            let mut x = xn - self.upper_slope * u;
            if -dy <= self.upper_taper_start() {
                let t = 1.0 - (-dy - self.cut_offset).abs() as f64 / self.cut_half_width as f64;
                if t > 0.0 {
                    x -= self.cut_depth as f64 * t;
                }
            } else {
                let over = u - self.upper_taper_start() as f64;
                x -= self.upper_taper_coeff() * over * over;
            }
            x
        } else {
            let v = dy as f64;
            let base = xn - self.lower_slope * v;
            if dy <= self.lower_taper_start() {
                if self.hidden_lower_notch {
                    base
                } else if dy <= self.valley_offset {
                    let t = v / self.valley_offset as f64;
                    base + 4.0 * self.cheek_height * t * (1.0 - t) - self.valley_depth * t
                } else if dy <= self.valley_offset + VALLEY_RECOVERY_ROWS {
                    let q = (v - self.valley_offset as f64) / VALLEY_RECOVERY_ROWS as f64;
                    base - self.valley_depth * (1.0 - q) * (1.0 - q)
                } else {
                    base
                }
            } else {
                let over = v - self.lower_taper_start() as f64;
                base - self.lower_taper_coeff() * over * over
            }
        };
        Some(x.round() as i64)
    }

    /// Leftmost silhouette abscissa at signed row offset `dy`.
    pub fn left_profile(&self, dy: i64) -> Option<i64> {
        if dy.abs() > self.body_b {
            return None;
        }
        let t = (dy.abs() as f64 / self.body_b as f64).powf(self.superellipse_n);
        let reach = self.body_a * (1.0 - t).powf(1.0 / self.superellipse_n);
        Some((self.cx as f64 - reach).round() as i64)
    }

    /// Landmark positions implied by the geometry, in canvas coordinates.
    pub fn ground_truth(&self) -> GroundTruth {
        let marker = if self.hidden_lower_notch { 0 } else { 1 };
        let nose_x = self.x_nose().round() as i64 + marker;
        let upper_x = self
            .right_profile(-self.cut_offset)
            .expect("cut row is inside the body");
        // For a hidden notch the relief is flat; record where the fold
        // would sit so evaluators can confirm nothing latches onto it.
        let lower_x =
            (self.x_nose() - self.lower_slope * self.valley_offset as f64 - self.valley_depth)
                .round() as i64;
        GroundTruth {
            nose: Point::new(nose_x as i32, self.cy as i32),
            notch_upper: Point::new(upper_x as i32, (self.cy - self.cut_offset) as i32),
            notch_lower: Point::new(lower_x as i32, (self.cy + self.valley_offset) as i32),
            eyes_reversed: false,
            mirrored: false,
            hidden_lower_notch: self.hidden_lower_notch,
        }
    }

    /// Fill the silhouette into a fresh mask.
    pub fn rasterize(&self) -> Result<BinaryMask> {
        let (w, h) = (SCENE_WIDTH as i64, SCENE_HEIGHT as i64);
        let mut mask = BinaryMask::new(SCENE_WIDTH, SCENE_HEIGHT)?;
        for y in 0..h {
            let dy = y - self.cy;
            let (Some(xl), Some(xr)) = (self.left_profile(dy), self.right_profile(dy)) else {
                continue;
            };
            debug_assert!(xl < xr, "profiles crossed at dy={dy}: {xl} vs {xr}");
            for x in xl.max(0)..=xr.min(w - 1) {
                mask.set(x as usize, y as usize, true);
            }
        }
        Ok(mask)
    }
}

/// Labeled landmark set carried alongside each generated scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundTruth {
    pub nose: Point,
    /// Landmark on the upper head edge (smaller y).
    pub notch_upper: Point,
    /// Landmark on the lower head edge (larger y).
    pub notch_lower: Point,
    /// True when the eye-side cut sits below the nose row.
    pub eyes_reversed: bool,
    /// True when the scene was flipped top-to-bottom after rendering.
    pub mirrored: bool,
    /// True when the blind-side fold was suppressed and detectors are
    /// expected to fail rather than invent a landmark.
    pub hidden_lower_notch: bool,
}

impl GroundTruth {
    fn flipped(self, height: usize) -> GroundTruth {
        let f = |p: Point| Point::new(p.x, height as i32 - 1 - p.y);
        GroundTruth {
            nose: f(self.nose),
            notch_upper: f(self.notch_lower),
            notch_lower: f(self.notch_upper),
            eyes_reversed: !self.eyes_reversed,
            mirrored: !self.mirrored,
            hidden_lower_notch: self.hidden_lower_notch,
        }
    }
}

/// A rendered capture: grayscale frame, exact silhouette, landmarks.
#[derive(Debug, Clone)]
pub struct Scene {
    pub image: GrayImage,
    pub mask: BinaryMask,
    pub truth: GroundTruth,
}

impl Scene {
    /// Top-to-bottom mirror of the whole capture, bit-exact.
    pub fn flipped(&self) -> Scene {
        Scene {
            image: self.image.flip_vertical(),
            mask: self.mask.flip_vertical(),
            truth: self.truth.flipped(self.image.height()),
        }
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn texel(seed: u64, x: usize, y: usize) -> u64 {
    mix64(
        seed ^ (x as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
            ^ (y as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F),
    )
}

/// Draw silhouette parameters until every placement constraint holds.
///
/// Most constraints keep the two landmarks where the detectors around this
/// generator expect them: the cut must sit farther from the nose row than
/// the valley but closer to its end of the head window, the straight edges
/// must keep long inlier runs inside the analysis window, and the lower
/// landmark must end up strictly nearer the nose than the upper one so the
/// orientation flag is well defined.
pub fn sample_spec(rng: &mut impl Rng, hidden_lower_notch: bool) -> Result<SpecimenSpec> {
    for _ in 0..100 {
        let cx = rng.random_range(1050..=1150);
        let cy = rng.random_range(950..=1050);
        // Hidden-notch specimens drop the nose marker pixel, so apex
        // uniqueness has to come from the geometry itself: an integer apex
        // abscissa with both approach slopes above one half rounds strictly
        // below the apex on every neighboring row. That also caps hull
        // slack along the straight blind side at one pixel, keeping such
        // scenes below the concavity floor no matter the draw.
        let (body_a, nose_extent) = if hidden_lower_notch {
            (
                rng.random_range(620..=860) as f64,
                rng.random_range(260..=380) as f64,
            )
        } else {
            (
                rng.random_range(620.0..=860.0),
                rng.random_range(260.0..=380.0),
            )
        };
        let body_b = rng.random_range(680..=780);
        let superellipse_n = rng.random_range(1.8..=2.6);
        let (valley_offset, lower_slope, cut_depth) = if hidden_lower_notch {
            (
                rng.random_range(190..=230),
                rng.random_range(0.85..=0.95),
                rng.random_range(16..=22),
            )
        } else {
            (
                rng.random_range(160..=230),
                rng.random_range(0.75..=0.95),
                rng.random_range(16..=30),
            )
        };
        // The fold must clear the line detector's noise floor (quantized
        // voting leaves ~3 px of structured residual on long straight
        // stretches, hence the 4 px default prominence) even when the
        // fitted line sits a couple of pixels inside the body.
        let valley_depth = rng.random_range(9.0..=13.0);
        // The cheek height is coupled to the other lower-edge parameters:
        // tall enough that the contour re-crosses the edge line within 15
        // rows of the fold (the recorded landmark must stay representative
        // of the detection site), yet short enough that the cheek crest
        // stays strictly left of the nose apex, which must remain the
        // silhouette's unique rightmost point.
        let cheek_min = valley_offset as f64 * valley_depth / 60.0;
        let cheek_max =
            (lower_slope * valley_offset as f64 + valley_depth - 8.0) / 4.0;
        if cheek_min >= cheek_max {
            continue;
        }
        let cheek_height = rng.random_range(cheek_min..=cheek_max);
        let cut_half_width = rng.random_range(18..=30);
        let depth_gap = rng.random_range(2.0..=8.0);
        let straight_max = 380.min(body_b - valley_offset - 70);
        let straight_rows = rng.random_range(260..=straight_max);

        // place the cut so its floor sits `depth_gap` px left of the valley
        let reach = lower_slope * valley_offset as f64 + valley_depth + depth_gap
            - cut_depth as f64;
        let min_upper = if hidden_lower_notch { 0.51 } else { 0.30 };
        let slope_lo = (reach / (valley_offset + 160) as f64).max(min_upper);
        let slope_hi = (reach / (valley_offset + 60) as f64).min(0.75);
        if slope_lo >= slope_hi {
            continue;
        }
        let upper_slope = rng.random_range(slope_lo..=slope_hi);
        let cut_offset = (reach / upper_slope).round() as i64;
        if cut_offset < valley_offset + 55 || cut_offset > valley_offset + 165 {
            continue;
        }

        let spec = SpecimenSpec {
            cx,
            cy,
            body_a,
            body_b,
            superellipse_n,
            nose_extent,
            upper_slope,
            cut_offset,
            cut_depth,
            cut_half_width,
            lower_slope,
            valley_offset,
            valley_depth,
            cheek_height,
            straight_rows,
            hidden_lower_notch,
            texture_seed: rng.random(),
        };
        if spec_is_feasible(&spec) {
            return Ok(spec);
        }
    }
    Err(Error::InvalidInput(
        "specimen sampling failed to satisfy placement constraints".into(),
    ))
}

/// Check the rasterized consequences of a parameter draw.
fn spec_is_feasible(spec: &SpecimenSpec) -> bool {
    if spec.hidden_lower_notch
        && (spec.upper_slope < 0.51
            || spec.lower_slope < 0.51
            || spec.x_nose().fract() != 0.0)
    {
        // markerless apex: uniqueness depends on these (see sample_spec)
        return false;
    }
    let margin = spec.body_a + spec.nose_extent - 6.0;
    if spec.body_b - spec.upper_taper_start() < 30 {
        return false;
    }
    if margin - spec.upper_slope * (spec.body_b as f64) < 26.0 {
        return false;
    }
    if margin - spec.lower_slope * (spec.body_b as f64) < 26.0 {
        return false;
    }

    // orientation flag needs the lower landmark strictly nearer the nose
    let truth = spec.ground_truth();
    if truth.notch_lower.x - truth.notch_upper.x < 1 {
        return false;
    }

    // head window extent: columns [nose.x - half the silhouette width, nose.x]
    let nose_x = truth.nose.x as i64;
    let x_min = spec.left_profile(0).expect("center row exists");
    let span = (0.5 * (nose_x - x_min + 1) as f64).round() as i64;
    let x0 = (nose_x - span).max(0);
    let cross = |sign: i64| -> i64 {
        let mut off = 0;
        while off + 1 <= spec.body_b {
            match spec.right_profile(sign * (off + 1)) {
                Some(x) if x >= x0 => off += 1,
                _ => break,
            }
        }
        off
    };
    let u_top = cross(-1);
    let v_bot = cross(1);
    let rows = (u_top + v_bot + 1) as f64;

    // straight sections must live fully inside the window, with room over
    // the 10% support floor
    if u_top < spec.upper_taper_start() + 20 {
        return false;
    }
    if v_bot < spec.lower_taper_start() + 5 {
        return false;
    }
    // the cut must be the landmark nearest a window edge...
    if u_top - spec.cut_offset + 8 >= v_bot - spec.valley_offset {
        return false;
    }
    // ...yet far enough inside for windowed peak detection
    let peak_window = (0.02 * rows).round() as i64;
    if u_top - spec.cut_offset < peak_window + 5 {
        return false;
    }
    // the valley edge crossing must clear the nose exclusion zone
    if !spec.hidden_lower_notch {
        let v_cross = spec.valley_offset as f64
            * (1.0 - spec.valley_depth / (4.0 * spec.cheek_height));
        let exclusion = (0.05 * rows).round();
        if v_cross <= exclusion + 10.0 {
            return false;
        }
    }
    true
}

/// Table stain: center, radius, gray level.
struct Stain {
    x: i64,
    y: i64,
    r: i64,
    level: u8,
}

/// Shortest distance from a point to the silhouette, capped at `limit`.
fn clear_of_fish(spec: &SpecimenSpec, px: i64, py: i64, limit: i64) -> bool {
    let limit_sq = limit * limit;
    for y in (py - limit).max(0)..=(py + limit).min(SCENE_HEIGHT as i64 - 1) {
        let dy = y - spec.cy;
        let (Some(xl), Some(xr)) = (spec.left_profile(dy), spec.right_profile(dy)) else {
            continue;
        };
        let dx = (xl - px).max(px - xr).max(0);
        let dyy = (y - py).abs();
        if dx * dx + dyy * dyy < limit_sq {
            return false;
        }
    }
    true
}

/// Render a capture for the silhouette: gradient table, procedural skin,
/// a few stains kept well away from the fish.
pub fn generate_scene(spec: &SpecimenSpec, rng: &mut impl Rng) -> Result<Scene> {
    let mask = spec.rasterize()?;
    let truth = spec.ground_truth();

    let base = rng.random_range(228.0..=232.0);
    let grad_x = rng.random_range(-7.0..=7.0);
    let grad_y = rng.random_range(-7.0..=7.0);

    let stain_count = rng.random_range(3..=8);
    let mut stains: Vec<Stain> = Vec::with_capacity(stain_count);
    for _ in 0..stain_count {
        for _attempt in 0..60 {
            let r = rng.random_range(6..=14i64);
            let x = rng.random_range(r + 2..SCENE_WIDTH as i64 - r - 2);
            let y = rng.random_range(r + 2..SCENE_HEIGHT as i64 - r - 2);
            if clear_of_fish(spec, x, y, r + 12) {
                stains.push(Stain {
                    x,
                    y,
                    r,
                    level: rng.random_range(140..=180),
                });
                break;
            }
        }
    }

    let (w, h) = (SCENE_WIDTH, SCENE_HEIGHT);
    let image = GrayImage::from_fn(w, h, |x, y| {
        if mask.get(x, y) {
            return 30 + (texel(spec.texture_seed, x, y) % 61) as u8;
        }
        for s in &stains {
            let dx = x as i64 - s.x;
            let dy = y as i64 - s.y;
            if dx * dx + dy * dy <= s.r * s.r {
                return s.level;
            }
        }
        let gx = grad_x * (x as f64 / (w - 1) as f64 - 0.5);
        let gy = grad_y * (y as f64 / (h - 1) as f64 - 0.5);
        (base + gx + gy).round().clamp(215.0, 245.0) as u8
    })?;

    Ok(Scene { image, mask, truth })
}

/// Deterministic per-index generator stream for a corpus.
pub fn corpus_rng(index: u64, base_seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(base_seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Indices flipped top-to-bottom in a generated corpus: every fifth image,
/// offset so both small and large corpora get some.
pub fn corpus_index_mirrored(index: u64) -> bool {
    index % 5 == 3
}

/// Build corpus member `index` end to end. Mirroring happens after
/// rendering so a flipped scene is the bit-exact flip of its canonical
/// twin.
pub fn corpus_scene(index: u64, base_seed: u64, hidden_lower_notch: bool) -> Result<Scene> {
    let mut rng = corpus_rng(index, base_seed);
    let spec = sample_spec(&mut rng, hidden_lower_notch)?;
    let scene = generate_scene(&spec, &mut rng)?;
    Ok(if corpus_index_mirrored(index) {
        scene.flipped()
    } else {
        scene
    })
}

/// Serialize landmarks as a line-oriented sidecar next to a scene image.
pub fn truth_to_text(truth: &GroundTruth) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "nose = {},{}", truth.nose.x, truth.nose.y);
    let _ = writeln!(s, "notch_upper = {},{}", truth.notch_upper.x, truth.notch_upper.y);
    let _ = writeln!(s, "notch_lower = {},{}", truth.notch_lower.x, truth.notch_lower.y);
    let _ = writeln!(s, "eyes_reversed = {}", truth.eyes_reversed);
    let _ = writeln!(s, "mirrored = {}", truth.mirrored);
    let _ = writeln!(s, "hidden_lower_notch = {}", truth.hidden_lower_notch);
    s
}

/// Parse a sidecar produced by [`truth_to_text`].
pub fn truth_from_text(text: &str) -> Result<GroundTruth> {
    let mut nose = None;
    let mut upper = None;
    let mut lower = None;
    let mut eyes = None;
    let mut mirrored = None;
    let mut hidden = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Serialization(format!("sidecar line {}: missing '='", lineno + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let parse_point = |v: &str| -> Result<Point> {
            let (x, y) = v.split_once(',').ok_or_else(|| {
                Error::Serialization(format!("sidecar point {v:?}: expected x,y"))
            })?;
            Ok(Point::new(
                x.trim()
                    .parse()
                    .map_err(|e| Error::Serialization(format!("bad x in {v:?}: {e}")))?,
                y.trim()
                    .parse()
                    .map_err(|e| Error::Serialization(format!("bad y in {v:?}: {e}")))?,
            ))
        };
        let parse_bool = |v: &str| -> Result<bool> {
            v.parse()
                .map_err(|e| Error::Serialization(format!("bad flag {v:?}: {e}")))
        };
        match key {
            "nose" => nose = Some(parse_point(value)?),
            "notch_upper" => upper = Some(parse_point(value)?),
            "notch_lower" => lower = Some(parse_point(value)?),
            "eyes_reversed" => eyes = Some(parse_bool(value)?),
            "mirrored" => mirrored = Some(parse_bool(value)?),
            "hidden_lower_notch" => hidden = Some(parse_bool(value)?),
            other => {
                return Err(Error::Serialization(format!(
                    "sidecar line {}: unknown key {other:?}",
                    lineno + 1
                )))
            }
        }
    }
    let missing = |what: &str| Error::Serialization(format!("sidecar missing {what:?}"));
    Ok(GroundTruth {
        nose: nose.ok_or_else(|| missing("nose"))?,
        notch_upper: upper.ok_or_else(|| missing("notch_upper"))?,
        notch_lower: lower.ok_or_else(|| missing("notch_lower"))?,
        eyes_reversed: eyes.ok_or_else(|| missing("eyes_reversed"))?,
        mirrored: mirrored.unwrap_or(false),
        hidden_lower_notch: hidden.unwrap_or(false),
    })
}

/// Write `<stem>.truth.txt` next to a corpus image.
pub fn write_truth_sidecar(stem: &Path, truth: &GroundTruth) -> Result<()> {
    let path = stem.with_extension("truth.txt");
    std::fs::write(&path, truth_to_text(truth))
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Read the sidecar for `<stem>`.
pub fn read_truth_sidecar(stem: &Path) -> Result<GroundTruth> {
    let path = stem.with_extension("truth.txt");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    truth_from_text(&text)
}
