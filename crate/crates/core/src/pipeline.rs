//! End-to-end processing: frame in, cutting curve and XML out, plus the
//! corpus generation and batch evaluation tooling built on top of it.

use std::fmt::Write as _;
use std::path::Path;

use crate::config::{Method, PipelineConfig};
use crate::contour::{nose_point, rightmost_contour};
use crate::curve::{align_endings, ellipse_curve, parabola_curve, CurveKind, CuttingCurve};
use crate::error::{Error, Result};
use crate::export::{render_overlay, write_cut_xml};
use crate::hough::critical_points_hough;
use crate::hull::critical_points_hull;
use crate::io::{load_image, save_gray, save_mask, save_rgb, LoadedImage};
use crate::morph::{clean_mask, dilate, StructuringElement};
use crate::raster::{scale_to_height, to_luminance, BinaryMask, GrayImage, Point};
use crate::segment::segment_specimen;
use crate::synth;

/// Everything one pipeline run produced, in working-frame coordinates
/// (the frame scaled to `target_lines` and flipped if auto-flip fired).
#[derive(Debug, Clone)]
pub struct RunReport {
    /// The frame the detections refer to.
    pub working: GrayImage,
    /// Cleaned specimen mask on the working frame.
    pub mask: BinaryMask,
    /// True when auto-flip mirrored the frame left-to-right.
    pub flipped: bool,
    pub first_threshold: u8,
    pub gamma: f64,
    pub second_threshold: u8,
    pub nose: Point,
    pub head_begin: Point,
    pub head_end: Point,
    pub eyes_reversed: bool,
    pub curve: CuttingCurve,
    /// Curve samples in millimeters, calibrated.
    pub points_mm: Vec<(f64, f64)>,
    /// Serialized robot document.
    pub xml: String,
}

fn mean_column(mask: &BinaryMask) -> Option<f64> {
    let mut sum = 0u64;
    let mut n = 0u64;
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.get(x, y) {
                sum += x as u64;
                n += 1;
            }
        }
    }
    (n > 0).then(|| sum as f64 / n as f64)
}

/// Run the full chain on a grayscale frame.
pub fn run_on_gray(
    gray: &GrayImage,
    cfg: &PipelineConfig,
    debug_dir: Option<&Path>,
) -> Result<RunReport> {
    cfg.validate()?;
    let scaled = scale_to_height(gray, cfg.target_lines)?;
    let report = segment_specimen(&scaled, cfg.max_level)?;
    let cleaned = clean_mask(&report.mask, cfg.open_radius, cfg.close_radius)?;

    // Orientation: the nose must point right so the head window sits left
    // of it. Thresholds and morphology commute with reflection, so the
    // already-cleaned mask can be flipped alongside the frame.
    let mut working = scaled;
    let mut mask = cleaned;
    let mut flipped = false;
    if cfg.auto_flip {
        let centroid = mean_column(&mask).ok_or(Error::NoSpecimen)?;
        if centroid > (mask.width() - 1) as f64 / 2.0 {
            working = working.flip_horizontal();
            mask = mask.flip_horizontal();
            flipped = true;
        }
    }

    let contour = rightmost_contour(&mask)?;
    let nose = nose_point(&contour)?;
    let roi = crate::contour::extract_roi(&working, &mask, nose, &cfg.roi_params())?;
    let head_contour = rightmost_contour(&roi.mask)?;

    let (head_begin, head_end, eyes_reversed) = match cfg.method {
        Method::Hull => {
            let det = critical_points_hull(&head_contour, roi.nose, cfg.min_notch_depth)?;
            (
                roi.to_image(det.head_begin),
                roi.to_image(det.head_end),
                det.eyes_reversed,
            )
        }
        Method::Hough => {
            let det = critical_points_hough(&head_contour, roi.nose, &cfg.hough_params())?;
            (
                roi.to_image(det.head_begin),
                roi.to_image(det.head_end),
                det.eyes_reversed,
            )
        }
    };

    let curve = match cfg.curve {
        CurveKind::Ellipse => {
            let endings = align_endings(&mask, head_begin, head_end, nose)?;
            ellipse_curve(endings, cfg.bulge, working.width())?
        }
        CurveKind::Parabola => {
            parabola_curve(head_begin, head_end, nose, cfg.bulge, working.width())?
        }
    };

    let calibration = cfg.calibration();
    let points_mm = calibration.to_millimeters(&curve.points);
    let xml = write_cut_xml(&points_mm, cfg.method.tag(), cfg.curve)?;

    let run = RunReport {
        working,
        mask,
        flipped,
        first_threshold: report.first_threshold,
        gamma: report.gamma,
        second_threshold: report.second_threshold,
        nose,
        head_begin,
        head_end,
        eyes_reversed,
        curve,
        points_mm,
        xml,
    };

    if let Some(dir) = debug_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        save_gray(&run.working, &dir.join("01_scaled.png"))?;
        save_gray(&report.corrected, &dir.join("02_corrected.png"))?;
        save_mask(&report.mask, &dir.join("03_threshold_mask.png"))?;
        save_mask(&run.mask, &dir.join("04_clean_mask.png"))?;
        save_mask(&roi.mask, &dir.join("05_head_window_mask.png"))?;
        let overlay = render_overlay(
            &run.working,
            &[run.nose, run.head_begin, run.head_end],
            &run.curve,
        );
        save_rgb(&overlay, &dir.join("06_overlay.png"))?;
    }

    Ok(run)
}

/// Load a frame from disk and run the full chain on it.
pub fn run_on_image(
    path: &Path,
    cfg: &PipelineConfig,
    debug_dir: Option<&Path>,
) -> Result<RunReport> {
    let gray = match load_image(path)? {
        LoadedImage::Gray(g) => g,
        LoadedImage::Rgb(rgb) => to_luminance(&rgb),
    };
    run_on_gray(&gray, cfg, debug_dir)
}

/// Write through a temporary sibling so readers never observe a partial
/// file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidInput(format!("{} has no file name", path.display())))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(format!("writing {}", tmp.display()), e))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| Error::io(format!("renaming over {}", path.display()), e))
}

/// Generate `count` labeled scenes into `dir`; the last `adversarial` of
/// them get a hidden blind-side fold. Returns the image stems written.
pub fn generate_corpus(
    dir: &Path,
    count: u64,
    base_seed: u64,
    adversarial: u64,
) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    let mut stems = Vec::with_capacity(count as usize);
    for index in 0..count {
        let hidden = index >= count.saturating_sub(adversarial);
        let scene = synth::corpus_scene(index, base_seed, hidden)?;
        let stem = format!("scene_{index:04}");
        let image_path = dir.join(format!("{stem}.png"));
        crate::io::save_gray(&scene.image, &image_path)?;
        save_mask(&scene.mask, &dir.join(format!("{stem}.mask.png")))?;
        synth::write_truth_sidecar(&image_path, &scene.truth)?;
        stems.push(stem);
    }
    Ok(stems)
}

/// Outcome of evaluating one corpus image.
#[derive(Debug, Clone)]
pub struct EvalRecord {
    pub stem: String,
    pub mirrored: bool,
    pub hidden_notch: bool,
    /// "ok" or "error".
    pub status: &'static str,
    pub error: Option<String>,
    /// Distance from the predicted upper/lower endpoint to its landmark.
    pub dist_upper: Option<f64>,
    pub dist_lower: Option<f64>,
    pub eyes_ok: Option<bool>,
    /// All curve samples inside the dilated true silhouette, when a mask
    /// sidecar is present.
    pub curve_inside: Option<bool>,
    /// Both endpoint distances within tolerance and orientation correct.
    pub hit: Option<bool>,
}

#[derive(Debug, Clone, Default)]
pub struct EvalSummary {
    pub total: usize,
    pub scored: usize,
    pub hits: usize,
    pub errors: usize,
    pub hidden_total: usize,
    /// Hidden-fold images that correctly came back as detection failures.
    pub hidden_reported: usize,
}

impl std::fmt::Display for EvalSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "images:        {}", self.total)?;
        writeln!(
            f,
            "landmarks hit: {}/{} scored",
            self.hits, self.scored
        )?;
        writeln!(f, "errors:        {}", self.errors)?;
        if self.hidden_total > 0 {
            writeln!(
                f,
                "hidden folds:  {}/{} reported as detection failures",
                self.hidden_reported, self.hidden_total
            )?;
        }
        Ok(())
    }
}

fn euclid(a: Point, b: Point) -> f64 {
    let dx = (a.x - b.x) as f64;
    let dy = (a.y - b.y) as f64;
    (dx * dx + dy * dy).sqrt()
}

/// Map a working-frame coordinate back to the source frame that was
/// rescaled from `src_h` lines to `dst_h`.
fn unscale(v: f64, src_h: usize, dst_h: usize) -> f64 {
    if src_h == dst_h {
        v
    } else {
        let ratio = src_h as f64 / dst_h as f64;
        (v + 0.5) * ratio - 0.5
    }
}

/// Check every curve sample against the dilated true silhouette.
fn curve_inside_mask(
    curve: &CuttingCurve,
    truth_mask: &BinaryMask,
    src_h: usize,
    dst_h: usize,
) -> bool {
    let dilated = dilate(truth_mask, &StructuringElement::disk(5));
    curve.points.iter().all(|&(x, y)| {
        let px = unscale(x, src_h, dst_h).round();
        let py = unscale(y, src_h, dst_h).round();
        px >= 0.0
            && py >= 0.0
            && (px as usize) < dilated.width()
            && (py as usize) < dilated.height()
            && dilated.get(px as usize, py as usize)
    })
}

/// Run the pipeline over every labeled scene in `dir` and score it against
/// the sidecars. `tolerance_fraction` is the landmark budget as a fraction
/// of source image height.
pub fn evaluate_corpus(
    dir: &Path,
    cfg: &PipelineConfig,
    tolerance_fraction: f64,
) -> Result<(Vec<EvalRecord>, EvalSummary)> {
    let mut stems: Vec<String> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(format!("reading {}", dir.display()), e))?
        .filter_map(|entry| {
            let name = entry.ok()?.file_name().into_string().ok()?;
            let stem = name.strip_suffix(".png")?;
            if stem.ends_with(".mask") {
                return None;
            }
            dir.join(format!("{stem}.truth.txt"))
                .exists()
                .then(|| stem.to_string())
        })
        .collect();
    stems.sort();
    if stems.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no labeled scenes (image + .truth.txt) found in {}",
            dir.display()
        )));
    }

    let mut records = Vec::with_capacity(stems.len());
    let mut summary = EvalSummary::default();
    for stem in stems {
        let image_path = dir.join(format!("{stem}.png"));
        let truth = synth::read_truth_sidecar(&image_path)?;
        let src_h = match load_image(&image_path)? {
            LoadedImage::Gray(g) => g.height(),
            LoadedImage::Rgb(r) => r.height(),
        };
        let tolerance_px = tolerance_fraction * src_h as f64;
        summary.total += 1;
        if truth.hidden_lower_notch {
            summary.hidden_total += 1;
        }

        let mut record = EvalRecord {
            stem: stem.clone(),
            mirrored: truth.mirrored,
            hidden_notch: truth.hidden_lower_notch,
            status: "ok",
            error: None,
            dist_upper: None,
            dist_lower: None,
            eyes_ok: None,
            curve_inside: None,
            hit: None,
        };

        match run_on_image(&image_path, cfg, None) {
            Err(e) => {
                record.status = "error";
                if truth.hidden_lower_notch && matches!(e, Error::DetectionFailure(_)) {
                    summary.hidden_reported += 1;
                } else {
                    summary.errors += 1;
                }
                record.error = Some(e.to_string());
            }
            Ok(run) => {
                // order predictions by row and compare to the positional labels
                let (up, down) = if run.head_begin.y <= run.head_end.y {
                    (run.head_begin, run.head_end)
                } else {
                    (run.head_end, run.head_begin)
                };
                let to_src = |p: Point| {
                    Point::new(
                        unscale(p.x as f64, src_h, cfg.target_lines).round() as i32,
                        unscale(p.y as f64, src_h, cfg.target_lines).round() as i32,
                    )
                };
                let du = euclid(to_src(up), truth.notch_upper);
                let dl = euclid(to_src(down), truth.notch_lower);
                let eyes_ok = run.eyes_reversed == truth.eyes_reversed;
                record.dist_upper = Some(du);
                record.dist_lower = Some(dl);
                record.eyes_ok = Some(eyes_ok);

                let mask_path = dir.join(format!("{stem}.mask.png"));
                if mask_path.exists() {
                    if let LoadedImage::Gray(g) = load_image(&mask_path)? {
                        let bits = g.as_slice().iter().map(|&v| v >= 128).collect();
                        let truth_mask = BinaryMask::from_bits(g.width(), g.height(), bits)?;
                        record.curve_inside = Some(curve_inside_mask(
                            &run.curve,
                            &truth_mask,
                            src_h,
                            cfg.target_lines,
                        ));
                    }
                }

                if truth.hidden_lower_notch {
                    // nothing to score: the fold is absent by construction
                } else {
                    summary.scored += 1;
                    let hit = du <= tolerance_px
                        && dl <= tolerance_px
                        && eyes_ok
                        && record.curve_inside.unwrap_or(true);
                    record.hit = Some(hit);
                    if hit {
                        summary.hits += 1;
                    }
                }
            }
        }
        records.push(record);
    }
    Ok((records, summary))
}

/// Render evaluation records as CSV with a header row.
pub fn records_to_csv(records: &[EvalRecord]) -> String {
    let mut out = String::from(
        "stem,mirrored,hidden_notch,status,dist_upper,dist_lower,eyes_ok,curve_inside,hit,error\n",
    );
    for r in records {
        let opt_f = |v: Option<f64>| v.map(|d| format!("{d:.2}")).unwrap_or_default();
        let opt_b = |v: Option<bool>| v.map(|b| b.to_string()).unwrap_or_default();
        let error = r.error.as_deref().unwrap_or("").replace(',', ";");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.stem,
            r.mirrored,
            r.hidden_notch,
            r.status,
            opt_f(r.dist_upper),
            opt_f(r.dist_lower),
            opt_b(r.eyes_ok),
            opt_b(r.curve_inside),
            opt_b(r.hit),
            error
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.xml");
        atomic_write(&path, b"first").unwrap();
        atomic_write(&path, b"second").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"second");
        // no stray temporary left behind
        let names: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        assert_eq!(names, vec!["out.xml"]);
    }

    #[test]
    fn mean_column_tracks_mass() {
        let left = BinaryMask::from_fn(10, 4, |x, _| x < 3).unwrap();
        assert!(mean_column(&left).unwrap() < 4.5);
        let right = BinaryMask::from_fn(10, 4, |x, _| x >= 7).unwrap();
        assert!(mean_column(&right).unwrap() > 4.5);
        let empty = BinaryMask::new(10, 4).unwrap();
        assert!(mean_column(&empty).is_none());
    }

    #[test]
    fn unscale_is_identity_at_matching_heights() {
        assert_eq!(unscale(123.0, 2000, 2000), 123.0);
        // doubling the height doubles pixel-center coordinates
        let v = unscale(99.5, 4000, 2000);
        assert!((v - 199.5).abs() < 1e-9);
    }

    #[test]
    fn csv_has_one_line_per_record_plus_header() {
        let rec = EvalRecord {
            stem: "scene_0001".into(),
            mirrored: true,
            hidden_notch: false,
            status: "ok",
            error: None,
            dist_upper: Some(3.25),
            dist_lower: Some(1.0),
            eyes_ok: Some(true),
            curve_inside: Some(true),
            hit: Some(true),
        };
        let csv = records_to_csv(&[rec]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("stem,"));
        assert!(lines[1].starts_with("scene_0001,true,false,ok,3.25,1.00,true,true,true,"));
    }
}
