//! Release gate for the whole pipeline: ten numbered checks, one printed
//! PASS/FAIL line each (visible with `cargo test --test acceptance --
//! --nocapture`). The corpus checks exercise the full chain on rendered
//! scenes; the remaining checks hold each geometric primitive against an
//! independently coded oracle.

use std::sync::OnceLock;
use std::time::Instant;

use fincut_core::config::Method;
use fincut_core::contour::rightmost_contour;
use fincut_core::curve::{ellipse_curve, parabola_curve, Bulge, CurveKind, CurveParams};
use fincut_core::export::{parse_cut_xml, write_cut_xml, MethodTag};
use fincut_core::hough::hough_accumulate;
use fincut_core::hull::convex_hull;
use fincut_core::morph::{
    close_by_reconstruction, dilate, open_by_reconstruction, reconstruct, StructuringElement,
};
use fincut_core::pipeline::run_on_gray;
use fincut_core::raster::{BinaryMask, GrayImage, Point};
use fincut_core::segment::{apply_gamma, gamma_for_background, otsu_threshold, Histogram};
use fincut_core::synth::{corpus_scene, Scene};
use fincut_core::{Error, PipelineConfig, RunReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed shared with the command-line corpus generator.
const BASE_SEED: u64 = 42;
const CORPUS_LEN: u64 = 50;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !($cond) {
            return Err(format!($($arg)+));
        }
    };
}

fn report(number: u32, label: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("PASS criterion {number}: {label} — {detail}"),
        Err(why) => {
            println!("FAIL criterion {number}: {label} — {why}");
            panic!("criterion {number} ({label}) failed: {why}");
        }
    }
}

fn dist(a: Point, b: Point) -> f64 {
    let dx = (a.x - b.x) as f64;
    let dy = (a.y - b.y) as f64;
    (dx * dx + dy * dy).sqrt()
}

// ---------------------------------------------------------------- corpus

#[derive(Default)]
struct ScoreCount {
    ok: usize,
    failures: Vec<String>,
    max_secs: f64,
}

#[derive(Default)]
struct CorpusStats {
    mirrored: usize,
    hull: ScoreCount,
    hough: ScoreCount,
}

static CORPUS: OnceLock<CorpusStats> = OnceLock::new();

/// A run is valid when both curve endpoints land on the labeled notches
/// within 2% of the image height and every curve sample stays inside the
/// ground-truth silhouette dilated by a radius-5 disk.
fn score_run(scene: &Scene, roomy: &BinaryMask, run: &RunReport) -> Result<(), String> {
    let tol = 0.02 * scene.image.height() as f64;
    let (top, bottom) = if run.head_begin.y <= run.head_end.y {
        (run.head_begin, run.head_end)
    } else {
        (run.head_end, run.head_begin)
    };
    let e_top = dist(top, scene.truth.notch_upper);
    let e_bottom = dist(bottom, scene.truth.notch_lower);
    if e_top > tol || e_bottom > tol {
        return Err(format!("endpoints off by {e_top:.1}/{e_bottom:.1} px"));
    }
    for &(x, y) in &run.curve.points {
        let (px, py) = (x.round() as i64, y.round() as i64);
        let inside = px >= 0
            && py >= 0
            && (px as usize) < roomy.width()
            && (py as usize) < roomy.height()
            && roomy.get(px as usize, py as usize);
        if !inside {
            return Err(format!("curve sample ({x:.1}, {y:.1}) leaves the dilated silhouette"));
        }
    }
    Ok(())
}

fn corpus_stats() -> &'static CorpusStats {
    CORPUS.get_or_init(|| {
        let hull_cfg = PipelineConfig::default();
        let mut hough_cfg = PipelineConfig::default();
        hough_cfg.method = Method::Hough;
        let mut stats = CorpusStats::default();
        for index in 0..CORPUS_LEN {
            let scene = corpus_scene(index, BASE_SEED, false).expect("corpus scene generation");
            let roomy = dilate(&scene.mask, &StructuringElement::disk(5));
            if scene.truth.mirrored {
                stats.mirrored += 1;
            }
            for use_hough in [false, true] {
                let cfg = if use_hough { &hough_cfg } else { &hull_cfg };
                let started = Instant::now();
                let outcome = run_on_gray(&scene.image, cfg, None);
                let secs = started.elapsed().as_secs_f64();
                let side = if use_hough { &mut stats.hough } else { &mut stats.hull };
                side.max_secs = side.max_secs.max(secs);
                let verdict = outcome
                    .map_err(|e| format!("pipeline error: {e}"))
                    .and_then(|run| score_run(&scene, &roomy, &run));
                match verdict {
                    Ok(()) => side.ok += 1,
                    Err(why) => side.failures.push(format!("scene {index}: {why}")),
                }
            }
        }
        stats
    })
}

#[test]
fn criterion_01_hull_corpus_success_rate() {
    report(1, "hull detector + ellipse over the 50-scene corpus", (|| {
        let stats = corpus_stats();
        ensure!(
            stats.mirrored >= 5,
            "only {} of {CORPUS_LEN} scenes are mirrored",
            stats.mirrored
        );
        ensure!(
            stats.hull.failures.is_empty(),
            "{} of {CORPUS_LEN} scenes failed: {}",
            stats.hull.failures.len(),
            stats.hull.failures.join("; ")
        );
        ensure!(
            stats.hull.max_secs < 2.0,
            "slowest run took {:.2} s (budget 2 s)",
            stats.hull.max_secs
        );
        Ok(format!(
            "{}/{CORPUS_LEN} valid curves ({} mirrored scenes), slowest run {:.2} s",
            stats.hull.ok, stats.mirrored, stats.hull.max_secs
        ))
    })());
}

#[test]
fn criterion_02_hough_corpus_success_rate() {
    report(2, "line-voting detector over the same corpus", (|| {
        let stats = corpus_stats();
        let bar = (CORPUS_LEN as usize * 9).div_ceil(10);
        ensure!(
            stats.hough.ok >= bar,
            "only {}/{CORPUS_LEN} scenes valid (bar {bar}): {}",
            stats.hough.ok,
            stats.hough.failures.join("; ")
        );
        Ok(format!("{}/{CORPUS_LEN} valid curves (bar {bar})", stats.hough.ok))
    })());
}

// ------------------------------------------------------------ thresholds

/// Exhaustive between-class-variance argmax in exact rational arithmetic:
/// maximize (S0·N − S·W0)² / (W0·W1) by cross-multiplied comparison, ties
/// resolved to the smallest split.
fn brute_force_otsu(counts: &[u64; 256]) -> Option<u8> {
    let n: i128 = counts.iter().map(|&c| c as i128).sum();
    let s: i128 = counts
        .iter()
        .enumerate()
        .map(|(v, &c)| v as i128 * c as i128)
        .sum();
    let (mut w0, mut s0) = (0i128, 0i128);
    let mut best: Option<(u8, u128, u128)> = None;
    for t in 0..=254usize {
        w0 += counts[t] as i128;
        s0 += t as i128 * counts[t] as i128;
        let w1 = n - w0;
        if w0 == 0 || w1 == 0 {
            continue;
        }
        let a = (s0 * n - s * w0).unsigned_abs();
        let num = a * a;
        let den = (w0 * w1) as u128;
        let better = match best {
            None => true,
            Some((_, bnum, bden)) => num * bden > bnum * den,
        };
        if better {
            best = Some((t as u8, num, den));
        }
    }
    best.map(|(t, _, _)| t)
}

#[test]
fn criterion_03_threshold_matches_exhaustive_search() {
    report(3, "histogram split equals the exhaustive argmax", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(7001);
        for trial in 0..1000u32 {
            let mut counts = [0u64; 256];
            for _ in 0..rng.random_range(1..=3) {
                let center = rng.random_range(0..256) as i32;
                let half = rng.random_range(1..=40) as i32;
                for off in -half..=half {
                    let bin = center + off;
                    if (0..256).contains(&bin) {
                        counts[bin as usize] += rng.random_range(0..300);
                    }
                }
            }
            for _ in 0..rng.random_range(0..10) {
                counts[rng.random_range(0..256)] += rng.random_range(0..1000);
            }
            if trial % 10 == 0 {
                // A symmetric histogram scores every split and its mirror
                // identically, forcing the tie-break to do the deciding.
                for i in 0..128 {
                    let v = counts[i] + counts[255 - i];
                    counts[i] = v;
                    counts[255 - i] = v;
                }
            }
            if counts.iter().filter(|&&c| c > 0).count() < 2 {
                counts[40] += 5;
                counts[200] += 7;
            }
            let expected = brute_force_otsu(&counts).expect("two populated bins");
            let got = otsu_threshold(&Histogram::from_counts(counts))
                .map_err(|e| format!("trial {trial}: unexpected error {e}"))?;
            ensure!(
                got == expected,
                "trial {trial}: split {got} but exhaustive search says {expected}"
            );
        }
        Ok("1000 random histograms, exact integer agreement".into())
    })());
}

// ------------------------------------------------------------ morphology

/// Erosion coded directly from the definition: a pixel survives when every
/// offset of the probe lands in-frame on an active pixel.
fn oracle_erode(mask: &BinaryMask, offsets: &[(i32, i32)]) -> BinaryMask {
    let (w, h) = (mask.width() as i32, mask.height() as i32);
    BinaryMask::from_fn(mask.width(), mask.height(), |x, y| {
        offsets.iter().all(|&(dx, dy)| {
            let (nx, ny) = (x as i32 + dx, y as i32 + dy);
            nx >= 0 && ny >= 0 && nx < w && ny < h && mask.get(nx as usize, ny as usize)
        })
    })
    .expect("mask dims are valid")
}

/// Reconstruction coded as its set definition: the union of 8-connected
/// mask components that touch the marker, grown by breadth-first search.
fn oracle_reconstruct(marker: &BinaryMask, mask: &BinaryMask) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    let mut out = BinaryMask::new(w, h).unwrap();
    let mut queue = std::collections::VecDeque::new();
    for y in 0..h {
        for x in 0..w {
            if marker.get(x, y) && mask.get(x, y) && !out.get(x, y) {
                out.set(x, y, true);
                queue.push_back((x, y));
                while let Some((cx, cy)) = queue.pop_front() {
                    for dy in -1i32..=1 {
                        for dx in -1i32..=1 {
                            let (nx, ny) = (cx as i32 + dx, cy as i32 + dy);
                            if nx >= 0
                                && ny >= 0
                                && (nx as usize) < w
                                && (ny as usize) < h
                                && mask.get(nx as usize, ny as usize)
                                && !out.get(nx as usize, ny as usize)
                            {
                                out.set(nx as usize, ny as usize, true);
                                queue.push_back((nx as usize, ny as usize));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn oracle_open(mask: &BinaryMask, radius: usize) -> BinaryMask {
    let se = StructuringElement::disk(radius);
    oracle_reconstruct(&oracle_erode(mask, se.offsets()), mask)
}

fn stamp_disks(mask: &mut BinaryMask, rng: &mut impl Rng, blobs: usize) {
    let (w, h) = (mask.width() as i32, mask.height() as i32);
    for _ in 0..blobs {
        let r = rng.random_range(2..=6) as i32;
        let cx = rng.random_range(0..w);
        let cy = rng.random_range(0..h);
        for dy in -r..=r {
            for dx in -r..=r {
                if dx * dx + dy * dy <= r * r {
                    let (x, y) = (cx + dx, cy + dy);
                    if x >= 0 && y >= 0 && x < w && y < h {
                        mask.set(x as usize, y as usize, true);
                    }
                }
            }
        }
    }
}

#[test]
fn criterion_04_morphology_matches_independent_oracles() {
    report(4, "reconstruction filters against erode + flood-fill oracles", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(7002);
        for trial in 0..100u32 {
            let mut mask = BinaryMask::new(256, 256).unwrap();
            let blobs = rng.random_range(30..=120);
            stamp_disks(&mut mask, &mut rng, blobs);
            for _ in 0..200 {
                mask.set(rng.random_range(0..256), rng.random_range(0..256), true);
            }
            let radius = rng.random_range(1..=4);

            let opened = open_by_reconstruction(&mask, radius)
                .map_err(|e| format!("trial {trial}: opening failed: {e}"))?;
            ensure!(
                opened == oracle_open(&mask, radius),
                "trial {trial}: opening disagrees with the oracle (radius {radius})"
            );
            ensure!(
                open_by_reconstruction(&opened, radius).unwrap() == opened,
                "trial {trial}: opening is not idempotent"
            );
            ensure!(
                opened.is_subset_of(&mask),
                "trial {trial}: opening added pixels"
            );

            let mut bigger = mask.clone();
            stamp_disks(&mut bigger, &mut rng, 20);
            ensure!(
                opened.is_subset_of(&open_by_reconstruction(&bigger, radius).unwrap()),
                "trial {trial}: opening is not increasing"
            );

            let closed = close_by_reconstruction(&mask, radius).unwrap();
            ensure!(
                closed == oracle_open(&mask.complement(), radius).complement(),
                "trial {trial}: closing is not the complement dual of the oracle opening"
            );

            let mut marker = BinaryMask::new(256, 256).unwrap();
            for _ in 0..200 {
                marker.set(rng.random_range(0..256), rng.random_range(0..256), true);
            }
            let grown = reconstruct(&marker, &mask).unwrap();
            ensure!(
                grown == oracle_reconstruct(&marker, &mask),
                "trial {trial}: reconstruction disagrees with the flood-fill oracle"
            );
        }
        Ok("100 random masks, 0 violations across 6 properties".into())
    })());
}

// ------------------------------------------------------------ convex hull

fn cross_i64(o: Point, a: Point, b: Point) -> i64 {
    (a.x as i64 - o.x as i64) * (b.y as i64 - o.y as i64)
        - (a.y as i64 - o.y as i64) * (b.x as i64 - o.x as i64)
}

fn strictly_between(p: Point, a: Point, b: Point) -> bool {
    let d1 = (p.x as i64 - a.x as i64) * (b.x as i64 - a.x as i64)
        + (p.y as i64 - a.y as i64) * (b.y as i64 - a.y as i64);
    let d2 = (p.x as i64 - b.x as i64) * (a.x as i64 - b.x as i64)
        + (p.y as i64 - b.y as i64) * (a.y as i64 - b.y as i64);
    d1 > 0 && d2 > 0
}

/// Cubic-time hull from the definition: a directed edge is on the hull
/// exactly when every other point lies strictly to its left or strictly
/// inside the edge segment. Vertices are then chained from the bottom-most
/// point. None for inputs that do not span two dimensions.
fn brute_force_hull(points: &[Point]) -> Option<Vec<Point>> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by_key(|p| (p.x, p.y));
    pts.dedup();
    let n = pts.len();
    if n < 3 {
        return None;
    }
    let mut next: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        'pair: for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let c = cross_i64(pts[i], pts[j], pts[k]);
                if c < 0 || (c == 0 && !strictly_between(pts[k], pts[i], pts[j])) {
                    continue 'pair;
                }
            }
            if next[i].is_some() {
                return None; // two outgoing edges: degenerate input
            }
            next[i] = Some(j);
        }
    }
    let start = (0..n).min_by_key(|&i| (pts[i].y, pts[i].x)).unwrap();
    let mut seq = Vec::new();
    let mut cur = start;
    loop {
        seq.push(pts[cur]);
        cur = next[cur]?;
        if cur == start {
            break;
        }
        if seq.len() > n {
            return None;
        }
    }
    if seq.len() < 3 {
        return None;
    }
    Some(seq)
}

fn hulls_agree(set: &[Point]) -> Result<(), String> {
    let expected = brute_force_hull(set);
    match (convex_hull(set), expected) {
        (Ok(hull), Some(want)) => {
            if hull == want {
                Ok(())
            } else {
                Err(format!("hull {hull:?} but brute force says {want:?} for {set:?}"))
            }
        }
        (Err(Error::DegenerateGeometry(_)), None) => Ok(()),
        (Ok(hull), None) => Err(format!("hull {hull:?} on a set brute force calls degenerate: {set:?}")),
        (Err(e), Some(want)) => Err(format!("error {e} but brute force finds {want:?} for {set:?}")),
        (Err(e), None) => Err(format!("unexpected error kind {e} for {set:?}")),
    }
}

#[test]
fn criterion_05_hull_matches_brute_force() {
    report(5, "convex hull against the cubic-time definition", (|| {
        // Every subset of a 4x3 grid: all sizes 0..=12, all degeneracies.
        let grid: Vec<Point> = (0..12).map(|i| Point::new(i % 4, i / 4)).collect();
        for selector in 0u32..(1 << 12) {
            let set: Vec<Point> = (0..12)
                .filter(|i| selector >> i & 1 == 1)
                .map(|i| grid[i])
                .collect();
            hulls_agree(&set).map_err(|e| format!("grid subset {selector:#06x}: {e}"))?;
        }
        // Sampled subsets of a 6x6 grid, stratified by size.
        let mut rng = ChaCha8Rng::seed_from_u64(7003);
        for size in 3..=12usize {
            for _ in 0..250 {
                let mut set = Vec::with_capacity(size);
                for _ in 0..size {
                    set.push(Point::new(rng.random_range(0..6), rng.random_range(0..6)));
                }
                hulls_agree(&set)?;
            }
        }
        // Large random sets with planted duplicates and collinear runs.
        for _ in 0..100 {
            let mut set: Vec<Point> = (0..170)
                .map(|_| Point::new(rng.random_range(-10_000..10_000), rng.random_range(-10_000..10_000)))
                .collect();
            let base = set[0];
            let (dx, dy) = (rng.random_range(-40..=40), rng.random_range(-40..=40));
            for k in 0..15 {
                set.push(Point::new(base.x + k * dx, base.y + k * dy));
            }
            for _ in 0..15 {
                let dup = set[rng.random_range(0..set.len())];
                set.push(dup);
            }
            hulls_agree(&set)?;
        }
        Ok("4096 exhaustive grid subsets + 2500 sampled subsets + 100 random 200-point sets".into())
    })());
}

// ----------------------------------------------------------- line voting

#[test]
fn criterion_06_line_recovery_within_one_bin() {
    report(6, "wedge sides recovered within one accumulator bin", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(7004);
        let (w, h) = (1200usize, 401usize);
        let y_origin = (h as f64 - 1.0) / 2.0;
        let mut recovered = 0u32;
        for _ in 0..100u32 {
            let truths: [(f64, f64); 2] = loop {
                let t1 = rng.random_range(25..=65) as f64;
                let t2 = rng.random_range(115..=155) as f64;
                let apex_x = rng.random_range(700..=1050) as f64;
                let apex_y = rng.random_range(120..=280) as f64;
                let rho = |t: f64| {
                    apex_x * t.to_radians().cos() + (apex_y - y_origin) * t.to_radians().sin()
                };
                let pair = [(t1, rho(t1)), (t2, rho(t2))];
                let x_at = |y: f64| {
                    pair.iter()
                        .map(|&(t, r)| (r - (y - y_origin) * t.to_radians().sin()) / t.to_radians().cos())
                        .fold(f64::INFINITY, f64::min)
                };
                if (0..h).all(|y| {
                    let x = x_at(y as f64);
                    x >= 2.0 && x < (w - 2) as f64
                }) {
                    break pair;
                }
            };
            let x_at = |y: f64| {
                truths
                    .iter()
                    .map(|&(t, r)| (r - (y - y_origin) * t.to_radians().sin()) / t.to_radians().cos())
                    .fold(f64::INFINITY, f64::min)
            };
            let mask = BinaryMask::from_fn(w, h, |x, y| (x as i64) <= x_at(y as f64).round() as i64)
                .unwrap();
            let contour = rightmost_contour(&mask).unwrap();
            let acc = hough_accumulate(&contour, y_origin).unwrap();
            let Ok((first, second)) = acc.dominant_lines() else {
                continue;
            };
            let mut matched = [false; 2];
            let mut hit = true;
            for line in [first, second] {
                let (slot, &(t, r)) = truths
                    .iter()
                    .enumerate()
                    .min_by(|(_, a), (_, b)| {
                        let da = (line.theta_idx as f64 - a.0).abs();
                        let db = (line.theta_idx as f64 - b.0).abs();
                        da.partial_cmp(&db).unwrap()
                    })
                    .unwrap();
                if matched[slot]
                    || (line.theta_idx as f64 - t).abs() > 1.0
                    || (line.rho - r).abs() > 1.0
                {
                    hit = false;
                    break;
                }
                matched[slot] = true;
            }
            if hit {
                recovered += 1;
            }
        }
        ensure!(recovered >= 99, "only {recovered}/100 wedges recovered within one bin");
        Ok(format!("{recovered}/100 wedges, both sides within one bin of truth"))
    })());
}

// -------------------------------------------------------- curve geometry

#[test]
fn criterion_07_curve_fits_are_exact() {
    report(7, "curve fits reproduce their defining geometry", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(7005);
        for trial in 0..300u32 {
            let y1 = rng.random_range(0..600);
            let mut y2 = rng.random_range(0..600);
            while y2 == y1 {
                y2 = rng.random_range(0..600);
            }
            let mut y3 = rng.random_range(0..600);
            while y3 == y1 || y3 == y2 {
                y3 = rng.random_range(0..600);
            }
            let begin = Point::new(rng.random_range(0..1000), y1);
            let end = Point::new(rng.random_range(0..1000), y2);
            let nose = Point::new(rng.random_range(0..1000), y3);
            let curve = parabola_curve(begin, end, nose, Bulge::Body, 100_000)
                .map_err(|e| format!("parabola trial {trial}: {e}"))?;
            let CurveParams::Parabola { a, b, c } = curve.params else {
                return Err(format!("parabola trial {trial}: wrong parameter family"));
            };
            let eval = |y: f64| a * y * y + b * y + c;
            let gap = (nose.x - begin.x).abs().max((nose.x - end.x).abs()) as f64;
            let third = nose.x as f64 - 3.0 * gap;
            for (y, want) in [
                (y1 as f64, begin.x as f64),
                (y2 as f64, end.x as f64),
                (y3 as f64, third),
            ] {
                ensure!(
                    (eval(y) - want).abs() <= 1e-6,
                    "parabola trial {trial}: x({y}) = {} but the defining point is {want}",
                    eval(y)
                );
            }
        }
        for trial in 0..300u32 {
            let x = rng.random_range(300..3000);
            let y1 = rng.random_range(0..1000);
            let mut y2 = rng.random_range(0..1000);
            while y2 == y1 {
                y2 = rng.random_range(0..1000);
            }
            let bulge = if rng.random::<bool>() { Bulge::Body } else { Bulge::Nose };
            let curve = ellipse_curve((Point::new(x, y1), Point::new(x, y2)), bulge, 1_000_000)
                .map_err(|e| format!("ellipse trial {trial}: {e}"))?;
            let CurveParams::Ellipse {
                center: (cx, cy),
                semi_major,
                semi_minor,
            } = curve.params
            else {
                return Err(format!("ellipse trial {trial}: wrong parameter family"));
            };
            for &(px, py) in &curve.points {
                let v = ((px - cx) / semi_major).powi(2) + ((py - cy) / semi_minor).powi(2);
                ensure!(
                    (v - 1.0).abs() <= 1e-9,
                    "ellipse trial {trial}: implicit residual {:.3e} at ({px:.2}, {py:.2})",
                    (v - 1.0).abs()
                );
            }
            let ecc = curve.params.eccentricity().unwrap();
            ensure!(
                (ecc - 3.0f64.sqrt() / 2.0).abs() <= 1e-12,
                "ellipse trial {trial}: eccentricity {ecc:.15}"
            );
        }
        Ok("300 parabolas reproduce all three points; 300 ellipses satisfy \
            the implicit equation with eccentricity sqrt(3)/2"
            .into())
    })());
}

// ------------------------------------------------------------- grayscale

#[test]
fn criterion_08_gamma_fixed_point() {
    report(8, "brightness exponent is exactly 1 at the design point", (|| {
        let gamma = gamma_for_background(204, 0.80).map_err(|e| e.to_string())?;
        ensure!(
            gamma.to_bits() == 1.0f64.to_bits(),
            "gamma for level 204 at 0.80 is {gamma:.17} rather than exactly 1"
        );
        let ramp = GrayImage::from_fn(256, 1, |x, _| x as u8).unwrap();
        let out = apply_gamma(&ramp, gamma);
        ensure!(out == ramp, "identity exponent changed the image");
        ensure!(out.get(204, 0) == 204, "level 204 moved to {}", out.get(204, 0));
        Ok("gamma(204, 0.80) == 1.0 exactly; the level map is the identity".into())
    })());
}

// -------------------------------------------------------------- document

#[test]
fn criterion_09_xml_golden_files() {
    report(9, "controller documents match the committed fixtures", (|| {
        let built_two = write_cut_xml(
            &[(12.34, 56.78), (90.0, -4.5)],
            MethodTag::Hull,
            CurveKind::Ellipse,
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            built_two == include_str!("golden/cut_two_points.xml"),
            "two-point document drifted from its fixture:\n{built_two}"
        );
        let built_three = write_cut_xml(
            &[(0.25, -10.75), (1234.56, 0.10), (-0.90, 99.99)],
            MethodTag::Hough,
            CurveKind::Parabola,
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            built_three == include_str!("golden/cut_three_points.xml"),
            "three-point document drifted from its fixture:\n{built_three}"
        );

        let mut rng = ChaCha8Rng::seed_from_u64(7006);
        for trial in 0..100u32 {
            let points: Vec<(f64, f64)> = (0..rng.random_range(0..40))
                .map(|_| {
                    (
                        rng.random_range(-3000.0..3000.0),
                        rng.random_range(-3000.0..3000.0),
                    )
                })
                .collect();
            let xml = write_cut_xml(&points, MethodTag::Hull, CurveKind::Ellipse)
                .map_err(|e| format!("trial {trial}: {e}"))?;
            let parsed = parse_cut_xml(&xml).map_err(|e| format!("trial {trial}: {e}"))?;
            ensure!(
                parsed.method == "hull" && parsed.curve == "ellipse",
                "trial {trial}: header fields did not survive the round trip"
            );
            ensure!(
                parsed.points.len() == points.len(),
                "trial {trial}: {} points in, {} out",
                points.len(),
                parsed.points.len()
            );
            for (i, (&(x, y), &(px, py))) in points.iter().zip(&parsed.points).enumerate() {
                let two = |v: f64| format!("{v:.2}").parse::<f64>().unwrap();
                ensure!(
                    px == two(x) && py == two(y),
                    "trial {trial} point {i}: ({px}, {py}) is not ({x}, {y}) at two decimals"
                );
            }
        }
        Ok("2 fixtures byte-exact; 100 random documents round-trip at two decimals".into())
    })());
}

// ---------------------------------------------------------------- mirror

#[test]
fn criterion_10_mirror_metamorphic() {
    report(10, "vertical mirroring mirrors every detection exactly", (|| {
        for index in [0u64, 1, 3] {
            let scene = corpus_scene(index, BASE_SEED, false)
                .map_err(|e| format!("scene {index}: {e}"))?;
            let flipped = scene.flipped();
            let h = scene.image.height() as i32;
            let mirror = |p: Point| Point::new(p.x, h - 1 - p.y);
            for use_hough in [false, true] {
                let mut cfg = PipelineConfig::default();
                if use_hough {
                    cfg.method = Method::Hough;
                }
                let tag = if use_hough { "hough" } else { "hull" };
                let plain = run_on_gray(&scene.image, &cfg, None)
                    .map_err(|e| format!("scene {index} ({tag}): {e}"))?;
                let upside = run_on_gray(&flipped.image, &cfg, None)
                    .map_err(|e| format!("scene {index} ({tag}, mirrored): {e}"))?;
                ensure!(
                    upside.nose == mirror(plain.nose),
                    "scene {index} ({tag}): nose {:?} does not mirror {:?}",
                    upside.nose,
                    plain.nose
                );
                let mut want = [mirror(plain.head_begin), mirror(plain.head_end)]
                    .map(|p| (p.y, p.x));
                want.sort_unstable();
                let mut got = [upside.head_begin, upside.head_end].map(|p| (p.y, p.x));
                got.sort_unstable();
                ensure!(
                    want == got,
                    "scene {index} ({tag}): endpoints {got:?} do not mirror {want:?}"
                );
                ensure!(
                    upside.eyes_reversed == !plain.eyes_reversed,
                    "scene {index} ({tag}): orientation flag failed to toggle"
                );
            }
        }
        Ok("3 scenes × 2 detectors: points mirror exactly, orientation flag toggles".into())
    })());
}
