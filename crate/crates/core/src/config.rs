//! Run configuration: defaults, a small `key = value` file format, and
//! validation. Every knob of the pipeline lives here so batch runs can be
//! reproduced from a single file.

use std::path::Path;

use crate::contour::RoiParams;
use crate::curve::{Bulge, CurveKind};
use crate::error::{Error, Result};
use crate::export::{Calibration, MethodTag};
use crate::hough::HoughParams;

/// Which detector locates the two cut endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Convex-hull deficiency of the head contour (default).
    Hull,
    /// Distance to the two dominant head edge lines.
    Hough,
}

impl Method {
    pub fn tag(self) -> MethodTag {
        match self {
            Method::Hull => MethodTag::Hull,
            Method::Hough => MethodTag::Hough,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Working height in lines; frames are rescaled to this before anything
    /// else so thresholds and radii mean the same thing on every camera.
    pub target_lines: usize,
    /// Background level the gamma normalization aims for, in (0, 1).
    pub max_level: f64,
    /// Opening radius for mask cleanup at the working height.
    pub open_radius: usize,
    /// Closing radius for mask cleanup; zero disables closing.
    pub close_radius: usize,
    /// Head window width as a fraction of the specimen width.
    pub roi_fraction: f64,
    /// Extra head window rows as a fraction of frame height.
    pub roi_row_margin: f64,
    /// Endpoint detector.
    pub method: Method,
    /// Curve family for the cut.
    pub curve: CurveKind,
    /// Whether the cut bows into the body or toward the nose.
    pub bulge: Bulge,
    /// Peak window half-width for the line-distance detector, as a
    /// fraction of contour length.
    pub peak_window: f64,
    /// Minimum peak rise, in pixels of distance. The floor must sit above
    /// the line detector's own quantization residue (about 3 px on long
    /// straight stretches at the 2000-line scale) and below the shallowest
    /// head relief worth reporting.
    pub peak_prominence: f64,
    /// Rows around the nose skipped by the head-end search, as a fraction
    /// of contour length.
    pub nose_exclusion: f64,
    /// Minimum hull deficiency for a notch, in pixels.
    pub min_notch_depth: f64,
    /// Millimeters per pixel horizontally.
    pub mm_per_px_x: f64,
    /// Millimeters per pixel vertically.
    pub mm_per_px_y: f64,
    /// Pixel that maps to the robot origin, x.
    pub origin_x_px: f64,
    /// Pixel that maps to the robot origin, y.
    pub origin_y_px: f64,
    /// Flip the frame left-to-right when the specimen faces the wrong way.
    pub auto_flip: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            target_lines: 2000,
            max_level: 0.80,
            open_radius: 20,
            close_radius: 10,
            roi_fraction: 0.50,
            roi_row_margin: 0.02,
            method: Method::Hull,
            curve: CurveKind::Ellipse,
            bulge: Bulge::Body,
            peak_window: 0.02,
            peak_prominence: 4.0,
            nose_exclusion: 0.05,
            min_notch_depth: 2.0,
            mm_per_px_x: 1.0,
            mm_per_px_y: 1.0,
            origin_x_px: 0.0,
            origin_y_px: 0.0,
            auto_flip: false,
        }
    }
}

const VALID_KEYS: &[&str] = &[
    "target_lines",
    "max_level",
    "open_radius",
    "close_radius",
    "roi_fraction",
    "roi_row_margin",
    "method",
    "curve",
    "bulge",
    "peak_window",
    "peak_prominence",
    "nose_exclusion",
    "min_notch_depth",
    "mm_per_px_x",
    "mm_per_px_y",
    "origin_x_px",
    "origin_y_px",
    "auto_flip",
];

impl PipelineConfig {
    /// Parse `key = value` lines over the defaults. `#` starts a comment;
    /// blank lines are skipped; unknown keys are an error.
    pub fn from_str(text: &str) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidInput(format!(
                    "config line {}: expected `key = value`, got {raw:?}",
                    lineno + 1
                ))
            })?;
            cfg.set(key.trim(), value.trim()).map_err(|e| {
                Error::InvalidInput(format!("config line {}: {e}", lineno + 1))
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<PipelineConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading config {}", path.display()), e))?;
        PipelineConfig::from_str(&text)
    }

    /// Apply one key. Used by the file parser and by command-line
    /// overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
        where
            T::Err: std::fmt::Display,
        {
            v.parse()
                .map_err(|e| Error::InvalidInput(format!("{key}: bad value {v:?}: {e}")))
        }
        match key {
            "target_lines" => self.target_lines = num(key, value)?,
            "max_level" => self.max_level = num(key, value)?,
            "open_radius" => self.open_radius = num(key, value)?,
            "close_radius" => self.close_radius = num(key, value)?,
            "roi_fraction" => self.roi_fraction = num(key, value)?,
            "roi_row_margin" => self.roi_row_margin = num(key, value)?,
            "method" => self.method = parse_method(value)?,
            "curve" => self.curve = parse_curve(value)?,
            "bulge" => self.bulge = parse_bulge(value)?,
            "peak_window" => self.peak_window = num(key, value)?,
            "peak_prominence" => self.peak_prominence = num(key, value)?,
            "nose_exclusion" => self.nose_exclusion = num(key, value)?,
            "min_notch_depth" => self.min_notch_depth = num(key, value)?,
            "mm_per_px_x" => self.mm_per_px_x = num(key, value)?,
            "mm_per_px_y" => self.mm_per_px_y = num(key, value)?,
            "origin_x_px" => self.origin_x_px = num(key, value)?,
            "origin_y_px" => self.origin_y_px = num(key, value)?,
            "auto_flip" => self.auto_flip = num(key, value)?,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown key {other:?}; valid keys: {}",
                    VALID_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidInput(what.to_string()));
        if self.target_lines < 64 {
            return bad("target_lines must be at least 64");
        }
        if !(self.max_level > 0.0 && self.max_level < 1.0) {
            return bad("max_level must lie strictly between 0 and 1");
        }
        for (name, v) in [
            ("roi_fraction", self.roi_fraction),
            ("roi_row_margin", self.roi_row_margin),
            ("peak_window", self.peak_window),
            ("nose_exclusion", self.nose_exclusion),
        ] {
            if !(v >= 0.0 && v <= 1.0) || (name == "roi_fraction" && v == 0.0) {
                return Err(Error::InvalidInput(format!(
                    "{name} must lie in (0, 1], got {v}"
                )));
            }
        }
        if !(self.peak_prominence >= 0.0) {
            return bad("peak_prominence must be non-negative");
        }
        if !(self.min_notch_depth >= 0.0) {
            return bad("min_notch_depth must be non-negative");
        }
        self.calibration().validate()
    }

    pub fn roi_params(&self) -> RoiParams {
        RoiParams {
            width_fraction: self.roi_fraction,
            row_margin_fraction: self.roi_row_margin,
            max_level: self.max_level,
            open_radius: self.open_radius,
            close_radius: self.close_radius,
            reference_lines: self.target_lines,
        }
    }

    pub fn hough_params(&self) -> HoughParams {
        HoughParams {
            peak_window_fraction: self.peak_window,
            peak_prominence: self.peak_prominence,
            nose_exclusion_fraction: self.nose_exclusion,
        }
    }

    pub fn calibration(&self) -> Calibration {
        Calibration {
            mm_per_px_x: self.mm_per_px_x,
            mm_per_px_y: self.mm_per_px_y,
            origin_px: (self.origin_x_px, self.origin_y_px),
        }
    }
}

fn parse_method(v: &str) -> Result<Method> {
    match v {
        "hull" => Ok(Method::Hull),
        "hough" => Ok(Method::Hough),
        other => Err(Error::InvalidInput(format!(
            "method must be `hull` or `hough`, got {other:?}"
        ))),
    }
}

fn parse_curve(v: &str) -> Result<CurveKind> {
    match v {
        "ellipse" => Ok(CurveKind::Ellipse),
        "parabola" => Ok(CurveKind::Parabola),
        other => Err(Error::InvalidInput(format!(
            "curve must be `ellipse` or `parabola`, got {other:?}"
        ))),
    }
}

fn parse_bulge(v: &str) -> Result<Bulge> {
    match v {
        "body" => Ok(Bulge::Body),
        "nose" => Ok(Bulge::Nose),
        other => Err(Error::InvalidInput(format!(
            "bulge must be `body` or `nose`, got {other:?}"
        ))),
    }
}
