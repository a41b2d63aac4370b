//! Locates the head cut on overhead images of flatfish and emits the cut
//! as a millimeter polyline for a waterjet controller.
//!
//! The chain, in order:
//!
//! 1. [`raster`]: grayscale conversion and rescaling to a fixed working
//!    height, so every later threshold and radius is resolution-stable.
//! 2. [`segment`]: two-pass Otsu thresholding with a gamma normalization
//!    of the lit table in between.
//! 3. [`morph`]: reconstruction-based opening/closing and component
//!    selection to get one clean specimen mask.
//! 4. [`contour`]: the rightmost boundary per row, the nose tip, and the
//!    re-segmented head window next to it.
//! 5. [`hull`] / [`hough`]: two independent detectors for the pair of
//!    head notches bounding the cut.
//! 6. [`curve`]: a parabola or half-ellipse joining the notches.
//! 7. [`export`]: calibration to millimeters, the controller XML dialect,
//!    and inspection overlays.
//!
//! [`pipeline`] wires the stages together behind one config; [`synth`]
//! generates the labeled scenes the regression corpus is built from.

pub mod config;
pub mod contour;
pub mod curve;
pub mod error;
pub mod export;
pub mod hough;
pub mod hull;
pub mod io;
pub mod morph;
pub mod pipeline;
pub mod raster;
pub mod segment;
pub mod synth;

pub use config::{Method, PipelineConfig};
pub use error::{Error, ErrorCategory, Result};
pub use pipeline::{run_on_gray, run_on_image, RunReport};
