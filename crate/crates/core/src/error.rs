use std::path::PathBuf;

/// Errors produced anywhere in the processing chain.
///
/// The CLI maps these onto exit codes: anything that means "the input was
/// unusable" is an invalid-input error, anything that means "the image was
/// fine but no plausible head geometry was found" is a detection failure,
/// and filesystem trouble is an I/O error.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed argument, config value, or raster (zero-sized, wrong length...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The file decoded, but to a pixel format we do not process.
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    /// The image bytes could not be decoded at all.
    #[error("failed to decode {path}: {reason}")]
    Decode { path: PathBuf, reason: String },

    /// Histogram with a single occupied bin; no threshold separates anything.
    #[error("degenerate histogram: all pixels share one gray level")]
    DegenerateHistogram,

    /// A background estimate of 0 or 255 leaves the gamma map undefined.
    #[error("degenerate threshold {0}: gamma recalibration needs 0 < u0 < 255")]
    DegenerateThreshold(u8),

    /// Morphological cleaning erased everything; there is no object to cut.
    #[error("no specimen found: mask is empty after cleaning")]
    NoSpecimen,

    /// A labeling step was handed an empty mask.
    #[error("empty mask: no components to select")]
    EmptyMask,

    /// The outline does not contain two distinct straight sides.
    #[error("degenerate contour: {0}")]
    DegenerateContour(String),

    /// Fewer than three non-collinear points; no polygon exists.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// A specific critical point could not be located on the outline.
    #[error("detection failure: could not locate {0}")]
    DetectionFailure(&'static str),

    /// Curve fitting hit a singular system (repeated sample rows).
    #[error("singular system: {0}")]
    SingularSystem(String),

    /// Ending alignment could not find a boundary crossing where required.
    #[error("alignment failure: {0}")]
    AlignmentFailure(String),

    /// Output could not be serialized (non-finite coordinates and the like).
    #[error("serialization error: {0}")]
    Serialization(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Coarse category used for process exit codes.
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            InvalidInput(_) | UnsupportedFormat(_) | Decode { .. } | DegenerateHistogram
            | DegenerateThreshold(_) => ErrorCategory::InvalidInput,
            NoSpecimen | EmptyMask | DegenerateContour(_) | DegenerateGeometry(_)
            | DetectionFailure(_) | SingularSystem(_) | AlignmentFailure(_) => {
                ErrorCategory::DetectionFailure
            }
            Serialization(_) | Io { .. } => ErrorCategory::Io,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    InvalidInput,
    DetectionFailure,
    Io,
}

impl ErrorCategory {
    /// Exit code the CLI should use for this class of failure.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::InvalidInput => 2,
            ErrorCategory::DetectionFailure => 3,
            ErrorCategory::Io => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
