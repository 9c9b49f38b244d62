use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("scanpath has no fixations")]
    EmptyScanpath,

    #[error("{field} is not finite ({value})")]
    NonFinite { field: &'static str, value: f64 },

    #[error("{field} = {value} is outside {expected}")]
    OutOfRange {
        field: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("fixation onsets decrease at index {index}")]
    NonMonotonicTime { index: usize },

    #[error("invalid dimensions {width}x{height}: {reason}")]
    InvalidDimensions {
        width: usize,
        height: usize,
        reason: &'static str,
    },

    #[error("saliency map is all zero")]
    AllZeroMap,

    #[error("invalid saliency value {value} at row {row}, column {col}")]
    InvalidSaliencyValue { row: usize, col: usize, value: f64 },

    #[error("unknown {kind} `{value}`")]
    UnknownVariant { kind: &'static str, value: String },

    #[error("invalid element box {element_id}: {reason}")]
    InvalidBox {
        element_id: String,
        reason: &'static str,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("density map is {found_w}x{found_h}, expected {expected_w}x{expected_h}")]
    DimensionMismatch {
        found_w: usize,
        found_h: usize,
        expected_w: usize,
        expected_h: usize,
    },

    #[error("sample lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {required} samples, got {found}")]
    TooFewSamples { required: usize, found: usize },

    #[error("all paired differences are identical; standard deviation is zero")]
    ZeroVariance,

    #[error("empty group {0}")]
    EmptyGroup(String),

    #[error("duplicate image id `{0}`")]
    DuplicateImageId(String),

    #[error("manifest entry `{image_id}` has no ground-truth scanpaths")]
    NoGroundTruth { image_id: String },

    #[error("missing files referenced by manifest: {}", .0.join("; "))]
    MissingFiles(Vec<String>),

    #[error("configuration `{config}` produced no successful images")]
    NoSuccessfulImages { config: String },

    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image error on {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("JSON error in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("CSV error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
