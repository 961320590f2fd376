//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A pose without any labeled keypoint cannot be boxed or decoded.
    #[error("pose has no labeled keypoints (all visibility flags are 0)")]
    AllKeypointsUnlabeled,

    /// OKS is undefined for a ground truth without labeled keypoints.
    #[error("ground-truth pose has no labeled keypoints, OKS is undefined")]
    NoLabeledKeypoints,

    #[error("ground-truth area must be positive, got {0}")]
    NonPositiveArea(f64),

    #[error("keypoint count mismatch: expected {expected}, got {actual}")]
    KeypointCountMismatch { expected: usize, actual: usize },

    #[error("parameter vector length mismatch: expected {expected}, got {actual}")]
    ParamLengthMismatch { expected: usize, actual: usize },

    #[error("shape mismatch in {context}: expected {expected:?}, got {actual:?}")]
    ShapeMismatch {
        context: String,
        expected: Vec<usize>,
        actual: Vec<usize>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("heatmap branch is pruned in inference mode")]
    HeatmapPruned,

    #[error("image of {height}x{width} is too small for the pyramid")]
    ImageTooSmall { height: usize, width: usize },

    #[error("malformed annotation file: {0}")]
    Annotation(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("evaluation requires at least one ground-truth instance")]
    NoGroundTruth,

    #[error("training diverged: {0}")]
    NonFiniteLoss(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),
}
