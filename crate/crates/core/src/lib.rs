//! Single-stage multi-person pose estimation with dynamic, per-instance
//! keypoint networks.
//!
//! The model is an anchor-free dense predictor: a small convolutional
//! backbone feeds a feature pyramid, every pyramid location classifies
//! person/background and emits the flat parameter vector of a tiny
//! per-instance network (KP-Net). Applying that KP-Net to a shared
//! keypoint feature map (augmented with relative coordinates) yields one
//! score map per keypoint category; the argmax of each map plus a
//! sub-cell disk offset gives the final keypoint position.
//!
//! The crate contains the full toolchain around that model:
//!
//! * [`geometry`] — poses, rectangles, OKS similarity and keypoint NMS
//! * [`assignment`] — training-target construction (labels, one-hot
//!   keypoint masks, disk-offset fields, Gaussian heatmaps)
//! * [`autodiff`] — the reverse-mode tape the network trains with
//! * [`network`] — backbone, FPN, heads and the dynamic KP-Nets
//! * [`losses`] — focal classification, keypoint cross-entropy, offset L1
//!   and heatmap focal losses
//! * [`decoder`] — candidate selection and keypoint decoding at inference
//! * [`evalkit`] — COCO-style OKS-based AP/AR evaluation
//! * [`datagen`] — a seeded synthetic scene generator plus COCO-format
//!   ingestion and augmentation
//! * [`trainer`] / [`runner`] — the train/eval/infer/visualize entry
//!   points used by the CLI

pub mod assignment;
pub mod autodiff;
pub mod checkpoint;
pub mod config;
pub mod datagen;
pub mod decoder;
pub mod draw;
pub mod error;
pub mod evalkit;
pub mod geometry;
pub mod losses;
pub mod network;
pub mod runner;
pub mod skeleton;
pub mod trainer;

pub use error::{Error, Result};
