//! Training-target construction: per-location classification labels with
//! instance associations (center sampling over pseudo-boxes), one-hot
//! keypoint masks, disk-offset fields and Gaussian heatmaps.
//!
//! All builders are pure functions, safe to run concurrently per image.

use ndarray::{Array2, Array3};

use crate::error::Result;
use crate::geometry::{min_enclosing_rect, Pose, Rect};

/// One feature pyramid level: its stride and the pseudo-box size range
/// it is responsible for.
#[derive(Debug, Clone, Copy)]
pub struct LevelSpec {
    /// Pixels per feature cell.
    pub stride: usize,
    /// Lower bound (exclusive) on the pseudo-box longest side.
    pub scale_min: f64,
    /// Upper bound (inclusive) on the pseudo-box longest side.
    pub scale_max: f64,
}

/// The five FCOS-style levels P3..P7 with strides 8..128 and size ranges
/// (0,64], (64,128], (128,256], (256,512], (512,inf).
pub fn default_levels() -> Vec<LevelSpec> {
    let bounds = [0.0, 64.0, 128.0, 256.0, 512.0, f64::INFINITY];
    [8usize, 16, 32, 64, 128]
        .iter()
        .enumerate()
        .map(|(i, &stride)| LevelSpec {
            stride,
            scale_min: bounds[i],
            scale_max: bounds[i + 1],
        })
        .collect()
}

/// Target-construction knobs.
#[derive(Debug, Clone, Copy)]
pub struct AssignmentConfig {
    /// Center-sampling radius multiplier; the positive region of an
    /// instance is the box of half-size `r * stride` around its
    /// pseudo-box center.
    pub center_radius: f64,
    /// Disk radius for offset supervision, in output-plane cells.
    pub disk_radius: f64,
    /// Gaussian sigma of the heatmap target, in stride-8 cells.
    pub heatmap_sigma: f64,
}

impl Default for AssignmentConfig {
    fn default() -> Self {
        AssignmentConfig { center_radius: 1.5, disk_radius: 4.0, heatmap_sigma: 2.0 }
    }
}

/// A ground-truth person: pose plus its derived pseudo-box and area.
#[derive(Debug, Clone)]
pub struct InstanceAnnotation {
    pub pose: Pose,
    pub pseudo_box: Rect,
    /// Pseudo-box area by default; COCO ingestion substitutes the
    /// dataset-provided segment area.
    pub area: f64,
}

impl InstanceAnnotation {
    /// Builds the annotation, deriving the pseudo-box from the labeled
    /// keypoints. `area_override` carries a dataset-provided area.
    pub fn new(pose: Pose, area_override: Option<f64>) -> Result<Self> {
        let pseudo_box = min_enclosing_rect(&pose)?;
        let area = area_override.unwrap_or_else(|| pseudo_box.area());
        Ok(InstanceAnnotation { pose, pseudo_box, area })
    }
}

/// Maps a feature-plane cell index back onto the input image:
/// `(x*s + floor(s/2), y*s + floor(s/2))`.
pub fn map_location_to_image(x: usize, y: usize, stride: usize) -> (f64, f64) {
    (
        (x * stride + stride / 2) as f64,
        (y * stride + stride / 2) as f64,
    )
}

/// Per-level classification label map and instance association.
#[derive(Debug, Clone)]
pub struct LevelTargets {
    /// 1.0 at positive locations, 0.0 at background.
    pub cls: Array2<f64>,
    /// Index into the instance list, -1 for background.
    pub instance: Array2<i32>,
}

/// Assigns instances to feature locations by center sampling.
///
/// A location is positive iff its image-plane point falls inside the box
/// `(cx - r*s, cy - r*s, cx + r*s, cy + r*s)` of some instance whose
/// pseudo-box longest side lies in the level's scale range (bounds
/// inclusive on the region box). Ambiguous locations go to the instance
/// with the smallest pseudo-box area, ties to the lower index.
pub fn assign_instances(
    levels: &[LevelSpec],
    shapes: &[(usize, usize)],
    instances: &[InstanceAnnotation],
    cfg: &AssignmentConfig,
) -> (Vec<LevelTargets>, usize) {
    assert_eq!(levels.len(), shapes.len());
    let mut out = Vec::with_capacity(levels.len());
    let mut n_pos = 0usize;
    for (level, &(h, w)) in levels.iter().zip(shapes) {
        let mut cls = Array2::zeros((h, w));
        let mut instance = Array2::from_elem((h, w), -1i32);
        // Instances this level is responsible for.
        let eligible: Vec<usize> = (0..instances.len())
            .filter(|&i| {
                let side = instances[i].pseudo_box.longest_side();
                side > level.scale_min && side <= level.scale_max
            })
            .collect();
        if !eligible.is_empty() {
            let rs = cfg.center_radius * level.stride as f64;
            for row in 0..h {
                for col in 0..w {
                    let (px, py) = map_location_to_image(col, row, level.stride);
                    let mut best: Option<usize> = None;
                    for &i in &eligible {
                        let (cx, cy) = instances[i].pseudo_box.center();
                        let region = Rect::new(cx - rs, cy - rs, cx + rs, cy + rs);
                        if region.contains(px, py) {
                            best = match best {
                                None => Some(i),
                                Some(b) if instances[i].pseudo_box.area()
                                    < instances[b].pseudo_box.area() =>
                                {
                                    Some(i)
                                }
                                other => other,
                            };
                        }
                    }
                    if let Some(i) = best {
                        cls[(row, col)] = 1.0;
                        instance[(row, col)] = i as i32;
                        n_pos += 1;
                    }
                }
            }
        }
        out.push(LevelTargets { cls, instance });
    }
    (out, n_pos)
}

/// One-hot keypoint targets of a single instance on the output plane,
/// stored sparsely as the foreground cell per keypoint.
#[derive(Debug, Clone)]
pub struct KeypointCells {
    /// `(row, col)` of the single foreground cell, for valid keypoints.
    pub cells: Vec<Option<(usize, usize)>>,
    /// Keypoints that take part in the loss (visible, v = 2).
    pub valid: Vec<bool>,
    /// Count of visible keypoints that fell outside the grid and were
    /// clamped to the border.
    pub clamped: usize,
}

impl KeypointCells {
    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// Materializes the dense `(K, h, w)` one-hot masks.
    pub fn dense(&self, h: usize, w: usize) -> Array3<f64> {
        let mut m = Array3::zeros((self.cells.len(), h, w));
        for (j, cell) in self.cells.iter().enumerate() {
            if let (true, Some((r, c))) = (self.valid[j], cell) {
                m[(j, *r, *c)] = 1.0;
            }
        }
        m
    }
}

/// Builds the one-hot targets of one instance: each visible keypoint
/// lights the single cell `(floor(x/s), floor(y/s))`; keypoints with
/// v < 2 are marked invalid. Visible keypoints mapping outside the grid
/// are clamped to the border cell and counted.
pub fn keypoint_onehot_target(
    instance: &InstanceAnnotation,
    stride: usize,
    map_h: usize,
    map_w: usize,
) -> KeypointCells {
    let k = instance.pose.num_keypoints();
    let mut cells = vec![None; k];
    let mut valid = vec![false; k];
    let mut clamped = 0usize;
    for (j, kp) in instance.pose.keypoints.iter().enumerate() {
        if !kp.v.is_visible() {
            continue;
        }
        let mut col = (kp.x / stride as f64).floor() as i64;
        let mut row = (kp.y / stride as f64).floor() as i64;
        if col < 0 || row < 0 || col >= map_w as i64 || row >= map_h as i64 {
            clamped += 1;
            col = col.clamp(0, map_w as i64 - 1);
            row = row.clamp(0, map_h as i64 - 1);
        }
        cells[j] = Some((row as usize, col as usize));
        valid[j] = true;
    }
    KeypointCells { cells, valid, clamped }
}

/// Disk-offset target field and its supervision mask.
///
/// For every keypoint category `j`, each cell `p` within distance `R`
/// (in cells) of a labeled keypoint's feature-plane position `kp/s`
/// stores the vector `kp/s - p` and is marked supervised; overlapping
/// disks of the same category resolve to the nearest keypoint. The field
/// is instance-agnostic.
pub fn disk_offset_target(
    instances: &[InstanceAnnotation],
    stride: usize,
    disk_radius: f64,
    map_h: usize,
    map_w: usize,
    num_keypoints: usize,
) -> (Array3<f64>, Array3<bool>) {
    let mut field = Array3::zeros((2 * num_keypoints, map_h, map_w));
    let mut mask = Array3::from_elem((num_keypoints, map_h, map_w), false);
    let mut best_d2 = Array3::from_elem((num_keypoints, map_h, map_w), f64::INFINITY);
    let r = disk_radius;
    for inst in instances {
        for (j, kp) in inst.pose.keypoints.iter().enumerate() {
            if !kp.v.is_labeled() {
                continue;
            }
            let fx = kp.x / stride as f64;
            let fy = kp.y / stride as f64;
            let row_lo = ((fy - r).ceil() as i64).max(0);
            let row_hi = ((fy + r).floor() as i64).min(map_h as i64 - 1);
            let col_lo = ((fx - r).ceil() as i64).max(0);
            let col_hi = ((fx + r).floor() as i64).min(map_w as i64 - 1);
            for row in row_lo..=row_hi {
                for col in col_lo..=col_hi {
                    let dx = fx - col as f64;
                    let dy = fy - row as f64;
                    let d2 = dx * dx + dy * dy;
                    if d2.sqrt() <= r && d2 < best_d2[(j, row as usize, col as usize)] {
                        best_d2[(j, row as usize, col as usize)] = d2;
                        mask[(j, row as usize, col as usize)] = true;
                        field[(2 * j, row as usize, col as usize)] = dx;
                        field[(2 * j + 1, row as usize, col as usize)] = dy;
                    }
                }
            }
        }
    }
    (field, mask)
}

/// Gaussian heatmap target: per category, the pointwise maximum of
/// unnormalized Gaussians `exp(-d^2 / (2 sigma^2))` centered at each
/// labeled keypoint's cell, so the value is exactly 1 at center cells.
pub fn heatmap_target(
    instances: &[InstanceAnnotation],
    stride: usize,
    sigma: f64,
    map_h: usize,
    map_w: usize,
    num_keypoints: usize,
) -> Array3<f64> {
    let mut heat = Array3::zeros((num_keypoints, map_h, map_w));
    let denom = 2.0 * sigma * sigma;
    for inst in instances {
        for (j, kp) in inst.pose.keypoints.iter().enumerate() {
            if !kp.v.is_labeled() {
                continue;
            }
            let cx = ((kp.x / stride as f64).floor() as i64).clamp(0, map_w as i64 - 1);
            let cy = ((kp.y / stride as f64).floor() as i64).clamp(0, map_h as i64 - 1);
            for row in 0..map_h {
                for col in 0..map_w {
                    let d2 = (row as f64 - cy as f64).powi(2) + (col as f64 - cx as f64).powi(2);
                    let g = (-d2 / denom).exp();
                    if g > heat[(j, row, col)] {
                        heat[(j, row, col)] = g;
                    }
                }
            }
        }
    }
    heat
}

/// Every target array needed to train on one image.
#[derive(Debug, Clone)]
pub struct TrainingTargets {
    pub levels: Vec<LevelTargets>,
    /// Positive-location count across all levels.
    pub n_pos: usize,
    /// Per-instance one-hot keypoint cells on the output plane.
    pub onehot: Vec<KeypointCells>,
    /// `(2K, h_out, w_out)` offset vectors in output-plane cells.
    pub offsets: Array3<f64>,
    /// `(K, h_out, w_out)` supervision mask of the offset field.
    pub offset_mask: Array3<bool>,
    /// `(K, h8, w8)` heatmap target on the stride-8 plane.
    pub heatmap: Array3<f64>,
    /// Total visible keypoints clamped to the grid border.
    pub clamped_keypoints: usize,
}

/// Builds all training targets for one image.
///
/// `level_shapes` are the per-level map shapes, `out_shape`/`out_stride`
/// describe the keypoint output plane (stride 8 at the default
/// resolution ratio) and `heat_shape` the stride-8 heatmap plane.
#[allow(clippy::too_many_arguments)]
pub fn build_training_targets(
    levels: &[LevelSpec],
    level_shapes: &[(usize, usize)],
    instances: &[InstanceAnnotation],
    cfg: &AssignmentConfig,
    out_stride: usize,
    out_shape: (usize, usize),
    heat_shape: (usize, usize),
    num_keypoints: usize,
) -> TrainingTargets {
    let (level_targets, n_pos) = assign_instances(levels, level_shapes, instances, cfg);
    let mut clamped = 0usize;
    let onehot: Vec<KeypointCells> = instances
        .iter()
        .map(|inst| {
            let t = keypoint_onehot_target(inst, out_stride, out_shape.0, out_shape.1);
            clamped += t.clamped;
            t
        })
        .collect();
    let (offsets, offset_mask) = disk_offset_target(
        instances,
        out_stride,
        cfg.disk_radius,
        out_shape.0,
        out_shape.1,
        num_keypoints,
    );
    let heatmap = heatmap_target(
        instances,
        8,
        cfg.heatmap_sigma,
        heat_shape.0,
        heat_shape.1,
        num_keypoints,
    );
    TrainingTargets {
        levels: level_targets,
        n_pos,
        onehot,
        offsets,
        offset_mask,
        heatmap,
        clamped_keypoints: clamped,
    }
}
