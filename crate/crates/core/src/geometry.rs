//! Pose and box primitives plus the similarity measures built on them:
//! minimum enclosing rectangles, IoU, OKS and greedy keypoint NMS.
//!
//! Everything here is a pure function on immutable values.

use crate::error::{Error, Result};

/// COCO-style visibility flag of a keypoint annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visibility {
    /// Not labeled; the coordinates carry no meaning.
    NotLabeled,
    /// Labeled but not visible (occluded).
    Hidden,
    /// Labeled and visible.
    Visible,
}

impl Visibility {
    pub fn from_flag(v: i64) -> Visibility {
        match v {
            2 => Visibility::Visible,
            1 => Visibility::Hidden,
            _ => Visibility::NotLabeled,
        }
    }

    pub fn flag(self) -> i64 {
        match self {
            Visibility::NotLabeled => 0,
            Visibility::Hidden => 1,
            Visibility::Visible => 2,
        }
    }

    /// Labeled keypoints (v > 0) take part in geometry and evaluation.
    pub fn is_labeled(self) -> bool {
        !matches!(self, Visibility::NotLabeled)
    }

    pub fn is_visible(self) -> bool {
        matches!(self, Visibility::Visible)
    }
}

/// One keypoint in image pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Keypoint {
    pub x: f64,
    pub y: f64,
    pub v: Visibility,
}

impl Keypoint {
    pub fn new(x: f64, y: f64, v: Visibility) -> Self {
        Keypoint { x, y, v }
    }

    pub fn visible(x: f64, y: f64) -> Self {
        Keypoint::new(x, y, Visibility::Visible)
    }

    pub fn not_labeled() -> Self {
        Keypoint::new(0.0, 0.0, Visibility::NotLabeled)
    }
}

/// A person pose: a fixed-length list of keypoints (K is set by the
/// dataset skeleton, 17 for COCO).
#[derive(Debug, Clone, PartialEq)]
pub struct Pose {
    pub keypoints: Vec<Keypoint>,
}

impl Pose {
    pub fn new(keypoints: Vec<Keypoint>) -> Self {
        Pose { keypoints }
    }

    pub fn num_keypoints(&self) -> usize {
        self.keypoints.len()
    }

    pub fn labeled_count(&self) -> usize {
        self.keypoints.iter().filter(|k| k.v.is_labeled()).count()
    }

    pub fn visible_count(&self) -> usize {
        self.keypoints.iter().filter(|k| k.v.is_visible()).count()
    }

    /// Builds a pose from a COCO flat triplet list `[x1,y1,v1,...]`.
    pub fn from_flat(flat: &[f64]) -> Result<Pose> {
        if flat.len() % 3 != 0 {
            return Err(Error::Annotation(format!(
                "keypoint triplet list has length {} (not a multiple of 3)",
                flat.len()
            )));
        }
        let keypoints = flat
            .chunks_exact(3)
            .map(|c| Keypoint::new(c[0], c[1], Visibility::from_flag(c[2] as i64)))
            .collect();
        Ok(Pose { keypoints })
    }

    /// Flattens to COCO triplets, writing the visibility flag as-is.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.keypoints.len() * 3);
        for k in &self.keypoints {
            out.push(k.x);
            out.push(k.y);
            out.push(k.v.flag() as f64);
        }
        out
    }
}

/// Axis-aligned rectangle in image pixels, `x_min <= x_max`, `y_min <= y_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Self {
        debug_assert!(x_min <= x_max && y_min <= y_max);
        Rect { x_min, y_min, x_max, y_max }
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))
    }

    pub fn longest_side(&self) -> f64 {
        self.width().max(self.height())
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }
}

/// A decoded instance: confidence, pose and the minimum enclosing
/// rectangle of the pose (used for NMS).
#[derive(Debug, Clone)]
pub struct Detection {
    pub score: f64,
    pub pose: Pose,
    pub rect: Rect,
    /// Per-joint confidences, same length as the pose.
    pub joint_scores: Vec<f64>,
}

/// Tightest axis-aligned rectangle containing every labeled (v > 0)
/// keypoint of the pose.
///
/// Errors when no keypoint is labeled: such a pose has no geometry.
pub fn min_enclosing_rect(pose: &Pose) -> Result<Rect> {
    let mut any = false;
    let (mut x0, mut y0) = (f64::INFINITY, f64::INFINITY);
    let (mut x1, mut y1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for k in &pose.keypoints {
        if k.v.is_labeled() {
            any = true;
            x0 = x0.min(k.x);
            y0 = y0.min(k.y);
            x1 = x1.max(k.x);
            y1 = y1.max(k.y);
        }
    }
    if !any {
        return Err(Error::AllKeypointsUnlabeled);
    }
    Ok(Rect::new(x0, y0, x1, y1))
}

/// Intersection over union of two rectangles. Degenerate (zero-area)
/// inputs yield 0, including the identical-point case.
pub fn box_iou(a: &Rect, b: &Rect) -> f64 {
    let ix = (a.x_max.min(b.x_max) - a.x_min.max(b.x_min)).max(0.0);
    let iy = (a.y_max.min(b.y_max) - a.y_min.max(b.y_min)).max(0.0);
    let inter = ix * iy;
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        0.0
    } else {
        inter / union
    }
}

/// Object Keypoint Similarity between a predicted and a ground-truth pose.
///
/// `OKS = sum_j [v_j>0] exp(-d_j^2 / (2 * area * kappa_j^2)) / sum_j [v_j>0]`
/// where the indicator runs over the ground truth's labeled joints.
pub fn oks(pred: &Pose, gt: &Pose, gt_area: f64, kappas: &[f64]) -> Result<f64> {
    if gt.num_keypoints() != pred.num_keypoints() {
        return Err(Error::KeypointCountMismatch {
            expected: gt.num_keypoints(),
            actual: pred.num_keypoints(),
        });
    }
    if kappas.len() != gt.num_keypoints() {
        return Err(Error::KeypointCountMismatch {
            expected: gt.num_keypoints(),
            actual: kappas.len(),
        });
    }
    if gt_area <= 0.0 {
        return Err(Error::NonPositiveArea(gt_area));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for j in 0..gt.num_keypoints() {
        let g = gt.keypoints[j];
        if !g.v.is_labeled() {
            continue;
        }
        let p = pred.keypoints[j];
        let d2 = (p.x - g.x).powi(2) + (p.y - g.y).powi(2);
        total += (-d2 / (2.0 * gt_area * kappas[j] * kappas[j])).exp();
        count += 1;
    }
    if count == 0 {
        return Err(Error::NoLabeledKeypoints);
    }
    Ok(total / count as f64)
}

/// Greedy non-maximum suppression over the detections' minimum enclosing
/// rectangles.
///
/// Detections are visited in descending score order (ties broken by the
/// lower original index); a detection is kept when its rect IoU against
/// every already-kept rect stays below `iou_threshold`. The output is
/// sorted by descending score.
pub fn keypoint_nms(dets: &[Detection], iou_threshold: f64) -> Vec<Detection> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| {
        dets[b]
            .score
            .partial_cmp(&dets[a].score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut kept: Vec<usize> = Vec::new();
    for &i in &order {
        let suppressed = kept
            .iter()
            .any(|&j| box_iou(&dets[i].rect, &dets[j].rect) >= iou_threshold);
        if !suppressed {
            kept.push(i);
        }
    }
    kept.into_iter().map(|i| dets[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pose(points: &[(f64, f64, i64)]) -> Pose {
        Pose::new(
            points
                .iter()
                .map(|&(x, y, v)| Keypoint::new(x, y, Visibility::from_flag(v)))
                .collect(),
        )
    }

    #[test]
    fn enclosing_rect_of_three_points() {
        let p = pose(&[(1.0, 2.0, 2), (3.0, 1.0, 2), (2.0, 5.0, 2)]);
        let r = min_enclosing_rect(&p).unwrap();
        assert_eq!(r, Rect::new(1.0, 1.0, 3.0, 5.0));
    }

    #[test]
    fn enclosing_rect_single_point_is_degenerate() {
        let p = pose(&[(4.0, 4.0, 2)]);
        let r = min_enclosing_rect(&p).unwrap();
        assert_eq!(r, Rect::new(4.0, 4.0, 4.0, 4.0));
        assert_eq!(r.area(), 0.0);
    }

    #[test]
    fn enclosing_rect_ignores_unlabeled() {
        let p = pose(&[(0.0, 0.0, 2), (10.0, 10.0, 0)]);
        let r = min_enclosing_rect(&p).unwrap();
        assert_eq!(r, Rect::new(0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn enclosing_rect_errors_on_unlabeled_pose() {
        let p = pose(&[(1.0, 1.0, 0), (2.0, 2.0, 0)]);
        assert!(matches!(
            min_enclosing_rect(&p),
            Err(Error::AllKeypointsUnlabeled)
        ));
    }

    #[test]
    fn iou_identity_partial_disjoint() {
        let a = Rect::new(0.0, 0.0, 10.0, 10.0);
        assert_abs_diff_eq!(box_iou(&a, &a), 1.0);
        let b = Rect::new(5.0, 0.0, 15.0, 10.0);
        assert_abs_diff_eq!(box_iou(&a, &b), 1.0 / 3.0, epsilon = 1e-12);
        let c = Rect::new(5.0, 5.0, 6.0, 6.0);
        let d = Rect::new(0.0, 0.0, 1.0, 1.0);
        assert_eq!(box_iou(&c, &d), 0.0);
    }

    #[test]
    fn iou_degenerate_points_are_zero() {
        let p = Rect::new(3.0, 3.0, 3.0, 3.0);
        assert_eq!(box_iou(&p, &p), 0.0);
    }

    #[test]
    fn oks_identity_is_one() {
        let g = pose(&[(10.0, 10.0, 2), (20.0, 30.0, 1), (0.0, 0.0, 0)]);
        let kappas = vec![0.08; 3];
        let s = oks(&g, &g, 500.0, &kappas).unwrap();
        assert_abs_diff_eq!(s, 1.0);
    }

    #[test]
    fn oks_single_joint_analytic() {
        // d^2 = 2 * area * kappa^2  ->  exp(-1)
        let area = 400.0;
        let kappa = 0.1f64;
        let d = (2.0 * area * kappa * kappa).sqrt();
        let g = pose(&[(50.0, 50.0, 2)]);
        let p = pose(&[(50.0 + d, 50.0, 2)]);
        let s = oks(&p, &g, area, &[kappa]).unwrap();
        assert_abs_diff_eq!(s, (-1.0f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn oks_errors() {
        let g = pose(&[(1.0, 1.0, 0)]);
        let p = pose(&[(1.0, 1.0, 2)]);
        assert!(matches!(
            oks(&p, &g, 100.0, &[0.08]),
            Err(Error::NoLabeledKeypoints)
        ));
        let g2 = pose(&[(1.0, 1.0, 2)]);
        assert!(matches!(
            oks(&p, &g2, 0.0, &[0.08]),
            Err(Error::NonPositiveArea(_))
        ));
    }

    fn det(score: f64, points: &[(f64, f64)]) -> Detection {
        let p = Pose::new(
            points
                .iter()
                .map(|&(x, y)| Keypoint::visible(x, y))
                .collect(),
        );
        let rect = min_enclosing_rect(&p).unwrap();
        let n = p.num_keypoints();
        Detection { score, pose: p, rect, joint_scores: vec![score; n] }
    }

    #[test]
    fn nms_suppresses_identical_poses() {
        let d1 = det(0.9, &[(0.0, 0.0), (10.0, 10.0)]);
        let d2 = det(0.8, &[(0.0, 0.0), (10.0, 10.0)]);
        let kept = keypoint_nms(&[d2, d1], 0.6);
        assert_eq!(kept.len(), 1);
        assert_abs_diff_eq!(kept[0].score, 0.9);
    }

    #[test]
    fn nms_keeps_disjoint_detections() {
        let d1 = det(0.9, &[(0.0, 0.0), (10.0, 10.0)]);
        let d2 = det(0.8, &[(50.0, 50.0), (60.0, 60.0)]);
        let kept = keypoint_nms(&[d1, d2], 0.6);
        assert_eq!(kept.len(), 2);
        assert!(kept[0].score >= kept[1].score);
    }

    #[test]
    fn nms_empty_input() {
        assert!(keypoint_nms(&[], 0.5).is_empty());
    }
}
