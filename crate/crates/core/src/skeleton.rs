//! Skeleton descriptions: joint names, left/right pairing, drawing edges
//! and the per-joint OKS tolerance constants.

use serde::{Deserialize, Serialize};

/// Which side of the body a joint belongs to, for visualization color
/// coding (center joints magenta, left blue, right orange).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JointGroup {
    Center,
    Left,
    Right,
}

/// A keypoint layout shared by the dataset, the targets and the decoder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Skeleton {
    pub joint_names: Vec<String>,
    /// Index pairs `(left, right)` swapped under horizontal flips.
    pub flip_pairs: Vec<(usize, usize)>,
    /// Bone segments as joint-index pairs, used for rendering.
    pub edges: Vec<(usize, usize)>,
    /// Per-joint OKS constants kappa (the COCO standard uses 2*sigma).
    pub kappas: Vec<f64>,
    pub groups: Vec<JointGroup>,
}

impl Skeleton {
    pub fn num_joints(&self) -> usize {
        self.joint_names.len()
    }

    /// Joint index reached from `j` after a horizontal flip.
    pub fn flipped_index(&self, j: usize) -> usize {
        for &(l, r) in &self.flip_pairs {
            if j == l {
                return r;
            }
            if j == r {
                return l;
            }
        }
        j
    }

    /// The 17-joint COCO person skeleton with the standard OKS constants.
    pub fn coco17() -> Self {
        let names = [
            "nose",
            "left_eye",
            "right_eye",
            "left_ear",
            "right_ear",
            "left_shoulder",
            "right_shoulder",
            "left_elbow",
            "right_elbow",
            "left_wrist",
            "right_wrist",
            "left_hip",
            "right_hip",
            "left_knee",
            "right_knee",
            "left_ankle",
            "right_ankle",
        ];
        // COCO per-joint sigmas; OKS uses kappa = 2*sigma.
        let sigmas = [
            0.026, 0.025, 0.025, 0.035, 0.035, 0.079, 0.079, 0.072, 0.072, 0.062, 0.062, 0.107,
            0.107, 0.087, 0.087, 0.089, 0.089,
        ];
        let mut groups = vec![JointGroup::Center];
        for i in 1..17 {
            groups.push(if i % 2 == 1 {
                JointGroup::Left
            } else {
                JointGroup::Right
            });
        }
        Skeleton {
            joint_names: names.iter().map(|s| s.to_string()).collect(),
            flip_pairs: vec![(1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12), (13, 14), (15, 16)],
            edges: vec![
                (0, 1),
                (0, 2),
                (1, 3),
                (2, 4),
                (5, 6),
                (5, 7),
                (7, 9),
                (6, 8),
                (8, 10),
                (5, 11),
                (6, 12),
                (11, 12),
                (11, 13),
                (13, 15),
                (12, 14),
                (14, 16),
            ],
            kappas: sigmas.iter().map(|s| 2.0 * s).collect(),
            groups,
        }
    }

    /// A reduced 5-joint skeleton (head plus hands and feet) for fast
    /// synthetic experiments. Uses a uniform kappa of 0.08.
    pub fn simple5() -> Self {
        let names = ["head", "left_hand", "right_hand", "left_foot", "right_foot"];
        Skeleton {
            joint_names: names.iter().map(|s| s.to_string()).collect(),
            flip_pairs: vec![(1, 2), (3, 4)],
            edges: vec![(0, 1), (0, 2), (0, 3), (0, 4)],
            kappas: vec![0.08; 5],
            groups: vec![
                JointGroup::Center,
                JointGroup::Left,
                JointGroup::Right,
                JointGroup::Left,
                JointGroup::Right,
            ],
        }
    }

    /// Skeleton for a given joint count: 17 and 5 get the named layouts,
    /// anything else a generic left/right-free chain with uniform kappas.
    pub fn for_joint_count(k: usize) -> Self {
        match k {
            17 => Self::coco17(),
            5 => Self::simple5(),
            _ => Skeleton {
                joint_names: (0..k).map(|i| format!("joint_{i}")).collect(),
                flip_pairs: vec![],
                edges: (1..k).map(|i| (i - 1, i)).collect(),
                kappas: vec![0.08; k],
                groups: vec![JointGroup::Center; k],
            },
        }
    }
}

/// Uniform per-joint kappas, the synthetic-dataset default.
pub fn uniform_kappas(k: usize, kappa: f64) -> Vec<f64> {
    vec![kappa; k]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coco17_flip_pairs_swap_left_right() {
        let sk = Skeleton::coco17();
        assert_eq!(sk.num_joints(), 17);
        // left_shoulder (5) <-> right_shoulder (6)
        assert_eq!(sk.flipped_index(5), 6);
        assert_eq!(sk.flipped_index(6), 5);
        assert_eq!(sk.flipped_index(0), 0);
    }

    #[test]
    fn groups_follow_name_sides() {
        let sk = Skeleton::coco17();
        for (i, name) in sk.joint_names.iter().enumerate() {
            if name.starts_with("left") {
                assert_eq!(sk.groups[i], JointGroup::Left, "{name}");
            } else if name.starts_with("right") {
                assert_eq!(sk.groups[i], JointGroup::Right, "{name}");
            }
        }
    }
}
