//! Object → script encoding.

use super::quant::{
    pos_out_of_range, quantize_box_max, quantize_box_min, quantize_origin, quantize_rot_limit,
    quantize_trans_limit, rot_out_of_range, trans_out_of_range,
};
use super::{ArticulationScript, AxisCodebook, AxisError, QuantBox, QuantJoint};
use crate::kinematics::{ArticulatedObject, JointKind};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EncodeError {
    #[error("object has {0} parts, exceeding the 128-box index vocabulary")]
    TooManyParts(usize),
    #[error("joint {joint} references missing link {link}")]
    DanglingReference { joint: usize, link: usize },
    #[error("joint {joint} kind {kind:?} has no script form (simplify first)")]
    UnsupportedJointKind { joint: usize, kind: JointKind },
    #[error("joint {joint} axis: {source}")]
    Axis {
        joint: usize,
        #[source]
        source: AxisError,
    },
    #[error("joint {joint} ({kind:?}) is missing its {what}")]
    MissingField {
        joint: usize,
        kind: JointKind,
        what: &'static str,
    },
}

/// Encoding result: the script plus any clamping warnings (out-of-range
/// inputs are clamped, not rejected).
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedObject {
    pub script: ArticulationScript,
    pub warnings: Vec<String>,
}

/// Quantize an object into an articulation script.
///
/// Boxes are sorted by quantized minimum coordinate in z-y-x order and
/// re-indexed densely; joints re-point to the new indices and sort ascending
/// by child. Limit intervals are stored low-to-high. The object should be
/// normalized (coordinates within [-1, 1]); anything outside is clamped with
/// a warning.
pub fn encode_object(
    object: &ArticulatedObject,
    codebook: &AxisCodebook,
) -> Result<EncodedObject, EncodeError> {
    if object.links.len() > 128 {
        return Err(EncodeError::TooManyParts(object.links.len()));
    }
    let mut warnings = Vec::new();

    let mut boxes: Vec<(usize, QuantBox)> = object
        .links
        .iter()
        .map(|link| {
            let mut min_bins = [0u32; 3];
            let mut max_bins = [0u32; 3];
            for i in 0..3 {
                if pos_out_of_range(link.aabb.min[i]) || pos_out_of_range(link.aabb.max[i]) {
                    warnings.push(format!(
                        "link {}: AABB axis {i} outside [-1, 1], clamped",
                        link.id
                    ));
                }
                min_bins[i] = quantize_box_min(link.aabb.min[i]);
                max_bins[i] = quantize_box_max(link.aabb.max[i]);
            }
            (link.id, QuantBox { min_bins, max_bins })
        })
        .collect();
    boxes.sort_by_key(|(_, b)| b.sort_key());
    let index_of: HashMap<usize, usize> = boxes
        .iter()
        .enumerate()
        .map(|(new, (id, _))| (*id, new))
        .collect();

    let mut joints: Vec<QuantJoint> = Vec::with_capacity(object.joints.len());
    for joint in &object.joints {
        if joint.kind == JointKind::Fixed {
            return Err(EncodeError::UnsupportedJointKind {
                joint: joint.id,
                kind: joint.kind,
            });
        }
        let lookup = |link: usize| {
            index_of
                .get(&link)
                .copied()
                .ok_or(EncodeError::DanglingReference {
                    joint: joint.id,
                    link,
                })
        };
        let parent = lookup(joint.parent)?;
        let child = lookup(joint.child)?;
        let axis_code = codebook.encode(&joint.axis_dir).map_err(|source| {
            EncodeError::Axis {
                joint: joint.id,
                source,
            }
        })?;

        let origin_bins = if joint.kind.carries_origin() {
            let origin = joint.axis_origin.ok_or(EncodeError::MissingField {
                joint: joint.id,
                kind: joint.kind,
                what: "axis origin",
            })?;
            let mut bins = [0u32; 3];
            for i in 0..3 {
                if pos_out_of_range(origin[i]) {
                    warnings.push(format!(
                        "joint {}: origin axis {i} outside [-1, 1], clamped",
                        joint.id
                    ));
                }
                bins[i] = quantize_origin(origin[i]);
            }
            Some(bins)
        } else {
            None
        };

        let limit_bins = if joint.kind.carries_limit() {
            let limit = joint
                .limit
                .ok_or(EncodeError::MissingField {
                    joint: joint.id,
                    kind: joint.kind,
                    what: "limit",
                })?
                .ordered();
            let bins = match joint.kind {
                JointKind::Revolute => {
                    if rot_out_of_range(limit.lo) || rot_out_of_range(limit.hi) {
                        warnings.push(format!(
                            "joint {}: rotation limit outside [-2π, 2π], clamped",
                            joint.id
                        ));
                    }
                    [quantize_rot_limit(limit.lo), quantize_rot_limit(limit.hi)]
                }
                JointKind::Prismatic | JointKind::Screw => {
                    if trans_out_of_range(limit.lo) || trans_out_of_range(limit.hi) {
                        warnings.push(format!(
                            "joint {}: translation limit outside [-2, 2], clamped",
                            joint.id
                        ));
                    }
                    [
                        quantize_trans_limit(limit.lo),
                        quantize_trans_limit(limit.hi),
                    ]
                }
                _ => unreachable!(),
            };
            Some(bins)
        } else {
            None
        };

        joints.push(QuantJoint {
            kind: joint.kind,
            parent,
            child,
            axis_code,
            origin_bins,
            limit_bins,
        });
    }
    joints.sort_by_key(|j| (j.child, j.parent, j.axis_code));

    Ok(EncodedObject {
        script: ArticulationScript {
            boxes: boxes.into_iter().map(|(_, b)| b).collect(),
            joints,
        },
        warnings,
    })
}
