//! Rigid transforms and single-joint posing.

use super::{ArticulatedObject, JointKind};
use crate::{Mat3, Vec3};
use nalgebra::{Rotation3, Unit};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PoseError {
    #[error("unknown joint id {0}")]
    UnknownJoint(usize),
}

/// Rotation followed by translation: `p ↦ R p + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidTransform {
    pub rotation: Mat3,
    pub translation: Vec3,
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self {
            rotation: Mat3::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn translation(t: Vec3) -> Self {
        Self {
            rotation: Mat3::identity(),
            translation: t,
        }
    }

    /// Rotation by `angle` about the (unit) `axis` through `origin`.
    pub fn rotation_about(axis: Vec3, origin: Vec3, angle: f64) -> Self {
        let rot = Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle);
        let rotation = *rot.matrix();
        Self {
            translation: origin - rotation * origin,
            rotation,
        }
    }

    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    /// Rotate a direction (ignores translation).
    pub fn apply_dir(&self, d: &Vec3) -> Vec3 {
        self.rotation * d
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let rt = self.rotation.transpose();
        RigidTransform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }
}

/// World transform moving the child part of `joint_id` to configuration `q`.
///
/// Revolute and continuous joints rotate about their axis through the axis
/// origin; prismatic joints translate along the axis; screw joints couple
/// both, with one full turn traversing the joint's translation span; fixed
/// joints are the identity regardless of `q`. `q` is not clamped.
pub fn pose_part(
    object: &ArticulatedObject,
    joint_id: usize,
    q: f64,
) -> Result<RigidTransform, PoseError> {
    let joint = object
        .joint(joint_id)
        .ok_or(PoseError::UnknownJoint(joint_id))?;
    let transform = match joint.kind {
        JointKind::Fixed => RigidTransform::identity(),
        JointKind::Revolute | JointKind::Continuous => {
            let origin = joint.axis_origin.unwrap_or_else(Vec3::zeros);
            RigidTransform::rotation_about(joint.axis_dir, origin, q)
        }
        JointKind::Prismatic => RigidTransform::translation(joint.axis_dir * q),
        JointKind::Screw => {
            let origin = joint.axis_origin.unwrap_or_else(Vec3::zeros);
            let span = joint.limit.map(|l| l.span()).unwrap_or(0.0);
            // One revolution per traversal of the translation span; a
            // degenerate span leaves the rotation at zero.
            let angle = if span > 1e-12 {
                q / span * std::f64::consts::TAU
            } else {
                0.0
            };
            let screw = RigidTransform::rotation_about(joint.axis_dir, origin, angle);
            RigidTransform::translation(joint.axis_dir * q).compose(&screw)
        }
    };
    Ok(transform)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{Aabb, Interval, Joint, Link};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn two_link(joint: Joint) -> ArticulatedObject {
        let link = |id| Link {
            id,
            name: format!("link_{id}"),
            aabb: Aabb::new(Vec3::zeros(), Vec3::repeat(1.0)),
            mesh: None,
        };
        ArticulatedObject::new(vec![link(0), link(1)], vec![joint])
    }

    fn joint(kind: JointKind, axis: [f64; 3], origin: Option<[f64; 3]>, limit: Option<(f64, f64)>) -> Joint {
        Joint {
            id: 0,
            kind,
            parent: 0,
            child: 1,
            axis_dir: Vec3::from(axis),
            axis_origin: origin.map(Vec3::from),
            limit: limit.map(|(lo, hi)| Interval::new(lo, hi)),
        }
    }

    #[test]
    fn revolute_quarter_turn_about_y() {
        let obj = two_link(joint(
            JointKind::Revolute,
            [0.0, 1.0, 0.0],
            Some([0.0, 0.0, 0.0]),
            Some((0.0, PI)),
        ));
        let t = pose_part(&obj, 0, FRAC_PI_2).unwrap();
        let p = t.apply(&Vec3::new(1.0, 0.0, 0.0));
        assert_relative_eq!(p, Vec3::new(0.0, 0.0, -1.0), epsilon = 1e-12);
        assert_relative_eq!(t.translation, Vec3::zeros(), epsilon = 1e-12);
    }

    #[test]
    fn prismatic_translates_along_axis() {
        let obj = two_link(joint(
            JointKind::Prismatic,
            [0.0, 0.0, 1.0],
            None,
            Some((0.0, 0.3717)),
        ));
        let t = pose_part(&obj, 0, 0.3717).unwrap();
        assert_relative_eq!(t.translation, Vec3::new(0.0, 0.0, 0.3717), epsilon = 1e-12);
        assert_eq!(t.rotation, Mat3::identity());
    }

    #[test]
    fn zero_configuration_is_identity_for_all_kinds() {
        for kind in [
            JointKind::Revolute,
            JointKind::Continuous,
            JointKind::Prismatic,
            JointKind::Screw,
            JointKind::Fixed,
        ] {
            let origin = kind.carries_origin().then_some([0.2, 0.1, -0.3]);
            let limit = kind.carries_limit().then_some((0.0, 1.0));
            let obj = two_link(joint(kind, [0.0, 1.0, 0.0], origin, limit));
            let t = pose_part(&obj, 0, 0.0).unwrap();
            assert_relative_eq!(t.rotation, Mat3::identity(), epsilon = 1e-12);
            assert_relative_eq!(t.translation, Vec3::zeros(), epsilon = 1e-12);
        }
    }

    #[test]
    fn rotation_about_offset_origin_fixes_the_origin() {
        let origin = Vec3::new(0.5, 0.0, 0.25);
        let t = RigidTransform::rotation_about(Vec3::new(0.0, 1.0, 0.0), origin, 1.234);
        assert_relative_eq!(t.apply(&origin), origin, epsilon = 1e-12);
    }

    #[test]
    fn screw_full_span_is_full_turn() {
        let obj = two_link(joint(
            JointKind::Screw,
            [0.0, 0.0, 1.0],
            Some([0.0, 0.0, 0.0]),
            Some((0.0, 0.5)),
        ));
        // full travel: rotation wraps to identity, translation = span
        let t = pose_part(&obj, 0, 0.5).unwrap();
        assert_relative_eq!(t.rotation, Mat3::identity(), epsilon = 1e-9);
        assert_relative_eq!(t.translation, Vec3::new(0.0, 0.0, 0.5), epsilon = 1e-9);
        // half travel: half turn
        let t = pose_part(&obj, 0, 0.25).unwrap();
        let p = t.apply(&Vec3::new(1.0, 0.0, 0.0));
        assert_relative_eq!(p, Vec3::new(-1.0, 0.0, 0.25), epsilon = 1e-9);
    }

    #[test]
    fn fixed_ignores_q() {
        let obj = two_link(joint(JointKind::Fixed, [0.0, 0.0, 1.0], None, None));
        let t = pose_part(&obj, 0, 42.0).unwrap();
        assert_eq!(t, RigidTransform::identity());
    }

    #[test]
    fn unknown_joint() {
        let obj = two_link(joint(JointKind::Fixed, [0.0, 0.0, 1.0], None, None));
        assert_eq!(pose_part(&obj, 5, 0.0), Err(PoseError::UnknownJoint(5)));
    }

    #[test]
    fn rotation_composition_adds_angles() {
        let axis = Vec3::new(0.3, 0.8, -0.5).normalize();
        let origin = Vec3::new(0.1, -0.2, 0.4);
        let a = RigidTransform::rotation_about(axis, origin, 0.7);
        let b = RigidTransform::rotation_about(axis, origin, 0.9);
        let ab = a.compose(&b);
        let sum = RigidTransform::rotation_about(axis, origin, 1.6);
        assert_relative_eq!(ab.rotation, sum.rotation, epsilon = 1e-9);
        assert_relative_eq!(ab.translation, sum.translation, epsilon = 1e-9);
    }
}
