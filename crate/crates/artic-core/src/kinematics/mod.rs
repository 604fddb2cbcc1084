//! Articulated-object domain model: links, joints, kinematic graph.

mod graph;
mod merge;
mod pose;

pub use graph::{build_graph, GraphError, KinematicGraph};
pub use merge::{merge_links, MergeError};
pub use pose::{pose_part, PoseError, RigidTransform};

use crate::mesh::TriMesh;
use crate::Vec3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for the mesh-inside-AABB containment check, in normalized units.
/// Quantization round-trips perturb boxes slightly, so exact containment is
/// too strict.
pub const AABB_CONTAINMENT_TOL: f64 = 1e-4;

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        Self { min, max }
    }

    /// Smallest box containing all points. `None` for an empty slice.
    pub fn from_points<'a, I: IntoIterator<Item = &'a Vec3>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut aabb = Aabb::new(first, first);
        for p in it {
            aabb.expand_point(p);
        }
        Some(aabb)
    }

    pub fn is_valid(&self) -> bool {
        (0..3).all(|i| self.min[i] <= self.max[i] && self.min[i].is_finite() && self.max[i].is_finite())
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn extent(&self) -> Vec3 {
        self.max - self.min
    }

    pub fn volume(&self) -> f64 {
        let e = self.extent();
        (e.x * e.y * e.z).max(0.0)
    }

    pub fn longest_extent(&self) -> f64 {
        let e = self.extent();
        e.x.max(e.y).max(e.z)
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: self.min.inf(&other.min),
            max: self.max.sup(&other.max),
        }
    }

    pub fn expand_point(&mut self, p: &Vec3) {
        self.min = self.min.inf(p);
        self.max = self.max.sup(p);
    }

    pub fn contains_point(&self, p: &Vec3) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    /// Squared Euclidean distance from `p` to the box (0 if inside).
    pub fn distance_sq(&self, p: &Vec3) -> f64 {
        let mut d2 = 0.0;
        for i in 0..3 {
            let d = if p[i] < self.min[i] {
                self.min[i] - p[i]
            } else if p[i] > self.max[i] {
                p[i] - self.max[i]
            } else {
                0.0
            };
            d2 += d * d;
        }
        d2
    }

    /// Box grown by `margin` on every side.
    pub fn inflated(&self, margin: f64) -> Aabb {
        let m = Vec3::repeat(margin);
        Aabb {
            min: self.min - m,
            max: self.max + m,
        }
    }
}

/// Closed interval of a joint configuration variable. Radians for revolute
/// joints, length units for prismatic and screw joints. `lo > hi` is legal
/// (some source data stores reversed ranges); use [`Interval::ordered`] where
/// ordering matters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// Same interval with endpoints sorted ascending.
    pub fn ordered(&self) -> Interval {
        if self.lo <= self.hi {
            *self
        } else {
            Interval::new(self.hi, self.lo)
        }
    }

    pub fn span(&self) -> f64 {
        (self.hi - self.lo).abs()
    }

    pub fn contains(&self, q: f64) -> bool {
        let o = self.ordered();
        q >= o.lo && q <= o.hi
    }
}

/// Joint kind taxonomy. Screw couples rotation and translation along one
/// axis; Fixed joints exist only between ingestion and simplification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JointKind {
    Revolute,
    Continuous,
    Prismatic,
    Screw,
    Fixed,
}

impl JointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            JointKind::Revolute => "revolute",
            JointKind::Continuous => "continuous",
            JointKind::Prismatic => "prismatic",
            JointKind::Screw => "screw",
            JointKind::Fixed => "fixed",
        }
    }

    /// Prismatic translation is origin-free; everything else anchors to a
    /// point on the axis.
    pub fn carries_origin(&self) -> bool {
        !matches!(self, JointKind::Prismatic)
    }

    pub fn carries_limit(&self) -> bool {
        matches!(self, JointKind::Revolute | JointKind::Prismatic | JointKind::Screw)
    }
}

/// A joint connecting a parent link to a child link, expressed in the world
/// frame of the object's zero configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Joint {
    pub id: usize,
    pub kind: JointKind,
    pub parent: usize,
    pub child: usize,
    /// Unit direction of the motion axis.
    pub axis_dir: Vec3,
    /// Point on the axis; `None` for prismatic joints.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis_origin: Option<Vec3>,
    /// Motion range; `None` for continuous and fixed joints.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<Interval>,
}

/// A rigid part: id, name, box, optional triangle mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub id: usize,
    pub name: String,
    pub aabb: Aabb,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<TriMesh>,
}

impl Link {
    /// Recompute the AABB from the mesh when one is present. Meshes are
    /// authoritative over stored boxes.
    pub fn sync_aabb(&mut self) {
        if let Some(mesh) = &self.mesh {
            if let Some(aabb) = mesh.aabb() {
                self.aabb = aabb;
            }
        }
    }
}

/// An articulated object: links plus joints forming a kinematic tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArticulatedObject {
    pub links: Vec<Link>,
    pub joints: Vec<Joint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ValidationError {
    #[error("duplicate link id {0}")]
    DuplicateLinkId(usize),
    #[error("joint {joint} references missing link {link}")]
    DanglingReference { joint: usize, link: usize },
    #[error("joint {0} connects a link to itself")]
    SelfLoop(usize),
    #[error("joint {joint} axis has norm {norm}, expected 1")]
    NonUnitAxis { joint: usize, norm: f64 },
    #[error("joint {0} ({kind:?}) has inconsistent origin/limit fields", kind = .1)]
    FieldMismatch(usize, JointKind),
    #[error("link {link} mesh vertex escapes its AABB by {excess}")]
    MeshOutsideAabb { link: usize, excess: f64 },
    #[error("link {0} AABB has min > max")]
    InvalidAabb(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl ArticulatedObject {
    pub fn new(links: Vec<Link>, joints: Vec<Joint>) -> Self {
        Self {
            links,
            joints,
            category: None,
        }
    }

    pub fn link(&self, id: usize) -> Option<&Link> {
        self.links.iter().find(|l| l.id == id)
    }

    pub fn joint(&self, id: usize) -> Option<&Joint> {
        self.joints.iter().find(|j| j.id == id)
    }

    /// Union AABB over all links, preferring mesh geometry when present.
    pub fn union_aabb(&self) -> Option<Aabb> {
        let mut out: Option<Aabb> = None;
        for link in &self.links {
            let b = match &link.mesh {
                Some(mesh) => mesh.aabb().unwrap_or(link.aabb),
                None => link.aabb,
            };
            out = Some(match out {
                Some(acc) => acc.union(&b),
                None => b,
            });
        }
        out
    }

    /// Structural validation: referential integrity, per-kind field presence,
    /// unit axes, mesh containment, and tree shape.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut seen = std::collections::HashSet::new();
        for link in &self.links {
            if !seen.insert(link.id) {
                return Err(ValidationError::DuplicateLinkId(link.id));
            }
            if !link.aabb.is_valid() {
                return Err(ValidationError::InvalidAabb(link.id));
            }
            if let Some(mesh) = &link.mesh {
                let bounds = link.aabb.inflated(AABB_CONTAINMENT_TOL);
                for v in &mesh.vertices {
                    if !bounds.contains_point(v) {
                        let excess = bounds.distance_sq(v).sqrt();
                        return Err(ValidationError::MeshOutsideAabb {
                            link: link.id,
                            excess,
                        });
                    }
                }
            }
        }
        for joint in &self.joints {
            for link in [joint.parent, joint.child] {
                if !seen.contains(&link) {
                    return Err(ValidationError::DanglingReference {
                        joint: joint.id,
                        link,
                    });
                }
            }
            if joint.parent == joint.child {
                return Err(ValidationError::SelfLoop(joint.id));
            }
            let norm = joint.axis_dir.norm();
            if joint.kind != JointKind::Fixed && (norm - 1.0).abs() > 1e-9 {
                return Err(ValidationError::NonUnitAxis {
                    joint: joint.id,
                    norm,
                });
            }
            let origin_ok = joint.axis_origin.is_some() == joint.kind.carries_origin()
                || joint.kind == JointKind::Fixed;
            let limit_ok = match joint.kind {
                JointKind::Continuous | JointKind::Fixed => joint.limit.is_none(),
                _ => joint.limit.is_some(),
            };
            if !origin_ok || !limit_ok {
                return Err(ValidationError::FieldMismatch(joint.id, joint.kind));
            }
        }
        build_graph(self)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn box_link(id: usize, min: [f64; 3], max: [f64; 3]) -> Link {
        Link {
            id,
            name: format!("link_{id}"),
            aabb: Aabb::new(Vec3::from(min), Vec3::from(max)),
            mesh: None,
        }
    }

    pub(crate) fn revolute(id: usize, parent: usize, child: usize) -> Joint {
        Joint {
            id,
            kind: JointKind::Revolute,
            parent,
            child,
            axis_dir: Vec3::new(0.0, 1.0, 0.0),
            axis_origin: Some(Vec3::zeros()),
            limit: Some(Interval::new(0.0, 1.0)),
        }
    }

    #[test]
    fn aabb_union_and_volume() {
        let a = Aabb::new(Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 1.0, 1.0));
        let b = Aabb::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(2.0, 1.0, 1.0));
        let u = a.union(&b);
        assert_eq!(u.min, Vec3::new(0.0, 0.0, 0.0));
        assert_eq!(u.max, Vec3::new(2.0, 1.0, 1.0));
        assert!((u.volume() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn aabb_distance_zero_inside() {
        let a = Aabb::new(Vec3::zeros(), Vec3::new(1.0, 1.0, 1.0));
        assert_eq!(a.distance_sq(&Vec3::new(0.5, 0.5, 0.5)), 0.0);
        assert!((a.distance_sq(&Vec3::new(1.5, 0.5, 0.5)) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn interval_ordered() {
        let r = Interval::new(0.0, -1.5).ordered();
        assert_eq!((r.lo, r.hi), (-1.5, 0.0));
        assert!(Interval::new(0.0, -1.5).contains(-1.0));
    }

    #[test]
    fn validate_catches_dangling_reference() {
        let obj = ArticulatedObject::new(
            vec![box_link(0, [0.0; 3], [1.0; 3])],
            vec![revolute(0, 0, 7)],
        );
        assert_eq!(
            obj.validate(),
            Err(ValidationError::DanglingReference { joint: 0, link: 7 })
        );
    }

    #[test]
    fn validate_catches_non_unit_axis() {
        let mut j = revolute(0, 0, 1);
        j.axis_dir = Vec3::new(0.0, 2.0, 0.0);
        let obj = ArticulatedObject::new(
            vec![box_link(0, [0.0; 3], [1.0; 3]), box_link(1, [0.0; 3], [1.0; 3])],
            vec![j],
        );
        assert!(matches!(
            obj.validate(),
            Err(ValidationError::NonUnitAxis { joint: 0, .. })
        ));
    }

    #[test]
    fn validate_prismatic_must_not_carry_origin() {
        let j = Joint {
            id: 0,
            kind: JointKind::Prismatic,
            parent: 0,
            child: 1,
            axis_dir: Vec3::new(0.0, 0.0, 1.0),
            axis_origin: Some(Vec3::zeros()),
            limit: Some(Interval::new(0.0, 1.0)),
        };
        let obj = ArticulatedObject::new(
            vec![box_link(0, [0.0; 3], [1.0; 3]), box_link(1, [0.0; 3], [1.0; 3])],
            vec![j],
        );
        assert!(matches!(
            obj.validate(),
            Err(ValidationError::FieldMismatch(0, JointKind::Prismatic))
        ));
    }
}
