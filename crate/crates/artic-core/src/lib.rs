//! Core toolkit for articulated 3D assets.
//!
//! Everything a predictor-agnostic articulation pipeline needs on the CPU
//! side: a kinematic domain model with URDF ingestion and normalization, the
//! quantized articulation script codec (bins, axis codebook, text grammar),
//! mesh/point-cloud geometry kernels, collision-sweep joint-limit refinement,
//! the evaluation metric suite, and training-corpus emission.
//!
//! All operations are pure functions over immutable values; anything seeded
//! is deterministic given its seed.

pub mod codec;
// pub mod corpus;
// pub mod eval;
// pub mod geometry;
pub mod kinematics;
pub mod mesh;
// pub mod refine;
pub mod rng;
// pub mod urdf;

pub use kinematics::{Aabb, ArticulatedObject, Interval, Joint, JointKind, KinematicGraph, Link};
pub use mesh::TriMesh;

/// 3-vector used across the crate (world coordinates, normalized units).
pub type Vec3 = nalgebra::Vector3<f64>;
/// Row-major 3x3 rotation matrix.
pub type Mat3 = nalgebra::Matrix3<f64>;
