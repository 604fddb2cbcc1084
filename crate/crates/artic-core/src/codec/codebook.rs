//! 128-entry unit-direction codebook for joint axes.
//!
//! Most joint axes in articulation data are axis-aligned or lie in a
//! coordinate plane, so the codebook samples the three coordinate-plane unit
//! circles densely (15° pitch) and fills the rest of the sphere with
//! farthest-point sampling over a Fibonacci sphere.

use crate::Vec3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const AXIS_COUNT: usize = 128;
const CIRCLE_SAMPLES: usize = 24; // 15° pitch
const FIBONACCI_CANDIDATES: usize = 512;

#[derive(Debug, Error, PartialEq)]
pub enum AxisError {
    #[error("direction has norm {0}, expected a unit vector")]
    NonUnitVector(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisProvenance {
    CircleXy,
    CircleYz,
    CircleXz,
    Fibonacci,
}

impl AxisProvenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisProvenance::CircleXy => "circle-xy",
            AxisProvenance::CircleYz => "circle-yz",
            AxisProvenance::CircleXz => "circle-xz",
            AxisProvenance::Fibonacci => "fibonacci",
        }
    }
}

/// Immutable direction codebook; build once, share everywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisCodebook {
    entries: Vec<Vec3>,
    provenance: Vec<AxisProvenance>,
}

impl AxisCodebook {
    pub fn entries(&self) -> &[Vec3] {
        &self.entries
    }

    pub fn provenance(&self) -> &[AxisProvenance] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nearest entry to a unit direction by angle (argmax of the dot
    /// product); ties break to the lowest index.
    pub fn encode(&self, dir: &Vec3) -> Result<u32, AxisError> {
        let norm = dir.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(AxisError::NonUnitVector(norm));
        }
        let mut best = 0usize;
        let mut best_dot = f64::NEG_INFINITY;
        for (i, e) in self.entries.iter().enumerate() {
            let d = e.dot(dir);
            if d > best_dot {
                best_dot = d;
                best = i;
            }
        }
        Ok(best as u32)
    }

    pub fn decode(&self, code: u32) -> Option<Vec3> {
        self.entries.get(code as usize).copied()
    }

    /// Plain-text dump `index,x,y,z,provenance`, one entry per line, for
    /// aligning external predictors.
    pub fn dump_csv(&self) -> String {
        let mut out = String::from("index,x,y,z,provenance\n");
        for (i, (e, p)) in self.entries.iter().zip(&self.provenance).enumerate() {
            out.push_str(&format!(
                "{i},{:.17},{:.17},{:.17},{}\n",
                e.x,
                e.y,
                e.z,
                p.as_str()
            ));
        }
        out
    }
}

fn angular_distance(a: &Vec3, b: &Vec3) -> f64 {
    a.dot(b).clamp(-1.0, 1.0).acos()
}

/// Build the codebook. Deterministic: entries 0..5 are the signed coordinate
/// axes (+X, -X, +Y, -Y, +Z, -Z), entries 6..65 the remaining circle
/// samples in plane order XY, YZ, XZ, and entries 66..127 farthest-point
/// picks from a 512-point Fibonacci sphere (geodesic distance, ties to the
/// lowest candidate index).
pub fn build_axis_codebook() -> AxisCodebook {
    let mut entries: Vec<Vec3> = vec![
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(-1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(0.0, -1.0, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
        Vec3::new(0.0, 0.0, -1.0),
    ];
    let mut provenance = vec![
        AxisProvenance::CircleXy,
        AxisProvenance::CircleXy,
        AxisProvenance::CircleXy,
        AxisProvenance::CircleXy,
        AxisProvenance::CircleYz,
        AxisProvenance::CircleYz,
    ];

    let planes = [
        (AxisProvenance::CircleXy, [0usize, 1usize]), // cos → x, sin → y
        (AxisProvenance::CircleYz, [1, 2]),
        (AxisProvenance::CircleXz, [0, 2]),
    ];
    for (tag, [ci, si]) in planes {
        for k in 0..CIRCLE_SAMPLES {
            if k % (CIRCLE_SAMPLES / 4) == 0 {
                continue; // lands on a signed axis already present
            }
            let t = k as f64 * std::f64::consts::TAU / CIRCLE_SAMPLES as f64;
            let mut v = Vec3::zeros();
            v[ci] = t.cos();
            v[si] = t.sin();
            entries.push(v);
            provenance.push(tag);
        }
    }
    debug_assert_eq!(entries.len(), 66);

    // Fibonacci sphere candidates
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    let candidates: Vec<Vec3> = (0..FIBONACCI_CANDIDATES)
        .map(|i| {
            let y = 1.0 - 2.0 * (i as f64 + 0.5) / FIBONACCI_CANDIDATES as f64;
            let r = (1.0 - y * y).max(0.0).sqrt();
            let phi = i as f64 * golden_angle;
            Vec3::new(r * phi.cos(), y, r * phi.sin())
        })
        .collect();

    // FPS seeded with the circle entries
    let mut min_dist: Vec<f64> = candidates
        .iter()
        .map(|c| {
            entries
                .iter()
                .map(|e| angular_distance(c, e))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    while entries.len() < AXIS_COUNT {
        let mut best = 0usize;
        let mut best_dist = f64::NEG_INFINITY;
        for (i, &d) in min_dist.iter().enumerate() {
            if d > best_dist {
                best_dist = d;
                best = i;
            }
        }
        let picked = candidates[best];
        entries.push(picked);
        provenance.push(AxisProvenance::Fibonacci);
        for (i, c) in candidates.iter().enumerate() {
            let d = angular_distance(c, &picked);
            if d < min_dist[i] {
                min_dist[i] = d;
            }
        }
    }

    AxisCodebook {
        entries,
        provenance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_axes_are_pinned() {
        let cb = build_axis_codebook();
        assert_eq!(cb.entries()[0], Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(cb.entries()[1], Vec3::new(-1.0, 0.0, 0.0));
        assert_eq!(cb.entries()[2], Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(cb.entries()[3], Vec3::new(0.0, -1.0, 0.0));
        assert_eq!(cb.entries()[4], Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(cb.entries()[5], Vec3::new(0.0, 0.0, -1.0));
    }

    #[test]
    fn exactly_128_unit_entries() {
        let cb = build_axis_codebook();
        assert_eq!(cb.len(), 128);
        for e in cb.entries() {
            assert!((e.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn pairwise_distinct_and_separated() {
        let cb = build_axis_codebook();
        let mut min_angle = f64::INFINITY;
        for i in 0..cb.len() {
            for j in i + 1..cb.len() {
                let a = angular_distance(&cb.entries()[i], &cb.entries()[j]);
                min_angle = min_angle.min(a);
            }
        }
        assert!(min_angle > 1e-6);
        assert!(
            min_angle > 4.0f64.to_radians(),
            "minimum pairwise angle {:.3}° too small",
            min_angle.to_degrees()
        );
    }

    #[test]
    fn supplement_axis_codes() {
        let cb = build_axis_codebook();
        assert_eq!(cb.encode(&Vec3::new(0.0, 1.0, 0.0)).unwrap(), 2);
        assert_eq!(cb.encode(&Vec3::new(0.0, 0.0, 1.0)).unwrap(), 4);
    }

    #[test]
    fn near_axis_snaps_to_axis() {
        let cb = build_axis_codebook();
        let v = Vec3::new(0.999, 0.04, 0.0).normalize();
        assert_eq!(cb.encode(&v).unwrap(), 0);
    }

    #[test]
    fn every_entry_self_encodes() {
        let cb = build_axis_codebook();
        for (i, e) in cb.entries().iter().enumerate() {
            assert_eq!(cb.encode(e).unwrap() as usize, i, "entry {i} drifted");
        }
    }

    #[test]
    fn non_unit_rejected() {
        let cb = build_axis_codebook();
        assert_eq!(
            cb.encode(&Vec3::new(0.0, 2.0, 0.0)),
            Err(AxisError::NonUnitVector(2.0))
        );
    }

    #[test]
    fn deterministic_build() {
        assert_eq!(build_axis_codebook(), build_axis_codebook());
    }

    #[test]
    fn csv_dump_has_header_and_128_rows() {
        let cb = build_axis_codebook();
        let dump = cb.dump_csv();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines.len(), 129);
        assert_eq!(lines[0], "index,x,y,z,provenance");
        assert!(lines[1].starts_with("0,1"));
    }
}
