//! Link merging, used by fixed-joint removal and small-part filtering.

use super::ArticulatedObject;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MergeError {
    #[error("links {keep} and {absorb} are not connected by a joint")]
    NotAdjacent { keep: usize, absorb: usize },
}

/// Merge `absorb` into `keep`: union geometry, delete the connecting joint,
/// re-point every other joint that referenced `absorb`, and compact link ids
/// to `0..n-1` preserving relative order.
pub fn merge_links(
    object: &ArticulatedObject,
    keep: usize,
    absorb: usize,
) -> Result<ArticulatedObject, MergeError> {
    let connecting = object
        .joints
        .iter()
        .find(|j| {
            (j.parent == keep && j.child == absorb) || (j.parent == absorb && j.child == keep)
        })
        .map(|j| j.id)
        .ok_or(MergeError::NotAdjacent { keep, absorb })?;

    let mut object = object.clone();
    let absorbed = {
        let pos = object.links.iter().position(|l| l.id == absorb).unwrap();
        object.links.remove(pos)
    };
    {
        let kept = object.links.iter_mut().find(|l| l.id == keep).unwrap();
        kept.aabb = kept.aabb.union(&absorbed.aabb);
        match (&mut kept.mesh, absorbed.mesh) {
            (Some(a), Some(b)) => a.append(&b),
            (slot @ None, Some(b)) => *slot = Some(b),
            _ => {}
        }
        kept.sync_aabb();
        // a merged mesh can grow past both source boxes; keep the union anyway
        if let Some(mesh) = &kept.mesh {
            if let Some(b) = mesh.aabb() {
                kept.aabb = kept.aabb.union(&b);
            }
        }
    }

    object.joints.retain(|j| j.id != connecting);
    for joint in &mut object.joints {
        if joint.parent == absorb {
            joint.parent = keep;
        }
        if joint.child == absorb {
            joint.child = keep;
        }
    }
    compact_ids(&mut object);
    Ok(object)
}

/// Renumber link ids densely to `0..n-1` preserving the current relative
/// order, updating joint endpoints; joint ids likewise.
pub(crate) fn compact_ids(object: &mut ArticulatedObject) {
    let mut order: Vec<usize> = object.links.iter().map(|l| l.id).collect();
    order.sort_unstable();
    let remap: std::collections::HashMap<usize, usize> =
        order.into_iter().enumerate().map(|(new, old)| (old, new)).collect();
    for link in &mut object.links {
        link.id = remap[&link.id];
    }
    for joint in &mut object.joints {
        joint.parent = remap[&joint.parent];
        joint.child = remap[&joint.child];
    }
    object.links.sort_by_key(|l| l.id);
    object.joints.sort_by_key(|j| j.id);
    for (i, joint) in object.joints.iter_mut().enumerate() {
        joint.id = i;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{build_graph, Aabb, Joint, JointKind, Link};
    use crate::Vec3;

    fn link(id: usize, min: [f64; 3], max: [f64; 3]) -> Link {
        Link {
            id,
            name: format!("link_{id}"),
            aabb: Aabb::new(Vec3::from(min), Vec3::from(max)),
            mesh: None,
        }
    }

    fn fixed(id: usize, parent: usize, child: usize) -> Joint {
        Joint {
            id,
            kind: JointKind::Fixed,
            parent,
            child,
            axis_dir: Vec3::new(0.0, 0.0, 1.0),
            axis_origin: None,
            limit: None,
        }
    }

    #[test]
    fn merge_unions_adjacent_boxes() {
        let obj = ArticulatedObject::new(
            vec![
                link(0, [0.0, 0.0, 0.0], [1.0, 1.0, 1.0]),
                link(1, [1.0, 0.0, 0.0], [2.0, 1.0, 1.0]),
            ],
            vec![fixed(0, 0, 1)],
        );
        let merged = merge_links(&obj, 0, 1).unwrap();
        assert_eq!(merged.links.len(), 1);
        assert_eq!(merged.joints.len(), 0);
        let aabb = merged.links[0].aabb;
        assert_eq!(aabb.min, Vec3::new(0.0, 0.0, 0.0));
        assert_eq!(aabb.max, Vec3::new(2.0, 1.0, 1.0));
    }

    #[test]
    fn merge_star_leaf_drops_one_joint() {
        let links = (0..7).map(|i| link(i, [0.0; 3], [1.0; 3])).collect();
        let joints = (0..6).map(|i| fixed(i, 6, i)).collect();
        let obj = ArticulatedObject::new(links, joints);
        let merged = merge_links(&obj, 6, 3).unwrap();
        assert_eq!(merged.joints.len(), 5);
        assert_eq!(merged.links.len(), 6);
        // ids compacted to 0..5
        let ids: Vec<usize> = merged.links.iter().map(|l| l.id).collect();
        assert_eq!(ids, vec![0, 1, 2, 3, 4, 5]);
        build_graph(&merged).unwrap();
    }

    #[test]
    fn merge_repoints_grandchildren() {
        // 0 -> 1 -> 2; absorb 1 into 0; joint to 2 re-points to 0
        let obj = ArticulatedObject::new(
            vec![
                link(0, [0.0; 3], [1.0; 3]),
                link(1, [0.0; 3], [1.0; 3]),
                link(2, [0.0; 3], [1.0; 3]),
            ],
            vec![fixed(0, 0, 1), fixed(1, 1, 2)],
        );
        let merged = merge_links(&obj, 0, 1).unwrap();
        assert_eq!(merged.joints.len(), 1);
        assert_eq!(merged.joints[0].parent, 0);
        assert_eq!(merged.joints[0].child, 1); // link 2 compacted to id 1
        build_graph(&merged).unwrap();
    }

    #[test]
    fn not_adjacent() {
        let obj = ArticulatedObject::new(
            vec![
                link(0, [0.0; 3], [1.0; 3]),
                link(1, [0.0; 3], [1.0; 3]),
                link(2, [0.0; 3], [1.0; 3]),
            ],
            vec![fixed(0, 0, 1), fixed(1, 1, 2)],
        );
        assert_eq!(
            merge_links(&obj, 0, 2),
            Err(MergeError::NotAdjacent { keep: 0, absorb: 2 })
        );
    }
}
