//! Kinematic graph construction and traversal.

use super::ArticulatedObject;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("cycle detected through links {0:?}")]
    CycleDetected(Vec<usize>),
    #[error("multiple roots: links {0:?} have no incoming joint")]
    MultipleRoots(Vec<usize>),
    #[error("joint {joint} references missing link {link}")]
    DanglingReference { joint: usize, link: usize },
    #[error("link {link} has {count} incoming joints, expected at most 1")]
    MultipleParents { link: usize, count: usize },
    #[error("object has no links")]
    Empty,
}

/// Directed tree over link ids; joints are parent→child edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KinematicGraph {
    pub nodes: Vec<usize>,
    /// (parent link, child link, joint id) triples.
    pub edges: Vec<(usize, usize, usize)>,
    pub root: usize,
}

impl KinematicGraph {
    /// Children of `link` as (child link, joint id) pairs.
    pub fn children(&self, link: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges
            .iter()
            .filter(move |(p, _, _)| *p == link)
            .map(|(_, c, j)| (*c, *j))
    }

    /// Link ids of the subtree hanging below `joint_id` (the joint's child
    /// and every descendant).
    pub fn subtree_of_joint(&self, joint_id: usize) -> Vec<usize> {
        let Some(&(_, child, _)) = self.edges.iter().find(|(_, _, j)| *j == joint_id) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut stack = vec![child];
        while let Some(link) = stack.pop() {
            out.push(link);
            stack.extend(self.children(link).map(|(c, _)| c));
        }
        out.sort_unstable();
        out
    }

    /// Nodes in parent-before-child order starting at the root.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(link) = stack.pop() {
            out.push(link);
            stack.extend(self.children(link).map(|(c, _)| c));
        }
        out
    }
}

/// Build the kinematic graph, identifying the unique root. The result is
/// independent of link/joint list order: everything is keyed by ids.
pub fn build_graph(object: &ArticulatedObject) -> Result<KinematicGraph, GraphError> {
    if object.links.is_empty() {
        return Err(GraphError::Empty);
    }
    let ids: BTreeSet<usize> = object.links.iter().map(|l| l.id).collect();
    let mut incoming: BTreeMap<usize, usize> = ids.iter().map(|&id| (id, 0)).collect();
    let mut edges: Vec<(usize, usize, usize)> = Vec::with_capacity(object.joints.len());

    for joint in &object.joints {
        for link in [joint.parent, joint.child] {
            if !ids.contains(&link) {
                return Err(GraphError::DanglingReference {
                    joint: joint.id,
                    link,
                });
            }
        }
        *incoming.get_mut(&joint.child).unwrap() += 1;
        edges.push((joint.parent, joint.child, joint.id));
    }
    edges.sort_unstable();

    for (&link, &count) in &incoming {
        if count > 1 {
            return Err(GraphError::MultipleParents { link, count });
        }
    }
    let roots: Vec<usize> = incoming
        .iter()
        .filter(|(_, &c)| c == 0)
        .map(|(&id, _)| id)
        .collect();
    match roots.len() {
        0 => {
            // every node has a parent: must be cyclic
            return Err(GraphError::CycleDetected(ids.iter().copied().collect()));
        }
        1 => {}
        _ => return Err(GraphError::MultipleRoots(roots)),
    }
    let root = roots[0];

    let graph = KinematicGraph {
        nodes: ids.iter().copied().collect(),
        edges,
        root,
    };
    // a disconnected cycle leaves nodes unreachable from the root
    let reached = graph.topological_order();
    if reached.len() != graph.nodes.len() {
        let reached: BTreeSet<usize> = reached.into_iter().collect();
        let cyclic: Vec<usize> = ids.difference(&reached).copied().collect();
        return Err(GraphError::CycleDetected(cyclic));
    }
    Ok(graph)
}
