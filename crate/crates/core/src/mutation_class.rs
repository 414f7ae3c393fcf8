//! Breadth-first enumeration of a quiver's mutation class up to
//! isomorphism.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::ids::VertexId;
use crate::iso::{canonical_form, CanonicalForm};
use crate::quiver::{Quiver, QuiverError};

#[derive(Clone, Debug, Serialize)]
pub struct ClassMember {
    pub quiver: Quiver,
    /// Mutation sequence from the input, applied left to right.
    pub sequence: Vec<VertexId>,
    pub acyclic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MutationClassReport {
    pub members: Vec<ClassMember>,
    pub acyclic_witness: Option<Vec<VertexId>>,
    pub depth_reached: usize,
    pub incomplete: bool,
}

impl MutationClassReport {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Explores up to `max_nodes` isomorphism classes and `max_depth`
/// mutations. A `hint` sequence is tried first as an acyclic witness.
pub fn mutation_class_bfs(q: &Quiver, max_nodes: usize, max_depth: usize, hint: Option<&[VertexId]>) -> Result<MutationClassReport, QuiverError> {
    if let Some(o) = q.two_acyclic_obstruction() {
        return Err(QuiverError::NotTwoAcyclic(o));
    }
    let mut witness = None;
    if let Some(h) = hint {
        if q.mutate_sequence(h)?.is_acyclic() {
            witness = Some(h.to_vec());
        }
    }
    let mut seen: HashMap<CanonicalForm, usize> = HashMap::new();
    let mut members = Vec::new();
    let (key, _) = canonical_form(q)?;
    seen.insert(key, 0);
    members.push(ClassMember { quiver: q.clone(), sequence: Vec::new(), acyclic: q.is_acyclic() });
    let mut queue = VecDeque::from([0usize]);
    let mut incomplete = false;
    let mut depth_reached = 0;
    'bfs: while let Some(idx) = queue.pop_front() {
        let depth = members[idx].sequence.len();
        depth_reached = depth_reached.max(depth);
        if depth >= max_depth {
            incomplete = true;
            continue;
        }
        let current = members[idx].quiver.clone();
        for k in current.vertices() {
            if members[idx].sequence.last() == Some(k) {
                continue;
            }
            let next = current.mutate(k)?;
            let (key, _) = canonical_form(&next)?;
            if seen.contains_key(&key) {
                continue;
            }
            if members.len() >= max_nodes {
                incomplete = true;
                break 'bfs;
            }
            let mut sequence = members[idx].sequence.clone();
            sequence.push(k.clone());
            seen.insert(key, members.len());
            queue.push_back(members.len());
            let acyclic = next.is_acyclic();
            members.push(ClassMember { quiver: next, sequence, acyclic });
        }
    }
    if witness.is_none() {
        witness = members.iter().find(|m| m.acyclic).map(|m| m.sequence.clone());
    }
    Ok(MutationClassReport { members, acyclic_witness: witness, depth_reached, incomplete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::five_vertex_quiver;

    fn v(xs: &[&str]) -> Vec<VertexId> {
        xs.iter().map(VertexId::new).collect()
    }

    #[test]
    fn single_arrow() {
        let q = Quiver::from_lists(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let r = mutation_class_bfs(&q, 100, 10, None).unwrap();
        assert_eq!(r.size(), 1);
        assert_eq!(r.acyclic_witness, Some(vec![]));
        assert!(!r.incomplete);
    }

    #[test]
    fn three_cycle_class_is_type_a3() {
        let q = Quiver::from_lists(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")]).unwrap();
        let r = mutation_class_bfs(&q, 100, 10, None).unwrap();
        // The oriented cycle plus the three orientations of A3.
        assert_eq!(r.size(), 4);
        assert_eq!(r.acyclic_witness.unwrap().len(), 1);
        assert!(!r.incomplete);
    }

    #[test]
    fn five_vertex_hint() {
        let q = five_vertex_quiver();
        let hint = v(&["5", "4", "3", "2"]);
        let r = mutation_class_bfs(&q, 1, 0, Some(&hint)).unwrap();
        assert_eq!(r.acyclic_witness, Some(hint));
        let r = mutation_class_bfs(&q, 10_000, 4, None).unwrap();
        assert!(r.acyclic_witness.is_some());
    }

    #[test]
    fn kronecker_class_is_finite_up_to_iso() {
        let q = Quiver::from_lists(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
        let r = mutation_class_bfs(&q, 100, 10, None).unwrap();
        assert_eq!(r.size(), 1);
    }

    #[test]
    fn budget_flags_incomplete() {
        let q = Quiver::from_lists(&["1", "2", "3"], &[("a", "1", "2"), ("b", "1", "2"), ("c", "1", "2"), ("d", "2", "3"), ("e", "3", "1")]).unwrap();
        let r = mutation_class_bfs(&q, 5, 50, None).unwrap();
        assert!(r.incomplete);
        assert_eq!(r.size(), 5);
    }
}
