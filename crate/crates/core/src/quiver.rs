//! Finite quivers with named arrows and Fomin-Zelevinsky quiver mutation.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::{ArrowId, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub id: ArrowId,
    pub src: VertexId,
    pub tgt: VertexId,
}

impl Arrow {
    pub fn new(id: impl Into<ArrowId>, src: impl Into<VertexId>, tgt: impl Into<VertexId>) -> Self {
        Arrow { id: id.into(), src: src.into(), tgt: tgt.into() }
    }

    pub fn is_loop(&self) -> bool {
        self.src == self.tgt
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate arrow id {0}")]
    DuplicateArrow(ArrowId),
    #[error("arrow {arrow} uses undeclared vertex {vertex}")]
    UnknownEndpoint { arrow: ArrowId, vertex: VertexId },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown arrow {0}")]
    UnknownArrow(ArrowId),
    #[error("quiver is not 2-acyclic: {0}")]
    NotTwoAcyclic(Obstruction),
    #[error("exchange matrix is not skew-symmetric at ({0}, {1})")]
    NotSkewSymmetric(usize, usize),
    #[error("exchange matrix is not square")]
    NotSquare,
    #[error("quiver has {size} vertices, above the search bound {bound}")]
    TooLarge { size: usize, bound: usize },
}

/// Why a quiver fails to be 2-acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    Loop(ArrowId),
    TwoCycle(ArrowId, ArrowId),
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::Loop(a) => write!(f, "loop {}", a),
            Obstruction::TwoCycle(a, b) => write!(f, "2-cycle formed by {} and {}", a, b),
        }
    }
}

impl fmt::Display for Quiver {
    /// One line of vertices, then one line per arrow.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<&str> = self.vertices.iter().map(|v| v.as_str()).collect();
        write!(f, "vertices: {}", vs.join(", "))?;
        for a in &self.arrows {
            write!(f, "\n  {}: {} -> {}", a.id, a.src, a.tgt)?;
        }
        Ok(())
    }
}

/// A finite quiver. Vertex and arrow order is preserved as declared.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "QuiverJson", into = "QuiverJson")]
pub struct Quiver {
    vertices: Vec<VertexId>,
    arrows: Vec<Arrow>,
    vindex: HashMap<VertexId, usize>,
    aindex: HashMap<ArrowId, usize>,
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: Vec<VertexId>,
    arrows: Vec<Arrow>,
}

impl TryFrom<QuiverJson> for Quiver {
    type Error = QuiverError;
    fn try_from(j: QuiverJson) -> Result<Self, Self::Error> {
        Quiver::new(j.vertices, j.arrows)
    }
}

impl From<Quiver> for QuiverJson {
    fn from(q: Quiver) -> Self {
        QuiverJson { vertices: q.vertices, arrows: q.arrows }
    }
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

impl Quiver {
    pub fn new(vertices: Vec<VertexId>, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let mut vindex = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let mut aindex = HashMap::with_capacity(arrows.len());
        for (i, a) in arrows.iter().enumerate() {
            for v in [&a.src, &a.tgt] {
                if !vindex.contains_key(v) {
                    return Err(QuiverError::UnknownEndpoint { arrow: a.id.clone(), vertex: v.clone() });
                }
            }
            if aindex.insert(a.id.clone(), i).is_some() {
                return Err(QuiverError::DuplicateArrow(a.id.clone()));
            }
        }
        Ok(Quiver { vertices, arrows, vindex, aindex })
    }

    /// Convenience constructor from string slices: `(id, src, tgt)`.
    pub fn from_lists(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self, QuiverError> {
        Quiver::new(
            vertices.iter().map(|v| VertexId::new(v)).collect(),
            arrows.iter().map(|(id, s, t)| Arrow::new(*id, *s, *t)).collect(),
        )
    }

    pub fn empty() -> Self {
        Quiver::new(Vec::new(), Vec::new()).unwrap()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_index(&self, v: &str) -> Option<usize> {
        self.vindex.get(v).copied()
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vindex.contains_key(v)
    }

    pub fn arrow(&self, id: &str) -> Option<&Arrow> {
        self.aindex.get(id).map(|&i| &self.arrows[i])
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.aindex.get(id).copied()
    }

    /// Number of arrows from `i` to `j`, by vertex index.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0usize; n]; n];
        for a in &self.arrows {
            m[self.vindex[&a.src]][self.vindex[&a.tgt]] += 1;
        }
        m
    }

    /// First loop or 2-cycle found, scanning arrows in order.
    pub fn two_acyclic_obstruction(&self) -> Option<Obstruction> {
        let mut by_pair: HashMap<(&VertexId, &VertexId), &ArrowId> = HashMap::new();
        for a in &self.arrows {
            if a.is_loop() {
                return Some(Obstruction::Loop(a.id.clone()));
            }
            by_pair.entry((&a.src, &a.tgt)).or_insert(&a.id);
        }
        for a in &self.arrows {
            if let Some(b) = by_pair.get(&(&a.tgt, &a.src)) {
                return Some(Obstruction::TwoCycle(a.id.clone(), (*b).clone()));
            }
        }
        None
    }

    /// Loop or 2-cycle through vertex `k`, if any.
    pub fn obstruction_at(&self, k: &VertexId) -> Option<Obstruction> {
        for a in &self.arrows {
            if a.is_loop() && &a.src == k {
                return Some(Obstruction::Loop(a.id.clone()));
            }
        }
        for a in self.arrows.iter().filter(|a| &a.src == k) {
            if let Some(b) = self.arrows.iter().find(|b| b.src == a.tgt && &b.tgt == k) {
                return Some(Obstruction::TwoCycle(a.id.clone(), b.id.clone()));
            }
        }
        None
    }

    pub fn is_two_acyclic(&self) -> bool {
        self.two_acyclic_obstruction().is_none()
    }

    pub fn has_loops(&self) -> bool {
        self.arrows.iter().any(Arrow::is_loop)
    }

    /// True iff there is no oriented cycle (Kahn's algorithm succeeds).
    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Vertex indices in a topological order, or `None` if a cycle exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in &self.arrows {
            let (s, t) = (self.vindex[&a.src], self.vindex[&a.tgt]);
            indeg[t] += 1;
            out[s].push(t);
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &t in &out[v] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Full subquiver on the given vertices, keeping the original order.
    pub fn full_subquiver(&self, keep: &HashSet<VertexId>) -> Quiver {
        let vertices: Vec<VertexId> = self.vertices.iter().filter(|v| keep.contains(*v)).cloned().collect();
        let arrows = self
            .arrows
            .iter()
            .filter(|a| keep.contains(&a.src) && keep.contains(&a.tgt))
            .cloned()
            .collect();
        Quiver::new(vertices, arrows).unwrap()
    }

    /// Removes the named arrows.
    pub fn without_arrows(&self, drop: &HashSet<ArrowId>) -> Quiver {
        let arrows = self.arrows.iter().filter(|a| !drop.contains(&a.id)).cloned().collect();
        Quiver::new(self.vertices.clone(), arrows).unwrap()
    }

    /// Relabels vertices; `map` must be injective on the vertex set.
    pub fn relabel_vertices(&self, map: &HashMap<VertexId, VertexId>) -> Result<Quiver, QuiverError> {
        let f = |v: &VertexId| map.get(v).cloned().unwrap_or_else(|| v.clone());
        Quiver::new(
            self.vertices.iter().map(f).collect(),
            self.arrows.iter().map(|a| Arrow { id: a.id.clone(), src: f(&a.src), tgt: f(&a.tgt) }).collect(),
        )
    }

    pub fn to_exchange_matrix(&self) -> ExchangeMatrix {
        let m = self.multiplicity_matrix();
        let n = m.len();
        let b = (0..n)
            .map(|i| (0..n).map(|j| m[i][j] as i64 - m[j][i] as i64).collect())
            .collect();
        ExchangeMatrix(b)
    }

    /// Quiver with vertices `labels` and `b[i][j]` arrows `i -> j` whenever
    /// positive; arrow ids are `i.j.n` with 1-based `n`.
    pub fn from_exchange_matrix(b: &ExchangeMatrix, labels: &[VertexId]) -> Result<Quiver, QuiverError> {
        b.validate()?;
        let n = b.size();
        assert_eq!(labels.len(), n, "label count must match matrix size");
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for c in 1..=b.0[i][j].max(0) {
                    arrows.push(Arrow::new(
                        format!("{}.{}.{}", labels[i], labels[j], c),
                        labels[i].clone(),
                        labels[j].clone(),
                    ));
                }
            }
        }
        Quiver::new(labels.to_vec(), arrows)
    }

    /// Quiver mutation at `k`: composites for every path through `k`,
    /// reversal of the arrows at `k`, then cancellation of a maximal family
    /// of disjoint 2-cycles.
    ///
    /// Composite of `beta: i -> k` and `alpha: k -> j` is named `[alpha beta]`;
    /// reversal toggles a trailing `*`. Cancellation pairs the arrows
    /// `i -> j` and `j -> i` in increasing id order. Output order: untouched
    /// arrows, then reversed ones, then surviving composites.
    pub fn mutate(&self, k: &VertexId) -> Result<Quiver, QuiverError> {
        if !self.has_vertex(k.as_str()) {
            return Err(QuiverError::UnknownVertex(k.clone()));
        }
        if let Some(obs) = self.two_acyclic_obstruction() {
            return Err(QuiverError::NotTwoAcyclic(obs));
        }
        let incoming: Vec<&Arrow> = self.arrows.iter().filter(|a| &a.tgt == k).collect();
        let outgoing: Vec<&Arrow> = self.arrows.iter().filter(|a| &a.src == k).collect();

        let mut used: HashSet<ArrowId> = HashSet::new();
        let mut kept = Vec::new();
        let mut reversed = Vec::new();
        for a in &self.arrows {
            if &a.src == k || &a.tgt == k {
                reversed.push(Arrow { id: a.id.reversed(), src: a.tgt.clone(), tgt: a.src.clone() });
            } else {
                kept.push(a.clone());
            }
        }
        for a in kept.iter().chain(reversed.iter()) {
            used.insert(a.id.clone());
        }
        let mut composites = Vec::new();
        for beta in &incoming {
            for alpha in &outgoing {
                let id = fresh_id(ArrowId::composite(&alpha.id, &beta.id), &used);
                used.insert(id.clone());
                composites.push(Arrow { id, src: beta.src.clone(), tgt: alpha.tgt.clone() });
            }
        }

        // 2-cycles can only pair a composite with an untouched arrow.
        let mut drop: HashSet<ArrowId> = HashSet::new();
        let mut pairs: BTreeMap<(usize, usize), (Vec<&ArrowId>, Vec<&ArrowId>)> = BTreeMap::new();
        for a in kept.iter().chain(composites.iter()) {
            let (s, t) = (self.vindex[&a.src], self.vindex[&a.tgt]);
            let entry = pairs.entry((s.min(t), s.max(t))).or_default();
            if s < t {
                entry.0.push(&a.id);
            } else {
                entry.1.push(&a.id);
            }
        }
        for (_, (mut fwd, mut back)) in pairs {
            fwd.sort();
            back.sort();
            for (x, y) in fwd.iter().zip(back.iter()) {
                drop.insert((*x).clone());
                drop.insert((*y).clone());
            }
        }
        let arrows: Vec<Arrow> = kept
            .into_iter()
            .chain(reversed)
            .chain(composites)
            .filter(|a| !drop.contains(&a.id))
            .collect();
        let out = Quiver::new(self.vertices.clone(), arrows)?;
        debug_assert!(out.is_two_acyclic());
        Ok(out)
    }

    /// Mutates along `seq`, left to right.
    pub fn mutate_sequence(&self, seq: &[VertexId]) -> Result<Quiver, QuiverError> {
        let mut q = self.clone();
        for k in seq {
            q = q.mutate(k)?;
        }
        Ok(q)
    }
}

/// Returns `base` or, if taken, `base` with enough primes appended to be new.
pub(crate) fn fresh_id(base: ArrowId, used: &HashSet<ArrowId>) -> ArrowId {
    let mut id = base;
    while used.contains(&id) {
        id = ArrowId::new(format!("{}'", id));
    }
    id
}

/// Skew-symmetric integer matrix, `b[i][j] = #(i -> j) - #(j -> i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExchangeMatrix(pub Vec<Vec<i64>>);

impl ExchangeMatrix {
    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn validate(&self) -> Result<(), QuiverError> {
        let n = self.0.len();
        if self.0.iter().any(|r| r.len() != n) {
            return Err(QuiverError::NotSquare);
        }
        for i in 0..n {
            for j in i..n {
                if self.0[i][j] != -self.0[j][i] {
                    return Err(QuiverError::NotSkewSymmetric(i, j));
                }
            }
        }
        Ok(())
    }

    /// Matrix mutation: `b'_ij = -b_ij` if `k` is `i` or `j`, else
    /// `b_ij + sgn(b_ik) max(b_ik b_kj, 0)`.
    pub fn mutate(&self, k: usize) -> ExchangeMatrix {
        let b = &self.0;
        let n = b.len();
        let mut out = b.clone();
        for i in 0..n {
            for j in 0..n {
                if i == k || j == k {
                    out[i][j] = -b[i][j];
                } else {
                    out[i][j] = b[i][j] + b[i][k].signum() * (b[i][k] * b[k][j]).max(0);
                }
            }
        }
        ExchangeMatrix(out)
    }
}
