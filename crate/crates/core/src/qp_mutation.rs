//! QP-mutation: premutation, reduction by splitting off the trivial part,
//! and bounded exploration of mutation sequences.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ids::{ArrowId, VertexId};
use crate::path::{Path, PathSum};
use crate::potential::{CycleWord, Potential, Qp};
use crate::quiver::{fresh_id, Arrow, Obstruction, Quiver, QuiverError};
use crate::scalar::Scalar;
use crate::substitution::{Substitution, DEFAULT_TRUNCATION};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum QpMutationError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("loop {0} in the quiver")]
    Loop(ArrowId),
    #[error("2-cycle {0}, {1} through the mutated vertex")]
    TwoCycle(ArrowId, ArrowId),
    #[error("the QP must be 2-acyclic before exploring: {0:?}")]
    NotTwoAcyclic(Obstruction),
    #[error("the QP must be reduced before exploring")]
    NotReduced,
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// Premutation `mu~_k`: composites `[alpha beta]` for every path through `k`,
/// reversed arrows at `k`, the potential with every factor `alpha beta`
/// through `k` replaced by its composite, plus `sum [alpha beta] beta* alpha*`.
/// The result is usually not reduced.
pub fn premutate(qp: &Qp, k: &VertexId) -> Result<Qp, QpMutationError> {
    let q = qp.quiver();
    if !q.has_vertex(k.as_str()) {
        return Err(QpMutationError::UnknownVertex(k.clone()));
    }
    if let Some(a) = q.arrows().iter().find(|a| a.is_loop()) {
        return Err(QpMutationError::Loop(a.id.clone()));
    }
    if let Some(Obstruction::TwoCycle(a, b)) = q.obstruction_at(k) {
        return Err(QpMutationError::TwoCycle(a, b));
    }
    let incoming: Vec<&Arrow> = q.arrows().iter().filter(|a| &a.tgt == k).collect();
    let outgoing: Vec<&Arrow> = q.arrows().iter().filter(|a| &a.src == k).collect();

    let mut kept = Vec::new();
    let mut reversed = Vec::new();
    for a in q.arrows() {
        if &a.src == k || &a.tgt == k {
            reversed.push(Arrow { id: a.id.reversed(), src: a.tgt.clone(), tgt: a.src.clone() });
        } else {
            kept.push(a.clone());
        }
    }
    let mut used: HashSet<ArrowId> = kept.iter().chain(reversed.iter()).map(|a| a.id.clone()).collect();
    let mut composite: BTreeMap<(ArrowId, ArrowId), ArrowId> = BTreeMap::new();
    let mut composites = Vec::new();
    for beta in &incoming {
        for alpha in &outgoing {
            let id = fresh_id(ArrowId::composite(&alpha.id, &beta.id), &used);
            used.insert(id.clone());
            composite.insert((alpha.id.clone(), beta.id.clone()), id.clone());
            composites.push(Arrow { id, src: beta.src.clone(), tgt: alpha.tgt.clone() });
        }
    }
    let quiver = Quiver::new(q.vertices().to_vec(), kept.into_iter().chain(reversed).chain(composites).collect())?;

    let mut w = Potential::zero();
    for (cw, c) in qp.potential().terms() {
        w.add_cycle(&contract_through(cw, k, q, &composite), c.clone());
    }
    for beta in &incoming {
        for alpha in &outgoing {
            let ab = composite[&(alpha.id.clone(), beta.id.clone())].clone();
            w.add_cycle(&[ab, beta.id.reversed(), alpha.id.reversed()], Scalar::one());
        }
    }
    Ok(Qp::from_parts_unchecked(quiver, w))
}

/// Rotates `cw` so that it does not wrap around at `k`, then replaces each
/// consecutive `alpha beta` through `k` by its composite.
fn contract_through(cw: &CycleWord, k: &VertexId, q: &Quiver, composite: &BTreeMap<(ArrowId, ArrowId), ArrowId>) -> Vec<ArrowId> {
    let w = cw.arrows();
    let m = w.len();
    let src = |a: &ArrowId| &q.arrow(a.as_str()).unwrap().src;
    // Vertex between w[p] and w[p+1] (cyclically) is src(w[p]).
    let start = (0..m).find(|&r| src(&w[(r + m - 1) % m]) != k).expect("cycle avoiding loops leaves k");
    let rot: Vec<&ArrowId> = (0..m).map(|i| &w[(start + i) % m]).collect();
    let mut out = Vec::with_capacity(m);
    let mut p = 0;
    while p < m {
        if p + 1 < m && src(rot[p]) == k {
            out.push(composite[&(rot[p].clone(), rot[p + 1].clone())].clone());
            p += 2;
        } else {
            out.push(rot[p].clone());
            p += 1;
        }
    }
    out
}

/// Output of [`split_reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub qp: Qp,
    /// Right equivalence of the input QP taking its potential to
    /// `reduced + trivial` up to the truncation.
    pub witness: Substitution,
    /// The split-off quadratic terms, one per deleted arrow pair.
    pub trivial: Potential,
    /// Whether terms longer than the truncation were dropped on the way.
    pub truncated: bool,
}

struct Reducer {
    w: Potential,
    total: Substitution,
    n: usize,
    truncated: bool,
}

impl Reducer {
    fn apply(&mut self, phi: Substitution) {
        if phi.is_identity() {
            return;
        }
        let max_len = self.w.max_length().unwrap_or(0);
        let images_len = phi.images().map(|(_, s)| s.terms().map(|(p, _)| p.len()).max().unwrap_or(1)).max().unwrap_or(1);
        if max_len + images_len > self.n + 1 {
            self.truncated = true;
        }
        self.w = phi.apply(&self.w);
        self.total = phi.after(&self.total);
    }

    /// Quadratic terms pairing `x` with something else, as (partner, coef).
    fn quadratic_partners(&self, x: &ArrowId) -> Vec<(ArrowId, Scalar)> {
        self.w
            .terms()
            .filter(|(cw, _)| cw.len() == 2 && cw.contains(x))
            .map(|(cw, c)| {
                let other = if &cw.arrows()[0] == x { &cw.arrows()[1] } else { &cw.arrows()[0] };
                (other.clone(), c.clone())
            })
            .collect()
    }
}

fn path_of(w: Vec<ArrowId>) -> Path {
    Path::Arrows(w)
}

/// Splits off the trivial part of a QP, deleting one 2-cycle pair of arrows
/// per quadratic term, until no quadratic terms remain. Substitutions are
/// truncated at `n`.
pub fn split_reduce(qp: &Qp, n: usize) -> Reduction {
    let mut quiver = qp.quiver().clone();
    let mut r = Reducer { w: qp.potential().truncated(n), total: Substitution::identity(n), n, truncated: false };
    if qp.potential().max_length().unwrap_or(0) > n {
        r.truncated = true;
    }
    let mut trivial = Potential::zero();
    loop {
        let Some((cw, c)) = r.w.terms().find(|(cw, _)| cw.len() == 2).map(|(w, c)| (w.clone(), c.clone())) else {
            break;
        };
        let (a, b) = (cw.arrows()[0].clone(), cw.arrows()[1].clone());
        let cinv = c.inv().unwrap();

        // Make c*ab the only quadratic term containing b, then the only one
        // containing a.
        let mut phi = Substitution::identity(n);
        let mut img = PathSum::arrow(&a);
        for (x, cx) in r.quadratic_partners(&b) {
            if x != a {
                img.add_term(path_of(vec![x]), -(&cx * &cinv));
            }
        }
        phi.set(a.clone(), img);
        r.apply(phi);
        let mut phi = Substitution::identity(n);
        let mut img = PathSum::arrow(&b);
        for (y, dy) in r.quadratic_partners(&a) {
            if y != b {
                img.add_term(path_of(vec![y]), -(&dy * &cinv));
            }
        }
        phi.set(b.clone(), img);
        r.apply(phi);
        debug_assert_eq!(r.w.coefficient(&[a.clone(), b.clone()]), c);

        // Push every other occurrence of a or b past the truncation.
        loop {
            let mut u = PathSum::new();
            let mut v = PathSum::new();
            for (t, coef) in r.w.terms() {
                if t.len() == 2 && t.contains(&a) && t.contains(&b) {
                    continue;
                }
                let word = t.arrows();
                let m = word.len();
                if let Some(p) = word.iter().position(|x| x == &a) {
                    // coef * a * U with U the rest read cyclically.
                    let rest: Vec<ArrowId> = (1..m).map(|i| word[(p + i) % m].clone()).collect();
                    u.add_term(path_of(rest), coef.clone());
                } else if let Some(p) = word.iter().position(|x| x == &b) {
                    // coef * V * b.
                    let rest: Vec<ArrowId> = (1..m).map(|i| word[(p + i) % m].clone()).collect();
                    v.add_term(path_of(rest), coef.clone());
                }
            }
            if u.is_zero() && v.is_zero() {
                break;
            }
            let minus_cinv = -&cinv;
            let mut phi = Substitution::identity(n);
            let mut ia = PathSum::arrow(&a);
            ia.add_scaled(&v, &minus_cinv);
            let mut ib = PathSum::arrow(&b);
            ib.add_scaled(&u, &minus_cinv);
            phi.set(a.clone(), ia);
            phi.set(b.clone(), ib);
            r.apply(phi);
        }

        let mut term = Potential::zero();
        term.add_cycle(&[a.clone(), b.clone()], c.clone());
        trivial.add(&term);
        r.w.add(&term.scaled(&Scalar::from_int(-1)));
        let drop: HashSet<ArrowId> = [a, b].into_iter().collect();
        quiver = quiver.without_arrows(&drop);
        debug_assert!(r.w.terms().all(|(t, _)| t.arrows().iter().all(|x| !drop.contains(x))));
    }
    Reduction { qp: Qp::from_parts_unchecked(quiver, r.w), witness: r.total, trivial, truncated: r.truncated }
}

/// Result of [`qp_mutate`].
#[derive(Clone, Debug)]
pub struct QpMutation {
    pub qp: Qp,
    pub premutation: Qp,
    pub reduction: Reduction,
    pub two_acyclic: bool,
}

/// `mu_k = reduce . premutate` with reduction truncated at `n`.
pub fn qp_mutate(qp: &Qp, k: &VertexId, n: usize) -> Result<QpMutation, QpMutationError> {
    let pre = premutate(qp, k)?;
    let reduction = split_reduce(&pre, n);
    let out = reduction.qp.clone();
    debug_assert!(!out.quiver().has_loops());
    let two_acyclic = out.quiver().is_two_acyclic();
    Ok(QpMutation { qp: out, premutation: pre, reduction, two_acyclic })
}

/// A sequence of QP-mutations and whether every quiver along it stayed
/// 2-acyclic.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MutationTrace {
    pub sequence: Vec<VertexId>,
    pub two_acyclic: bool,
    pub truncation: usize,
    #[serde(skip)]
    pub steps: Vec<(VertexId, Qp)>,
}

/// Applies `seq` left to right with QP-mutation.
pub fn mutate_along(qp: &Qp, seq: &[VertexId], n: usize) -> Result<MutationTrace, QpMutationError> {
    let mut cur = qp.clone();
    let mut steps = Vec::new();
    let mut ok = cur.quiver().is_two_acyclic();
    for k in seq {
        let m = qp_mutate(&cur, k, n)?;
        ok &= m.two_acyclic;
        cur = m.qp;
        steps.push((k.clone(), cur.clone()));
    }
    Ok(MutationTrace { sequence: seq.to_vec(), two_acyclic: ok, truncation: n, steps })
}

#[derive(Clone, Debug)]
pub struct ExploreOptions {
    pub depth: usize,
    pub truncation: usize,
    /// Maximal number of QP-mutations performed.
    pub budget: usize,
    /// Skip `k` directly after `k`.
    pub prune_back: bool,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions { depth: 2, truncation: DEFAULT_TRUNCATION, budget: 100_000, prune_back: true }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Exploration {
    /// Every sequence up to `depth` stays 2-acyclic.
    Pass { depth: usize, mutations: usize },
    /// Shortest failing sequence, least in vertex order among those.
    Fail { trace: MutationTrace, mutations: usize },
    /// Budget ran out; all sequences up to `depth_completed` passed.
    Partial { depth_completed: usize, mutations: usize },
}

impl Exploration {
    pub fn passed(&self) -> bool {
        matches!(self, Exploration::Pass { .. })
    }
}

/// Breadth-first search over QP-mutation sequences of length at most
/// `opts.depth`, looking for a quiver that is not 2-acyclic.
pub fn nondegeneracy_explore(qp: &Qp, opts: &ExploreOptions) -> Result<Exploration, QpMutationError> {
    if let Some(obs) = qp.quiver().two_acyclic_obstruction() {
        return Err(QpMutationError::NotTwoAcyclic(obs));
    }
    if !qp.is_reduced() {
        return Err(QpMutationError::NotReduced);
    }
    let vertices = qp.quiver().vertices().to_vec();
    let mut frontier: Vec<(Vec<usize>, Qp)> = vec![(Vec::new(), qp.clone())];
    let mut mutations = 0usize;
    for level in 1..=opts.depth {
        let jobs: Vec<(usize, usize)> = frontier
            .iter()
            .enumerate()
            .flat_map(|(i, (seq, _))| {
                let last = seq.last().copied();
                (0..vertices.len()).filter(move |&k| !(opts.prune_back && Some(k) == last)).map(move |k| (i, k))
            })
            .collect();
        if mutations + jobs.len() > opts.budget {
            return Ok(Exploration::Partial { depth_completed: level - 1, mutations });
        }
        mutations += jobs.len();
        let results: Vec<Result<(Vec<usize>, QpMutation), QpMutationError>> = jobs
            .par_iter()
            .map(|&(i, k)| {
                let (seq, cur) = &frontier[i];
                let m = qp_mutate(cur, &vertices[k], opts.truncation)?;
                let mut s = seq.clone();
                s.push(k);
                Ok((s, m))
            })
            .collect();
        let mut next = Vec::with_capacity(results.len());
        let mut failing: Option<Vec<usize>> = None;
        for r in results {
            let (s, m) = r?;
            if !m.two_acyclic {
                if failing.as_ref().is_none_or(|f| &s < f) {
                    failing = Some(s.clone());
                }
            } else {
                next.push((s, m.qp));
            }
        }
        if let Some(f) = failing {
            let seq: Vec<VertexId> = f.iter().map(|&k| vertices[k].clone()).collect();
            let trace = mutate_along(qp, &seq, opts.truncation)?;
            return Ok(Exploration::Fail { trace, mutations });
        }
        frontier = next;
    }
    Ok(Exploration::Pass { depth: opts.depth, mutations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VertexId {
        VertexId::new(s)
    }

    fn tri() -> Qp {
        let q = Quiver::from_lists(&["1", "2", "3"], &[("x", "1", "2"), ("y", "2", "3"), ("z", "3", "1")]).unwrap();
        Qp::parse(q, "z*y*x").unwrap()
    }

    fn ids(q: &Quiver) -> Vec<(String, String, String)> {
        q.arrows().iter().map(|a| (a.id.to_string(), a.src.to_string(), a.tgt.to_string())).collect()
    }

    #[test]
    fn premutation_of_three_cycle() {
        let p = premutate(&tri(), &v("1")).unwrap();
        let s = |a: &str, b: &str, c: &str| (a.to_string(), b.to_string(), c.to_string());
        assert_eq!(ids(p.quiver()), vec![s("y", "2", "3"), s("x*", "2", "1"), s("z*", "1", "3"), s("[x z]", "3", "2")]);
        let expect = Potential::parse("`[x z]`*y + `[x z]`*`z*`*`x*`", p.quiver()).unwrap();
        assert_eq!(p.potential(), &expect);
    }

    #[test]
    fn mutation_of_three_cycle_is_acyclic_a3() {
        let m = qp_mutate(&tri(), &v("1"), 16).unwrap();
        let s = |a: &str, b: &str, c: &str| (a.to_string(), b.to_string(), c.to_string());
        assert_eq!(ids(m.qp.quiver()), vec![s("x*", "2", "1"), s("z*", "1", "3")]);
        assert!(m.qp.potential().is_zero());
        assert!(m.two_acyclic && m.qp.quiver().is_acyclic());
    }

    #[test]
    fn trivial_cases() {
        let q = Quiver::from_lists(&["1", "2"], &[("u", "1", "2"), ("v", "1", "2")]).unwrap();
        let m = qp_mutate(&Qp::zero(q), &v("2"), 16).unwrap();
        assert_eq!(m.qp.quiver().arrows().iter().map(|a| a.id.to_string()).collect::<Vec<_>>(), vec!["u*", "v*"]);
        let q = Quiver::from_lists(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        let r = split_reduce(&Qp::parse(q, "a*b").unwrap(), 16);
        assert_eq!(r.qp.quiver().num_arrows(), 0);
        assert!(r.qp.potential().is_zero());
        let red = split_reduce(&tri(), 16);
        assert_eq!(red.qp, tri());
        assert!(red.witness.is_identity());
    }

    #[test]
    fn reduction_witness_is_a_right_equivalence() {
        // Two 2-cycles interacting through cubic and quartic terms.
        let q = Quiver::from_lists(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "1"), ("c", "2", "3"), ("d", "3", "2"), ("e", "1", "2"), ("f", "3", "1")],
        )
        .unwrap();
        let qp = Qp::parse(q, "b*a + 2*d*c + b*a*b*e + c*e*f + d*c*d*c - c*a*f*c*e*f + 3*b*e*b*e").unwrap();
        let red = split_reduce(&qp, 12);
        red.witness.validate(qp.quiver()).unwrap();
        assert!(red.qp.is_reduced());
        let mut expect = red.qp.potential().clone();
        expect.add(&red.trivial);
        assert_eq!(red.witness.apply(qp.potential()).truncated(12), expect.truncated(12));
    }

    #[test]
    fn loops_and_two_cycles_rejected() {
        let q = Quiver::from_lists(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        assert!(matches!(premutate(&Qp::zero(q), &v("1")), Err(QpMutationError::TwoCycle(..))));
        let q = Quiver::from_lists(&["1", "2"], &[("t", "1", "1"), ("a", "1", "2")]).unwrap();
        assert!(matches!(premutate(&Qp::zero(q), &v("2")), Err(QpMutationError::Loop(_))));
    }

    #[test]
    fn exploration_of_acyclic_zero_potential_passes() {
        let q = Quiver::from_lists(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        let r = nondegeneracy_explore(&Qp::zero(q), &ExploreOptions { depth: 4, ..Default::default() }).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn degenerate_potential_fails() {
        // Zero potential on an oriented 3-cycle: mutation leaves a 2-cycle.
        let q = tri().quiver().clone();
        match nondegeneracy_explore(&Qp::zero(q), &ExploreOptions::default()).unwrap() {
            Exploration::Fail { trace, .. } => {
                assert_eq!(trace.sequence, vec![v("1")]);
                assert!(!trace.two_acyclic);
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn trace_json() {
        let t = mutate_along(&tri(), &[v("1"), v("2")], 16).unwrap();
        let js = serde_json::to_value(&t).unwrap();
        assert_eq!(js, serde_json::json!({"sequence": ["1", "2"], "two_acyclic": true, "truncation": 16}));
    }
}
