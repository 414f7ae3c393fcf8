//! Multigraph isomorphism and canonical forms by bounded backtracking.
//!
//! Both searches prune with a color refinement of the vertices (in/out
//! multiplicity profiles iterated a few rounds); colors are isomorphism
//! invariants so no solution is ever pruned.

use std::collections::{BTreeMap, HashMap};

use crate::ids::{ArrowId, VertexId};
use crate::quiver::{ExchangeMatrix, Quiver, QuiverError};

pub const DEFAULT_SIZE_BOUND: usize = 64;

/// Vertex bijection `q1 -> q2` preserving arrow multiplicities.
pub type VertexMap = Vec<(VertexId, VertexId)>;

/// Stable vertex colors after a few refinement rounds, comparable across
/// quivers because they are built from sorted multisets.
fn refine_colors(m: &[Vec<usize>], rounds: usize) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut colors: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let out: usize = m[i].iter().sum();
            let inn: usize = (0..n).map(|j| m[j][i]).sum();
            vec![m[i][i] as u64, out as u64, inn as u64]
        })
        .collect();
    for _ in 0..rounds {
        // Relabel previous colors by global sorted order so the signature is
        // independent of vertex order.
        let mut palette: Vec<&Vec<u64>> = colors.iter().collect();
        palette.sort();
        palette.dedup();
        let code: HashMap<&Vec<u64>, u64> = palette.iter().enumerate().map(|(i, c)| (*c, i as u64)).collect();
        let next: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut nb: Vec<(u64, u64, u64)> = (0..n)
                    .filter(|&j| j != i && (m[i][j] > 0 || m[j][i] > 0))
                    .map(|j| (code[&colors[j]], m[i][j] as u64, m[j][i] as u64))
                    .collect();
                nb.sort();
                let mut sig = vec![code[&colors[i]]];
                for (c, a, b) in nb {
                    sig.extend([c, a, b]);
                }
                sig
            })
            .collect();
        colors = next;
    }
    colors
}

fn check_size(q: &Quiver, bound: usize) -> Result<(), QuiverError> {
    if q.num_vertices() > bound {
        Err(QuiverError::TooLarge { size: q.num_vertices(), bound })
    } else {
        Ok(())
    }
}

/// Finds the lexicographically least (in `q1`'s vertex order, images
/// tried in `q2`'s order) multiplicity-preserving vertex bijection.
pub fn quiver_isomorphic(q1: &Quiver, q2: &Quiver) -> Result<Option<VertexMap>, QuiverError> {
    quiver_isomorphic_bounded(q1, q2, DEFAULT_SIZE_BOUND)
}

pub fn quiver_isomorphic_bounded(q1: &Quiver, q2: &Quiver, bound: usize) -> Result<Option<VertexMap>, QuiverError> {
    check_size(q1, bound)?;
    check_size(q2, bound)?;
    Ok(isomorphisms(q1, q2, 1).into_iter().next())
}

/// Up to `limit` vertex bijections, in lexicographic order.
pub fn isomorphisms(q1: &Quiver, q2: &Quiver, limit: usize) -> Vec<VertexMap> {
    let n = q1.num_vertices();
    if n != q2.num_vertices() || q1.num_arrows() != q2.num_arrows() {
        return Vec::new();
    }
    let m1 = q1.multiplicity_matrix();
    let m2 = q2.multiplicity_matrix();
    let rounds = 3;
    let c1 = refine_colors(&m1, rounds);
    let c2 = refine_colors(&m2, rounds);
    let mut s1 = c1.clone();
    let mut s2 = c2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Vec::new();
    }
    let mut found = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    fn go(
        pos: usize,
        m1: &[Vec<usize>],
        m2: &[Vec<usize>],
        c1: &[Vec<u64>],
        c2: &[Vec<u64>],
        image: &mut Vec<usize>,
        taken: &mut Vec<bool>,
        found: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        let n = m1.len();
        if pos == n {
            found.push(image.clone());
            return;
        }
        for cand in 0..n {
            if taken[cand] || c1[pos] != c2[cand] {
                continue;
            }
            if m1[pos][pos] != m2[cand][cand] {
                continue;
            }
            let ok = (0..pos).all(|p| m1[pos][p] == m2[cand][image[p]] && m1[p][pos] == m2[image[p]][cand]);
            if !ok {
                continue;
            }
            image[pos] = cand;
            taken[cand] = true;
            go(pos + 1, m1, m2, c1, c2, image, taken, found, limit);
            taken[cand] = false;
            image[pos] = usize::MAX;
            if found.len() >= limit {
                return;
            }
        }
    }
    let mut raw = Vec::new();
    go(0, &m1, &m2, &c1, &c2, &mut image, &mut taken, &mut raw, limit);
    for img in raw {
        found.push(
            img.iter()
                .enumerate()
                .map(|(i, &j)| (q1.vertices()[i].clone(), q2.vertices()[j].clone()))
                .collect(),
        );
    }
    found
}

/// Arrow bijection induced by a vertex bijection: parallel arrows are
/// matched in declaration order. `None` if multiplicities disagree.
pub fn arrow_transport(q1: &Quiver, q2: &Quiver, vmap: &VertexMap) -> Option<BTreeMap<ArrowId, ArrowId>> {
    let image: HashMap<&VertexId, &VertexId> = vmap.iter().map(|(a, b)| (a, b)).collect();
    let mut targets: HashMap<(&VertexId, &VertexId), Vec<&ArrowId>> = HashMap::new();
    for a in q2.arrows() {
        targets.entry((&a.src, &a.tgt)).or_default().push(&a.id);
    }
    let mut used: HashMap<(&VertexId, &VertexId), usize> = HashMap::new();
    let mut out = BTreeMap::new();
    for a in q1.arrows() {
        let key = (*image.get(&a.src)?, *image.get(&a.tgt)?);
        let n = used.entry(key).or_insert(0);
        let b = targets.get(&key)?.get(*n)?;
        *n += 1;
        out.insert(a.id.clone(), (*b).clone());
    }
    (out.len() == q2.num_arrows()).then_some(out)
}

/// Canonical representative of the isomorphism class of a quiver's arrow
/// multiplicities, as a vertex ordering and the resulting exchange matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    /// `key[t]` lists the loop count at position `t` followed by the
    /// multiplicities to and from every earlier position.
    key: Vec<Vec<usize>>,
}

impl CanonicalForm {
    pub fn matrix(&self) -> ExchangeMatrix {
        let n = self.key.len();
        let mut m = vec![vec![0i64; n]; n];
        for t in 0..n {
            for s in 0..t {
                let to = self.key[t][1 + 2 * s] as i64;
                let from = self.key[t][2 + 2 * s] as i64;
                m[t][s] = to - from;
                m[s][t] = from - to;
            }
        }
        ExchangeMatrix(m)
    }
}

/// Vertex order realizing the canonical form together with the form.
pub fn canonical_form(q: &Quiver) -> Result<(CanonicalForm, Vec<usize>), QuiverError> {
    canonical_form_bounded(q, DEFAULT_SIZE_BOUND)
}

pub fn canonical_form_bounded(q: &Quiver, bound: usize) -> Result<(CanonicalForm, Vec<usize>), QuiverError> {
    check_size(q, bound)?;
    let m = q.multiplicity_matrix();
    let n = m.len();
    let colors = refine_colors(&m, 3);
    // Positions are filled color class by color class in sorted color order.
    let mut classes: BTreeMap<&Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (i, c) in colors.iter().enumerate() {
        classes.entry(c).or_default().push(i);
    }
    let slot_class: Vec<Vec<usize>> = classes.values().flat_map(|vs| std::iter::repeat_n(vs.clone(), vs.len())).collect();

    struct Search<'a> {
        m: &'a [Vec<usize>],
        slots: &'a [Vec<usize>],
        best: Option<(Vec<Vec<usize>>, Vec<usize>)>,
        order: Vec<usize>,
        taken: Vec<bool>,
        key: Vec<Vec<usize>>,
    }
    impl Search<'_> {
        fn row(&self, t: usize, v: usize) -> Vec<usize> {
            let mut r = Vec::with_capacity(1 + 2 * t);
            r.push(self.m[v][v]);
            for s in 0..t {
                let w = self.order[s];
                r.push(self.m[v][w]);
                r.push(self.m[w][v]);
            }
            r
        }
        fn go(&mut self, t: usize) {
            let n = self.m.len();
            if t == n {
                let better = match &self.best {
                    None => true,
                    Some((bk, _)) => self.key < *bk,
                };
                if better {
                    self.best = Some((self.key.clone(), self.order.clone()));
                }
                return;
            }
            let mut rows: Vec<(Vec<usize>, usize)> = self.slots[t]
                .iter()
                .filter(|&&v| !self.taken[v])
                .map(|&v| (self.row(t, v), v))
                .collect();
            rows.sort();
            for (row, v) in rows {
                self.key.push(row);
                if let Some((bk, _)) = &self.best {
                    if self.key[..] > bk[..=t] {
                        // Rows are sorted, so every later sibling loses too.
                        self.key.pop();
                        break;
                    }
                }
                self.taken[v] = true;
                self.order.push(v);
                self.go(t + 1);
                self.order.pop();
                self.taken[v] = false;
                self.key.pop();
            }
        }
    }
    let mut s = Search { m: &m, slots: &slot_class, best: None, order: Vec::new(), taken: vec![false; n], key: Vec::new() };
    s.go(0);
    let (key, order) = s.best.unwrap_or_default();
    Ok((CanonicalForm { key }, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_on_itself() {
        let q = Quiver::from_lists(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "2")]).unwrap();
        let iso = quiver_isomorphic(&q, &q).unwrap().unwrap();
        assert!(iso.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn relabeling_is_found() {
        let q1 = Quiver::from_lists(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let q2 = Quiver::from_lists(&["1", "2"], &[("a", "2", "1")]).unwrap();
        let iso = quiver_isomorphic(&q1, &q2).unwrap().unwrap();
        let pairs: Vec<_> = iso.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        assert_eq!(pairs, vec![("1", "2"), ("2", "1")]);
    }

    #[test]
    fn non_isomorphic_orientations() {
        let lin = Quiver::from_lists(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        let src = Quiver::from_lists(&["1", "2", "3"], &[("a", "2", "1"), ("b", "2", "3")]).unwrap();
        let snk = Quiver::from_lists(&["1", "2", "3"], &[("a", "1", "2"), ("b", "3", "2")]).unwrap();
        assert!(quiver_isomorphic(&lin, &src).unwrap().is_none());
        assert!(quiver_isomorphic(&src, &snk).unwrap().is_none());
        let cf: std::collections::HashSet<_> = [&lin, &src, &snk].iter().map(|q| canonical_form(q).unwrap().0).collect();
        assert_eq!(cf.len(), 3);
    }

    #[test]
    fn size_guard() {
        let names: Vec<String> = (0..70).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let q = Quiver::from_lists(&refs, &[]).unwrap();
        assert!(matches!(quiver_isomorphic(&q, &q), Err(QuiverError::TooLarge { .. })));
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let q1 = Quiver::from_lists(
            &["a", "b", "c", "d"],
            &[("1", "a", "b"), ("2", "a", "b"), ("3", "b", "c"), ("4", "c", "a"), ("5", "d", "c")],
        )
        .unwrap();
        let q2 = Quiver::from_lists(
            &["w", "x", "y", "z"],
            &[("1", "z", "y"), ("2", "w", "x"), ("3", "w", "x"), ("4", "x", "y"), ("5", "y", "w")],
        )
        .unwrap();
        let (f1, _) = canonical_form(&q1).unwrap();
        let (f2, _) = canonical_form(&q2).unwrap();
        assert!(quiver_isomorphic(&q1, &q2).unwrap().is_some());
        assert_eq!(f1, f2);
    }
}
