//! Coxeter groups of acyclic quivers, reduced words and the quivers
//! attached to them.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ids::{ArrowId, VertexId};
use crate::quiver::{fresh_id, Arrow, Quiver, QuiverError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoxeterError {
    #[error("the quiver is not acyclic")]
    NotAcyclic,
    #[error("letter {letter} at position {pos} is not a vertex")]
    UnknownLetter { pos: usize, letter: VertexId },
    #[error("index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("word is not reduced: fails at position {0}")]
    NotReduced(usize),
    #[error("weights {0:?} are not covered: need 2 <= p1 <= p2 <= p3 with p2 >= 3")]
    BadWeights([u32; 3]),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// Generalized Cartan matrix `2I - (edge multiplicities)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gcm {
    labels: Vec<VertexId>,
    entries: Vec<Vec<i64>>,
}

impl Gcm {
    pub fn from_quiver(q: &Quiver) -> Result<Self, CoxeterError> {
        if !q.is_acyclic() {
            return Err(CoxeterError::NotAcyclic);
        }
        let m = q.multiplicity_matrix();
        let n = q.num_vertices();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 2 } else { -((m[i][j] + m[j][i]) as i64) }).collect())
            .collect();
        Ok(Gcm { labels: q.vertices().to_vec(), entries })
    }

    /// From an explicit symmetric matrix; labels are `1..n`.
    pub fn from_matrix(entries: Vec<Vec<i64>>) -> Self {
        let labels = (1..=entries.len()).map(|i| VertexId::new(i.to_string())).collect();
        Gcm { labels, entries }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    /// `s_i(v) = v - (sum_j A[i][j] v_j) e_i`.
    pub fn reflect(&self, i: usize, v: &mut [BigInt]) {
        let mut s = BigInt::zero();
        for (j, x) in v.iter().enumerate() {
            let a = self.entries[i][j];
            if a != 0 {
                s += x * a;
            }
        }
        v[i] -= s;
    }

    pub fn indices(&self, w: &Word) -> Result<Vec<usize>, CoxeterError> {
        w.letters
            .iter()
            .enumerate()
            .map(|(p, l)| self.labels.iter().position(|x| x == l).ok_or(CoxeterError::UnknownLetter { pos: p + 1, letter: l.clone() }))
            .collect()
    }

    /// Partial roots `s_{i_1} .. s_{i_{k-1}} (alpha_{i_k})`.
    pub fn partial_roots(&self, word: &[usize]) -> Result<Vec<Vec<BigInt>>, CoxeterError> {
        let n = self.rank();
        if let Some(&bad) = word.iter().find(|&&i| i >= n) {
            return Err(CoxeterError::IndexOutOfRange(bad));
        }
        Ok((0..word.len())
            .map(|k| {
                let mut v = vec![BigInt::zero(); n];
                v[word[k]] = BigInt::from(1);
                for &i in word[..k].iter().rev() {
                    self.reflect(i, &mut v);
                }
                v
            })
            .collect())
    }

    /// `None` if reduced, otherwise the least failing 1-based position.
    pub fn first_failure(&self, word: &[usize]) -> Result<Option<usize>, CoxeterError> {
        let roots = self.partial_roots(word)?;
        Ok(roots.iter().position(|v| v.iter().any(|x| x.is_negative())).map(|k| k + 1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    pub letters: Vec<VertexId>,
}

impl Word {
    pub fn new<S: AsRef<str>>(letters: &[S]) -> Self {
        Word { letters: letters.iter().map(VertexId::new).collect() }
    }

    /// Comma- or whitespace-separated letters.
    pub fn parse(s: &str) -> Self {
        Word { letters: s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(VertexId::new).collect() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn distinct_letters(&self) -> usize {
        self.letters.iter().collect::<HashSet<_>>().len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reducedness {
    pub reduced: bool,
    pub failing_position: Option<usize>,
}

pub fn is_reduced(gcm: &Gcm, w: &Word) -> Result<Reducedness, CoxeterError> {
    let idx = gcm.indices(w)?;
    let f = gcm.first_failure(&idx)?;
    Ok(Reducedness { reduced: f.is_none(), failing_position: f })
}

pub fn position_vertex(pos: usize, letter: &VertexId) -> VertexId {
    VertexId::new(format!("{}:{}", pos, letter))
}

/// The quiver on the positions of a reduced word: an arrow from each
/// occurrence of a letter to the previous one, and `d_ij` arrows between
/// the last positions of consecutive blocks in each `{i, j}` subsequence.
pub fn qw_tilde(q: &Quiver, w: &Word) -> Result<Quiver, CoxeterError> {
    let gcm = Gcm::from_quiver(q)?;
    let idx = gcm.indices(w)?;
    if let Some(k) = gcm.first_failure(&idx)? {
        return Err(CoxeterError::NotReduced(k));
    }
    let vertices: Vec<VertexId> = w.letters.iter().enumerate().map(|(p, l)| position_vertex(p + 1, l)).collect();
    let mut arrows = Vec::new();
    let mut used = HashSet::new();
    let mut push = |from: usize, to: usize, arrows: &mut Vec<Arrow>| {
        let id = fresh_id(ArrowId::new(format!("e{}_{}", from + 1, to + 1)), &used);
        used.insert(id.clone());
        arrows.push(Arrow { id, src: vertices[from].clone(), tgt: vertices[to].clone() });
    };
    let mut last: HashMap<usize, usize> = HashMap::new();
    for (p, &i) in idx.iter().enumerate() {
        if let Some(prev) = last.insert(i, p) {
            push(p, prev, &mut arrows);
        }
    }
    let n = gcm.rank();
    for i in 0..n {
        for j in i + 1..n {
            let d = -gcm.entry(i, j);
            if d <= 0 {
                continue;
            }
            let sub: Vec<usize> = (0..idx.len()).filter(|&p| idx[p] == i || idx[p] == j).collect();
            let mut block_ends = Vec::new();
            for (t, &p) in sub.iter().enumerate() {
                if t + 1 == sub.len() || idx[sub[t + 1]] != idx[p] {
                    block_ends.push(p);
                }
            }
            for pair in block_ends.windows(2) {
                for _ in 0..d {
                    push(pair[0], pair[1], &mut arrows);
                }
            }
        }
    }
    Ok(Quiver::new(vertices.clone(), arrows)?)
}

/// [`qw_tilde`] with the last occurrence of every letter removed.
pub fn qw(q: &Quiver, w: &Word) -> Result<Quiver, CoxeterError> {
    let full = qw_tilde(q, w)?;
    let mut last: HashMap<&VertexId, usize> = HashMap::new();
    for (p, l) in w.letters.iter().enumerate() {
        last.insert(l, p);
    }
    let drop: HashSet<usize> = last.values().copied().collect();
    let keep: HashSet<VertexId> = full.vertices().iter().enumerate().filter(|(p, _)| !drop.contains(p)).map(|(_, v)| v.clone()).collect();
    Ok(full.full_subquiver(&keep))
}

fn arm(name: char, len: u32) -> Vec<String> {
    (1..=len).map(|j| format!("{}{}", name, j)).collect()
}

/// The star quiver and reduced word for three weights with at most one
/// equal to 2, in the two printed families.
pub fn birs_word(p: [u32; 3]) -> Result<(Quiver, Word), CoxeterError> {
    let [p1, p2, p3] = p;
    if !(2 <= p1 && p1 <= p2 && p2 <= p3 && p2 >= 3) {
        return Err(CoxeterError::BadWeights(p));
    }
    let b = arm('b', p2 - 2);
    let c = arm('c', p3 - 2);
    let mut vertices = vec!["o".to_string()];
    let mut arrows: Vec<(String, String, String)> = Vec::new();
    let mut letters: Vec<String> = Vec::new();
    let chain = |xs: &[String], arrows: &mut Vec<(String, String, String)>| {
        for w in xs.windows(2) {
            arrows.push((format!("{}{}", w[0], w[1]), w[0].clone(), w[1].clone()));
        }
    };
    if p1 == 2 {
        vertices.push("a1".into());
        arrows.push(("a1o".into(), "a1".into(), "o".into()));
        for x in [&b, &c] {
            vertices.extend(x.iter().cloned());
            arrows.push((format!("o{}", x[0]), "o".into(), x[0].clone()));
            chain(x, &mut arrows);
        }
        letters.extend(["o", "b1", "c1", "a1"].map(String::from));
        letters.push("o".into());
        letters.extend(b.iter().cloned());
        letters.extend(c.iter().cloned());
        letters.push("a1".into());
        letters.push("o".into());
        letters.extend(b.iter().cloned());
        letters.extend(c.iter().cloned());
    } else {
        let a = arm('a', p1 - 2);
        for x in [&a, &b, &c] {
            vertices.extend(x.iter().cloned());
            arrows.push((format!("o{}", x[0]), "o".into(), x[0].clone()));
            chain(x, &mut arrows);
        }
        letters.extend(["o", "a1", "b1", "c1"].map(String::from));
        for _ in 0..2 {
            letters.push("o".into());
            letters.extend(a.iter().cloned());
            letters.extend(b.iter().cloned());
            letters.extend(c.iter().cloned());
        }
    }
    let vs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let ars: Vec<(&str, &str, &str)> = arrows.iter().map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str())).collect();
    Ok((Quiver::from_lists(&vs, &ars)?, Word::new(&letters)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::canonical_ct_quiver;
    use crate::iso::quiver_isomorphic;

    fn a2() -> Quiver {
        Quiver::from_lists(&["1", "2"], &[("x", "1", "2")]).unwrap()
    }

    #[test]
    fn gcm_of_kronecker() {
        let k = Quiver::from_lists(&["1", "2"], &[("u", "1", "2"), ("v", "1", "2")]).unwrap();
        let g = Gcm::from_quiver(&k).unwrap();
        assert_eq!(g.entries, vec![vec![2, -2], vec![-2, 2]]);
        let cyc = Quiver::from_lists(&["1", "2"], &[("u", "1", "2"), ("v", "2", "1")]).unwrap();
        assert_eq!(Gcm::from_quiver(&cyc), Err(CoxeterError::NotAcyclic));
        // Infinite dihedral: alternating words of any length are reduced.
        let w: Vec<usize> = (0..40).map(|i| i % 2).collect();
        assert_eq!(g.first_failure(&w).unwrap(), None);
    }

    #[test]
    fn reducedness_examples() {
        let g = Gcm::from_quiver(&a2()).unwrap();
        assert_eq!(is_reduced(&g, &Word::new(&["1", "1"])).unwrap().failing_position, Some(2));
        assert!(is_reduced(&g, &Word::new(&["1", "2", "1"])).unwrap().reduced);
        assert_eq!(is_reduced(&g, &Word::new(&["1", "2", "1", "2"])).unwrap().failing_position, Some(4));
        assert!(matches!(is_reduced(&g, &Word::new(&["3"])), Err(CoxeterError::UnknownLetter { pos: 1, .. })));
        assert!(matches!(g.first_failure(&[5]), Err(CoxeterError::IndexOutOfRange(5))));
    }

    #[test]
    fn qw_on_a2() {
        let t = qw_tilde(&a2(), &Word::new(&["1", "2", "1"])).unwrap();
        let ends: Vec<(String, String)> = t.arrows().iter().map(|a| (a.src.to_string(), a.tgt.to_string())).collect();
        assert_eq!(ends, vec![("3:1".into(), "1:1".into()), ("1:1".into(), "2:2".into()), ("2:2".into(), "3:1".into())]);
        let r = qw(&a2(), &Word::new(&["1", "2", "1"])).unwrap();
        assert_eq!(r.vertices(), &[VertexId::new("1:1")]);
        assert_eq!(r.num_arrows(), 0);
        assert_eq!(qw_tilde(&a2(), &Word::new(&["2"])).unwrap().num_arrows(), 0);
        assert_eq!(qw(&a2(), &Word::new(&["2"])).unwrap().num_vertices(), 0);
        assert!(matches!(qw(&a2(), &Word::new(&["2", "2"])), Err(CoxeterError::NotReduced(2))));
    }

    #[test]
    fn birs_word_lengths() {
        let (_, w) = birs_word([2, 3, 3]).unwrap();
        assert_eq!(w.len(), 11);
        assert_eq!(w.distinct_letters(), 4);
        let (_, w) = birs_word([3, 3, 3]).unwrap();
        assert_eq!(w.len() - w.distinct_letters(), 8);
        assert!(birs_word([2, 2, 5]).is_err());
        assert!(birs_word([4, 3, 5]).is_err());
    }

    #[test]
    fn birs_word_gives_ct_quiver() {
        for p in [[2, 3, 4], [2, 4, 5], [3, 3, 3], [3, 4, 6]] {
            let (q, w) = birs_word(p).unwrap();
            let g = Gcm::from_quiver(&q).unwrap();
            assert!(is_reduced(&g, &w).unwrap().reduced, "{:?}", p);
            let qw = qw(&q, &w).unwrap();
            let ct = canonical_ct_quiver(p).unwrap();
            assert!(quiver_isomorphic(&qw, &ct).unwrap().is_some(), "{:?}", p);
        }
    }
}
