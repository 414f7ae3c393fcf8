//! Brute-force reference implementations used to cross-check the main
//! algorithms.

use std::collections::{HashMap, VecDeque};

use qpcat_core::path::{word_endpoints, Path};
use qpcat_core::{ArrowId, Qp, Scalar, VertexId};

/// All composable words of lengths `1..=max_len`.
fn all_words(qp: &Qp, max_len: usize) -> Vec<Vec<ArrowId>> {
    let q = qp.quiver();
    let mut out: Vec<Vec<ArrowId>> = Vec::new();
    let mut layer: Vec<Vec<ArrowId>> = q.arrows().iter().map(|a| vec![a.id.clone()]).collect();
    for _ in 0..max_len {
        out.extend(layer.iter().cloned());
        let mut next = Vec::new();
        for w in &layer {
            for a in q.arrows() {
                let mut longer = vec![a.id.clone()];
                longer.extend(w.iter().cloned());
                if word_endpoints(&longer, q).is_some() {
                    next.push(longer);
                }
            }
        }
        layer = next;
    }
    out
}

/// Dense Gaussian elimination; returns the rank.
fn rank(rows: Vec<Vec<Scalar>>, cols: usize) -> usize {
    let mut pivots: Vec<(usize, Vec<Scalar>)> = Vec::new();
    for mut row in rows {
        for (c, p) in &pivots {
            if row[*c].is_zero() {
                continue;
            }
            let f = row[*c].clone();
            for j in 0..cols {
                if !p[j].is_zero() {
                    row[j] = &row[j] - &(&f * &p[j]);
                }
            }
        }
        if let Some(c) = (0..cols).find(|&j| !row[j].is_zero()) {
            let inv = row[c].inv().unwrap();
            for x in row.iter_mut() {
                *x = &*x * &inv;
            }
            for (_, p) in pivots.iter_mut() {
                if !p[c].is_zero() {
                    let f = p[c].clone();
                    for j in 0..cols {
                        if !row[j].is_zero() {
                            p[j] = &p[j] - &(&f * &row[j]);
                        }
                    }
                }
            }
            pivots.push((c, row));
        }
    }
    pivots.len()
}

/// `dim A / (I + m^(d+1))` from the explicit spanning set `u (d_a W) v`.
pub fn quotient_total(qp: &Qp, d: usize) -> usize {
    let q = qp.quiver();
    let n = q.num_vertices();
    if d == 0 {
        return n;
    }
    let words = all_words(qp, d);
    let index: HashMap<&Vec<ArrowId>, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    // Multipliers: lazy paths (empty words tagged by vertex) and words.
    let mut mults: Vec<(Vec<ArrowId>, VertexId, VertexId)> = q.vertices().iter().map(|v| (Vec::new(), v.clone(), v.clone())).collect();
    for w in &words {
        let (s, t) = word_endpoints(w, q).unwrap();
        mults.push((w.clone(), s, t));
    }
    let mut rows = Vec::new();
    for a in q.arrows() {
        let r = qp.derivative(&a.id).unwrap();
        let Some((rs, rt)) = r.terms().find_map(|(p, _)| match p {
            Path::Arrows(w) => word_endpoints(w, q),
            Path::Lazy(v) => Some((v.clone(), v.clone())),
        }) else {
            continue;
        };
        for (u, us, _) in &mults {
            if *us != rt {
                continue;
            }
            for (v, _, vt) in &mults {
                if *vt != rs {
                    continue;
                }
                let mut row = vec![Scalar::zero(); words.len()];
                let mut any = false;
                for (p, c) in r.terms() {
                    let Path::Arrows(w) = p else { continue };
                    let mut full = u.clone();
                    full.extend(w.iter().cloned());
                    full.extend(v.iter().cloned());
                    if let Some(&i) = index.get(&full) {
                        row[i] = &row[i] + c;
                        any = true;
                    }
                }
                if any {
                    rows.push(row);
                }
            }
        }
    }
    n + words.len() - rank(rows, words.len())
}

/// Dimension of the Jacobian algebra if `m^D` lies in `I + m^(D+1)` for
/// some `D <= max_d`.
pub fn jacobian_dimension(qp: &Qp, max_d: usize) -> Option<usize> {
    let mut prev = quotient_total(qp, 0);
    for d in 1..=max_d {
        let t = quotient_total(qp, d);
        if t == prev {
            return Some(t);
        }
        prev = t;
    }
    None
}

/// Word lengths in the Coxeter group of a symmetric GCM, found by
/// breadth-first search over matrices of the geometric representation.
pub struct CayleyBall {
    gens: Vec<Vec<i64>>,
    rank: usize,
    lengths: HashMap<Vec<i64>, usize>,
}

fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    c[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    c
}

impl CayleyBall {
    pub fn new(gcm: &[Vec<i64>], radius: usize) -> Self {
        let n = gcm.len();
        let gens: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut m = vec![0i64; n * n];
                for r in 0..n {
                    m[r * n + r] = 1;
                }
                for j in 0..n {
                    m[i * n + j] -= gcm[i][j];
                }
                m
            })
            .collect();
        let mut id = vec![0i64; n * n];
        for r in 0..n {
            id[r * n + r] = 1;
        }
        let mut lengths = HashMap::from([(id.clone(), 0usize)]);
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            let l = lengths[&g];
            if l == radius {
                continue;
            }
            for s in &gens {
                let h = mat_mul(&g, s, n);
                if !lengths.contains_key(&h) {
                    lengths.insert(h.clone(), l + 1);
                    queue.push_back(h);
                }
            }
        }
        CayleyBall { gens, rank: n, lengths }
    }

    pub fn size(&self) -> usize {
        self.lengths.len()
    }

    /// Least 1-based `k` whose prefix of length `k` is not reduced.
    pub fn first_failure(&self, word: &[usize]) -> Option<usize> {
        let n = self.rank;
        let mut g: Vec<i64> = (0..n * n).map(|x| i64::from(x % (n + 1) == 0)).collect();
        for (k, &i) in word.iter().enumerate() {
            g = mat_mul(&g, &self.gens[i], n);
            if self.lengths.get(&g).copied() != Some(k + 1) {
                return Some(k + 1);
            }
        }
        None
    }
}
