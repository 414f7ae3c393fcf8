//! Truncated Jacobian algebras.
//!
//! Everything happens in `A_D = K<Q> / m^(D+1)`. The image of the Jacobian
//! ideal there is spanned by closing the cyclic derivatives under left and
//! right multiplication by arrows. Rows are kept in echelon form with
//! respect to the order (length, word), so the leading term of a row is its
//! lowest-degree part and the number of pivots in degree `d` is the
//! dimension of the degree-`d` piece of the associated graded ideal. These
//! counts are exact for `d <= D`.
//!
//! If the graded quotient vanishes in degree `d`, then `m^d` lies in the
//! ideal plus `m^(d+1)`, hence in the closed ideal, and the Jacobian algebra
//! is finite dimensional with all of its dimension below `d`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::ids::VertexId;
use crate::path::{Path, PathSum};
use crate::potential::{least_rotation, Qp};
use crate::scalar::Scalar;

pub const DEFAULT_COLUMN_BUDGET: usize = 2_000_000;
pub const DEFAULT_RIGIDITY_SLACK: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum JacobianError {
    #[error("truncation degree must be at least 2, got {0}")]
    TruncationTooSmall(usize),
    #[error("{columns} paths up to length {degree} exceed the budget of {budget}")]
    BudgetExceeded { degree: usize, columns: usize, budget: usize },
    #[error("generator order is not a permutation of the arrows")]
    BadGeneratorOrder,
}

#[derive(Clone, Debug)]
pub struct JacobianOptions {
    /// Upper bound on the number of paths of positive length tracked.
    pub column_budget: usize,
    /// Order in which the derivatives `d_a W` enter the worklist, as a
    /// permutation of arrow indices.
    pub generator_order: Option<Vec<usize>>,
}

impl Default for JacobianOptions {
    fn default() -> Self {
        JacobianOptions { column_budget: DEFAULT_COLUMN_BUDGET, generator_order: None }
    }
}

type Row = Vec<(u32, Scalar)>;

/// Paths of lengths `1..=max_len`, numbered in (length, word) order.
struct PathTable {
    vertices: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    words: Vec<Box<[u16]>>,
    index: HashMap<Box<[u16]>, u32>,
    len_start: Vec<usize>,
    max_len: usize,
}

fn count_paths(qp: &Qp, max_len: usize) -> Vec<usize> {
    let q = qp.quiver();
    let n = q.num_vertices();
    // at_tgt[v]: paths of the current length ending at v.
    let mut at_tgt = vec![1usize; n];
    let mut out = vec![n];
    for _ in 1..=max_len {
        let mut next = vec![0usize; n];
        for a in q.arrows() {
            let s = q.vertex_index(a.src.as_str()).unwrap();
            let t = q.vertex_index(a.tgt.as_str()).unwrap();
            next[t] = next[t].saturating_add(at_tgt[s]);
        }
        out.push(next.iter().fold(0usize, |x, &y| x.saturating_add(y)));
        at_tgt = next;
    }
    out
}

impl PathTable {
    fn build(qp: &Qp, max_len: usize, budget: usize) -> Result<PathTable, JacobianError> {
        let counts = count_paths(qp, max_len);
        let total = counts[1..].iter().fold(0usize, |x, &y| x.saturating_add(y));
        if total > budget {
            return Err(JacobianError::BudgetExceeded { degree: max_len, columns: total, budget });
        }
        let q = qp.quiver();
        let src: Vec<usize> = q.arrows().iter().map(|a| q.vertex_index(a.src.as_str()).unwrap()).collect();
        let tgt: Vec<usize> = q.arrows().iter().map(|a| q.vertex_index(a.tgt.as_str()).unwrap()).collect();
        // into[v]: arrows with target v, in index order.
        let mut into = vec![Vec::new(); q.num_vertices()];
        for (i, &t) in tgt.iter().enumerate() {
            into[t].push(i as u16);
        }
        let mut words: Vec<Box<[u16]>> = Vec::with_capacity(total);
        let mut len_start = vec![0, 0];
        for a in 0..src.len() {
            words.push(vec![a as u16].into_boxed_slice());
        }
        let mut prev = 0..words.len();
        for _ in 2..=max_len {
            len_start.push(words.len());
            let start = words.len();
            for w in prev.clone() {
                let last = *words[w].last().unwrap() as usize;
                for &b in &into[src[last]] {
                    let mut nw = words[w].to_vec();
                    nw.push(b);
                    words.push(nw.into_boxed_slice());
                }
            }
            prev = start..words.len();
        }
        len_start.push(words.len());
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        Ok(PathTable { vertices: q.num_vertices(), src, tgt, words, index, len_start, max_len })
    }

    fn len_of(&self, col: u32) -> usize {
        self.words[col as usize].len()
    }

    fn endpoints(&self, col: u32) -> (usize, usize) {
        let w = &self.words[col as usize];
        (self.src[*w.last().unwrap() as usize], self.tgt[w[0] as usize])
    }

    fn count(&self, len: usize) -> usize {
        if len == 0 {
            self.vertices
        } else {
            self.len_start[len + 1] - self.len_start[len]
        }
    }

    fn to_row(&self, s: &PathSum, qp: &Qp) -> Row {
        let mut row: Row = Vec::new();
        for (p, c) in s.terms() {
            if let Path::Arrows(w) = p {
                if w.len() > self.max_len {
                    continue;
                }
                let key: Vec<u16> = w.iter().map(|a| qp.quiver().arrow_index(a.as_str()).unwrap() as u16).collect();
                row.push((self.index[key.as_slice()], c.clone()));
            }
        }
        row.sort_by_key(|(c, _)| *c);
        row
    }

    /// `a * row` (row first, then a).
    fn left_mul(&self, a: usize, row: &Row) -> Row {
        let mut out: Row = Vec::new();
        for (col, c) in row {
            let w = &self.words[*col as usize];
            if w.len() >= self.max_len || self.tgt[w[0] as usize] != self.src[a] {
                continue;
            }
            let mut nw = Vec::with_capacity(w.len() + 1);
            nw.push(a as u16);
            nw.extend_from_slice(w);
            out.push((self.index[nw.as_slice()], c.clone()));
        }
        out.sort_by_key(|(c, _)| *c);
        out
    }

    /// `row * a` (a first, then row).
    fn right_mul(&self, row: &Row, a: usize) -> Row {
        let mut out: Row = Vec::new();
        for (col, c) in row {
            let w = &self.words[*col as usize];
            if w.len() >= self.max_len || self.src[*w.last().unwrap() as usize] != self.tgt[a] {
                continue;
            }
            let mut nw = w.to_vec();
            nw.push(a as u16);
            out.push((self.index[nw.as_slice()], c.clone()));
        }
        out.sort_by_key(|(c, _)| *c);
        out
    }
}

/// `row - f * pivot`, with `pivot` monic at its leading column.
fn sub_scaled(row: &Row, pivot: &Row, f: &Scalar) -> Row {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -(f * &pivot[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - &(f * &pivot[j].1);
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Echelon basis with monic rows, keyed by leading column.
#[derive(Default)]
struct Echelon {
    rows: Vec<Row>,
    pivot_of: HashMap<u32, usize>,
}

impl Echelon {
    /// Reduces `row`; if something is left, stores it and returns its index.
    fn insert(&mut self, mut row: Row) -> Option<usize> {
        while let Some((lead, c)) = row.first().cloned() {
            match self.pivot_of.get(&lead) {
                Some(&p) => row = sub_scaled(&row, &self.rows[p], &c),
                None => {
                    let inv = c.inv().expect("nonzero leading coefficient");
                    let row: Row = row.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
                    self.pivot_of.insert(lead, self.rows.len());
                    self.rows.push(row);
                    return Some(self.rows.len() - 1);
                }
            }
        }
        None
    }

    fn reduces_to_zero(&self, mut row: Row) -> bool {
        while let Some((lead, c)) = row.first().cloned() {
            match self.pivot_of.get(&lead) {
                Some(&p) => row = sub_scaled(&row, &self.rows[p], &c),
                None => return false,
            }
        }
        true
    }
}

/// The ideal of `qp` inside `A_D` in echelon form.
struct IdealSpan {
    table: PathTable,
    echelon: Echelon,
}

fn ideal_span(qp: &Qp, max_len: usize, opts: &JacobianOptions) -> Result<IdealSpan, JacobianError> {
    let table = PathTable::build(qp, max_len, opts.column_budget)?;
    let q = qp.quiver();
    let n_arrows = q.num_arrows();
    let order: Vec<usize> = match &opts.generator_order {
        Some(o) => {
            let mut s = o.clone();
            s.sort_unstable();
            if s != (0..n_arrows).collect::<Vec<_>>() {
                return Err(JacobianError::BadGeneratorOrder);
            }
            o.clone()
        }
        None => (0..n_arrows).collect(),
    };
    let mut queue: VecDeque<Row> = VecDeque::new();
    for a in order {
        let d = qp.derivative(&q.arrows()[a].id).expect("own arrow");
        let row = table.to_row(&d, qp);
        if !row.is_empty() {
            queue.push_back(row);
        }
    }
    let mut echelon = Echelon::default();
    // Arrows grouped by endpoint for cheap products.
    let mut arrows_from = vec![Vec::new(); table.vertices];
    let mut arrows_to = vec![Vec::new(); table.vertices];
    for a in 0..n_arrows {
        arrows_from[table.src[a]].push(a);
        arrows_to[table.tgt[a]].push(a);
    }
    while let Some(row) = queue.pop_front() {
        if let Some(idx) = echelon.insert(row) {
            let r = &echelon.rows[idx];
            let (s, t) = table.endpoints(r[0].0);
            let mut products = Vec::new();
            if table.len_of(r[0].0) < max_len {
                for &a in &arrows_from[t] {
                    products.push(table.left_mul(a, r));
                }
                for &a in &arrows_to[s] {
                    products.push(table.right_mul(r, a));
                }
            }
            queue.extend(products.into_iter().filter(|p| !p.is_empty()));
        }
    }
    Ok(IdealSpan { table, echelon })
}

/// Graded dimensions of `J(Q,W) / m^(D+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedQuotient {
    /// Truncation actually used for the reported data.
    pub degree_bound: usize,
    /// `dims[d]` for `d = 0..=degree_bound`.
    pub dims: Vec<usize>,
    /// Least `d >= 1` with `dims[d] == 0`, if one was found below the
    /// requested bound.
    pub stabilization_degree: Option<usize>,
    /// Per degree, surviving path classes between `(source, target)`.
    pub pair_dims: BTreeMap<(VertexId, VertexId), Vec<usize>>,
}

impl TruncatedQuotient {
    pub fn total(&self) -> Option<usize> {
        self.stabilization_degree.map(|d| self.dims[..d].iter().sum())
    }

    /// Total dimension of `e_t J e_s` below stabilization, keyed by
    /// `(s, t)`.
    pub fn pair_totals(&self) -> BTreeMap<(VertexId, VertexId), usize> {
        let upto = self.stabilization_degree.unwrap_or(self.degree_bound + 1);
        self.pair_dims.iter().map(|(k, v)| (k.clone(), v[..upto.min(v.len())].iter().sum())).collect()
    }

    pub fn report(&self) -> JacobianReport {
        let dims = match self.stabilization_degree {
            Some(d) => self.dims[..=d].to_vec(),
            None => self.dims.clone(),
        };
        JacobianReport { dims, stabilized_at: self.stabilization_degree, total: self.total() }
    }
}

/// CLI-facing summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianReport {
    pub dims: Vec<usize>,
    pub stabilized_at: Option<usize>,
    pub total: Option<usize>,
}

fn quotient_at(qp: &Qp, d: usize, opts: &JacobianOptions) -> Result<TruncatedQuotient, JacobianError> {
    let span = ideal_span(qp, d, opts)?;
    let t = &span.table;
    let q = qp.quiver();
    let mut dims: Vec<usize> = (0..=d).map(|l| t.count(l)).collect();
    let mut pair_dims: BTreeMap<(VertexId, VertexId), Vec<usize>> = BTreeMap::new();
    for v in q.vertices() {
        pair_dims.entry((v.clone(), v.clone())).or_insert_with(|| vec![0; d + 1])[0] += 1;
    }
    for &lead in span.echelon.pivot_of.keys() {
        dims[t.len_of(lead)] -= 1;
    }
    for col in 0..t.words.len() as u32 {
        if span.echelon.pivot_of.contains_key(&col) {
            continue;
        }
        let (s, g) = t.endpoints(col);
        let key = (q.vertices()[s].clone(), q.vertices()[g].clone());
        pair_dims.entry(key).or_insert_with(|| vec![0; d + 1])[t.len_of(col)] += 1;
    }
    let stabilization_degree = (1..=d).find(|&k| dims[k] == 0);
    Ok(TruncatedQuotient { degree_bound: d, dims, stabilization_degree, pair_dims })
}

/// Truncated quotient for bound `n`: tries `D = 1, 2, ...` up to `n - 1`
/// and stops at the first vanishing graded piece. Without one, the data
/// at `D = n` is returned with no stabilization degree.
pub fn truncated_quotient(qp: &Qp, n: usize) -> Result<TruncatedQuotient, JacobianError> {
    truncated_quotient_with(qp, n, &JacobianOptions::default())
}

pub fn truncated_quotient_with(qp: &Qp, n: usize, opts: &JacobianOptions) -> Result<TruncatedQuotient, JacobianError> {
    if n < 2 {
        return Err(JacobianError::TruncationTooSmall(n));
    }
    for d in 1..n {
        let tq = quotient_at(qp, d, opts)?;
        if tq.stabilization_degree.is_some() {
            return Ok(tq);
        }
    }
    let mut tq = quotient_at(qp, n, opts)?;
    tq.stabilization_degree = None;
    Ok(tq)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JacobianDimension {
    Finite { dim: usize },
    Undetermined { dims: Vec<usize> },
}

pub fn jacobian_dimension(qp: &Qp, n: usize) -> Result<JacobianDimension, JacobianError> {
    let tq = truncated_quotient(qp, n)?;
    Ok(match tq.total() {
        Some(dim) => JacobianDimension::Finite { dim },
        None => JacobianDimension::Undetermined { dims: tq.dims },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub rigid_up_to: usize,
    pub truncation: usize,
    pub holds: bool,
    /// Canonical rotation of the first cycle outside the ideal plus
    /// commutators.
    pub failing_cycle: Option<Vec<String>>,
}

/// Checks that every cycle of length at most `d` is cyclically equivalent
/// to an element of the Jacobian ideal modulo paths longer than
/// `d + slack`.
pub fn is_rigid_up_to_degree(qp: &Qp, d: usize, slack: usize) -> Result<RigidityReport, JacobianError> {
    if d < 2 {
        return Err(JacobianError::TruncationTooSmall(d));
    }
    let m = d + slack;
    let span = ideal_span(qp, m, &JacobianOptions::default())?;
    let t = &span.table;
    // Rotation classes of cycles, numbered by (length, least rotation).
    let mut class_of: HashMap<u32, u32> = HashMap::new();
    let mut classes: Vec<u32> = Vec::new();
    for col in 0..t.words.len() as u32 {
        let (s, g) = t.endpoints(col);
        if s != g {
            continue;
        }
        let rot: Vec<u16> = least_rotation(&t.words[col as usize]);
        let canon = t.index[rot.as_slice()];
        if canon == col {
            class_of.insert(col, classes.len() as u32);
            classes.push(col);
        }
    }
    for col in 0..t.words.len() as u32 {
        let (s, g) = t.endpoints(col);
        if s == g && !class_of.contains_key(&col) {
            let rot: Vec<u16> = least_rotation(&t.words[col as usize]);
            let c = class_of[&t.index[rot.as_slice()]];
            class_of.insert(col, c);
        }
    }
    let mut proj = Echelon::default();
    for row in &span.echelon.rows {
        let mut acc: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (col, c) in row {
            if let Some(&k) = class_of.get(col) {
                let e = acc.entry(k).or_insert_with(Scalar::zero);
                *e = &*e + c;
            }
        }
        let r: Row = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if !r.is_empty() {
            proj.insert(r);
        }
    }
    for (k, &col) in classes.iter().enumerate() {
        if t.len_of(col) > d {
            break;
        }
        if !proj.reduces_to_zero(vec![(k as u32, Scalar::one())]) {
            let q = qp.quiver();
            let word = t.words[col as usize].iter().map(|&a| q.arrows()[a as usize].id.to_string()).collect();
            return Ok(RigidityReport { rigid_up_to: d, truncation: m, holds: false, failing_cycle: Some(word) });
        }
    }
    Ok(RigidityReport { rigid_up_to: d, truncation: m, holds: true, failing_cycle: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn tri() -> Qp {
        let q = Quiver::from_lists(&["1", "2", "3"], &[("x", "1", "2"), ("y", "2", "3"), ("z", "3", "1")]).unwrap();
        Qp::parse(q, "z*y*x").unwrap()
    }

    #[test]
    fn a2_zero_potential() {
        let q = Quiver::from_lists(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let tq = truncated_quotient(&Qp::zero(q), 10).unwrap();
        assert_eq!(tq.report(), JacobianReport { dims: vec![2, 1, 0], stabilized_at: Some(2), total: Some(3) });
    }

    #[test]
    fn three_cycle() {
        let tq = truncated_quotient(&tri(), 10).unwrap();
        assert_eq!(tq.report(), JacobianReport { dims: vec![3, 3, 0], stabilized_at: Some(2), total: Some(6) });
        assert_eq!(jacobian_dimension(&tri(), 10).unwrap(), JacobianDimension::Finite { dim: 6 });
    }

    #[test]
    fn three_cycle_without_potential_is_undetermined() {
        let q = tri().quiver().clone();
        match jacobian_dimension(&Qp::zero(q), 6).unwrap() {
            JacobianDimension::Undetermined { dims } => assert_eq!(dims, vec![3; 7]),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn two_cycle_kills_everything_but_vertices() {
        let q = Quiver::from_lists(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        let qp = Qp::parse(q, "b*a").unwrap();
        assert_eq!(jacobian_dimension(&qp, 10).unwrap(), JacobianDimension::Finite { dim: 2 });
        assert!(is_rigid_up_to_degree(&qp, 6, 4).unwrap().holds);
    }

    #[test]
    fn no_arrows() {
        let q = Quiver::from_lists(&["1", "2", "3"], &[]).unwrap();
        assert_eq!(jacobian_dimension(&Qp::zero(q), 2).unwrap(), JacobianDimension::Finite { dim: 3 });
    }

    #[test]
    fn rigidity() {
        assert!(is_rigid_up_to_degree(&tri(), 6, 4).unwrap().holds);
        let q = tri().quiver().clone();
        let r = is_rigid_up_to_degree(&Qp::zero(q), 4, 2).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failing_cycle.unwrap(), vec!["x", "z", "y"]);
        let a3 = Quiver::from_lists(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        assert!(is_rigid_up_to_degree(&Qp::zero(a3), 6, 4).unwrap().holds);
    }

    #[test]
    fn pair_dims_of_a2() {
        let q = Quiver::from_lists(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let tq = truncated_quotient(&Qp::zero(q), 5).unwrap();
        let pt = tq.pair_totals();
        assert_eq!(pt[&(VertexId::new("1"), VertexId::new("2"))], 1);
        assert_eq!(pt[&(VertexId::new("1"), VertexId::new("1"))], 1);
    }

    #[test]
    fn budget_guard() {
        let q = tri().quiver().clone();
        let opts = JacobianOptions { column_budget: 10, generator_order: None };
        assert!(matches!(truncated_quotient_with(&Qp::zero(q), 8, &opts), Err(JacobianError::BudgetExceeded { .. })));
    }
}
