//! Paths and finite linear combinations of paths.
//!
//! Composition is written right to left: the word `[a, b]` means "b, then
//! a", so `src(a) = tgt(b)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::ids::{ArrowId, VertexId};
use crate::quiver::Quiver;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    /// Trivial path at a vertex.
    Lazy(VertexId),
    /// Nonempty word, leftmost arrow applied last.
    Arrows(Vec<ArrowId>),
}

impl Path {
    pub fn len(&self) -> usize {
        match self {
            Path::Lazy(_) => 0,
            Path::Arrows(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(source, target)` in `q`, or `None` if the word does not compose.
    pub fn endpoints(&self, q: &Quiver) -> Option<(VertexId, VertexId)> {
        match self {
            Path::Lazy(v) => Some((v.clone(), v.clone())),
            Path::Arrows(w) => word_endpoints(w, q),
        }
    }
}

/// Source and target of a composable word, or `None`.
pub fn word_endpoints(w: &[ArrowId], q: &Quiver) -> Option<(VertexId, VertexId)> {
    let first = q.arrow(w.last()?.as_str())?;
    let last = q.arrow(w[0].as_str())?;
    for p in 0..w.len() - 1 {
        let a = q.arrow(w[p].as_str())?;
        let b = q.arrow(w[p + 1].as_str())?;
        if a.src != b.tgt {
            return None;
        }
    }
    Some((first.src.clone(), last.tgt.clone()))
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Path::Lazy(v) => write!(f, "e_{}", v),
            Path::Arrows(w) => {
                for (i, a) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{}", crate::parse::quote_arrow(a))?;
                }
                Ok(())
            }
        }
    }
}

/// Finite linear combination of paths with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathSum {
    terms: BTreeMap<Path, Scalar>,
}

impl PathSum {
    pub fn new() -> Self {
        PathSum::default()
    }

    pub fn single(p: Path, c: Scalar) -> Self {
        let mut s = PathSum::new();
        s.add_term(p, c);
        s
    }

    /// The one-arrow path `a` with coefficient 1.
    pub fn arrow(a: &ArrowId) -> Self {
        PathSum::single(Path::Arrows(vec![a.clone()]), Scalar::one())
    }

    pub fn add_term(&mut self, p: Path, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &PathSum, c: &Scalar) {
        for (p, d) in &other.terms {
            self.add_term(p.clone(), d * c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &Path) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Path::len).min()
    }

    pub fn scaled(&self, c: &Scalar) -> PathSum {
        let mut s = PathSum::new();
        s.add_scaled(self, c);
        s
    }

    /// Drops terms longer than `max_len`.
    pub fn truncated(&self, max_len: usize) -> PathSum {
        PathSum { terms: self.terms.iter().filter(|(p, _)| p.len() <= max_len).map(|(p, c)| (p.clone(), c.clone())).collect() }
    }

    /// Product `self * rhs` (rhs first, then self) keeping words of length
    /// at most `max_len`. Lazy paths act as identities; the caller is
    /// responsible for endpoint compatibility.
    pub fn mul_truncated(&self, rhs: &PathSum, max_len: usize) -> PathSum {
        let mut out = PathSum::new();
        for (p, c) in &self.terms {
            for (q, d) in &rhs.terms {
                if p.len() + q.len() > max_len {
                    continue;
                }
                let prod = match (p, q) {
                    (Path::Lazy(_), other) | (other, Path::Lazy(_)) => other.clone(),
                    (Path::Arrows(a), Path::Arrows(b)) => {
                        let mut w = a.clone();
                        w.extend(b.iter().cloned());
                        Path::Arrows(w)
                    }
                };
                out.add_term(prod, c * d);
            }
        }
        out
    }
}

impl fmt::Display for PathSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            crate::parse::write_term(f, c, &p.to_string(), i == 0)?;
        }
        Ok(())
    }
}
