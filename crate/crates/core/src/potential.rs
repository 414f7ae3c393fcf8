//! Potentials in cyclic normal form and quivers with potentials.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ids::{ArrowId, VertexId};
use crate::parse::{parse_terms, quote_arrow, write_term, ParseError};
use crate::path::{Path, PathSum};
use crate::quiver::{Quiver, QuiverError};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PotentialError {
    #[error("term {term}: empty word")]
    EmptyWord { term: usize },
    #[error("term {term}, position {pos}: unknown arrow {id}")]
    UnknownArrow { term: usize, pos: usize, id: ArrowId },
    #[error("term {term}, position {pos}: {left} does not compose with {right}")]
    NotComposable { term: usize, pos: usize, left: ArrowId, right: ArrowId },
    #[error("term {term}: word does not close up into a cycle")]
    NotCyclic { term: usize },
    #[error("cycle {0} has length 1; a potential must lie in the square of the arrow ideal")]
    NotInSquare(CycleWord),
    #[error("unknown arrow {0}")]
    UnknownArrowId(ArrowId),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// A cycle stored as its lexicographically least rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CycleWord(Vec<ArrowId>);

/// Lexicographically least rotation of a word.
pub fn least_rotation<T: Ord + Clone>(w: &[T]) -> Vec<T> {
    let m = w.len();
    let mut best = 0;
    for r in 1..m {
        let less = (0..m).map(|i| &w[(r + i) % m]).lt((0..m).map(|i| &w[(best + i) % m]));
        if less {
            best = r;
        }
    }
    (0..m).map(|i| w[(best + i) % m].clone()).collect()
}

impl CycleWord {
    /// Canonical rotation of `w`, without checking it against a quiver.
    pub fn from_word(w: &[ArrowId]) -> Self {
        CycleWord(least_rotation(w))
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: &ArrowId) -> bool {
        self.0.contains(a)
    }

    /// Vertices visited, as the target of each arrow in word order.
    pub fn vertices(&self, q: &Quiver) -> Vec<VertexId> {
        self.0.iter().map(|a| q.arrow(a.as_str()).expect("cycle arrow").tgt.clone()).collect()
    }
}

impl fmt::Display for CycleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(quote_arrow).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Checks that `w` is a nonempty composable cycle in `q`.
pub fn check_cycle(w: &[ArrowId], q: &Quiver, term: usize) -> Result<(), PotentialError> {
    if w.is_empty() {
        return Err(PotentialError::EmptyWord { term });
    }
    let mut arrows = Vec::with_capacity(w.len());
    for (pos, a) in w.iter().enumerate() {
        match q.arrow(a.as_str()) {
            Some(x) => arrows.push(x),
            None => return Err(PotentialError::UnknownArrow { term, pos, id: a.clone() }),
        }
    }
    for pos in 0..w.len() - 1 {
        if arrows[pos].src != arrows[pos + 1].tgt {
            return Err(PotentialError::NotComposable {
                term,
                pos,
                left: w[pos].clone(),
                right: w[pos + 1].clone(),
            });
        }
    }
    if arrows[w.len() - 1].src != arrows[0].tgt {
        return Err(PotentialError::NotCyclic { term });
    }
    Ok(())
}

/// Finite sum of cycles with nonzero coefficients, one key per rotation
/// class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Potential {
    terms: BTreeMap<CycleWord, Scalar>,
}

impl Potential {
    pub fn zero() -> Self {
        Potential::default()
    }

    /// Adds `c` times the rotation class of `w`. The word is not validated.
    pub fn add_cycle(&mut self, w: &[ArrowId], c: Scalar) {
        if c.is_zero() || w.is_empty() {
            return;
        }
        let key = CycleWord::from_word(w);
        let sum = match self.terms.get(&key) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&mut self, other: &Potential) {
        for (w, c) in &other.terms {
            self.add_cycle(&w.0, c.clone());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CycleWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &[ArrowId]) -> Scalar {
        self.terms.get(&CycleWord::from_word(w)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_length(&self) -> Option<usize> {
        self.terms.keys().map(CycleWord::len).min()
    }

    pub fn max_length(&self) -> Option<usize> {
        self.terms.keys().map(CycleWord::len).max()
    }

    pub fn truncated(&self, max_len: usize) -> Potential {
        Potential { terms: self.terms.iter().filter(|(w, _)| w.len() <= max_len).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Keeps the cycles whose arrows all satisfy `keep`.
    pub fn filter_arrows(&self, keep: impl Fn(&ArrowId) -> bool) -> Potential {
        Potential {
            terms: self.terms.iter().filter(|(w, _)| w.0.iter().all(&keep)).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// Applies `f` to every coefficient, dropping zeros. `None` from `f`
    /// aborts.
    pub fn try_map_coefficients(&self, f: impl Fn(&Scalar) -> Option<Scalar>) -> Option<Potential> {
        let mut out = Potential::zero();
        for (w, c) in &self.terms {
            out.add_cycle(&w.0, f(c)?);
        }
        Some(out)
    }

    /// Renames arrows; unmapped arrows keep their ids.
    pub fn rename_arrows(&self, map: &BTreeMap<ArrowId, ArrowId>) -> Potential {
        let mut out = Potential::zero();
        for (w, c) in &self.terms {
            let nw: Vec<ArrowId> = w.0.iter().map(|a| map.get(a).cloned().unwrap_or_else(|| a.clone())).collect();
            out.add_cycle(&nw, c.clone());
        }
        out
    }

    /// Substitutes `L := at` in every coefficient; `None` at a pole.
    pub fn specialize(&self, at: &num_rational::BigRational) -> Option<Potential> {
        self.try_map_coefficients(|c| c.specialize(at))
    }

    pub fn scaled(&self, s: &Scalar) -> Potential {
        let mut out = Potential::zero();
        for (w, c) in &self.terms {
            out.add_cycle(&w.0, c * s);
        }
        out
    }

    /// Parses potential text and normalizes it against `q`.
    pub fn parse(text: &str, q: &Quiver) -> Result<Potential, PotentialError> {
        cyclic_normal_form(&parse_terms(text)?, q)
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            write_term(f, c, &w.to_string(), i == 0)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycleJson {
    coef: Scalar,
    word: Vec<ArrowId>,
}

#[derive(Serialize, Deserialize)]
struct PotentialJson {
    cycles: Vec<CycleJson>,
}

impl Serialize for Potential {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PotentialJson {
            cycles: self.terms.iter().map(|(w, c)| CycleJson { coef: c.clone(), word: w.0.clone() }).collect(),
        }
        .serialize(s)
    }
}

/// Deserialization normalizes rotations; quiver validity is checked when
/// the potential is paired with a quiver in [`Qp`].
impl<'de> Deserialize<'de> for Potential {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PotentialJson::deserialize(d)?;
        let mut p = Potential::zero();
        for c in raw.cycles {
            if c.word.is_empty() {
                return Err(serde::de::Error::custom("empty cycle word"));
            }
            p.add_cycle(&c.word, c.coef);
        }
        Ok(p)
    }
}

/// Canonical-rotation representative of a list of raw terms: rotations of
/// one cycle merge and zero sums disappear.
pub fn cyclic_normal_form(terms: &[(Scalar, Vec<ArrowId>)], q: &Quiver) -> Result<Potential, PotentialError> {
    let mut p = Potential::zero();
    for (t, (c, w)) in terms.iter().enumerate() {
        check_cycle(w, q, t)?;
        p.add_cycle(w, c.clone());
    }
    Ok(p)
}

/// `d_a` of one cycle word: each occurrence of `a` contributes the word
/// read cyclically after it. A loop `a` alone gives the lazy path.
pub fn cyclic_derivative_of_word(w: &[ArrowId], a: &ArrowId, q: &Quiver) -> PathSum {
    let mut out = PathSum::new();
    let m = w.len();
    for p in 0..m {
        if &w[p] != a {
            continue;
        }
        if m == 1 {
            let v = q.arrow(a.as_str()).expect("arrow in quiver").src.clone();
            out.add_term(Path::Lazy(v), Scalar::one());
        } else {
            let rest: Vec<ArrowId> = (1..m).map(|i| w[(p + i) % m].clone()).collect();
            out.add_term(Path::Arrows(rest), Scalar::one());
        }
    }
    out
}

/// Cyclic derivative of `w` with respect to arrow `a`; every path runs
/// from `tgt(a)` to `src(a)`.
pub fn cyclic_derivative(w: &Potential, a: &ArrowId, q: &Quiver) -> Result<PathSum, PotentialError> {
    if q.arrow(a.as_str()).is_none() {
        return Err(PotentialError::UnknownArrowId(a.clone()));
    }
    let mut out = PathSum::new();
    for (cw, c) in w.terms() {
        if cw.contains(a) {
            out.add_scaled(&cyclic_derivative_of_word(cw.arrows(), a, q), c);
        }
    }
    Ok(out)
}

/// A quiver together with a potential on it lying in the square of the
/// arrow ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QpJson", into = "QpJson")]
pub struct Qp {
    quiver: Quiver,
    potential: Potential,
}

#[derive(Serialize, Deserialize)]
struct QpJson {
    quiver: Quiver,
    potential: Potential,
}

impl TryFrom<QpJson> for Qp {
    type Error = PotentialError;
    fn try_from(j: QpJson) -> Result<Self, Self::Error> {
        Qp::new(j.quiver, j.potential)
    }
}

impl From<Qp> for QpJson {
    fn from(qp: Qp) -> Self {
        QpJson { quiver: qp.quiver, potential: qp.potential }
    }
}

impl Qp {
    pub fn new(quiver: Quiver, potential: Potential) -> Result<Qp, PotentialError> {
        for (t, (w, _)) in potential.terms().enumerate() {
            check_cycle(w.arrows(), &quiver, t)?;
            if w.len() < 2 {
                return Err(PotentialError::NotInSquare(w.clone()));
            }
        }
        Ok(Qp { quiver, potential })
    }

    /// The quiver with the zero potential.
    pub fn zero(quiver: Quiver) -> Qp {
        Qp { quiver, potential: Potential::zero() }
    }

    pub fn parse(quiver: Quiver, text: &str) -> Result<Qp, PotentialError> {
        let w = Potential::parse(text, &quiver)?;
        Qp::new(quiver, w)
    }

    pub(crate) fn from_parts_unchecked(quiver: Quiver, potential: Potential) -> Qp {
        Qp { quiver, potential }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn into_parts(self) -> (Quiver, Potential) {
        (self.quiver, self.potential)
    }

    pub fn derivative(&self, a: &ArrowId) -> Result<PathSum, PotentialError> {
        cyclic_derivative(&self.potential, a, &self.quiver)
    }

    /// Every cyclic derivative lies in the square of the arrow ideal, i.e.
    /// the potential has no 2-cycle terms.
    pub fn is_reduced(&self) -> bool {
        self.quiver.arrows().iter().all(|a| {
            let d = cyclic_derivative(&self.potential, &a.id, &self.quiver).expect("own arrow");
            d.min_degree().is_none_or(|m| m >= 2)
        })
    }

    /// Restriction to the full subquiver on `keep`: cycles survive only if
    /// all their arrows do.
    pub fn restrict(&self, keep: &HashSet<VertexId>) -> Qp {
        let quiver = self.quiver.full_subquiver(keep);
        let potential = self.potential.filter_arrows(|a| quiver.arrow(a.as_str()).is_some());
        Qp { quiver, potential }
    }

    /// Specializes `L := at`; `None` at a pole of some coefficient.
    pub fn specialize(&self, at: &num_rational::BigRational) -> Option<Qp> {
        Some(Qp { quiver: self.quiver.clone(), potential: self.potential.specialize(at)? })
    }
}

/// Free-function form of [`Qp::restrict`].
pub fn restrict_qp(qp: &Qp, keep: &HashSet<VertexId>) -> Qp {
    qp.restrict(keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Quiver {
        Quiver::from_lists(&["1", "2", "3"], &[("a", "2", "1"), ("b", "3", "2"), ("c", "1", "3")]).unwrap()
    }

    fn w(s: &[&str]) -> Vec<ArrowId> {
        s.iter().map(|x| ArrowId::new(x)).collect()
    }

    #[test]
    fn rotations_cancel() {
        let p = cyclic_normal_form(&[(Scalar::one(), w(&["a", "b", "c"])), (Scalar::from_int(-1), w(&["b", "c", "a"]))], &tri()).unwrap();
        assert!(p.is_zero());
        let p = cyclic_normal_form(&[(Scalar::one(), w(&["c", "a", "b"]))], &tri()).unwrap();
        assert_eq!(p.terms().next().unwrap().0.arrows(), &w(&["a", "b", "c"])[..]);
    }

    #[test]
    fn bad_words_name_the_position() {
        let e = cyclic_normal_form(&[(Scalar::one(), w(&["a", "c", "b"]))], &tri()).unwrap_err();
        assert!(matches!(e, PotentialError::NotComposable { term: 0, pos: 0, .. }));
        let e = cyclic_normal_form(&[(Scalar::one(), w(&["a", "b"]))], &tri()).unwrap_err();
        assert!(matches!(e, PotentialError::NotCyclic { term: 0 }));
        let e = cyclic_normal_form(&[(Scalar::one(), w(&["a", "zz"]))], &tri()).unwrap_err();
        assert!(matches!(e, PotentialError::UnknownArrow { pos: 1, .. }));
    }

    #[test]
    fn derivative_of_a_square() {
        let q = Quiver::from_lists(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        let p = Potential::parse("a*b*a*b", &q).unwrap();
        let d = cyclic_derivative(&p, &ArrowId::new("a"), &q).unwrap();
        let bab = Path::Arrows(w(&["b", "a", "b"]));
        assert_eq!(d, PathSum::single(bab, Scalar::from_int(2)));
        assert!(cyclic_derivative(&p, &ArrowId::new("zz"), &q).is_err());
    }

    #[test]
    fn loop_derivative_is_lazy() {
        let q = Quiver::from_lists(&["1"], &[("t", "1", "1")]).unwrap();
        let mut p = Potential::zero();
        p.add_cycle(&w(&["t"]), Scalar::one());
        let d = cyclic_derivative(&p, &ArrowId::new("t"), &q).unwrap();
        assert_eq!(d, PathSum::single(Path::Lazy(VertexId::new("1")), Scalar::one()));
        assert!(matches!(Qp::new(q, p), Err(PotentialError::NotInSquare(_))));
    }

    #[test]
    fn text_and_json_round_trip() {
        let q = tri();
        let p = Potential::parse("L*a*b*c - 2/3*b*c*a", &q).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.to_string(), "(L-2/3)*a*b*c");
        assert_eq!(Potential::parse(&p.to_string(), &q).unwrap(), p);
        let qp = Qp::new(q, p).unwrap();
        let js = serde_json::to_string(&qp).unwrap();
        assert!(js.contains(r#""cycles":[{"coef":"L-2/3","word":["a","b","c"]}]"#));
        let back: Qp = serde_json::from_str(&js).unwrap();
        assert_eq!(back, qp);
    }

    #[test]
    fn restriction_drops_broken_cycles() {
        let qp = Qp::parse(tri(), "a*b*c").unwrap();
        let keep: HashSet<VertexId> = ["1", "2"].iter().map(|s| VertexId::new(s)).collect();
        let r = qp.restrict(&keep);
        assert_eq!(r.quiver().num_arrows(), 1);
        assert!(r.potential().is_zero());
        let all: HashSet<VertexId> = qp.quiver().vertices().iter().cloned().collect();
        assert_eq!(qp.restrict(&all), qp);
    }

    #[test]
    fn reducedness() {
        let q = Quiver::from_lists(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        assert!(!Qp::parse(q.clone(), "a*b").unwrap().is_reduced());
        assert!(Qp::parse(q, "a*b*a*b").unwrap().is_reduced());
    }
}
