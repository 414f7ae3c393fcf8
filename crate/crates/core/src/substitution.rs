//! Vertex-fixing substitutions of arrows, i.e. right equivalences truncated
//! at a fixed path length.

use std::collections::BTreeMap;

use crate::ids::ArrowId;
use crate::path::{word_endpoints, Path, PathSum};
use crate::potential::Potential;
use crate::quiver::Quiver;
use crate::scalar::Scalar;

pub const DEFAULT_TRUNCATION: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SubstitutionError {
    #[error("image of {arrow} contains a term with wrong endpoints or unknown arrows")]
    BadEndpoints { arrow: ArrowId },
    #[error("image of {arrow} has a lazy-path term")]
    LazyTerm { arrow: ArrowId },
    #[error("substituted arrow {0} is not in the quiver")]
    UnknownArrow(ArrowId),
    #[error("linear part is not invertible between {src} and {tgt}")]
    Singular { src: String, tgt: String },
}

/// Arrow images; arrows without an entry map to themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    images: BTreeMap<ArrowId, PathSum>,
    truncation: usize,
}

impl Default for Substitution {
    fn default() -> Self {
        Substitution::identity(DEFAULT_TRUNCATION)
    }
}

impl Substitution {
    pub fn identity(truncation: usize) -> Self {
        Substitution { images: BTreeMap::new(), truncation }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn set(&mut self, a: ArrowId, image: PathSum) {
        let image = image.truncated(self.truncation);
        if image == PathSum::arrow(&a) {
            self.images.remove(&a);
        } else {
            self.images.insert(a, image);
        }
    }

    pub fn image(&self, a: &ArrowId) -> PathSum {
        self.images.get(a).cloned().unwrap_or_else(|| PathSum::arrow(a))
    }

    pub fn images(&self) -> impl Iterator<Item = (&ArrowId, &PathSum)> {
        self.images.iter()
    }

    pub fn is_identity(&self) -> bool {
        self.images.is_empty()
    }

    /// Checks endpoints of every image and invertibility of the linear
    /// part on each block of parallel arrows.
    pub fn validate(&self, q: &Quiver) -> Result<(), SubstitutionError> {
        for (a, img) in &self.images {
            let arr = q.arrow(a.as_str()).ok_or_else(|| SubstitutionError::UnknownArrow(a.clone()))?;
            for (p, _) in img.terms() {
                match p {
                    Path::Lazy(_) => return Err(SubstitutionError::LazyTerm { arrow: a.clone() }),
                    Path::Arrows(w) => match word_endpoints(w, q) {
                        Some((s, t)) if s == arr.src && t == arr.tgt => {}
                        _ => return Err(SubstitutionError::BadEndpoints { arrow: a.clone() }),
                    },
                }
            }
        }
        let mut blocks: BTreeMap<(String, String), Vec<ArrowId>> = BTreeMap::new();
        for a in q.arrows() {
            blocks.entry((a.src.to_string(), a.tgt.to_string())).or_default().push(a.id.clone());
        }
        for ((s, t), arrows) in blocks {
            if !arrows.iter().any(|a| self.images.contains_key(a)) {
                continue;
            }
            let m: Vec<Vec<Scalar>> = arrows
                .iter()
                .map(|a| {
                    let img = self.image(a);
                    arrows.iter().map(|b| img.coefficient(&Path::Arrows(vec![b.clone()]))).collect()
                })
                .collect();
            if !is_invertible(m) {
                return Err(SubstitutionError::Singular { src: s, tgt: t });
            }
        }
        Ok(())
    }

    /// Image of a word under the substitution, truncated.
    pub fn apply_word(&self, w: &[ArrowId], max_len: usize) -> PathSum {
        let mut acc: Option<PathSum> = None;
        for a in w {
            let img = self.image(a);
            acc = Some(match acc {
                None => img.truncated(max_len),
                Some(prev) => prev.mul_truncated(&img, max_len),
            });
            if acc.as_ref().is_some_and(PathSum::is_zero) {
                break;
            }
        }
        acc.unwrap_or_default()
    }

    pub fn apply_path_sum(&self, s: &PathSum) -> PathSum {
        let mut out = PathSum::new();
        for (p, c) in s.terms() {
            match p {
                Path::Lazy(_) => out.add_term(p.clone(), c.clone()),
                Path::Arrows(w) => out.add_scaled(&self.apply_word(w, self.truncation), c),
            }
        }
        out
    }

    /// Substitutes into a potential and renormalizes; cycles longer than
    /// the truncation are discarded.
    pub fn apply(&self, w: &Potential) -> Potential {
        let mut out = Potential::zero();
        for (cw, c) in w.terms() {
            if !cw.arrows().iter().any(|a| self.images.contains_key(a)) {
                if cw.len() <= self.truncation {
                    out.add_cycle(cw.arrows(), c.clone());
                }
                continue;
            }
            for (p, d) in self.apply_word(cw.arrows(), self.truncation).terms() {
                if let Path::Arrows(word) = p {
                    out.add_cycle(word, c * d);
                }
            }
        }
        out
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Substitution) -> Substitution {
        let truncation = self.truncation.min(first.truncation);
        let mut out = Substitution::identity(truncation);
        let mut keys: Vec<&ArrowId> = first.images.keys().chain(self.images.keys()).collect();
        keys.sort();
        keys.dedup();
        for a in keys {
            let mut img = PathSum::new();
            for (p, c) in first.image(a).terms() {
                if let Path::Arrows(w) = p {
                    img.add_scaled(&self.apply_word(w, truncation), c);
                }
            }
            out.set(a.clone(), img);
        }
        out
    }
}

/// Gaussian elimination over `Scalar`.
fn is_invertible(mut m: Vec<Vec<Scalar>>) -> bool {
    let n = m.len();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return false;
        };
        m.swap(col, piv);
        let inv = m[col][col].inv().unwrap();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let v = &m[r][c] - &(&f * &m[col][c]);
                m[r][c] = v;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> ArrowId {
        ArrowId::new(x)
    }

    fn tri() -> Quiver {
        Quiver::from_lists(&["1", "2", "3"], &[("a", "2", "1"), ("b", "3", "2"), ("c", "1", "3")]).unwrap()
    }

    #[test]
    fn identity_and_scaling() {
        let q = tri();
        let w = Potential::parse("L*a*b*c", &q).unwrap();
        assert_eq!(Substitution::identity(16).apply(&w), w);
        let mut phi = Substitution::identity(16);
        phi.set(s("a"), PathSum::single(Path::Arrows(vec![s("a")]), Scalar::from_int(2)));
        phi.validate(&q).unwrap();
        assert_eq!(phi.apply(&w), Potential::parse("2*L*a*b*c", &q).unwrap());
    }

    #[test]
    fn correction_by_a_longer_path() {
        // Toy quiver: a: 1->2 parallel to the path d*g (g: 1->3, d: 3->2),
        // closed by c: 2->1.  W = c*a + c*d*g, substitute a -> a - d*g.
        let q = Quiver::from_lists(&["1", "2", "3"], &[("a", "1", "2"), ("c", "2", "1"), ("g", "1", "3"), ("d", "3", "2")]).unwrap();
        let w = Potential::parse("a*c + d*g*c", &q).unwrap();
        let mut phi = Substitution::identity(16);
        let mut img = PathSum::arrow(&s("a"));
        img.add_term(Path::Arrows(vec![s("d"), s("g")]), Scalar::from_int(-1));
        phi.set(s("a"), img);
        phi.validate(&q).unwrap();
        assert_eq!(phi.apply(&w), Potential::parse("a*c", &q).unwrap());
    }

    #[test]
    fn validation_rejects_bad_images() {
        let q = tri();
        let mut phi = Substitution::identity(16);
        phi.set(s("a"), PathSum::arrow(&s("b")));
        assert!(matches!(phi.validate(&q), Err(SubstitutionError::BadEndpoints { .. })));
        let k = Quiver::from_lists(&["1", "2"], &[("u", "1", "2"), ("v", "1", "2")]).unwrap();
        let mut phi = Substitution::identity(16);
        phi.set(s("u"), PathSum::arrow(&s("v")));
        assert!(matches!(phi.validate(&k), Err(SubstitutionError::Singular { .. })));
        let mut swap = Substitution::identity(16);
        swap.set(s("u"), PathSum::arrow(&s("v")));
        swap.set(s("v"), PathSum::arrow(&s("u")));
        swap.validate(&k).unwrap();
    }

    #[test]
    fn composition_matches_sequential_application() {
        let q = Quiver::from_lists(&["1", "2", "3"], &[("a", "1", "2"), ("c", "2", "1"), ("g", "1", "3"), ("d", "3", "2")]).unwrap();
        let w = Potential::parse("a*c + 3*d*g*c + a*c*a*c", &q).unwrap();
        let mut p1 = Substitution::identity(12);
        let mut img = PathSum::arrow(&s("a"));
        img.add_term(Path::Arrows(vec![s("d"), s("g")]), Scalar::from_int(2));
        p1.set(s("a"), img);
        let mut p2 = Substitution::identity(12);
        let mut img = PathSum::arrow(&s("c"));
        img.add_term(Path::Arrows(vec![s("c"), s("a"), s("c")]), Scalar::from_int(-1));
        p2.set(s("c"), img);
        let seq = p2.apply(&p1.apply(&w));
        let comp = p2.after(&p1).apply(&w);
        assert_eq!(seq.truncated(12), comp.truncated(12));
    }
}
