//! Builders for the quivers and potentials attached to weighted projective
//! lines.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::ids::{ArrowId, VertexId};
use crate::iso::{arrow_transport, quiver_isomorphic};
use crate::path::{word_endpoints, Path, PathSum};
use crate::potential::{Potential, PotentialError, Qp};
use crate::quiver::{fresh_id, Arrow, Quiver, QuiverError};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("weights must be positive, got {0:?}")]
    BadWeights(Vec<u32>),
    #[error("at least one weight is required")]
    NoWeights,
    #[error("lambda must satisfy lambda not in {{0, 1}}, got {0}")]
    DegenerateLambda(Scalar),
    #[error("expected {expected} extra parameters for the points beyond the third, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("points {0} and {1} of the projective line coincide")]
    RepeatedPoint(usize, usize),
    #[error("relation {0}: {1}")]
    BadRelation(String, String),
    #[error("duplicate relation name {0}")]
    DuplicateRelation(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightClass {
    Domestic,
    Tubular,
    Wild,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightData {
    pub weights: Vec<u32>,
    pub lcm: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub genus: BigRational,
    pub class: WeightClass,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Genus `1 + ((t-2)p - sum p/p_i)/2` with `p = lcm`. Weights equal to 1
/// are accepted; they do not change the genus.
pub fn genus_and_type(weights: &[u32]) -> Result<WeightData, ConstructionError> {
    if weights.contains(&0) {
        return Err(ConstructionError::BadWeights(weights.to_vec()));
    }
    let p: u64 = weights.iter().fold(1u64, |acc, &w| acc.lcm(&(w as u64)));
    let t = weights.len() as i64;
    let sum: i64 = weights.iter().map(|&w| (p / w as u64) as i64).sum();
    let twice = BigInt::from((t - 2) * p as i64 - sum);
    let genus = BigRational::one() + BigRational::new(twice, BigInt::from(2));
    let class = if genus < BigRational::one() {
        WeightClass::Domestic
    } else if genus.is_one() {
        WeightClass::Tubular
    } else {
        WeightClass::Wild
    };
    Ok(WeightData { weights: weights.to_vec(), lcm: p, genus, class })
}

pub fn tube_vertex(i: usize, j: u32) -> VertexId {
    VertexId::new(format!("S{}^[{}]", i, j))
}

/// A point `[a:b]` of the projective line.
type Point = (Scalar, Scalar);

fn distinct_points(points: &[Point]) -> Result<(), ConstructionError> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (a, b) = &points[i];
            let (c, d) = &points[j];
            if (&(a * d) - &(b * c)).is_zero() {
                return Err(ConstructionError::RepeatedPoint(i + 1, j + 1));
            }
        }
    }
    Ok(())
}

/// The squid quiver with Keller's potential for the relations
/// `gamma_i (b_i u - a_i v)`, where the `i`-th point is `[a_i : b_i]` with
/// `[1:0], [0:1], [1:1]` for the first three and `[lambda_i : 1]` after.
pub fn squid_qp(weights: &[u32], extra: &[Scalar]) -> Result<Qp, ConstructionError> {
    if weights.is_empty() {
        return Err(ConstructionError::NoWeights);
    }
    if weights.contains(&0) {
        return Err(ConstructionError::BadWeights(weights.to_vec()));
    }
    let t = weights.len();
    let need = t.saturating_sub(3);
    if extra.len() != need {
        return Err(ConstructionError::ParameterCount { expected: need, got: extra.len() });
    }
    let mut points: Vec<Point> = vec![(Scalar::one(), Scalar::zero()), (Scalar::zero(), Scalar::one()), (Scalar::one(), Scalar::one())];
    points.truncate(t);
    points.extend(extra.iter().map(|l| (l.clone(), Scalar::one())));
    distinct_points(&points)?;

    let o = VertexId::new("O");
    let oc = VertexId::new("O(c)");
    let mut vertices = vec![o.clone(), oc.clone()];
    let mut arrows = vec![Arrow::new("u", o.clone(), oc.clone()), Arrow::new("v", o.clone(), oc.clone())];
    let mut terms: Vec<(Scalar, Vec<ArrowId>)> = Vec::new();
    for (idx, &p) in weights.iter().enumerate() {
        let i = idx + 1;
        if p < 2 {
            continue;
        }
        for j in 1..p {
            vertices.push(tube_vertex(i, j));
        }
        let top = tube_vertex(i, p - 1);
        let gamma = ArrowId::new(format!("gamma{}", i));
        let rho = ArrowId::new(format!("rho{}", i));
        arrows.push(Arrow { id: gamma.clone(), src: oc.clone(), tgt: top.clone() });
        for j in (2..p).rev() {
            arrows.push(Arrow::new(format!("s{}_{}", i, j), tube_vertex(i, j), tube_vertex(i, j - 1)));
        }
        arrows.push(Arrow { id: rho.clone(), src: top.clone(), tgt: o.clone() });
        let (a, b) = &points[idx];
        terms.push((b.clone(), vec![gamma.clone(), ArrowId::new("u"), rho.clone()]));
        terms.push((-a, vec![gamma, ArrowId::new("v"), rho]));
    }
    let q = Quiver::new(vertices, arrows)?;
    let w = crate::potential::cyclic_normal_form(&terms, &q)?;
    Ok(Qp::new(q, w)?)
}

/// Vertices `O, O(c)` and the top `S_i^[p_i - 1]` of every tube.
pub fn tube_tops(weights: &[u32]) -> HashSet<VertexId> {
    let mut s: HashSet<VertexId> = [VertexId::new("O"), VertexId::new("O(c)")].into_iter().collect();
    for (idx, &p) in weights.iter().enumerate() {
        if p >= 2 {
            s.insert(tube_vertex(idx + 1, p - 1));
        }
    }
    s
}

/// The quiver on `1..5` with `x1, x2: 1 -> 2`, `a_i: 2 -> i`, `b_i: i -> 1`.
pub fn five_vertex_quiver() -> Quiver {
    Quiver::from_lists(
        &["1", "2", "3", "4", "5"],
        &[
            ("x1", "1", "2"),
            ("x2", "1", "2"),
            ("a3", "2", "3"),
            ("a4", "2", "4"),
            ("a5", "2", "5"),
            ("b3", "3", "1"),
            ("b4", "4", "1"),
            ("b5", "5", "1"),
        ],
    )
    .unwrap()
}

/// [`five_vertex_quiver`] with the restriction of the squid potential.
pub fn five_vertex_qp() -> Qp {
    Qp::parse(five_vertex_quiver(), "-a3*x2*b3 + a4*x1*b4 + a5*x1*b5 - a5*x2*b5").unwrap()
}

fn reject_degenerate(lambda: &Scalar) -> Result<(), ConstructionError> {
    if lambda.is_zero() || lambda.is_one() {
        return Err(ConstructionError::DegenerateLambda(lambda.clone()));
    }
    Ok(())
}

pub fn q2222_quiver() -> Quiver {
    Quiver::from_lists(
        &["1", "2", "3", "4", "5", "6"],
        &[
            ("a", "2", "1"),
            ("b", "3", "2"),
            ("c", "1", "3"),
            ("d", "5", "1"),
            ("e", "2", "4"),
            ("f", "6", "2"),
            ("g", "3", "5"),
            ("h", "4", "3"),
            ("i", "1", "6"),
            ("j", "5", "4"),
            ("k", "6", "5"),
            ("l", "4", "6"),
        ],
    )
    .unwrap()
}

fn words(spec: &[(i64, &str)]) -> Vec<(Scalar, Vec<ArrowId>)> {
    spec.iter().map(|(c, w)| (Scalar::from_int(*c), w.chars().map(|ch| ArrowId::new(ch.to_string())).collect())).collect()
}

/// `W = L abc - dgc + dki - afi + jgh - ebh + efl - jkl` on the quiver of
/// weight type (2,2,2,2).
pub fn q2222_qp(lambda: &Scalar) -> Result<Qp, ConstructionError> {
    reject_degenerate(lambda)?;
    let q = q2222_quiver();
    let mut terms = words(&[(1, "abc"), (-1, "dgc"), (1, "dki"), (-1, "afi"), (1, "jgh"), (-1, "ebh"), (1, "efl"), (-1, "jkl")]);
    terms[0].0 = lambda.clone();
    let w = crate::potential::cyclic_normal_form(&terms, &q)?;
    Ok(Qp::new(q, w)?)
}

/// A named relation: a combination of parallel paths of length at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub terms: PathSum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationJson", into = "PresentationJson")]
pub struct AlgebraPresentation {
    quiver: Quiver,
    relations: Vec<Relation>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coef: Scalar,
    path: Vec<ArrowId>,
}

#[derive(Serialize, Deserialize)]
struct RelationJson {
    name: String,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    quiver: Quiver,
    relations: Vec<RelationJson>,
}

impl TryFrom<PresentationJson> for AlgebraPresentation {
    type Error = ConstructionError;
    fn try_from(j: PresentationJson) -> Result<Self, Self::Error> {
        let relations = j
            .relations
            .into_iter()
            .map(|r| {
                let mut terms = PathSum::new();
                for t in r.terms {
                    terms.add_term(Path::Arrows(t.path), t.coef);
                }
                Relation { name: r.name, terms }
            })
            .collect();
        AlgebraPresentation::new(j.quiver, relations)
    }
}

impl From<AlgebraPresentation> for PresentationJson {
    fn from(p: AlgebraPresentation) -> Self {
        PresentationJson {
            quiver: p.quiver,
            relations: p
                .relations
                .into_iter()
                .map(|r| RelationJson {
                    name: r.name,
                    terms: r
                        .terms
                        .terms()
                        .map(|(path, c)| TermJson {
                            coef: c.clone(),
                            path: match path {
                                Path::Arrows(w) => w.clone(),
                                Path::Lazy(_) => Vec::new(),
                            },
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl AlgebraPresentation {
    pub fn new(quiver: Quiver, relations: Vec<Relation>) -> Result<Self, ConstructionError> {
        let mut names = HashSet::new();
        for r in &relations {
            if !names.insert(r.name.clone()) {
                return Err(ConstructionError::DuplicateRelation(r.name.clone()));
            }
            relation_endpoints(&quiver, r)?;
        }
        Ok(AlgebraPresentation { quiver, relations })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }
}

fn relation_endpoints(q: &Quiver, r: &Relation) -> Result<(VertexId, VertexId), ConstructionError> {
    let bad = |m: &str| ConstructionError::BadRelation(r.name.clone(), m.to_string());
    let mut ends: Option<(VertexId, VertexId)> = None;
    for (p, _) in r.terms.terms() {
        let Path::Arrows(w) = p else {
            return Err(bad("lazy path"));
        };
        if w.len() < 2 {
            return Err(bad("paths must have length at least 2"));
        }
        let e = word_endpoints(w, q).ok_or_else(|| bad("path does not compose"))?;
        match &ends {
            None => ends = Some(e),
            Some(prev) if *prev != e => return Err(bad("terms are not parallel")),
            _ => {}
        }
    }
    ends.ok_or_else(|| bad("empty relation"))
}

/// The algebra of weight type (2,2,2,2): commutativity-type relations
/// `dg - L ab, dk - af, jg - eb, ef - jk`.
pub fn tubular_algebra(lambda: &Scalar) -> Result<AlgebraPresentation, ConstructionError> {
    reject_degenerate(lambda)?;
    let full = q2222_quiver();
    let drop: HashSet<ArrowId> = ["c", "h", "i", "l"].iter().map(|s| ArrowId::new(s)).collect();
    let q = full.without_arrows(&drop);
    let rel = |name: &str, pos: &str, neg: &str, c: Scalar| {
        let mut terms = PathSum::new();
        terms.add_term(Path::Arrows(pos.chars().map(|x| ArrowId::new(x.to_string())).collect()), Scalar::one());
        terms.add_term(Path::Arrows(neg.chars().map(|x| ArrowId::new(x.to_string())).collect()), -c);
        Relation { name: name.to_string(), terms }
    };
    let relations = vec![
        rel("r1", "dg", "ab", lambda.clone()),
        rel("r2", "dk", "af", Scalar::one()),
        rel("r3", "jg", "eb", Scalar::one()),
        rel("r4", "ef", "jk", Scalar::one()),
    ];
    AlgebraPresentation::new(q, relations)
}

/// Keller's QP: one new arrow `rho_r: tgt(r) -> src(r)` per relation and
/// the potential `sum_r r rho_r`.
pub fn keller_qp(pres: &AlgebraPresentation) -> Result<Qp, ConstructionError> {
    let q = pres.quiver();
    let mut arrows = q.arrows().to_vec();
    let mut used: HashSet<ArrowId> = arrows.iter().map(|a| a.id.clone()).collect();
    let mut terms = Vec::new();
    for r in pres.relations() {
        let (s, t) = relation_endpoints(q, r)?;
        let rho = fresh_id(ArrowId::new(format!("rho_{}", r.name)), &used);
        used.insert(rho.clone());
        arrows.push(Arrow { id: rho.clone(), src: t, tgt: s });
        for (p, c) in r.terms.terms() {
            if let Path::Arrows(w) = p {
                let mut cyc = w.clone();
                cyc.push(rho.clone());
                terms.push((c.clone(), cyc));
            }
        }
    }
    let quiver = Quiver::new(q.vertices().to_vec(), arrows)?;
    let w = crate::potential::cyclic_normal_form(&terms, &quiver)?;
    Ok(Qp::new(quiver, w)?)
}

/// Outcome of comparing two QPs after transporting arrow names along a
/// quiver isomorphism, allowing each arrow in `scalable` to be rescaled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QpComparison {
    pub isomorphic: bool,
    pub equal: bool,
    pub arrow_map: BTreeMap<ArrowId, ArrowId>,
    /// Scalars `s` with `rho -> s * rho` applied before comparing.
    pub scalings: BTreeMap<ArrowId, Scalar>,
}

/// Compares `(Q1, W1)` with `(Q2, W2)`: finds the least vertex isomorphism,
/// renames arrows, solves for the rescaling of each arrow of `scalable`
/// from the first term containing it, and tests exact equality.
pub fn compare_qps(lhs: &Qp, rhs: &Qp, scalable: &[ArrowId]) -> QpComparison {
    let fail = QpComparison { isomorphic: false, equal: false, arrow_map: BTreeMap::new(), scalings: BTreeMap::new() };
    let Ok(Some(vmap)) = quiver_isomorphic(lhs.quiver(), rhs.quiver()) else {
        return fail;
    };
    let Some(amap) = arrow_transport(lhs.quiver(), rhs.quiver(), &vmap) else {
        return fail;
    };
    let moved = lhs.potential().rename_arrows(&amap);
    let mut scalings = BTreeMap::new();
    let mut scaled = moved.clone();
    let mut ok = true;
    for a in scalable {
        let Some(img) = amap.get(a) else { continue };
        // Each cycle is assumed to contain each scalable arrow at most once.
        let Some((w, c)) = scaled.terms().find(|(w, _)| w.contains(img)).map(|(w, c)| (w.clone(), c.clone())) else {
            continue;
        };
        let target = rhs.potential().coefficient(w.arrows());
        if target.is_zero() {
            ok = false;
            break;
        }
        let s = &target / &c;
        let mut next = Potential::zero();
        for (w, c) in scaled.terms() {
            let k = w.arrows().iter().filter(|x| *x == img).count();
            let mut f = Scalar::one();
            for _ in 0..k {
                f = &f * &s;
            }
            next.add_cycle(w.arrows(), c * &f);
        }
        scaled = next;
        scalings.insert(img.clone(), s);
    }
    let equal = ok && &scaled == rhs.potential();
    QpComparison { isomorphic: true, equal, arrow_map: amap, scalings }
}

/// The identity `(Q~_A, W_A) = (Q^(2,2,2,2), W_L)` up to arrow names and
/// rescaling of the added arrows.
pub fn keller_identity(lambda: &Scalar) -> Result<QpComparison, ConstructionError> {
    let pres = tubular_algebra(lambda)?;
    let lhs = keller_qp(&pres)?;
    let rhs = q2222_qp(lambda)?;
    let rhos: Vec<ArrowId> = pres.relations().iter().map(|r| ArrowId::new(format!("rho_{}", r.name))).collect();
    Ok(compare_qps(&lhs, &rhs, &rhos))
}

/// The six parameters `L, 1/L, 1-L, 1/(1-L), L/(L-1), (L-1)/L`.
pub fn lambda_orbit(lambda: &Scalar) -> Result<Vec<Scalar>, ConstructionError> {
    reject_degenerate(lambda)?;
    let one = Scalar::one();
    let l = lambda.clone();
    let lm1 = &l - &one;
    let om = &one - &l;
    Ok(vec![l.clone(), &one / &l, om.clone(), &one / &om, &l / &lm1, &lm1 / &l])
}

/// Quiver of the tilting object `T^(p1,p2,p3)`: vertices `O, O(c), O(x_i)`
/// and tube vertices `S_i^[j]`, `1 <= j <= p_i - 2`.
pub fn canonical_ct_quiver(p: [u32; 3]) -> Result<Quiver, ConstructionError> {
    if p.iter().any(|&x| x < 2) {
        return Err(ConstructionError::BadWeights(p.to_vec()));
    }
    let o = VertexId::new("O");
    let oc = VertexId::new("O(c)");
    let mut vertices = vec![o.clone(), oc.clone()];
    let ox: Vec<VertexId> = (1..=3).map(|i| VertexId::new(format!("O(x{})", i))).collect();
    vertices.extend(ox.iter().cloned());
    let mut arrows = vec![Arrow::new("z", oc.clone(), o.clone())];
    for (idx, &pi) in p.iter().enumerate() {
        let i = idx + 1;
        arrows.push(Arrow::new(format!("x{}", i), o.clone(), ox[idx].clone()));
        arrows.push(Arrow::new(format!("y{}", i), ox[idx].clone(), oc.clone()));
        if pi == 2 {
            continue;
        }
        for j in 1..=pi - 2 {
            vertices.push(tube_vertex(i, j));
        }
        let top = tube_vertex(i, pi - 2);
        arrows.push(Arrow::new(format!("g{}", i), oc.clone(), top.clone()));
        arrows.push(Arrow::new(format!("h{}", i), top, ox[idx].clone()));
        for j in (2..=pi - 2).rev() {
            arrows.push(Arrow::new(format!("s{}_{}", i, j), tube_vertex(i, j), tube_vertex(i, j - 1)));
        }
    }
    Ok(Quiver::new(vertices, arrows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::cyclic_derivative;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn genus_values() {
        let g = |w: &[u32]| genus_and_type(w).unwrap();
        assert_eq!(g(&[2, 3, 5]).genus, r(1, 2));
        assert_eq!(g(&[2, 3, 5]).class, WeightClass::Domestic);
        assert_eq!(g(&[2, 2, 2, 2]).class, WeightClass::Tubular);
        assert_eq!(g(&[2, 3, 7]).genus, r(3, 2));
        assert_eq!(g(&[2, 3, 7]).class, WeightClass::Wild);
        assert_eq!(g(&[2, 3, 5, 1, 1]).genus, r(1, 2));
        assert!(genus_and_type(&[2, 0]).is_err());
    }

    #[test]
    fn squid_counts() {
        let qp = squid_qp(&[2, 3, 4], &[]).unwrap();
        assert_eq!(qp.quiver().num_vertices(), 2 + 1 + 2 + 3);
        assert_eq!(qp.quiver().num_arrows(), 2 + 3 + 3 + 3);
        assert_eq!(qp.potential().len(), 4);
        let k = squid_qp(&[1], &[]).unwrap();
        assert_eq!(k.quiver().num_vertices(), 2);
        assert!(k.potential().is_zero());
        assert!(matches!(squid_qp(&[2, 2, 2, 2], &[Scalar::one()]), Err(ConstructionError::RepeatedPoint(3, 4))));
        assert!(squid_qp(&[2, 2, 2, 2], &[Scalar::from_int(2)]).is_ok());
    }

    #[test]
    fn squid_restricts_to_five_vertex_qp() {
        for w in [[2u32, 2, 2], [2, 3, 4], [3, 3, 3]] {
            let qp = squid_qp(&w, &[]).unwrap();
            let res = qp.restrict(&tube_tops(&w));
            let cmp = compare_qps(&res, &five_vertex_qp(), &[]);
            assert!(cmp.isomorphic && cmp.equal, "{:?}", w);
        }
    }

    #[test]
    fn q2222_shape_and_derivatives() {
        let l = Scalar::lambda();
        let qp = q2222_qp(&l).unwrap();
        assert_eq!((qp.quiver().num_vertices(), qp.quiver().num_arrows()), (6, 12));
        assert_eq!(qp.potential().len(), 8);
        assert!(qp.potential().terms().all(|(w, _)| w.len() == 3));
        let d = cyclic_derivative(qp.potential(), &ArrowId::new("c"), qp.quiver()).unwrap();
        let mut expect = PathSum::new();
        expect.add_term(Path::Arrows(vec![ArrowId::new("a"), ArrowId::new("b")]), l.clone());
        expect.add_term(Path::Arrows(vec![ArrowId::new("d"), ArrowId::new("g")]), Scalar::from_int(-1));
        assert_eq!(d, expect);
        assert!(q2222_qp(&Scalar::one()).is_err());
        assert!(q2222_qp(&Scalar::zero()).is_err());
    }

    #[test]
    fn keller_matches_q2222() {
        for l in [Scalar::lambda(), Scalar::from_int(2), Scalar::from_int(3), Scalar::from_int(-1)] {
            let cmp = keller_identity(&l).unwrap();
            assert!(cmp.isomorphic && cmp.equal, "{}", l);
            assert_eq!(cmp.scalings[&ArrowId::new("c")], Scalar::from_int(-1));
            assert_eq!(cmp.scalings[&ArrowId::new("i")], Scalar::one());
        }
    }

    #[test]
    fn tubular_algebra_relations() {
        let a = tubular_algebra(&Scalar::from_int(2)).unwrap();
        assert_eq!(a.relations().len(), 4);
        assert_eq!(a.quiver().num_arrows(), 8);
        let r1 = &a.relations()[0];
        assert_eq!(relation_endpoints(a.quiver(), r1).unwrap(), (VertexId::new("3"), VertexId::new("1")));
        let ab = Path::Arrows(vec![ArrowId::new("a"), ArrowId::new("b")]);
        let dg = Path::Arrows(vec![ArrowId::new("d"), ArrowId::new("g")]);
        assert_eq!((r1.terms.coefficient(&dg), r1.terms.coefficient(&ab)), (Scalar::one(), Scalar::from_int(-2)));
        let js = serde_json::to_string(&a).unwrap();
        let back: AlgebraPresentation = serde_json::from_str(&js).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn keller_of_small_presentations() {
        let q = Quiver::from_lists(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        let hered = AlgebraPresentation::new(q.clone(), vec![]).unwrap();
        assert_eq!(keller_qp(&hered).unwrap(), Qp::zero(q.clone()));
        let mut t = PathSum::new();
        t.add_term(Path::Arrows(vec![ArrowId::new("b"), ArrowId::new("a")]), Scalar::one());
        let p = AlgebraPresentation::new(q, vec![Relation { name: "r".into(), terms: t }]).unwrap();
        let k = keller_qp(&p).unwrap();
        assert_eq!(k.quiver().num_arrows(), 3);
        assert_eq!(k.potential().to_string(), "a*rho_r*b");
    }

    #[test]
    fn bad_relations() {
        let q = Quiver::from_lists(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")]).unwrap();
        let mut t = PathSum::new();
        t.add_term(Path::Arrows(vec![ArrowId::new("c")]), Scalar::one());
        assert!(AlgebraPresentation::new(q.clone(), vec![Relation { name: "r".into(), terms: t }]).is_err());
        let mut t = PathSum::new();
        t.add_term(Path::Arrows(vec![ArrowId::new("a"), ArrowId::new("b")]), Scalar::one());
        assert!(AlgebraPresentation::new(q, vec![Relation { name: "r".into(), terms: t }]).is_err());
    }

    #[test]
    fn ct_quiver_counts() {
        assert_eq!(canonical_ct_quiver([2, 2, 2]).unwrap().num_vertices(), 5);
        assert_eq!(canonical_ct_quiver([2, 3, 4]).unwrap().num_vertices(), 8);
        assert!(canonical_ct_quiver([1, 3, 4]).is_err());
    }

    #[test]
    fn orbit_has_six_elements_generically() {
        let o = lambda_orbit(&Scalar::lambda()).unwrap();
        let set: HashSet<String> = o.iter().map(|s| s.to_string()).collect();
        assert_eq!(set.len(), 6);
    }
}
