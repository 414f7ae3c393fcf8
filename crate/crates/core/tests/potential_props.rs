use std::collections::HashSet;

use proptest::prelude::*;
use qpcat_core::constructions::{five_vertex_qp, q2222_qp, squid_qp};
use qpcat_core::iso::quiver_isomorphic;
use qpcat_core::jacobian::{truncated_quotient, truncated_quotient_with, JacobianOptions};
use qpcat_core::path::{Path, PathSum};
use qpcat_core::potential::{cyclic_derivative, cyclic_derivative_of_word, cyclic_normal_form};
use qpcat_core::qp_mutation::qp_mutate;
use qpcat_core::{ArrowId, Potential, Qp, Quiver, Scalar, Substitution, VertexId};

fn a(s: &str) -> ArrowId {
    ArrowId::new(s)
}

fn coef() -> impl Strategy<Value = Scalar> {
    (-5i64..=5, 1i64..=4).prop_filter_map("nonzero", |(n, d)| (n != 0).then(|| Scalar::from_ratio(n, d)))
}

/// The cycles of the given QP with fresh nonzero coefficients.
fn recoefficient(qp: &Qp, cs: &[Scalar]) -> Qp {
    let terms: Vec<(Scalar, Vec<ArrowId>)> = qp.potential().terms().zip(cs.iter().cycle()).map(|((w, _), c)| (c.clone(), w.arrows().to_vec())).collect();
    let w = cyclic_normal_form(&terms, qp.quiver()).unwrap();
    Qp::new(qp.quiver().clone(), w).unwrap()
}

fn samples() -> Vec<Qp> {
    vec![q2222_qp(&Scalar::from_int(2)).unwrap(), five_vertex_qp(), squid_qp(&[2, 3, 4], &[]).unwrap()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_ignores_rotation(shifts in proptest::collection::vec(0usize..3, 8), cs in proptest::collection::vec(coef(), 8)) {
        let qp = q2222_qp(&Scalar::from_int(3)).unwrap();
        let words: Vec<Vec<ArrowId>> = qp.potential().terms().map(|(w, _)| w.arrows().to_vec()).collect();
        let plain: Vec<(Scalar, Vec<ArrowId>)> = words.iter().zip(&cs).map(|(w, c)| (c.clone(), w.clone())).collect();
        let rotated: Vec<(Scalar, Vec<ArrowId>)> = words
            .iter()
            .zip(&cs)
            .zip(&shifts)
            .map(|((w, c), &s)| {
                let mut r = w.clone();
                let len = r.len();
                r.rotate_left(s % len);
                (c.clone(), r)
            })
            .collect();
        let w1 = cyclic_normal_form(&plain, qp.quiver()).unwrap();
        let w2 = cyclic_normal_form(&rotated, qp.quiver()).unwrap();
        prop_assert_eq!(&w1, &w2);
        for arr in qp.quiver().arrows() {
            let mut expect = PathSum::new();
            for (c, w) in &rotated {
                expect.add_scaled(&cyclic_derivative_of_word(w, &arr.id, qp.quiver()), c);
            }
            prop_assert_eq!(cyclic_derivative(&w1, &arr.id, qp.quiver()).unwrap(), expect);
        }
    }

    #[test]
    fn dims_do_not_depend_on_generator_order(which in 0usize..3, cs in proptest::collection::vec(coef(), 8), perm in Just(()).prop_perturb(|_, mut rng| rng.next_u64())) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let qp = recoefficient(&samples()[which], &cs);
        let mut order: Vec<usize> = (0..qp.quiver().num_arrows()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm));
        let base = truncated_quotient(&qp, 6).unwrap();
        let opts = JacobianOptions { generator_order: Some(order), ..Default::default() };
        let other = truncated_quotient_with(&qp, 6, &opts).unwrap();
        prop_assert_eq!(base, other);
    }

    #[test]
    fn double_qp_mutation_restores_quiver(cs in proptest::collection::vec(coef(), 8), k in 1usize..=6) {
        let qp = recoefficient(&q2222_qp(&Scalar::from_int(2)).unwrap(), &cs);
        let k = VertexId::new(k.to_string());
        let once = qp_mutate(&qp, &k, 12).unwrap();
        if once.two_acyclic {
            let twice = qp_mutate(&once.qp, &k, 12).unwrap();
            prop_assert!(quiver_isomorphic(twice.qp.quiver(), qp.quiver()).unwrap().is_some());
        }
    }

    #[test]
    fn restriction_composes(which in 0usize..3, mask1 in any::<u32>(), mask2 in any::<u32>()) {
        let qp = &samples()[which];
        let vs = qp.quiver().vertices();
        let pick = |m: u32| -> HashSet<VertexId> { vs.iter().enumerate().filter(|(i, _)| m >> (i % 32) & 1 == 1).map(|(_, v)| v.clone()).collect() };
        let i = pick(mask1);
        let j: HashSet<VertexId> = pick(mask2).intersection(&i).cloned().collect();
        prop_assert_eq!(qp.restrict(&i).restrict(&j), qp.restrict(&j));
        let all: HashSet<VertexId> = vs.iter().cloned().collect();
        prop_assert_eq!(&qp.restrict(&all), qp);
    }

    #[test]
    fn substitution_composition(x in coef(), y in coef(), z in coef(), cs in proptest::collection::vec(coef(), 4)) {
        let q = Quiver::from_lists(&["1", "2", "3"], &[("a", "1", "2"), ("c", "2", "1"), ("g", "1", "3"), ("d", "3", "2")]).unwrap();
        let mut w = Potential::zero();
        for (c, word) in cs.iter().zip([vec![a("c"), a("a")], vec![a("c"), a("d"), a("g")], vec![a("c"), a("a"), a("c"), a("a")], vec![a("c"), a("d"), a("g"), a("c"), a("a")]]) {
            w.add_cycle(&word, c.clone());
        }
        let mut p1 = Substitution::identity(12);
        let mut img = PathSum::arrow(&a("a"));
        img.add_term(Path::Arrows(vec![a("d"), a("g")]), x);
        img.add_term(Path::Arrows(vec![a("a"), a("c"), a("a")]), y);
        p1.set(a("a"), img);
        let mut p2 = Substitution::identity(12);
        let mut img = PathSum::arrow(&a("c"));
        img.add_term(Path::Arrows(vec![a("c"), a("d"), a("g"), a("c")]), z);
        p2.set(a("c"), img);
        p1.validate(&q).unwrap();
        p2.validate(&q).unwrap();
        prop_assert_eq!(p2.apply(&p1.apply(&w)).truncated(12), p2.after(&p1).apply(&w).truncated(12));
    }
}
