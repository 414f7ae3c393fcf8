use std::collections::HashMap;

use proptest::prelude::*;
use qpcat_core::iso::{canonical_form, quiver_isomorphic};
use qpcat_core::jacobian::truncated_quotient;
use qpcat_core::{ExchangeMatrix, Qp, Quiver, VertexId};

fn labels(n: usize) -> Vec<VertexId> {
    (1..=n).map(|i| VertexId::new(i.to_string())).collect()
}

/// Random 2-acyclic quiver on `1..=n` with multiplicities at most `m`.
fn quiver(max_n: usize, m: i64) -> impl Strategy<Value = Quiver> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(-m..=m, n * (n - 1) / 2).prop_map(move |upper| {
            let mut b = vec![vec![0i64; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let x = it.next().unwrap();
                    b[i][j] = x;
                    b[j][i] = -x;
                }
            }
            Quiver::from_exchange_matrix(&ExchangeMatrix(b), &labels(n)).unwrap()
        })
    })
}

fn count_paths(q: &Quiver) -> usize {
    let m = q.multiplicity_matrix();
    let order = q.topological_order().unwrap();
    // ending[v] = number of paths of length >= 1 ending at v.
    let mut ending = vec![0usize; m.len()];
    for &v in &order {
        for u in 0..m.len() {
            ending[v] += m[u][v] * (1 + ending[u]);
        }
    }
    ending.iter().sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mutation_is_an_involution(q in quiver(8, 3)) {
        for k in q.vertices() {
            let back = q.mutate(k).unwrap().mutate(k).unwrap();
            prop_assert!(quiver_isomorphic(&back, &q).unwrap().is_some());
            prop_assert_eq!(back.to_exchange_matrix(), q.to_exchange_matrix());
        }
    }

    #[test]
    fn mutation_matches_matrix_mutation(q in quiver(8, 3)) {
        for (i, k) in q.vertices().iter().enumerate() {
            prop_assert_eq!(q.mutate(k).unwrap().to_exchange_matrix(), q.to_exchange_matrix().mutate(i));
        }
    }

    #[test]
    fn isomorphism_survives_relabeling(q in quiver(7, 2), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut targets: Vec<VertexId> = q.vertices().iter().map(|v| VertexId::new(format!("v{}", v))).collect();
        targets.shuffle(&mut rng);
        let map: HashMap<VertexId, VertexId> = q.vertices().iter().cloned().zip(targets).collect();
        let r = q.relabel_vertices(&map).unwrap();
        let fwd = quiver_isomorphic(&q, &r).unwrap();
        prop_assert!(fwd.is_some());
        prop_assert!(quiver_isomorphic(&r, &q).unwrap().is_some());
        for (a, b) in fwd.unwrap() {
            prop_assert_eq!(q.arrows().iter().filter(|x| x.src == a).count(), r.arrows().iter().filter(|x| x.src == b).count());
        }
        prop_assert_eq!(canonical_form(&q).unwrap().0, canonical_form(&r).unwrap().0);
    }

    #[test]
    fn zero_potential_is_finite_iff_acyclic(q in quiver(5, 2)) {
        let tq = truncated_quotient(&Qp::zero(q.clone()), 7).unwrap();
        prop_assert_eq!(tq.total().is_some(), q.is_acyclic());
        if q.is_acyclic() {
            prop_assert_eq!(tq.total().unwrap(), q.num_vertices() + count_paths(&q));
        }
    }
}
