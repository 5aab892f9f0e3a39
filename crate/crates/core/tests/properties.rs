use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subpath_core::esa::{build_esa, naive_lcp, suffix, Builder};
use subpath_core::tree::{LevelAncestorIndex, RmqIndex};
use subpath_core::{
    parse_tree, predict_direct, serialize_tree, subpath_kernel, subpath_kernel_oracle, subpath_kernel_with, Alphabet,
    KernelParams, Label, MasterIndex, SupportSet, Tree,
};

/// Trees of up to `max` nodes over `sigma` labels, each node attached to a
/// uniformly chosen earlier node.
fn tree(max: usize, sigma: u32) -> impl Strategy<Value = Tree> {
    (1..=max)
        .prop_flat_map(move |n| {
            let parents: Vec<BoxedStrategy<Option<usize>>> = (0..n)
                .map(|v| {
                    if v == 0 {
                        Just(None).boxed()
                    } else {
                        (0..v).prop_map(Some).boxed()
                    }
                })
                .collect();
            (prop::collection::vec(0..sigma, n), parents)
        })
        .prop_map(|(labels, parents)| Tree::from_parents(labels.into_iter().map(Label).collect(), &parents).unwrap())
}

fn shuffled(t: &Tree, seed: u64) -> Tree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    t.reorder_children(|_, c| c.shuffle(&mut rng))
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * (1.0 + y.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialization_round_trips(t in tree(40, 6)) {
        let a = Alphabet::synthetic(6);
        let text = serialize_tree(&t, &a);
        let mut b = a.clone();
        let back = parse_tree(&text, &mut b).unwrap();
        prop_assert_eq!(serialize_tree(&back, &b), text);
        prop_assert_eq!(back.labels(), t.labels());
    }

    #[test]
    fn suffix_array_invariants(t in tree(120, 3)) {
        let linear = build_esa(&t, Builder::Linear);
        let reference = build_esa(&t, Builder::Reference);
        prop_assert_eq!(&linear, &reference);

        let n = t.len();
        let mut seen = vec![false; n];
        for r in 0..n {
            let v = linear.node_at(r);
            prop_assert!(!seen[v]);
            seen[v] = true;
            prop_assert_eq!(linear.rank_of(v), r);
            prop_assert_eq!(linear.suffix_len()[v] as usize, t.depth(v) + 1);
        }
        for r in 0..n - 1 {
            let (u, v) = (linear.node_at(r), linear.node_at(r + 1));
            let (su, sv) = (suffix(&t, u), suffix(&t, v));
            prop_assert!(su < sv || (su == sv && u < v));
            prop_assert_eq!(linear.lcp()[r] as usize, naive_lcp(&t, u, v));
        }
        prop_assert_eq!(linear.lcp()[n - 1], -1);
    }

    #[test]
    fn lcp_is_a_range_minimum(t in tree(80, 2), picks in prop::collection::vec((0usize..80, 0usize..80), 20)) {
        let esa = build_esa(&t, Builder::Linear);
        let rmq = RmqIndex::new(esa.lcp());
        let n = t.len();
        for (u, v) in picks {
            let (u, v) = (u % n, v % n);
            if u == v {
                continue;
            }
            let (x, y) = (esa.rank_of(u).min(esa.rank_of(v)), esa.rank_of(u).max(esa.rank_of(v)));
            prop_assert_eq!(rmq.query(x, y - 1).unwrap() as usize, naive_lcp(&t, u, v));
        }
    }

    #[test]
    fn level_ancestors_follow_parents(t in tree(100, 2)) {
        let la = LevelAncestorIndex::new(&t);
        for v in 0..t.len() {
            let mut u = v;
            for j in 0..=t.depth(v) {
                prop_assert_eq!(la.query(v, j).unwrap(), u);
                if let Some(p) = t.parent(u) {
                    u = p;
                }
            }
            prop_assert!(la.query(v, t.depth(v) + 1).is_err());
        }
    }

    #[test]
    fn kernel_matches_oracle_and_is_symmetric(a in tree(30, 3), b in tree(30, 3), lambda in 0.05f64..=1.0) {
        let p = KernelParams::new(lambda).unwrap();
        let k = subpath_kernel(&a, &b, p);
        prop_assert!(close(k, subpath_kernel_oracle(&a, &b, p)));
        prop_assert!(close(subpath_kernel(&b, &a, p), k));
        prop_assert!(close(subpath_kernel_with(&a, &b, p, Builder::Reference), k));
    }

    #[test]
    fn kernel_ignores_sibling_order(a in tree(50, 2), b in tree(50, 2), seed in any::<u64>()) {
        let p = KernelParams::new(0.7).unwrap();
        let k = subpath_kernel(&a, &b, p);
        prop_assert!(close(subpath_kernel(&shuffled(&a, seed), &shuffled(&b, seed ^ 1), p), k));
    }

    #[test]
    fn prediction_matches_direct_sum(
        trees in prop::collection::vec((tree(15, 3), -2.0f64..2.0), 1..8),
        bias in -1.0f64..1.0,
        t in tree(40, 3),
    ) {
        let p = KernelParams::new(0.5).unwrap();
        let sv = SupportSet::new(trees, bias).unwrap();
        let idx = MasterIndex::build(&sv, p);
        prop_assert!(close(idx.predict(&t), predict_direct(&sv, &t, p)));
    }
}
