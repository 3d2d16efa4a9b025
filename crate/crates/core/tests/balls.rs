mod common;

use lclkit::ball::{ball, ball_members, canonical_type};
use lclkit::sigma_pi::build_component;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_members_match_bfs_distances(seed in any::<u64>(), n in 1usize..40, r in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_plain_tree(&mut rng, n);
        let x = rand::Rng::gen_range(&mut rng, 0..n);
        let dist = g.distances_from(x);
        let expected: Vec<usize> = (0..n).filter(|&v| dist[v].is_some_and(|d| d <= r)).collect();
        prop_assert_eq!(ball_members(&g, x, r), expected);
    }

    #[test]
    fn encoding_ignores_vertex_names(seed in any::<u64>(), n in 1usize..30, r in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_plain_tree(&mut rng, n);
        let f = common::random_coloring(&mut rng, &g, 3);
        let x = g.ids().choose(&mut rng).unwrap().clone();
        let t = canonical_type(&ball(&g, &f, &x, r).unwrap()).unwrap();
        let (h, f2, map) = common::relabel(&mut rng, &g, &f);
        let t2 = canonical_type(&ball(&h, &f2, &map[&x], r).unwrap()).unwrap();
        prop_assert_eq!(t.encoding_str(), t2.encoding_str());
    }

    #[test]
    fn recoloring_the_center_changes_the_type(seed in any::<u64>(), n in 1usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_plain_tree(&mut rng, n);
        let mut f = common::random_coloring(&mut rng, &g, 2);
        let x = g.ids()[0].clone();
        let before = canonical_type(&ball(&g, &f, &x, 2).unwrap()).unwrap();
        f.set(x.clone(), f.get(&x) + 1);
        let after = canonical_type(&ball(&g, &f, &x, 2).unwrap()).unwrap();
        prop_assert_ne!(before, after);
    }
}

#[test]
fn structured_balls_agree_with_brute_force() {
    let corpus = common::corpus();
    let mut rng = common::rng(101);
    let mut pool = Vec::new();
    for _ in 0..60 {
        let spec = common::random_component(&mut rng, &corpus, 3);
        let g = build_component(&spec);
        let f = common::random_coloring(&mut rng, &g, 2);
        let x = g.ids().choose(&mut rng).unwrap().clone();
        let b = ball(&g, &f, &x, 2).unwrap();
        if b.graph.len() <= 10 {
            let t = canonical_type(&b).unwrap();
            pool.push((b, t));
        }
    }
    assert!(pool.len() > 20);
    for (b1, t1) in &pool {
        for (b2, t2) in &pool {
            let iso = common::brute_force_isomorphic(
                &b1.graph, &b1.colors, &b1.root, &b2.graph, &b2.colors, &b2.root,
            );
            assert_eq!(
                iso,
                t1 == t2,
                "{} vs {}",
                t1.encoding_str(),
                t2.encoding_str()
            );
        }
    }
}

#[test]
fn encodings_are_stable_across_calls() {
    let mut rng = common::rng(102);
    let g = common::random_plain_tree(&mut rng, 25);
    let f = common::random_coloring(&mut rng, &g, 4);
    for x in g.ids() {
        let a = canonical_type(&ball(&g, &f, x, 3).unwrap()).unwrap();
        let b = canonical_type(&ball(&g, &f, x, 3).unwrap()).unwrap();
        assert_eq!(a.encoding, b.encoding);
    }
}
