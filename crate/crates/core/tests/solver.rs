mod common;

use lclkit::lcl::{proper_coloring, verify, CheckMode, LocalProblem};
use lclkit::regtree::{truncate, TreeAutomaton};
use lclkit::sigma_pi::{interior_vertices, sigma_problem};
use lclkit::solver::{exhaustive_oracle, solve_finite_palette, SolveOutcome};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A radius-1 problem: color below `k`, and differs from at least
/// `need` neighbors.
fn differs_from(need: usize) -> LocalProblem {
    LocalProblem::new(format!("differs-{need}"), 1, move |t| {
        let c = t.root.color;
        t.root.neighbors().filter(|n| n.color != c).count() >= need.min(t.root.children.len())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_agrees_with_oracle_on_small_trees(seed in any::<u64>(), n in 1usize..9, k in 1u64..4, need in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_plain_tree(&mut rng, n);
        for p in [proper_coloring(k), differs_from(need)] {
            let solved = solve_finite_palette(&g, &p, k, &CheckMode::Strict).unwrap();
            let oracle = exhaustive_oracle(&g, &p, k, &CheckMode::Strict).unwrap();
            prop_assert_eq!(solved.is_sat(), oracle.is_sat());
            if let SolveOutcome::Sat(f) = solved {
                prop_assert!(verify(&g, &f, &p, &CheckMode::Strict).unwrap().ok);
            }
        }
    }

    #[test]
    fn lenient_subsets_only_help(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_plain_tree(&mut rng, n);
        let keep: Vec<String> = g.ids().iter().filter(|_| rand::Rng::gen_bool(&mut rng, 0.5)).cloned().collect();
        let p = proper_coloring(2);
        let strict = solve_finite_palette(&g, &p, 2, &CheckMode::Strict).unwrap().is_sat();
        let lenient = solve_finite_palette(&g, &p, 2, &CheckMode::lenient(keep)).unwrap().is_sat();
        prop_assert!(!strict || lenient);
    }
}

#[test]
fn sigma_is_monotone_in_the_palette() {
    for d in 0..=4 {
        let g = truncate(&TreeAutomaton::zero_only(), d);
        let mode = interior_vertices(&g, d);
        let sats: Vec<bool> = (1..=7)
            .map(|k| {
                solve_finite_palette(&g, &sigma_problem(), k, &mode)
                    .unwrap()
                    .is_sat()
            })
            .collect();
        assert!(
            sats.windows(2).all(|w| !w[0] || w[1]),
            "depth {d}: {sats:?}"
        );
    }
}

#[test]
fn solver_witness_matches_chronological_search() {
    // The first witness in (id, ascending color) order for proper 3-coloring
    // of a path is the greedy 0,1,0,1,...
    let mut rng = common::rng(7);
    let g = common::random_plain_tree(&mut rng, 1);
    assert_eq!(
        solve_finite_palette(&g, &proper_coloring(3), 3, &CheckMode::Strict).unwrap(),
        SolveOutcome::Sat(Default::default())
    );
    let path = truncate(&TreeAutomaton::zero_only(), 5);
    let SolveOutcome::Sat(f) =
        solve_finite_palette(&path, &proper_coloring(3), 3, &CheckMode::Strict).unwrap()
    else {
        panic!("paths are 2-colorable");
    };
    let colors: Vec<u64> = path.ids().iter().map(|id| f.get(id)).collect();
    assert_eq!(colors, vec![0, 1, 0, 1, 0, 1]);
}

#[test]
fn full_binary_sigma_is_two_colorable_leniently() {
    let a = TreeAutomaton::full_binary();
    for d in 0..=3 {
        let g = truncate(&a, d);
        let lenient = interior_vertices(&g, d);
        assert!(solve_finite_palette(&g, &sigma_problem(), 2, &lenient)
            .unwrap()
            .is_sat());
    }
}
