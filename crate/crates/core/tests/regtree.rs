mod common;

use lclkit::regtree::{branch_prefix, decide_f, truncate, Bits, FDecision, TreeAutomaton};

/// All bit strings of length exactly `n`, in lexicographic order.
fn strings(n: usize) -> Vec<Bits> {
    (0..1u32 << n)
        .map(|m| Bits((0..n).rev().map(|i| ((m >> i) & 1) as u8).collect()))
        .collect()
}

/// True if reading `cycle` after `stem` returns the automaton to the state it
/// was in after `stem`, i.e. the pair is a lasso of the automaton graph.
fn is_lasso(a: &TreeAutomaton, stem: &Bits, cycle: &Bits) -> bool {
    let Some(q) = a.run(stem.iter()) else {
        return false;
    };
    a.run(stem.iter().chain(cycle.iter())) == Some(q)
}

/// Least lasso whose cycle reads a 1, ordered by stem length, cycle length,
/// then the bits themselves, found by enumerating every path up to `bound` bits.
fn brute_force_lasso(a: &TreeAutomaton, bound: usize) -> Option<(Bits, Bits)> {
    for s in 0..=bound {
        for c in 1..=bound {
            for stem in strings(s) {
                for cycle in strings(c) {
                    if cycle.contains_one() && is_lasso(a, &stem, &cycle) {
                        return Some((stem, cycle));
                    }
                }
            }
        }
    }
    None
}

#[test]
fn decide_f_matches_brute_force_lasso_search() {
    for a in common::corpus() {
        let n = a.state_count();
        let bound = 2 * n * n;
        let brute = brute_force_lasso(&a, bound);
        match decide_f(&a) {
            FDecision::InF => assert_eq!(brute, None, "{}", a.to_json()),
            FDecision::NotInF(w) => {
                assert!(w.cycle.contains_one());
                assert!(is_lasso(&a, &w.stem, &w.cycle));
                assert!(w.is_valid_for(&a));
                assert_eq!(
                    brute,
                    Some((w.stem.clone(), w.cycle.clone())),
                    "{}",
                    a.to_json()
                );
            }
        }
    }
}

#[test]
fn witness_prefixes_are_members() {
    for a in common::corpus() {
        if let FDecision::NotInF(w) = decide_f(&a) {
            for n in 0..=16 {
                assert!(a.membership(&branch_prefix(&w, n)));
            }
        }
    }
}

#[test]
fn truncation_counts_match_enumeration() {
    for a in common::corpus() {
        for d in 0..=8 {
            let expected: usize = (0..=d)
                .map(|n| strings(n).iter().filter(|s| a.membership(s)).count())
                .sum();
            assert_eq!(truncate(&a, d).len(), expected);
            assert_eq!(a.words_up_to(d).len(), expected);
        }
    }
}

#[test]
fn corpus_is_pruned_and_deduplicated() {
    let corpus = common::corpus();
    for a in &corpus {
        a.validate_pruned().unwrap();
        assert_eq!(a.canonical().to_json(), a.to_json());
    }
    let mut keys: Vec<String> = corpus.iter().map(|a| a.to_json()).collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), corpus.len());
}

#[test]
fn json_round_trip() {
    for a in common::corpus() {
        let b = TreeAutomaton::parse_pruned(&a.to_json()).unwrap();
        assert_eq!(b.to_json(), a.to_json());
    }
}

#[test]
fn truncations_are_structured_trees() {
    for a in common::corpus() {
        let g = truncate(&a, 6);
        g.validate_structured().unwrap();
    }
}
