//! Shared fixtures for the integration tests: seeded generators, graph
//! relabeling and brute-force checks that do not reuse library internals.
#![allow(dead_code)]

use std::collections::BTreeMap;

use lclkit::graph::{Coloring, Edge, EdgeKind, StructuredGraph, VertexKind};
use lclkit::regtree::{enumerate_automata, TreeAutomaton};
use lclkit::sigma_pi::ComponentSpec;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Base seed, overridable with `LCLKIT_SEED`.
pub fn seed() -> u64 {
    std::env::var("LCLKIT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed().wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ stream)
}

pub fn corpus() -> Vec<TreeAutomaton> {
    enumerate_automata(2).expect("two-state corpus")
}

pub fn random_component(
    rng: &mut ChaCha8Rng,
    corpus: &[TreeAutomaton],
    max_depth: usize,
) -> ComponentSpec {
    let a0 = corpus.choose(rng).unwrap().clone();
    let a1 = corpus.choose(rng).unwrap().clone();
    ComponentSpec::new(a0, a1, rng.gen_range(0..=max_depth))
}

/// Random tree on `n` vertices with degree at most 3, unlabeled edges and a
/// mix of plain and auxiliary vertices.
pub fn random_plain_tree(rng: &mut ChaCha8Rng, n: usize) -> StructuredGraph {
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&u| degree[u] < 3).collect();
        let u = *open.choose(rng).unwrap();
        degree[u] += 1;
        degree[v] += 1;
        edges.push(Edge::unlabeled(format!("n{u:03}"), format!("n{v:03}")));
    }
    let vertices = (0..n).map(|v| {
        let kind = if rng.gen_bool(0.7) {
            VertexKind::Plain
        } else {
            VertexKind::Auxiliary
        };
        (format!("n{v:03}"), kind)
    });
    StructuredGraph::new(vertices.collect::<Vec<_>>(), edges).unwrap()
}

pub fn random_coloring(rng: &mut ChaCha8Rng, g: &StructuredGraph, k: u64) -> Coloring {
    g.ids()
        .iter()
        .map(|id| (id.clone(), rng.gen_range(0..k)))
        .collect()
}

/// Renames every vertex through a random bijection onto fresh ids.
pub fn relabel(
    rng: &mut ChaCha8Rng,
    g: &StructuredGraph,
    f: &Coloring,
) -> (StructuredGraph, Coloring, BTreeMap<String, String>) {
    let mut fresh: Vec<usize> = (0..g.len()).collect();
    fresh.shuffle(rng);
    let map: BTreeMap<String, String> = g
        .ids()
        .iter()
        .zip(&fresh)
        .map(|(id, &i)| (id.clone(), format!("q{i:04}")))
        .collect();
    let vertices: Vec<_> = g.vertices().map(|(id, k)| (map[id].clone(), k)).collect();
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| {
            let kind = match &e.kind {
                EdgeKind::ParentChild { parent, side } => EdgeKind::ParentChild {
                    parent: map[parent].clone(),
                    side: *side,
                },
                k => k.clone(),
            };
            Edge::new(map[&e.a].clone(), map[&e.b].clone(), kind)
        })
        .collect();
    let h = StructuredGraph::new(vertices, edges).unwrap();
    let f2 = f.entries().map(|(id, c)| (map[id].clone(), c)).collect();
    (h, f2, map)
}

fn edge_table(g: &StructuredGraph) -> BTreeMap<(usize, usize), EdgeKind> {
    g.edges()
        .iter()
        .flat_map(|e| {
            let a = g.index_of(&e.a).unwrap();
            let b = g.index_of(&e.b).unwrap();
            [((a, b), e.kind.clone()), ((b, a), e.kind.clone())]
        })
        .collect()
}

/// Exhaustive search for a root-preserving bijection that preserves vertex
/// kinds, colors, adjacency and edge labels (including parent orientation).
pub fn brute_force_isomorphic(
    g1: &StructuredGraph,
    f1: &Coloring,
    r1: &str,
    g2: &StructuredGraph,
    f2: &Coloring,
    r2: &str,
) -> bool {
    let n = g1.len();
    if n != g2.len() || g1.edges().len() != g2.edges().len() {
        return false;
    }
    let e1 = edge_table(g1);
    let e2 = edge_table(g2);
    let root1 = g1.index_of(r1).unwrap();
    let root2 = g2.index_of(r2).unwrap();
    let label = |g: &StructuredGraph, f: &Coloring, v: usize| (g.kind(v), f.get(g.id(v)));
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn same_edge(
        k1: Option<&EdgeKind>,
        k2: Option<&EdgeKind>,
        g1: &StructuredGraph,
        g2: &StructuredGraph,
        phi: &[usize],
    ) -> bool {
        match (k1, k2) {
            (None, None) => true,
            (Some(EdgeKind::AnchorRoot), Some(EdgeKind::AnchorRoot)) => true,
            (Some(EdgeKind::Unlabeled), Some(EdgeKind::Unlabeled)) => true,
            (
                Some(EdgeKind::ParentChild {
                    parent: p1,
                    side: s1,
                }),
                Some(EdgeKind::ParentChild {
                    parent: p2,
                    side: s2,
                }),
            ) => s1 == s2 && phi[g1.index_of(p1).unwrap()] == g2.index_of(p2).unwrap(),
            _ => false,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        v: usize,
        order: &[usize],
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(usize, usize, &[usize]) -> bool,
        n: usize,
    ) -> bool {
        if v == order.len() {
            return true;
        }
        let x = order[v];
        if phi[x] != usize::MAX {
            return extend(v + 1, order, phi, used, ok, n);
        }
        for y in 0..n {
            if used[y] {
                continue;
            }
            phi[x] = y;
            if ok(x, y, phi) {
                used[y] = true;
                if extend(v + 1, order, phi, used, ok, n) {
                    return true;
                }
                used[y] = false;
            }
            phi[x] = usize::MAX;
        }
        false
    }

    if label(g1, f1, root1) != label(g2, f2, root2) {
        return false;
    }
    phi[root1] = root2;
    used[root2] = true;
    let ok = |x: usize, y: usize, phi: &[usize]| -> bool {
        if label(g1, f1, x) != label(g2, f2, y) {
            return false;
        }
        (0..n)
            .filter(|&u| phi[u] != usize::MAX)
            .all(|u| same_edge(e1.get(&(x, u)), e2.get(&(y, phi[u])), g1, g2, phi))
    };
    if !ok(root1, root2, &phi) {
        return false;
    }
    let order: Vec<usize> = (0..n).collect();
    extend(0, &order, &mut phi, &mut used, &ok, n)
}

/// Orders of `v` computed straight from the definition: walk away through
/// each neighbor while the current vertex has degree 2, stop at degree 1.
pub fn orders_by_walking(g: &StructuredGraph, v: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for &(first, _) in g.neighbors(v) {
        let (mut prev, mut cur, mut len) = (v, first, 1);
        loop {
            match g.degree(cur) {
                1 => {
                    out.push(len);
                    break;
                }
                2 => {
                    let next = g
                        .neighbors(cur)
                        .iter()
                        .map(|&(w, _)| w)
                        .find(|&w| w != prev)
                        .unwrap();
                    if next == v {
                        break;
                    }
                    prev = cur;
                    cur = next;
                    len += 1;
                }
                _ => break,
            }
        }
    }
    out.sort();
    out
}
