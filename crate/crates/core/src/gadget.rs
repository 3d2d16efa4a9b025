//! Erasing structure by edge gadgets, recovering it from degrees and orders,
//! and the lifted problem Π* on the plain graph.
//!
//! Every edge `xy` of a structured graph becomes a path
//! `x – p1 – p2 – p3 – p4 – y` with a pendant path hanging off `p1` and a
//! two-vertex pendant hanging off `p4`. `x` is the anchor (anchor-root
//! edges) or the parent (parent-child edges). The pendant at `p1` has 3, 4 or
//! 5 vertices for anchor-root, left-child and right-child edges.
//!
//! A vertex has order `k` if a path of length `k` leaves it through vertices
//! of degree 2 and ends at a vertex of degree 1. In the encoded graph the
//! original vertices are exactly those whose neighbors all have degree 3,
//! `p1` has order 3/4/5 by gadget kind and `p4` has order 2.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ball::{BallNode, BallType};
use crate::graph::{Edge, EdgeKind, GraphError, Side, StructuredGraph, VertexId, VertexKind};
use crate::lcl::LocalProblem;

/// Radius of Π*. The colors Π* consults sit at distance 5 from an original
/// vertex, and telling a degree-2 original at distance 5 apart from the
/// two-vertex pendant next to it requires the degrees at distance 6.
pub const PI_STAR_RADIUS: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("graph cannot be encoded: {0}")]
    NotStructured(String),
    #[error("graph is not an encoded graph (at `{0}`)")]
    NotInImage(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetKind {
    /// Anchor to tree root.
    A,
    /// Parent to left child.
    B,
    /// Parent to right child.
    C,
}

impl GadgetKind {
    /// Vertices in the pendant path at `p1`, which is also the order of `p1`.
    pub fn pendant_len(self) -> usize {
        match self {
            GadgetKind::A => 3,
            GadgetKind::B => 4,
            GadgetKind::C => 5,
        }
    }

    pub fn from_pendant_len(len: usize) -> Option<GadgetKind> {
        match len {
            3 => Some(GadgetKind::A),
            4 => Some(GadgetKind::B),
            5 => Some(GadgetKind::C),
            _ => None,
        }
    }

    /// Auxiliary vertices per gadget: four on the main path plus both pendants.
    pub fn aux_count(self) -> usize {
        4 + self.pendant_len() + 2
    }
}

/// Order of the `p4` vertex, from its two-vertex pendant.
pub const CHILD_SIDE_ORDER: usize = 2;

/// Tree index recorded in a `t<i>/…` id; 0 for any other id.
pub fn tree_index_from_id(id: &str) -> u8 {
    match id.as_bytes() {
        [b't', b'1', b'/', ..] => 1,
        _ => 0,
    }
}

fn near_far(
    g: &StructuredGraph,
    e: &Edge,
) -> Result<(VertexId, VertexId, GadgetKind), GadgetError> {
    match &e.kind {
        EdgeKind::AnchorRoot => {
            let a_anchor = g.kind_of(&e.a) == Some(VertexKind::Anchor);
            let b_anchor = g.kind_of(&e.b) == Some(VertexKind::Anchor);
            match (a_anchor, b_anchor) {
                (true, false) => Ok((e.a.clone(), e.b.clone(), GadgetKind::A)),
                (false, true) => Ok((e.b.clone(), e.a.clone(), GadgetKind::A)),
                _ => Err(GadgetError::NotStructured(format!(
                    "anchor-root edge {}–{} needs exactly one anchor endpoint",
                    e.a, e.b
                ))),
            }
        }
        EdgeKind::ParentChild { side, .. } => Ok((
            e.a.clone(),
            e.b.clone(),
            match side {
                Side::Left => GadgetKind::B,
                Side::Right => GadgetKind::C,
            },
        )),
        EdgeKind::Unlabeled => Err(GadgetError::NotStructured(format!(
            "edge {}–{} carries no structure",
            e.a, e.b
        ))),
    }
}

fn check_encodable(g: &StructuredGraph) -> Result<(), GadgetError> {
    g.validate_structured()
        .map_err(|e| GadgetError::NotStructured(e.to_string()))?;
    for v in 0..g.len() {
        let id = g.id(v);
        match g.kind(v) {
            VertexKind::Anchor => {
                let has_root = g
                    .neighbors(v)
                    .iter()
                    .any(|(_, l)| *l == crate::graph::Link::AnchorRoot);
                if !has_root {
                    return Err(GadgetError::NotStructured(format!(
                        "anchor `{id}` has no anchor-root edge"
                    )));
                }
            }
            VertexKind::TreeVertex { tree, root } => {
                if root != g.parent(v).is_none() {
                    return Err(GadgetError::NotStructured(format!(
                        "root flag of `{id}` disagrees with its parent edges"
                    )));
                }
                if tree != tree_index_from_id(id) {
                    return Err(GadgetError::NotStructured(format!(
                        "tree index of `{id}` disagrees with its id"
                    )));
                }
            }
            VertexKind::Plain | VertexKind::Auxiliary => {
                return Err(GadgetError::NotStructured(format!(
                    "vertex `{id}` is neither an anchor nor a tree vertex"
                )))
            }
        }
    }
    Ok(())
}

/// Replaces every edge by its gadget. Original vertices keep their ids and
/// become `Plain`; auxiliary ids are `<near>~<far>#<position>`.
pub fn encode(g: &StructuredGraph) -> Result<StructuredGraph, GadgetError> {
    check_encodable(g)?;
    let mut vertices: Vec<(VertexId, VertexKind)> = g
        .ids()
        .iter()
        .map(|id| (id.clone(), VertexKind::Plain))
        .collect();
    let mut edges = Vec::new();
    for e in g.edges() {
        let (near, far, kind) = near_far(g, e)?;
        let base = format!("{near}~{far}");
        let aux = |tag: String| format!("{base}#{tag}");
        let main: Vec<VertexId> = (1..=4).map(|i| aux(format!("p{i}"))).collect();
        let pendant: Vec<VertexId> = (1..=kind.pendant_len())
            .map(|i| aux(format!("a{i}")))
            .collect();
        let tail: Vec<VertexId> = (1..=2).map(|i| aux(format!("b{i}"))).collect();
        for id in main.iter().chain(&pendant).chain(&tail) {
            vertices.push((id.clone(), VertexKind::Auxiliary));
        }
        let mut path = vec![near.clone()];
        path.extend(main.iter().cloned());
        path.push(far.clone());
        for pair in path.windows(2) {
            edges.push(Edge::unlabeled(pair[0].clone(), pair[1].clone()));
        }
        let mut hang = |at: &VertexId, chain: &[VertexId]| {
            let mut prev = at.clone();
            for id in chain {
                edges.push(Edge::unlabeled(prev, id.clone()));
                prev = id.clone();
            }
        };
        hang(&main[0], &pendant);
        hang(&main[3], &tail);
    }
    StructuredGraph::new(vertices, edges).map_err(|e| match e {
        GraphError::DuplicateVertex(id) => {
            GadgetError::NotStructured(format!("auxiliary id `{id}` collides with a vertex"))
        }
        other => GadgetError::NotStructured(other.to_string()),
    })
}

/// For every vertex, its orders with a certifying path `x1, …, xk` each.
pub type OrderSet = BTreeMap<VertexId, BTreeMap<usize, Vec<VertexId>>>;

/// Dense orders: for vertex `v`, `(order, path)` pairs, one per neighbor that
/// starts a degree-2 chain ending in a leaf.
fn dense_orders(g: &StructuredGraph) -> Vec<Vec<(usize, Vec<usize>)>> {
    (0..g.len())
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter_map(|&(start, _)| walk_to_leaf(g, v, start))
                .map(|path| (path.len(), path))
                .collect()
        })
        .collect()
}

fn walk_to_leaf(g: &StructuredGraph, from: usize, start: usize) -> Option<Vec<usize>> {
    let mut path = vec![start];
    let mut prev = from;
    let mut cur = start;
    loop {
        match g.degree(cur) {
            1 => return Some(path),
            2 => {
                let next = g
                    .neighbors(cur)
                    .iter()
                    .map(|&(w, _)| w)
                    .find(|&w| w != prev)?;
                if next == from || path.len() > g.len() {
                    return None;
                }
                prev = cur;
                cur = next;
                path.push(cur);
            }
            _ => return None,
        }
    }
}

pub fn vertex_orders(g: &StructuredGraph) -> OrderSet {
    dense_orders(g)
        .into_iter()
        .enumerate()
        .map(|(v, list)| {
            let orders = list
                .into_iter()
                .map(|(k, path)| (k, path.into_iter().map(|w| g.id(w).to_string()).collect()))
                .collect();
            (g.id(v).to_string(), orders)
        })
        .collect()
}

/// Vertices all of whose neighbors have degree 3.
pub fn original_vertices(g: &StructuredGraph) -> Vec<bool> {
    (0..g.len())
        .map(|v| g.neighbors(v).iter().all(|&(w, _)| g.degree(w) == 3))
        .collect()
}

struct FoundGadget {
    kind: GadgetKind,
    aux: Vec<usize>,
}

/// Recovers the structured graph from an encoded one using only degrees and
/// orders. Tree indices come from the `t<i>/` id convention.
pub fn decode(gs: &StructuredGraph) -> Result<StructuredGraph, GadgetError> {
    let bad = |v: usize| GadgetError::NotInImage(gs.id(v).to_string());
    if !gs.is_acyclic() {
        let v = (0..gs.len()).find(|&v| gs.degree(v) >= 2).unwrap_or(0);
        return Err(bad(v));
    }
    let original = original_vertices(gs);
    if !gs.is_empty() && !original.iter().any(|&o| o) {
        return Err(bad(0));
    }
    let orders = dense_orders(gs);
    // (pendant order, pendant start) of `v`, ignoring orders through `except`.
    let role = |v: usize, except: usize| -> Result<(usize, usize), GadgetError> {
        let mut found = orders[v]
            .iter()
            .filter(|(k, path)| (2..=5).contains(k) && path[0] != except);
        let (k, path) = found.next().ok_or_else(|| bad(v))?;
        if found.next().is_some() {
            return Err(bad(v));
        }
        Ok((*k, path[0]))
    };
    let other_neighbor = |v: usize, not: &[usize]| -> Result<usize, GadgetError> {
        let mut rest = gs
            .neighbors(v)
            .iter()
            .map(|&(w, _)| w)
            .filter(|w| !not.contains(w));
        let w = rest.next().ok_or_else(|| bad(v))?;
        if rest.next().is_some() {
            return Err(bad(v));
        }
        Ok(w)
    };

    let mut gadgets: BTreeMap<(usize, usize), FoundGadget> = BTreeMap::new();
    for x in (0..gs.len()).filter(|&x| original[x]) {
        for &(u, _) in gs.neighbors(x) {
            let (u_order, u_pendant) = role(u, x)?;
            let v = other_neighbor(u, &[x, u_pendant])?;
            if gs.degree(v) != 2 {
                return Err(bad(v));
            }
            let w = other_neighbor(v, &[u])?;
            if gs.degree(w) != 2 {
                return Err(bad(w));
            }
            let z = other_neighbor(w, &[v])?;
            if gs.degree(z) != 3 {
                return Err(bad(z));
            }
            let (z_order, z_pendant) = role(z, w)?;
            let y = other_neighbor(z, &[w, z_pendant])?;
            if !original[y] || y == x {
                return Err(bad(y));
            }
            let (near, far, p1, p1_pendant, p4, p4_pendant, kind_order) = match (u_order, z_order) {
                (CHILD_SIDE_ORDER, k) if k != CHILD_SIDE_ORDER => {
                    (y, x, z, z_pendant, u, u_pendant, k)
                }
                (k, CHILD_SIDE_ORDER) if k != CHILD_SIDE_ORDER => {
                    (x, y, u, u_pendant, z, z_pendant, k)
                }
                _ => return Err(bad(u)),
            };
            let kind = GadgetKind::from_pendant_len(kind_order).ok_or_else(|| bad(p1))?;
            let chain = |v: usize, start: usize| -> Vec<usize> {
                orders[v]
                    .iter()
                    .find(|(_, path)| path[0] == start)
                    .map(|(_, path)| path.clone())
                    .unwrap_or_default()
            };
            let mut aux = vec![u, v, w, z];
            aux.extend(chain(p1, p1_pendant));
            aux.extend(chain(p4, p4_pendant));
            match gadgets.get(&(near, far)) {
                Some(prev) if prev.kind != kind || prev.aux.len() != aux.len() => {
                    return Err(bad(near))
                }
                Some(_) => {}
                None => {
                    gadgets.insert((near, far), FoundGadget { kind, aux });
                }
            }
        }
    }

    let mut covered = original.clone();
    let mut edge_total = 0;
    for g in gadgets.values() {
        edge_total += g.kind.aux_count() + 1;
        for &a in &g.aux {
            if std::mem::replace(&mut covered[a], true) {
                return Err(bad(a));
            }
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(bad(v));
    }
    if edge_total != gs.edges().len() {
        return Err(bad(0));
    }

    let mut anchors = BTreeSet::new();
    let mut has_parent = BTreeSet::new();
    let mut edges = Vec::new();
    for (&(near, far), g) in &gadgets {
        let (a, b) = (gs.id(near).to_string(), gs.id(far).to_string());
        match g.kind {
            GadgetKind::A => {
                anchors.insert(near);
                edges.push(Edge::anchor_root(a, b));
            }
            GadgetKind::B => {
                has_parent.insert(far);
                edges.push(Edge::parent_child(a, b, Side::Left));
            }
            GadgetKind::C => {
                has_parent.insert(far);
                edges.push(Edge::parent_child(a, b, Side::Right));
            }
        }
    }
    let vertices = (0..gs.len()).filter(|&v| original[v]).map(|v| {
        let id = gs.id(v).to_string();
        let kind = if anchors.contains(&v) {
            VertexKind::Anchor
        } else {
            VertexKind::TreeVertex {
                tree: tree_index_from_id(&id),
                root: !has_parent.contains(&v),
            }
        };
        (id, kind)
    });
    StructuredGraph::new(vertices, edges).map_err(|e| match e {
        GraphError::DuplicateSide(id, _) | GraphError::TwoParents(id) => {
            GadgetError::NotInImage(id)
        }
        other => GadgetError::NotInImage(other.to_string()),
    })
}

/// What an original vertex sees of its structured neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NeighborRole {
    /// Gadget A with this vertex as the anchor.
    RootOfAnchor,
    Child(Side),
    /// This vertex is the far endpoint of the gadget.
    NearEndpoint,
}

struct LocalView {
    anchor: bool,
    neighbors: Vec<(NeighborRole, u64)>,
}

/// Length of the degree-2 chain starting at `start` (a non-root ball node)
/// if it ends in a leaf.
fn chain_to_leaf(start: &BallNode) -> Option<usize> {
    let mut len = 1;
    let mut cur = start;
    loop {
        match cur.degree(false) {
            1 => return Some(len),
            2 => {
                cur = &cur.children[0].1;
                len += 1;
            }
            _ => return None,
        }
    }
}

fn only_child(node: &BallNode, degree: usize) -> Option<&BallNode> {
    (node.degree(false) == degree && node.children.len() == 1).then(|| &node.children[0].1)
}

/// Parses the gadgets around the center of a radius-7 ball. `None` when the
/// center is original but its surroundings are not gadgets; `Some(None)`
/// when the center is auxiliary.
fn local_view(root: &BallNode) -> Option<Option<LocalView>> {
    if !root.neighbors().all(|n| n.degree(false) == 3) {
        return Some(None);
    }
    let mut view = LocalView {
        anchor: false,
        neighbors: Vec::new(),
    };
    for u in root.neighbors() {
        let lens: Vec<Option<usize>> = u.neighbors().map(chain_to_leaf).collect();
        let pendant_at = lens
            .iter()
            .position(|l| matches!(l, Some(k) if (2..=5).contains(k)))?;
        let main = &u.children[1 - pendant_at].1;
        let pendant = lens[pendant_at].expect("found above");
        if lens[1 - pendant_at].is_some_and(|k| k >= 2) {
            return None;
        }
        let w = only_child(main, 2)?;
        let z = only_child(w, 2)?;
        if z.degree(false) != 3 {
            return None;
        }
        let z_lens: Vec<Option<usize>> = z.neighbors().map(chain_to_leaf).collect();
        if pendant == CHILD_SIDE_ORDER {
            // Far side: z is p1 and its other child is the near endpoint.
            let far_pendant = z_lens
                .iter()
                .position(|l| matches!(l, Some(k) if *k >= 2))?;
            let near = &z.children[1 - far_pendant].1;
            view.neighbors
                .push((NeighborRole::NearEndpoint, near.color));
        } else {
            let kind = GadgetKind::from_pendant_len(pendant)?;
            let tail = z_lens.iter().position(|l| *l == Some(CHILD_SIDE_ORDER))?;
            if z_lens[1 - tail] == Some(CHILD_SIDE_ORDER) {
                return None;
            }
            let far = &z.children[1 - tail].1;
            let role = match kind {
                GadgetKind::A => {
                    view.anchor = true;
                    NeighborRole::RootOfAnchor
                }
                GadgetKind::B => NeighborRole::Child(Side::Left),
                GadgetKind::C => NeighborRole::Child(Side::Right),
            };
            view.neighbors.push((role, far.color));
        }
    }
    Some(Some(view))
}

fn lifted_anchor_rule(view: &LocalView) -> bool {
    view.neighbors.iter().filter(|(_, c)| *c >= 1).count() == 1
}

fn lifted_descent_rules(view: &LocalView, color: u64) -> bool {
    let child = |side| {
        view.neighbors
            .iter()
            .find(|(r, _)| *r == NeighborRole::Child(side))
            .map(|&(_, c)| c)
    };
    match color {
        0 => true,
        1 => child(Side::Right).is_some_and(|c| c >= 1),
        c => child(Side::Left) == Some(c - 1),
    }
}

/// Π* on encoded graphs: auxiliary vertices always pass; an original vertex
/// reads its anchor status, its neighbors' colors and its children's sides
/// off the gadgets around it and applies Π.
pub fn lift_problem() -> LocalProblem {
    LocalProblem::new("pi-star", PI_STAR_RADIUS, |t: &BallType| {
        match local_view(&t.root) {
            None => false,
            Some(None) => true,
            Some(Some(view)) if view.anchor => lifted_anchor_rule(&view),
            Some(Some(view)) => lifted_descent_rules(&view, t.root.color),
        }
    })
    .with_boundary(|t: &BallType| match local_view(&t.root) {
        None => false,
        Some(Some(view)) if view.anchor => lifted_anchor_rule(&view),
        Some(_) => true,
    })
}
