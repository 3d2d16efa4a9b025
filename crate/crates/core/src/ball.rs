//! Radius-r balls and their canonical isomorphism types.
//!
//! Every ball in this crate is a tree, so the canonical form is the classic
//! rooted-tree encoding: a vertex is written as its kind tag and color
//! followed by the sorted encodings of its children, each prefixed by the
//! tag of the connecting edge as seen from the parent. Two balls get equal
//! encodings exactly when a root-, kind-, side- and color-preserving
//! isomorphism exists between them.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::graph::{Coloring, GraphError, Link, StructuredGraph, VertexId, VertexKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BallError {
    #[error("ball around `{0}` is not a tree")]
    NotATree(VertexId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The colored induced subgraph on all vertices within distance `radius`
/// of `root`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedBall {
    pub root: VertexId,
    pub radius: usize,
    pub graph: StructuredGraph,
    pub colors: Coloring,
}

pub fn ball(g: &StructuredGraph, f: &Coloring, x: &str, r: usize) -> Result<RootedBall, BallError> {
    let xi = g
        .index_of(x)
        .ok_or_else(|| GraphError::UnknownVertex(x.to_string()))?;
    let members = ball_members(g, xi, r);
    let graph = g.induced(&members);
    let colors = members
        .iter()
        .map(|&v| (g.id(v).to_string(), f.get(g.id(v))))
        .collect();
    Ok(RootedBall {
        root: x.to_string(),
        radius: r,
        graph,
        colors,
    })
}

/// Dense indices of the vertices at distance at most `r` from `x`, sorted.
pub fn ball_members(g: &StructuredGraph, x: usize, r: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.len()];
    dist[x] = 0;
    let mut members = vec![x];
    let mut queue = VecDeque::from([x]);
    while let Some(v) = queue.pop_front() {
        if dist[v] == r {
            continue;
        }
        for &(w, _) in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                members.push(w);
                queue.push_back(w);
            }
        }
    }
    members.sort_unstable();
    members
}

/// A vertex of a canonical ball: what a predicate gets to see.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallNode {
    pub kind: VertexKind,
    pub color: u64,
    /// Neighbors other than the parent, with the edge as seen from this node,
    /// in canonical order.
    pub children: Vec<(Link, BallNode)>,
}

impl BallNode {
    /// Degree inside the ball; `is_root` tells whether there is a parent edge.
    pub fn degree(&self, is_root: bool) -> usize {
        self.children.len() + usize::from(!is_root)
    }

    pub fn child(&self, link: Link) -> Option<&BallNode> {
        self.children
            .iter()
            .find(|(l, _)| *l == link)
            .map(|(_, n)| n)
    }

    pub fn neighbors(&self) -> impl Iterator<Item = &BallNode> {
        self.children.iter().map(|(_, n)| n)
    }
}

/// Canonical isomorphism type of a rooted colored ball.
///
/// Equality, ordering and hashing look only at the radius and the byte
/// encoding; `root` is the decoded tree the encoding describes.
#[derive(Debug, Clone)]
pub struct BallType {
    pub radius: usize,
    pub encoding: Vec<u8>,
    pub root: BallNode,
}

impl PartialEq for BallType {
    fn eq(&self, other: &Self) -> bool {
        self.radius == other.radius && self.encoding == other.encoding
    }
}

impl Eq for BallType {}

impl Hash for BallType {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.radius.hash(state);
        self.encoding.hash(state);
    }
}

impl PartialOrd for BallType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BallType {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.radius, &self.encoding).cmp(&(other.radius, &other.encoding))
    }
}

impl BallType {
    pub fn encoding_str(&self) -> &str {
        std::str::from_utf8(&self.encoding).expect("encodings are ASCII")
    }
}

pub fn canonical_type(b: &RootedBall) -> Result<BallType, BallError> {
    let g = &b.graph;
    let root = g
        .index_of(&b.root)
        .ok_or_else(|| GraphError::UnknownVertex(b.root.clone()))?;
    if g.edges().len() + 1 != g.len() || !g.is_acyclic() {
        return Err(BallError::NotATree(b.root.clone()));
    }
    let shape = BallShape::from_root(g, root, usize::MAX);
    if shape.nodes.len() != g.len() {
        return Err(BallError::NotATree(b.root.clone()));
    }
    let colors = b.colors.dense(g);
    Ok(shape.canonical(g, &colors, b.radius))
}

/// Breadth-first layout of a tree-shaped ball inside a host graph, reusable
/// across colorings.
#[derive(Debug, Clone)]
pub struct BallShape {
    /// `(vertex, parent position, link from parent)`; the root comes first
    /// with parent position `usize::MAX`.
    nodes: Vec<(usize, usize, Link)>,
}

impl BallShape {
    /// Ball of radius `r` around `root`. The host must be acyclic around
    /// `root`; vertices reached twice are ignored.
    pub fn from_root(g: &StructuredGraph, root: usize, r: usize) -> BallShape {
        let mut nodes = vec![(root, usize::MAX, Link::Unlabeled)];
        let mut depth = vec![0usize];
        let mut i = 0;
        while i < nodes.len() {
            let (v, parent_pos, _) = nodes[i];
            if depth[i] < r {
                let parent = (parent_pos != usize::MAX).then(|| nodes[parent_pos].0);
                for &(w, link) in g.neighbors(v) {
                    if Some(w) != parent {
                        nodes.push((w, i, link));
                        depth.push(depth[i] + 1);
                    }
                }
            }
            i += 1;
        }
        BallShape { nodes }
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().map(|&(v, _, _)| v)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Canonical type of this ball under `colors` (dense, indexed like the host).
    pub fn canonical(&self, g: &StructuredGraph, colors: &[u64], radius: usize) -> BallType {
        let n = self.nodes.len();
        let mut built: Vec<Option<(Vec<u8>, BallNode)>> = vec![None; n];
        let mut kids: Vec<Vec<(Vec<u8>, Link, BallNode)>> = vec![Vec::new(); n];
        for pos in (0..n).rev() {
            let (v, parent_pos, link) = self.nodes[pos];
            let mut children = std::mem::take(&mut kids[pos]);
            children.sort_by(|a, b| a.0.cmp(&b.0));
            let kind = g.kind(v);
            let color = colors[v];
            let mut enc = Vec::with_capacity(8 + children.iter().map(|c| c.0.len()).sum::<usize>());
            enc.push(b'(');
            push_kind(&mut enc, kind);
            enc.push(b':');
            enc.extend_from_slice(color.to_string().as_bytes());
            let mut node_children = Vec::with_capacity(children.len());
            for (child_enc, child_link, child_node) in children {
                enc.extend_from_slice(&child_enc);
                node_children.push((child_link, child_node));
            }
            enc.push(b')');
            let node = BallNode {
                kind,
                color,
                children: node_children,
            };
            if parent_pos == usize::MAX {
                built[pos] = Some((enc, node));
            } else {
                let mut tagged = Vec::with_capacity(enc.len() + 1);
                tagged.push(link.tag());
                tagged.extend_from_slice(&enc);
                kids[parent_pos].push((tagged, link, node));
            }
        }
        let (encoding, root) = built[0].take().expect("root is built last");
        BallType {
            radius,
            encoding,
            root,
        }
    }
}

fn push_kind(out: &mut Vec<u8>, kind: VertexKind) {
    match kind {
        VertexKind::Anchor => out.push(b'A'),
        VertexKind::Plain => out.push(b'P'),
        VertexKind::Auxiliary => out.push(b'X'),
        VertexKind::TreeVertex { tree, root } => {
            out.push(b'T');
            out.push(b'0' + tree);
            out.push(if root { b'r' } else { b'n' });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn path_abc() -> StructuredGraph {
        StructuredGraph::new(
            ["a", "b", "c"].map(|s| (s.to_string(), VertexKind::Plain)),
            [Edge::unlabeled("a", "b"), Edge::unlabeled("b", "c")],
        )
        .unwrap()
    }

    fn ids(b: &RootedBall) -> Vec<&str> {
        b.graph.ids().iter().map(String::as_str).collect()
    }

    #[test]
    fn radius_zero_is_the_root_alone() {
        let g = path_abc();
        let f: Coloring = [("b".to_string(), 4)].into_iter().collect();
        let b = ball(&g, &f, "b", 0).unwrap();
        assert_eq!(ids(&b), ["b"]);
        assert_eq!(b.colors.get("b"), 4);
        assert_eq!(canonical_type(&b).unwrap().encoding_str(), "(P:4)");
    }

    #[test]
    fn path_balls() {
        let g = path_abc();
        let f = Coloring::new();
        assert_eq!(ids(&ball(&g, &f, "b", 1).unwrap()), ["a", "b", "c"]);
        assert_eq!(ids(&ball(&g, &f, "a", 1).unwrap()), ["a", "b"]);
        assert!(matches!(
            ball(&g, &f, "zz", 1),
            Err(BallError::Graph(GraphError::UnknownVertex(_)))
        ));
    }

    #[test]
    fn root_position_changes_the_type() {
        let g = path_abc();
        let f = Coloring::new();
        let at_a = canonical_type(&ball(&g, &f, "a", 1).unwrap()).unwrap();
        let at_b = canonical_type(&ball(&g, &f, "b", 1).unwrap()).unwrap();
        assert_eq!(at_a.encoding_str(), "(P:0u(P:0))");
        assert_eq!(at_b.encoding_str(), "(P:0u(P:0)u(P:0))");
        assert_ne!(at_a, at_b);
    }

    #[test]
    fn relabeling_preserves_the_type() {
        let g = path_abc();
        let h = StructuredGraph::new(
            ["q", "x", "m"].map(|s| (s.to_string(), VertexKind::Plain)),
            [Edge::unlabeled("q", "x"), Edge::unlabeled("x", "m")],
        )
        .unwrap();
        let f: Coloring = [("a".to_string(), 1), ("c".to_string(), 2)]
            .into_iter()
            .collect();
        let fh: Coloring = [("q".to_string(), 1), ("m".to_string(), 2)]
            .into_iter()
            .collect();
        let tg = canonical_type(&ball(&g, &f, "b", 1).unwrap()).unwrap();
        let th = canonical_type(&ball(&h, &fh, "x", 1).unwrap()).unwrap();
        assert_eq!(tg, th);
    }

    #[test]
    fn cyclic_ball_is_rejected() {
        let g = StructuredGraph::new(
            ["a", "b", "c"].map(|s| (s.to_string(), VertexKind::Plain)),
            [
                Edge::unlabeled("a", "b"),
                Edge::unlabeled("b", "c"),
                Edge::unlabeled("c", "a"),
            ],
        )
        .unwrap();
        let b = ball(&g, &Coloring::new(), "a", 1).unwrap();
        assert_eq!(canonical_type(&b), Err(BallError::NotATree("a".into())));
    }
}
