//! Finite structured graphs: vertex kinds, edge kinds, validation and the
//! graph/coloring JSON formats.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// Bit labelling the edge from a parent to this child: left is 0, right is 1.
    pub fn bit(self) -> u8 {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Side {
        if bit == 0 {
            Side::Left
        } else {
            Side::Right
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Anchor,
    TreeVertex { tree: u8, root: bool },
    Plain,
    Auxiliary,
}

impl VertexKind {
    pub fn is_anchor(self) -> bool {
        matches!(self, VertexKind::Anchor)
    }

    pub fn is_tree_root(self) -> bool {
        matches!(self, VertexKind::TreeVertex { root: true, .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    AnchorRoot,
    ParentChild { parent: VertexId, side: Side },
    Unlabeled,
}

/// An undirected edge. For `ParentChild` edges `a` is always the parent;
/// otherwise `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn new(a: impl Into<VertexId>, b: impl Into<VertexId>, kind: EdgeKind) -> Edge {
        let (a, b) = (a.into(), b.into());
        let (a, b) = match &kind {
            EdgeKind::ParentChild { parent, .. } if *parent == b => (b, a),
            EdgeKind::ParentChild { .. } => (a, b),
            _ if b < a => (b, a),
            _ => (a, b),
        };
        Edge { a, b, kind }
    }

    pub fn anchor_root(anchor: impl Into<VertexId>, root: impl Into<VertexId>) -> Edge {
        Edge::new(anchor, root, EdgeKind::AnchorRoot)
    }

    pub fn parent_child(
        parent: impl Into<VertexId>,
        child: impl Into<VertexId>,
        side: Side,
    ) -> Edge {
        let parent = parent.into();
        Edge::new(
            parent.clone(),
            child,
            EdgeKind::ParentChild { parent, side },
        )
    }

    pub fn unlabeled(a: impl Into<VertexId>, b: impl Into<VertexId>) -> Edge {
        Edge::new(a, b, EdgeKind::Unlabeled)
    }
}

/// How an incident edge looks from one of its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Link {
    AnchorRoot,
    /// The neighbor is this vertex's left child.
    LeftChild,
    RightChild,
    /// The neighbor is this vertex's parent and this vertex is its left child.
    ParentOfLeft,
    ParentOfRight,
    Unlabeled,
}

impl Link {
    pub fn tag(self) -> u8 {
        match self {
            Link::AnchorRoot => b'a',
            Link::LeftChild => b'L',
            Link::RightChild => b'R',
            Link::ParentOfLeft => b'l',
            Link::ParentOfRight => b'r',
            Link::Unlabeled => b'u',
        }
    }

    pub fn child_side(self) -> Option<Side> {
        match self {
            Link::LeftChild => Some(Side::Left),
            Link::RightChild => Some(Side::Right),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(VertexId),
    #[error("edge endpoint `{0}` is not a declared vertex")]
    UnknownEndpoint(VertexId),
    #[error("self-loop at `{0}`")]
    SelfLoop(VertexId),
    #[error("parallel edges between `{0}` and `{1}`")]
    ParallelEdge(VertexId, VertexId),
    #[error("parent `{parent}` is not an endpoint of its edge")]
    BadParent { parent: VertexId },
    #[error("vertex `{0}` has degree {1}, more than 3")]
    DegreeExceeded(VertexId, usize),
    #[error("cycle through `{0}`")]
    CycleDetected(VertexId),
    #[error("vertex `{0}` has two {1:?} children")]
    DuplicateSide(VertexId, Side),
    #[error("vertex `{0}` has two parents")]
    TwoParents(VertexId),
    #[error("tree index {1} of `{0}` is not 0 or 1")]
    BadTreeIndex(VertexId, u8),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("malformed graph JSON: {0}")]
    Malformed(String),
}

/// A finite graph whose vertices and edges carry the structure local
/// problems may inspect. Immutable once built.
#[derive(Debug, Clone)]
pub struct StructuredGraph {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    kinds: Vec<VertexKind>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, Link)>>,
}

impl PartialEq for StructuredGraph {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.kinds == other.kinds && self.edges == other.edges
    }
}

impl Eq for StructuredGraph {}

impl StructuredGraph {
    /// Builds a graph checking only the basic invariants (declared endpoints,
    /// no loops or parallel edges, consistent parent/side labels). Degree and
    /// acyclicity are checked by [`StructuredGraph::validate_structured`].
    pub fn new(
        vertices: impl IntoIterator<Item = (VertexId, VertexKind)>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<StructuredGraph, GraphError> {
        let mut by_id = BTreeMap::new();
        for (id, kind) in vertices {
            if let VertexKind::TreeVertex { tree, .. } = kind {
                if tree > 1 {
                    return Err(GraphError::BadTreeIndex(id, tree));
                }
            }
            if by_id.insert(id.clone(), kind).is_some() {
                return Err(GraphError::DuplicateVertex(id));
            }
        }
        let ids: Vec<VertexId> = by_id.keys().cloned().collect();
        let kinds: Vec<VertexKind> = by_id.into_values().collect();
        let index: HashMap<VertexId, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();

        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort();
        let mut adj: Vec<Vec<(usize, Link)>> = vec![Vec::new(); ids.len()];
        let mut seen_pairs = std::collections::HashSet::new();
        let mut has_parent = vec![false; ids.len()];
        let mut child_sides: Vec<[bool; 2]> = vec![[false; 2]; ids.len()];
        for e in &edges {
            let ia = *index
                .get(&e.a)
                .ok_or_else(|| GraphError::UnknownEndpoint(e.a.clone()))?;
            let ib = *index
                .get(&e.b)
                .ok_or_else(|| GraphError::UnknownEndpoint(e.b.clone()))?;
            if ia == ib {
                return Err(GraphError::SelfLoop(e.a.clone()));
            }
            if !seen_pairs.insert((ia.min(ib), ia.max(ib))) {
                return Err(GraphError::ParallelEdge(e.a.clone(), e.b.clone()));
            }
            let (la, lb) = match &e.kind {
                EdgeKind::AnchorRoot => (Link::AnchorRoot, Link::AnchorRoot),
                EdgeKind::Unlabeled => (Link::Unlabeled, Link::Unlabeled),
                EdgeKind::ParentChild { parent, side } => {
                    if *parent != e.a {
                        return Err(GraphError::BadParent {
                            parent: parent.clone(),
                        });
                    }
                    let slot = &mut child_sides[ia][side.bit() as usize];
                    if *slot {
                        return Err(GraphError::DuplicateSide(e.a.clone(), *side));
                    }
                    *slot = true;
                    if std::mem::replace(&mut has_parent[ib], true) {
                        return Err(GraphError::TwoParents(e.b.clone()));
                    }
                    match side {
                        Side::Left => (Link::LeftChild, Link::ParentOfLeft),
                        Side::Right => (Link::RightChild, Link::ParentOfRight),
                    }
                }
            };
            adj[ia].push((ib, la));
            adj[ib].push((ia, lb));
        }
        for list in &mut adj {
            list.sort();
        }
        Ok(StructuredGraph {
            ids,
            index,
            kinds,
            edges,
            adj,
        })
    }

    /// Checks the structured-mode invariants: maximum degree 3 and no cycles.
    pub fn validate_structured(&self) -> Result<(), GraphError> {
        for (v, list) in self.adj.iter().enumerate() {
            if list.len() > 3 {
                return Err(GraphError::DegreeExceeded(self.ids[v].clone(), list.len()));
            }
        }
        if let Some(v) = self.find_cycle_vertex() {
            return Err(GraphError::CycleDetected(self.ids[v].clone()));
        }
        Ok(())
    }

    pub fn is_structured(&self) -> bool {
        self.validate_structured().is_ok()
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle_vertex().is_none()
    }

    fn find_cycle_vertex(&self) -> Option<usize> {
        let n = self.ids.len();
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![(start, usize::MAX)];
            while let Some((v, from)) = stack.pop() {
                for &(w, _) in &self.adj[v] {
                    if w == from {
                        continue;
                    }
                    if seen[w] {
                        return Some(w);
                    }
                    seen[w] = true;
                    stack.push((w, v));
                }
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Vertex ids in lexicographic order; positions are the dense indices
    /// used by the other accessors.
    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn kind_of(&self, id: &str) -> Option<VertexKind> {
        self.index_of(id).map(|v| self.kinds[v])
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, Link)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&str, VertexKind)> {
        self.ids
            .iter()
            .map(String::as_str)
            .zip(self.kinds.iter().copied())
    }

    /// The child of `v` on `side`, if present.
    pub fn child(&self, v: usize, side: Side) -> Option<usize> {
        let want = match side {
            Side::Left => Link::LeftChild,
            Side::Right => Link::RightChild,
        };
        self.adj[v]
            .iter()
            .find(|(_, l)| *l == want)
            .map(|&(w, _)| w)
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.adj[v]
            .iter()
            .find(|(_, l)| matches!(l, Link::ParentOfLeft | Link::ParentOfRight))
            .map(|&(w, _)| w)
    }

    /// Breadth-first distances from `x`; `None` for unreachable vertices.
    pub fn distances_from(&self, x: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.ids.len()];
        dist[x] = Some(0);
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &(w, _) in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Number of parent-child edges between `v` and the root of its tree.
    pub fn tree_depth(&self, v: usize) -> usize {
        let mut depth = 0;
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            depth += 1;
            cur = p;
            if depth > self.ids.len() {
                break;
            }
        }
        depth
    }

    /// The induced subgraph on `keep` (dense indices).
    pub fn induced(&self, keep: &[usize]) -> StructuredGraph {
        let mut mask = vec![false; self.ids.len()];
        for &v in keep {
            mask[v] = true;
        }
        let vertices = keep.iter().map(|&v| (self.ids[v].clone(), self.kinds[v]));
        let edges = self
            .edges
            .iter()
            .filter(|e| mask[self.index[&e.a]] && mask[self.index[&e.b]])
            .cloned();
        StructuredGraph::new(vertices, edges).expect("induced subgraph of a valid graph")
    }

    pub fn from_json(text: &str) -> Result<StructuredGraph, GraphError> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
        doc.into_graph()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphDoc::from_graph(self)).expect("graph serializes")
    }
}

/// Validated constructor enforcing the structured-mode invariants.
pub fn build_structured_graph(
    vertices: impl IntoIterator<Item = (VertexId, VertexKind)>,
    edges: impl IntoIterator<Item = Edge>,
) -> Result<StructuredGraph, GraphError> {
    let g = StructuredGraph::new(vertices, edges)?;
    g.validate_structured()?;
    Ok(g)
}

/// Total assignment of colors to vertices; ids without an entry have color 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Coloring(BTreeMap<VertexId, u64>);

impl Coloring {
    pub fn new() -> Coloring {
        Coloring::default()
    }

    pub fn get(&self, id: &str) -> u64 {
        self.0.get(id).copied().unwrap_or(0)
    }

    /// Sets a color; color 0 is stored implicitly.
    pub fn set(&mut self, id: impl Into<VertexId>, color: u64) {
        let id = id.into();
        if color == 0 {
            self.0.remove(&id);
        } else {
            self.0.insert(id, color);
        }
    }

    /// Explicit (nonzero) entries in id order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Colors of all vertices of `g`, by dense index.
    pub fn dense(&self, g: &StructuredGraph) -> Vec<u64> {
        g.ids().iter().map(|id| self.get(id)).collect()
    }

    pub fn from_dense(g: &StructuredGraph, colors: &[u64]) -> Coloring {
        let mut f = Coloring::new();
        for (v, &c) in colors.iter().enumerate() {
            f.set(g.id(v), c);
        }
        f
    }

    /// First id that is not a vertex of `g`, if any.
    pub fn stray_vertex(&self, g: &StructuredGraph) -> Option<&str> {
        self.0
            .keys()
            .find(|id| g.index_of(id).is_none())
            .map(String::as_str)
    }

    pub fn from_json(text: &str) -> Result<Coloring, GraphError> {
        let doc: ColoringDoc =
            serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
        let mut f = Coloring::new();
        for (id, c) in doc.colors {
            f.set(id, c);
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("coloring serializes")
    }

    pub fn to_doc(&self) -> ColoringDoc {
        ColoringDoc {
            colors: self.0.clone(),
        }
    }
}

impl FromIterator<(VertexId, u64)> for Coloring {
    fn from_iter<I: IntoIterator<Item = (VertexId, u64)>>(iter: I) -> Self {
        let mut f = Coloring::new();
        for (id, c) in iter {
            f.set(id, c);
        }
        f
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (id, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{id}: {c}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColoringDoc {
    pub colors: BTreeMap<VertexId, u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: VertexId,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tree: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    a: VertexId,
    b: VertexId,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    side: Option<Side>,
}

impl GraphDoc {
    fn from_graph(g: &StructuredGraph) -> GraphDoc {
        let vertices = g
            .vertices()
            .map(|(id, kind)| {
                let (name, tree, root) = match kind {
                    VertexKind::Anchor => ("anchor", None, None),
                    VertexKind::TreeVertex { tree, root } => ("tree", Some(tree), Some(root)),
                    VertexKind::Plain => ("plain", None, None),
                    VertexKind::Auxiliary => ("auxiliary", None, None),
                };
                VertexDoc {
                    id: id.to_string(),
                    kind: name.to_string(),
                    tree,
                    root,
                }
            })
            .collect();
        let edges = g
            .edges()
            .iter()
            .map(|e| {
                let (kind, parent, side) = match &e.kind {
                    EdgeKind::AnchorRoot => ("anchor_root", None, None),
                    EdgeKind::ParentChild { parent, side } => {
                        ("parent_child", Some(parent.clone()), Some(*side))
                    }
                    EdgeKind::Unlabeled => ("unlabeled", None, None),
                };
                EdgeDoc {
                    a: e.a.clone(),
                    b: e.b.clone(),
                    kind: kind.to_string(),
                    parent,
                    side,
                }
            })
            .collect();
        GraphDoc { vertices, edges }
    }

    fn into_graph(self) -> Result<StructuredGraph, GraphError> {
        let malformed = |m: String| GraphError::Malformed(m);
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for v in self.vertices {
            let kind = match v.kind.as_str() {
                "anchor" => VertexKind::Anchor,
                "tree" => VertexKind::TreeVertex {
                    tree: v.tree.unwrap_or(0),
                    root: v.root.unwrap_or(false),
                },
                "plain" => VertexKind::Plain,
                "auxiliary" => VertexKind::Auxiliary,
                other => return Err(malformed(format!("unknown vertex kind `{other}`"))),
            };
            vertices.push((v.id, kind));
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in self.edges {
            let kind = match e.kind.as_str() {
                "anchor_root" => EdgeKind::AnchorRoot,
                "unlabeled" => EdgeKind::Unlabeled,
                "parent_child" => {
                    let parent = e
                        .parent
                        .ok_or_else(|| malformed("parent_child edge without `parent`".into()))?;
                    let side = e
                        .side
                        .ok_or_else(|| malformed("parent_child edge without `side`".into()))?;
                    EdgeKind::ParentChild { parent, side }
                }
                other => return Err(malformed(format!("unknown edge kind `{other}`"))),
            };
            if let EdgeKind::ParentChild { parent, .. } = &kind {
                if *parent != e.a && *parent != e.b {
                    return Err(GraphError::BadParent {
                        parent: parent.clone(),
                    });
                }
            }
            edges.push(Edge::new(e.a, e.b, kind));
        }
        StructuredGraph::new(vertices, edges)
    }
}
