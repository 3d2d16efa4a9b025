//! The tree problems Σ and Π, colorings built from branch witnesses, the
//! favorite-child branch extractor, and anchor components.
//!
//! Σ on a rooted binary tree:
//! * the root gets a positive color;
//! * a vertex colored 1 has a right child with a positive color;
//! * a vertex colored c ≥ 2 has a left child colored c − 1.
//!
//! Π on an anchor component: an anchor has exactly one neighbor with a
//! positive color, and every other vertex follows the last two Σ rules.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{BallNode, BallType};
use crate::graph::{Coloring, Edge, Link, Side, StructuredGraph, VertexKind};
use crate::lcl::{CheckMode, LocalProblem};
use crate::regtree::{
    branch_prefix, decide_f, tree_vertex_id, truncate_as, AutomatonError, Bits, BranchWitness,
    FDecision, TreeAutomaton,
};

pub const ANCHOR_ID: &str = "anchor";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaPiError {
    #[error("branch has no 1 after position {0}")]
    NoSubsequentOne(usize),
    #[error("witness is not a branch of the tree")]
    WitnessInvalid,
    #[error("graph has no tree root")]
    NoRoot,
    #[error("root is not positive")]
    RootNotPositive,
    #[error("vertex `{0}` lacks a valid favorite child")]
    StuckInterior(String),
    #[error("neither tree has a branch with infinitely many 1s")]
    NotColorable,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// A vertex colored 1 needs a positive right child; one colored c > 1 needs a
/// left child colored c - 1.
fn descent_rules_hold(node: &BallNode) -> bool {
    match node.color {
        0 => true,
        1 => node
            .child(Link::RightChild)
            .is_some_and(|right| right.color >= 1),
        c => node
            .child(Link::LeftChild)
            .is_some_and(|left| left.color == c - 1),
    }
}

fn root_rule_holds(node: &BallNode) -> bool {
    !node.kind.is_tree_root() || node.color >= 1
}

fn anchor_rule_holds(node: &BallNode) -> bool {
    node.neighbors().filter(|n| n.color >= 1).count() == 1
}

pub fn sigma_problem() -> LocalProblem {
    LocalProblem::new("sigma", 1, |t: &BallType| {
        root_rule_holds(&t.root) && descent_rules_hold(&t.root)
    })
    .with_boundary(|t: &BallType| root_rule_holds(&t.root))
}

pub fn pi_problem() -> LocalProblem {
    LocalProblem::new("pi", 1, |t: &BallType| {
        if t.root.kind.is_anchor() {
            anchor_rule_holds(&t.root)
        } else {
            descent_rules_hold(&t.root)
        }
    })
    .with_boundary(|t: &BallType| !t.root.kind.is_anchor() || anchor_rule_holds(&t.root))
}

/// Number of 0s between position `s_len` and the next 1 of the branch.
pub fn k_of(w: &BranchWitness, s_len: usize) -> Result<u64, SigmaPiError> {
    let horizon = s_len.max(w.stem.len()) + w.cycle.len();
    (s_len..horizon)
        .position(|i| w.bit(i) == 1)
        .map(|k| k as u64)
        .ok_or(SigmaPiError::NoSubsequentOne(s_len))
}

/// Lenient check set for a truncation at depth `d`: everything except tree
/// vertices at depth `d` or deeper.
pub fn interior_vertices(g: &StructuredGraph, d: usize) -> CheckMode {
    CheckMode::lenient(
        (0..g.len())
            .filter(|&v| !matches!(g.kind(v), VertexKind::TreeVertex { .. }) || g.tree_depth(v) < d)
            .map(|v| g.id(v).to_string()),
    )
}

fn color_branch(
    f: &mut Coloring,
    tree: u8,
    w: &BranchWitness,
    d: usize,
) -> Result<(), SigmaPiError> {
    for i in 0..=d {
        let s = branch_prefix(w, i);
        f.set(tree_vertex_id(tree, &s), k_of(w, i)? + 1);
    }
    Ok(())
}

/// Colors the branch prefixes of `w` in `truncate(a, d)` with k(s) + 1 and
/// everything else with 0.
pub fn sigma_coloring_from_branch(
    a: &TreeAutomaton,
    w: &BranchWitness,
    d: usize,
) -> Result<Coloring, SigmaPiError> {
    if !w.is_valid_for(a) {
        return Err(SigmaPiError::WitnessInvalid);
    }
    let mut f = Coloring::new();
    color_branch(&mut f, 0, w, d)?;
    Ok(f)
}

/// Follows favorite children from the root (right after color 1, left after
/// a larger color) until a leaf of the truncation, returning the path's bits.
pub fn extract_branch(t: &StructuredGraph, f: &Coloring) -> Result<Bits, SigmaPiError> {
    let root = (0..t.len())
        .find(|&v| t.kind(v).is_tree_root())
        .ok_or(SigmaPiError::NoRoot)?;
    if f.get(t.id(root)) == 0 {
        return Err(SigmaPiError::RootNotPositive);
    }
    let mut bits = Bits::new();
    let mut cur = root;
    loop {
        let is_leaf = t.child(cur, Side::Left).is_none() && t.child(cur, Side::Right).is_none();
        if is_leaf {
            return Ok(bits);
        }
        let c = f.get(t.id(cur));
        let side = if c == 1 { Side::Right } else { Side::Left };
        let next = t
            .child(cur, side)
            .filter(|&child| {
                let cc = f.get(t.id(child));
                if c == 1 {
                    cc >= 1
                } else {
                    c >= 2 && cc == c - 1
                }
            })
            .ok_or_else(|| SigmaPiError::StuckInterior(t.id(cur).to_string()))?;
        bits.push(side.bit());
        cur = next;
    }
}

/// Two automaton-presented trees hung below one anchor, truncated at `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSpec {
    pub a0: TreeAutomaton,
    pub a1: TreeAutomaton,
    pub depth: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDoc {
    a0: serde_json::Value,
    a1: serde_json::Value,
    depth: usize,
}

impl ComponentSpec {
    pub fn new(a0: TreeAutomaton, a1: TreeAutomaton, depth: usize) -> ComponentSpec {
        ComponentSpec { a0, a1, depth }
    }

    pub fn parse_json(text: &str) -> Result<ComponentSpec, AutomatonError> {
        let doc: ComponentDoc = serde_json::from_str(text)
            .map_err(|e| AutomatonError::MalformedInput(e.to_string()))?;
        let a0 = TreeAutomaton::parse_pruned(&doc.a0.to_string())?;
        let a1 = TreeAutomaton::parse_pruned(&doc.a1.to_string())?;
        Ok(ComponentSpec::new(a0, a1, doc.depth))
    }

    pub fn to_json(&self) -> String {
        let doc = ComponentDoc {
            a0: serde_json::from_str(&self.a0.to_json()).expect("automaton JSON"),
            a1: serde_json::from_str(&self.a1.to_json()).expect("automaton JSON"),
            depth: self.depth,
        };
        serde_json::to_string(&doc).expect("component serializes")
    }

    pub fn automaton(&self, i: u8) -> &TreeAutomaton {
        if i == 0 {
            &self.a0
        } else {
            &self.a1
        }
    }
}

/// One anchor joined to the roots of both truncated trees. Ids are
/// `anchor` and `t<i>/<bits>`.
pub fn build_component(spec: &ComponentSpec) -> StructuredGraph {
    let trees = [0u8, 1].map(|i| truncate_as(spec.automaton(i), spec.depth, i));
    let mut vertices = vec![(ANCHOR_ID.to_string(), VertexKind::Anchor)];
    let mut edges = Vec::new();
    for (i, tree) in trees.iter().enumerate() {
        vertices.extend(tree.vertices().map(|(id, kind)| (id.to_string(), kind)));
        edges.extend(tree.edges().iter().cloned());
        edges.push(Edge::anchor_root(
            ANCHOR_ID,
            tree_vertex_id(i as u8, &Bits::new()),
        ));
    }
    StructuredGraph::new(vertices, edges).expect("component is a valid structured graph")
}

/// Whether the infinite component admits a Π-coloring: exactly when one of
/// the two trees has a branch with infinitely many 1s.
pub fn component_colorable(a0: &TreeAutomaton, a1: &TreeAutomaton) -> bool {
    !decide_f(a0).in_f() || !decide_f(a1).in_f()
}

/// Π-coloring of the truncated component: a Σ-coloring along the witness
/// branch of the first tree outside F, zero everywhere else.
pub fn pi_coloring_for_component(spec: &ComponentSpec) -> Result<(u8, Coloring), SigmaPiError> {
    for i in [0u8, 1] {
        if let FDecision::NotInF(w) = decide_f(spec.automaton(i)) {
            let mut f = Coloring::new();
            color_branch(&mut f, i, &w, spec.depth)?;
            return Ok((i, f));
        }
    }
    Err(SigmaPiError::NotColorable)
}
