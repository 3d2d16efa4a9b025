//! Problems by name and the lenient check sets used by the front ends.

use crate::gadget::{decode, lift_problem, original_vertices, GadgetError};
use crate::graph::{StructuredGraph, VertexKind};
use crate::lcl::{proper_coloring, CheckMode, LocalProblem};
use crate::sigma_pi::{interior_vertices, pi_problem, sigma_problem};

pub const PROBLEM_NAMES: [&str; 4] = ["sigma", "pi", "pi-star", "proper-k"];

/// `sigma`, `pi`, `pi-star`, or `proper-k` with `k = palette`. `None` for an
/// unknown name or `proper-k` without a palette.
pub fn problem_by_name(name: &str, palette: Option<u64>) -> Option<LocalProblem> {
    match name {
        "sigma" => Some(sigma_problem()),
        "pi" => Some(pi_problem()),
        "pi-star" => Some(lift_problem()),
        "proper-k" => palette.map(proper_coloring),
        _ => None,
    }
}

fn max_tree_depth(g: &StructuredGraph) -> usize {
    (0..g.len())
        .filter(|&v| matches!(g.kind(v), VertexKind::TreeVertex { .. }))
        .map(|v| g.tree_depth(v))
        .max()
        .unwrap_or(0)
}

/// Check set for a truncation window of depth `depth` (default: the deepest
/// tree vertex). Graphs without tree structure are taken to be encodings:
/// they are decoded to find depths and their auxiliary vertices are always
/// checked.
pub fn lenient_mode(g: &StructuredGraph, depth: Option<usize>) -> Result<CheckMode, GadgetError> {
    let structured = (0..g.len()).any(|v| {
        matches!(
            g.kind(v),
            VertexKind::Anchor | VertexKind::TreeVertex { .. }
        )
    });
    if structured || g.is_empty() {
        return Ok(interior_vertices(
            g,
            depth.unwrap_or_else(|| max_tree_depth(g)),
        ));
    }
    let base = decode(g)?;
    let d = depth.unwrap_or_else(|| max_tree_depth(&base));
    let CheckMode::Lenient(mut checked) = interior_vertices(&base, d) else {
        unreachable!("interior sets are lenient")
    };
    let original = original_vertices(g);
    checked.extend(
        (0..g.len())
            .filter(|&v| !original[v])
            .map(|v| g.id(v).to_string()),
    );
    Ok(CheckMode::Lenient(checked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::encode;
    use crate::regtree::TreeAutomaton;
    use crate::sigma_pi::{build_component, ComponentSpec};

    #[test]
    fn names() {
        for name in PROBLEM_NAMES {
            assert!(problem_by_name(name, Some(3)).is_some(), "{name}");
        }
        assert!(problem_by_name("proper-k", None).is_none());
        assert!(problem_by_name("tau", Some(2)).is_none());
        assert_eq!(problem_by_name("pi-star", None).unwrap().radius(), 7);
    }

    #[test]
    fn encoded_check_set() {
        let spec = ComponentSpec::new(TreeAutomaton::zero_only(), TreeAutomaton::zero_only(), 2);
        let g = build_component(&spec);
        let gs = encode(&g).unwrap();
        let CheckMode::Lenient(set) = lenient_mode(&gs, None).unwrap() else {
            panic!("lenient")
        };
        // Everything but the two depth-2 leaves.
        assert_eq!(set.len(), gs.len() - 2);
        assert!(!set.contains("t0/00") && set.contains("t0/0"));
        assert_eq!(lenient_mode(&g, None).unwrap(), interior_vertices(&g, 2));
    }
}
