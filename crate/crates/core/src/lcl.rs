//! Local coloring problems and the coloring verifier.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{ball_members, BallError, BallShape, BallType};
use crate::graph::{Coloring, StructuredGraph, VertexId};

pub type Predicate = Arc<dyn Fn(&BallType) -> bool + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LclError {
    #[error("coloring assigns a color to `{0}`, which is not a vertex of the graph")]
    ColoringNotTotal(VertexId),
    #[error("checked vertex `{0}` is not in the graph")]
    UnknownCheckedVertex(VertexId),
    #[error("palette must contain at least one color")]
    EmptyPalette,
    #[error(
        "instance too large for exhaustive search: {colorings} colorings exceed the cap of {cap}"
    )]
    InstanceTooLarge { colorings: u128, cap: u128 },
    #[error(transparent)]
    Ball(#[from] BallError),
}

/// A radius together with a pass/fail rule on canonical ball types.
///
/// `boundary` is the part of the rule that does not depend on how much of
/// the neighborhood is visible (for the tree problems: the root and anchor
/// rules). In lenient mode it is applied at unchecked vertices.
#[derive(Clone)]
pub struct LocalProblem {
    name: String,
    radius: usize,
    predicate: Predicate,
    boundary: Option<Predicate>,
}

impl fmt::Debug for LocalProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalProblem")
            .field("name", &self.name)
            .field("radius", &self.radius)
            .field("boundary", &self.boundary.is_some())
            .finish()
    }
}

impl LocalProblem {
    pub fn new(
        name: impl Into<String>,
        radius: usize,
        predicate: impl Fn(&BallType) -> bool + Send + Sync + 'static,
    ) -> LocalProblem {
        LocalProblem {
            name: name.into(),
            radius,
            predicate: Arc::new(predicate),
            boundary: None,
        }
    }

    pub fn with_boundary(
        mut self,
        boundary: impl Fn(&BallType) -> bool + Send + Sync + 'static,
    ) -> LocalProblem {
        self.boundary = Some(Arc::new(boundary));
        self
    }

    /// Extensional form: a ball passes iff its encoding is in `passing`.
    pub fn from_table(name: impl Into<String>, radius: usize, passing: PassTable) -> LocalProblem {
        let passing = Arc::new(passing);
        LocalProblem::new(name, radius, move |t| passing.passes(t))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary.is_some()
    }

    pub fn passes(&self, t: &BallType) -> bool {
        (self.predicate)(t)
    }

    pub fn passes_boundary(&self, t: &BallType) -> bool {
        self.boundary.as_ref().is_none_or(|b| b(t))
    }
}

/// The set of passing ball encodings of an extensional problem.
#[derive(Debug, Clone, Default)]
pub struct PassTable {
    radius: usize,
    passing: BTreeSet<Vec<u8>>,
}

impl PassTable {
    pub fn passes(&self, t: &BallType) -> bool {
        t.radius == self.radius && self.passing.contains(&t.encoding)
    }

    pub fn len(&self) -> usize {
        self.passing.len()
    }

    pub fn is_empty(&self) -> bool {
        self.passing.is_empty()
    }
}

/// Tabulates `p` over every ball type that occurs in `g` under a coloring
/// with colors in `0..palette`. Balls with more than `max_ball` vertices are
/// rejected as too large to enumerate.
pub fn tabulate(
    p: &LocalProblem,
    g: &StructuredGraph,
    palette: u64,
    max_ball: usize,
) -> Result<PassTable, LclError> {
    if palette == 0 {
        return Err(LclError::EmptyPalette);
    }
    let mut passing = BTreeSet::new();
    let mut colors = vec![0u64; g.len()];
    for x in 0..g.len() {
        let shape = BallShape::from_root(g, x, p.radius());
        let members: Vec<usize> = shape.vertices().collect();
        if members.len() > max_ball {
            return Err(LclError::InstanceTooLarge {
                colorings: count_colorings(palette, members.len()),
                cap: count_colorings(palette, max_ball),
            });
        }
        for &v in &members {
            colors[v] = 0;
        }
        loop {
            let t = shape.canonical(g, &colors, p.radius());
            if p.passes(&t) {
                passing.insert(t.encoding);
            }
            let mut pos = 0;
            while pos < members.len() {
                let v = members[pos];
                colors[v] += 1;
                if colors[v] < palette {
                    break;
                }
                colors[v] = 0;
                pos += 1;
            }
            if pos == members.len() {
                break;
            }
        }
    }
    Ok(PassTable {
        radius: p.radius(),
        passing,
    })
}

/// `palette^n`, saturating.
pub fn count_colorings(palette: u64, n: usize) -> u128 {
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.saturating_mul(palette as u128);
    }
    total
}

/// Which vertices the full predicate is evaluated at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckMode {
    Strict,
    /// Full predicate on the checked set, boundary rule elsewhere.
    Lenient(BTreeSet<VertexId>),
}

impl CheckMode {
    pub fn lenient<I, S>(checked: I) -> CheckMode
    where
        I: IntoIterator<Item = S>,
        S: Into<VertexId>,
    {
        CheckMode::Lenient(checked.into_iter().map(Into::into).collect())
    }

    /// Dense mask of checked vertices.
    pub fn mask(&self, g: &StructuredGraph) -> Result<Vec<bool>, LclError> {
        match self {
            CheckMode::Strict => Ok(vec![true; g.len()]),
            CheckMode::Lenient(set) => {
                let mut mask = vec![false; g.len()];
                for id in set {
                    let v = g
                        .index_of(id)
                        .ok_or_else(|| LclError::UnknownCheckedVertex(id.clone()))?;
                    mask[v] = true;
                }
                Ok(mask)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub ok: bool,
    pub failures: Vec<VertexId>,
}

impl Verdict {
    pub fn from_failures(mut failures: Vec<VertexId>) -> Verdict {
        failures.sort();
        Verdict {
            ok: failures.is_empty(),
            failures,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

/// What must hold at one vertex: the full rule, the boundary rule, or nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rule {
    Full,
    Boundary,
}

pub(crate) fn rules(
    g: &StructuredGraph,
    p: &LocalProblem,
    mode: &CheckMode,
) -> Result<Vec<Option<Rule>>, LclError> {
    let mask = mode.mask(g)?;
    Ok(mask
        .into_iter()
        .map(|checked| {
            if checked {
                Some(Rule::Full)
            } else if p.has_boundary() {
                Some(Rule::Boundary)
            } else {
                None
            }
        })
        .collect())
}

pub(crate) fn check_rule(p: &LocalProblem, rule: Rule, t: &BallType) -> bool {
    match rule {
        Rule::Full => p.passes(t),
        Rule::Boundary => p.passes_boundary(t),
    }
}

pub fn verify(
    g: &StructuredGraph,
    f: &Coloring,
    p: &LocalProblem,
    mode: &CheckMode,
) -> Result<Verdict, LclError> {
    if let Some(stray) = f.stray_vertex(g) {
        return Err(LclError::ColoringNotTotal(stray.to_string()));
    }
    let rules = rules(g, p, mode)?;
    let colors = f.dense(g);
    let acyclic = g.is_acyclic();
    let mut failures = Vec::new();
    for (x, rule) in rules.into_iter().enumerate() {
        let Some(rule) = rule else { continue };
        let t = if acyclic {
            BallShape::from_root(g, x, p.radius()).canonical(g, &colors, p.radius())
        } else {
            let b = crate::ball::ball(g, f, g.id(x), p.radius())?;
            crate::ball::canonical_type(&b)?
        };
        if !check_rule(p, rule, &t) {
            failures.push(g.id(x).to_string());
        }
    }
    Ok(Verdict::from_failures(failures))
}

/// Proper coloring with colors below `k`, radius 1.
pub fn proper_coloring(k: u64) -> LocalProblem {
    LocalProblem::new(format!("proper-{k}"), 1, move |t| {
        let c = t.root.color;
        c < k && t.root.neighbors().all(|n| n.color != c)
    })
}

/// Memo of predicate results keyed by the colors of a ball's vertices.
pub(crate) struct RuleMemo {
    dense: Vec<u8>,
    sparse: HashMap<Vec<u64>, bool>,
    palette: u64,
    use_dense: bool,
}

impl RuleMemo {
    pub(crate) fn new(ball_size: usize, palette: u64) -> RuleMemo {
        let cells = (palette as f64).powi(ball_size as i32);
        let use_dense = cells <= (1 << 16) as f64;
        RuleMemo {
            dense: if use_dense {
                vec![2; cells as usize]
            } else {
                Vec::new()
            },
            sparse: HashMap::new(),
            palette,
            use_dense,
        }
    }

    pub(crate) fn get_or_insert(
        &mut self,
        ball_colors: impl Iterator<Item = u64> + Clone,
        eval: impl FnOnce() -> bool,
    ) -> bool {
        if self.use_dense {
            let idx = ball_colors.fold(0usize, |acc, c| acc * self.palette as usize + c as usize);
            match self.dense[idx] {
                0 => false,
                1 => true,
                _ => {
                    let v = eval();
                    self.dense[idx] = v as u8;
                    v
                }
            }
        } else {
            let key: Vec<u64> = ball_colors.collect();
            if let Some(&v) = self.sparse.get(&key) {
                return v;
            }
            let v = eval();
            self.sparse.insert(key, v);
            v
        }
    }
}

/// Vertices of each ball, by dense index, for memo keys.
pub(crate) fn ball_scopes(g: &StructuredGraph, r: usize) -> Vec<Vec<usize>> {
    (0..g.len()).map(|x| ball_members(g, x, r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, VertexKind};

    fn path3() -> StructuredGraph {
        StructuredGraph::new(
            ["a", "b", "c"].map(|s| (s.to_string(), VertexKind::Plain)),
            [Edge::unlabeled("a", "b"), Edge::unlabeled("b", "c")],
        )
        .unwrap()
    }

    #[test]
    fn proper_coloring_verdicts() {
        let g = path3();
        let p = proper_coloring(2);
        let good: Coloring = [("b".to_string(), 1)].into_iter().collect();
        assert!(verify(&g, &good, &p, &CheckMode::Strict).unwrap().ok);
        let bad = Coloring::new();
        let v = verify(&g, &bad, &p, &CheckMode::Strict).unwrap();
        assert!(!v.ok);
        assert_eq!(v.failures, ["a", "b", "c"]);
        let v = verify(&g, &bad, &p, &CheckMode::lenient(["a"])).unwrap();
        assert_eq!(v.failures, ["a"]);
    }

    #[test]
    fn lenient_set_must_be_in_graph() {
        let g = path3();
        let err = verify(
            &g,
            &Coloring::new(),
            &proper_coloring(2),
            &CheckMode::lenient(["z"]),
        );
        assert_eq!(err, Err(LclError::UnknownCheckedVertex("z".into())));
    }

    #[test]
    fn stray_colors_are_rejected() {
        let g = path3();
        let f: Coloring = [("nope".to_string(), 1)].into_iter().collect();
        assert_eq!(
            verify(&g, &f, &proper_coloring(2), &CheckMode::Strict),
            Err(LclError::ColoringNotTotal("nope".into()))
        );
    }

    #[test]
    fn tabulated_problem_matches_intensional() {
        let g = path3();
        let p = proper_coloring(3);
        let table = tabulate(&p, &g, 3, 8).unwrap();
        let q = LocalProblem::from_table("proper-3-table", 1, table);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let f: Coloring = [("a", a), ("b", b), ("c", c)]
                        .into_iter()
                        .map(|(k, v)| (k.to_string(), v))
                        .collect();
                    assert_eq!(
                        verify(&g, &f, &p, &CheckMode::Strict).unwrap(),
                        verify(&g, &f, &q, &CheckMode::Strict).unwrap()
                    );
                }
            }
        }
    }
}
