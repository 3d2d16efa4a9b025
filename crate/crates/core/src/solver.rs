//! Exact finite-palette search for colorings passing a local problem.
//!
//! The solver assigns vertices in id order, tries colors in ascending order,
//! and tests a vertex's rule as soon as its whole ball is colored. Dead ends
//! are unwound with conflict-directed backjumping, which skips only
//! assignments that cannot lead to a solution, so the first coloring found is
//! the same one plain chronological backtracking would return.

use std::collections::BTreeSet;

use crate::ball::{ball, canonical_type, BallError, BallShape};
use crate::graph::{Coloring, StructuredGraph};
use crate::lcl::{
    ball_scopes, check_rule, count_colorings, rules, CheckMode, LclError, LocalProblem, Rule,
    RuleMemo,
};

pub const DEFAULT_ORACLE_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Coloring),
    Unsat,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    /// `{"result":"unsat"}` or `{"result":"sat","colors":{..}}`.
    pub fn to_json(&self) -> String {
        match self {
            SolveOutcome::Unsat => r#"{"result":"unsat"}"#.to_string(),
            SolveOutcome::Sat(f) => format!(
                r#"{{"result":"sat","colors":{}}}"#,
                serde_json::to_string(&f.to_doc().colors).expect("colors serialize")
            ),
        }
    }
}

struct Constraint {
    center: usize,
    rule: Rule,
    scope: Vec<usize>,
    memo: RuleMemo,
}

fn constraints(
    g: &StructuredGraph,
    p: &LocalProblem,
    k: u64,
    mode: &CheckMode,
) -> Result<Vec<Constraint>, LclError> {
    if k == 0 {
        return Err(LclError::EmptyPalette);
    }
    let rules = rules(g, p, mode)?;
    let scopes = ball_scopes(g, p.radius());
    Ok(rules
        .into_iter()
        .zip(scopes)
        .enumerate()
        .filter_map(|(center, (rule, scope))| {
            rule.map(|rule| Constraint {
                center,
                rule,
                memo: RuleMemo::new(scope.len(), k),
                scope,
            })
        })
        .collect())
}

pub fn solve_finite_palette(
    g: &StructuredGraph,
    p: &LocalProblem,
    k: u64,
    mode: &CheckMode,
) -> Result<SolveOutcome, LclError> {
    let mut cons = constraints(g, p, k, mode)?;
    if !g.is_acyclic() {
        let first = g.ids().first().cloned().unwrap_or_default();
        return Err(BallError::NotATree(first).into());
    }
    let n = g.len();
    let shapes: Vec<Option<BallShape>> = {
        let mut shapes: Vec<Option<BallShape>> = (0..n).map(|_| None).collect();
        for c in &cons {
            shapes[c.center] = Some(BallShape::from_root(g, c.center, p.radius()));
        }
        shapes
    };
    let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ci, c) in cons.iter().enumerate() {
        let last = *c.scope.last().expect("a ball contains its center");
        by_last[last].push(ci);
    }

    let mut colors = vec![0u64; n];
    let mut next = vec![0u64; n];
    let mut conflicts: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut i = 0;
    while i < n {
        let mut placed = false;
        while next[i] < k {
            colors[i] = next[i];
            next[i] += 1;
            let mut ok = true;
            for &ci in &by_last[i] {
                let c = &mut cons[ci];
                let shape = shapes[c.center]
                    .as_ref()
                    .expect("shape for every constraint");
                let pass = c
                    .memo
                    .get_or_insert(c.scope.iter().map(|&v| colors[v]), || {
                        let t = shape.canonical(g, &colors, p.radius());
                        check_rule(p, c.rule, &t)
                    });
                if !pass {
                    conflicts[i].extend(c.scope.iter().copied().filter(|&v| v != i));
                    ok = false;
                    break;
                }
            }
            if ok {
                placed = true;
                break;
            }
        }
        if placed {
            i += 1;
            if i < n {
                next[i] = 0;
                conflicts[i].clear();
            }
            continue;
        }
        let Some(&h) = conflicts[i].iter().next_back() else {
            return Ok(SolveOutcome::Unsat);
        };
        let carried: Vec<usize> = conflicts[i].iter().copied().filter(|&v| v != h).collect();
        conflicts[h].extend(carried);
        i = h;
    }
    Ok(SolveOutcome::Sat(Coloring::from_dense(g, &colors)))
}

/// Decides the instance by running through all `k^|V|` colorings in odometer
/// order (vertex 0 fastest), skipping runs that a failed constraint rules out.
pub fn exhaustive_oracle(
    g: &StructuredGraph,
    p: &LocalProblem,
    k: u64,
    mode: &CheckMode,
) -> Result<SolveOutcome, LclError> {
    exhaustive_oracle_with_cap(g, p, k, mode, DEFAULT_ORACLE_CAP)
}

pub fn exhaustive_oracle_with_cap(
    g: &StructuredGraph,
    p: &LocalProblem,
    k: u64,
    mode: &CheckMode,
    cap: u128,
) -> Result<SolveOutcome, LclError> {
    let mut cons = constraints(g, p, k, mode)?;
    let n = g.len();
    let total = count_colorings(k, n);
    if total > cap {
        return Err(LclError::InstanceTooLarge {
            colorings: total,
            cap,
        });
    }
    // A failing constraint fails for every coloring that agrees on its scope,
    // so the odometer may carry straight into the scope's lowest position.
    cons.sort_by_key(|c| std::cmp::Reverse(c.scope[0]));
    let mut colors = vec![0u64; n];
    loop {
        let mut skip_to = None;
        for c in cons.iter_mut() {
            let pass = c
                .memo
                .get_or_insert(c.scope.iter().map(|&v| colors[v]), || {
                    let f = Coloring::from_dense(g, &colors);
                    let b = ball(g, &f, g.id(c.center), p.radius()).expect("center is a vertex");
                    match canonical_type(&b) {
                        Ok(t) => check_rule(p, c.rule, &t),
                        Err(_) => false,
                    }
                });
            if !pass {
                skip_to = Some(c.scope[0]);
                break;
            }
        }
        let Some(mut pos) = skip_to else {
            return Ok(SolveOutcome::Sat(Coloring::from_dense(g, &colors)));
        };
        colors[..pos].fill(0);
        while pos < n {
            colors[pos] += 1;
            if colors[pos] < k {
                break;
            }
            colors[pos] = 0;
            pos += 1;
        }
        if pos == n {
            return Ok(SolveOutcome::Unsat);
        }
    }
}
