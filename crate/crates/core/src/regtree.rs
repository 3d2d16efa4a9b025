//! Pruned binary trees presented by deterministic automata.
//!
//! A word over {0,1} is in the tree iff the transition path from the initial
//! state along it is defined, so the presented set is prefix-closed by
//! construction. The tree is pruned iff every reachable state has an outgoing
//! transition. Membership in F (every branch has finitely many 1s) fails
//! exactly when some reachable state sits on a cycle that reads a 1.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Side, StructuredGraph, VertexKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("malformed automaton: {0}")]
    MalformedInput(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state `{0}` is reachable but has no children")]
    NotPruned(String),
    #[error("enumeration is limited to 3 states, got {0}")]
    CorpusTooLarge(usize),
}

/// A finite string of bits, ordered lexicographically with 0 < 1 (a proper
/// prefix sorts first).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(pub Vec<u8>);

impl Bits {
    pub fn new() -> Bits {
        Bits::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn push(&mut self, bit: u8) {
        self.0.push(bit);
    }

    pub fn pushed(&self, bit: u8) -> Bits {
        let mut b = self.clone();
        b.push(bit);
        b
    }

    pub fn contains_one(&self) -> bool {
        self.0.contains(&1)
    }

    pub fn prefix(&self, n: usize) -> Bits {
        Bits(self.0[..n.min(self.0.len())].to_vec())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl FromStr for Bits {
    type Err = AutomatonError;

    fn from_str(s: &str) -> Result<Bits, AutomatonError> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(AutomatonError::MalformedInput(format!(
                    "`{other}` is not a bit"
                ))),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(Bits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeAutomaton {
    names: Vec<String>,
    initial: usize,
    delta: Vec<[Option<usize>; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonDoc {
    states: Vec<String>,
    initial: String,
    delta: BTreeMap<String, BTreeMap<String, String>>,
}

impl TreeAutomaton {
    /// Builds an automaton over states `0..delta.len()` named `q0, q1, …`.
    pub fn from_table(initial: usize, delta: Vec<[Option<usize>; 2]>) -> TreeAutomaton {
        let names = (0..delta.len()).map(|i| format!("q{i}")).collect();
        TreeAutomaton {
            names,
            initial,
            delta,
        }
    }

    /// One state with both children: the full tree of all bit strings.
    pub fn full_binary() -> TreeAutomaton {
        TreeAutomaton::from_table(0, vec![[Some(0), Some(0)]])
    }

    /// One state with only a left child: the single branch 0^ω.
    pub fn zero_only() -> TreeAutomaton {
        TreeAutomaton::from_table(0, vec![[Some(0), None]])
    }

    pub fn parse_json(text: &str) -> Result<TreeAutomaton, AutomatonError> {
        let doc: AutomatonDoc = serde_json::from_str(text)
            .map_err(|e| AutomatonError::MalformedInput(e.to_string()))?;
        let mut index = HashMap::new();
        for (i, name) in doc.states.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(AutomatonError::MalformedInput(format!(
                    "duplicate state `{name}`"
                )));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| AutomatonError::UnknownState(name.to_string()))
        };
        let initial = lookup(&doc.initial)?;
        let mut delta = vec![[None, None]; doc.states.len()];
        for (from, row) in &doc.delta {
            let from = lookup(from)?;
            for (bit, to) in row {
                let bit = match bit.as_str() {
                    "0" => 0,
                    "1" => 1,
                    other => {
                        return Err(AutomatonError::MalformedInput(format!(
                            "transition key `{other}` is not a bit"
                        )))
                    }
                };
                delta[from][bit] = Some(lookup(to)?);
            }
        }
        Ok(TreeAutomaton {
            names: doc.states,
            initial,
            delta,
        })
    }

    /// Parses and checks prunedness.
    pub fn parse_pruned(text: &str) -> Result<TreeAutomaton, AutomatonError> {
        let a = TreeAutomaton::parse_json(text)?;
        a.validate_pruned()?;
        Ok(a)
    }

    pub fn to_json(&self) -> String {
        let delta = self
            .delta
            .iter()
            .enumerate()
            .filter(|(_, row)| row.iter().any(Option::is_some))
            .map(|(q, row)| {
                let row = (0..2)
                    .filter_map(|b| row[b].map(|t| (b.to_string(), self.names[t].clone())))
                    .collect();
                (self.names[q].clone(), row)
            })
            .collect();
        let doc = AutomatonDoc {
            states: self.names.clone(),
            initial: self.names[self.initial].clone(),
            delta,
        };
        serde_json::to_string(&doc).expect("automaton serializes")
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn step(&self, q: usize, bit: u8) -> Option<usize> {
        self.delta[q][bit as usize]
    }

    /// State reached along `s`, if every step is defined.
    pub fn run(&self, s: impl IntoIterator<Item = u8>) -> Option<usize> {
        s.into_iter().try_fold(self.initial, |q, b| self.step(q, b))
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.delta.len()];
        seen[self.initial] = true;
        let mut stack = vec![self.initial];
        while let Some(q) = stack.pop() {
            for t in self.delta[q].iter().flatten() {
                if !seen[*t] {
                    seen[*t] = true;
                    stack.push(*t);
                }
            }
        }
        seen
    }

    pub fn validate_pruned(&self) -> Result<(), AutomatonError> {
        let reachable = self.reachable();
        for (q, row) in self.delta.iter().enumerate() {
            if reachable[q] && row.iter().all(Option::is_none) {
                return Err(AutomatonError::NotPruned(self.names[q].clone()));
            }
        }
        Ok(())
    }

    pub fn membership(&self, s: &Bits) -> bool {
        self.run(s.iter()).is_some()
    }

    /// Accepted words of length at most `d`, shortest first, then lexicographic.
    pub fn words_up_to(&self, d: usize) -> Vec<(Bits, usize)> {
        let mut out = vec![(Bits::new(), self.initial)];
        let mut i = 0;
        while i < out.len() {
            let (s, q) = out[i].clone();
            if s.len() < d {
                for bit in 0..2 {
                    if let Some(t) = self.step(q, bit) {
                        out.push((s.pushed(bit), t));
                    }
                }
            }
            i += 1;
        }
        out
    }

    /// Canonical form: states renumbered in breadth-first order from the
    /// initial state (0 before 1), unreachable states dropped.
    pub fn canonical(&self) -> TreeAutomaton {
        let mut order = vec![self.initial];
        let mut number = vec![usize::MAX; self.delta.len()];
        number[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for t in self.delta[q].iter().flatten() {
                if number[*t] == usize::MAX {
                    number[*t] = order.len();
                    order.push(*t);
                }
            }
            i += 1;
        }
        let delta = order
            .iter()
            .map(|&q| self.delta[q].map(|t| t.map(|t| number[t])))
            .collect();
        TreeAutomaton::from_table(0, delta)
    }

    fn table_key(&self) -> Vec<u8> {
        let mut key = vec![self.delta.len() as u8];
        for row in &self.delta {
            for t in row {
                key.push(t.map_or(0, |t| t as u8 + 1));
            }
        }
        key
    }
}

/// Finite window onto the presented tree: all members of length at most `d`
/// as a rooted structured tree. Vertex ids are `t0/<bits>`.
pub fn truncate(a: &TreeAutomaton, d: usize) -> StructuredGraph {
    truncate_as(a, d, 0)
}

pub(crate) fn tree_vertex_id(tree: u8, s: &Bits) -> String {
    format!("t{tree}/{s}")
}

pub(crate) fn truncate_as(a: &TreeAutomaton, d: usize, tree: u8) -> StructuredGraph {
    let words = a.words_up_to(d);
    let vertices = words.iter().map(|(s, _)| {
        (
            tree_vertex_id(tree, s),
            VertexKind::TreeVertex {
                tree,
                root: s.is_empty(),
            },
        )
    });
    let edges = words.iter().filter(|(s, _)| !s.is_empty()).map(|(s, _)| {
        let parent = s.prefix(s.len() - 1);
        let side = Side::from_bit(s.0[s.len() - 1]);
        Edge::parent_child(tree_vertex_id(tree, &parent), tree_vertex_id(tree, s), side)
    });
    StructuredGraph::new(vertices, edges).expect("truncation is a binary tree")
}

/// An eventually periodic branch `stem · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchWitness {
    #[serde(with = "bits_string")]
    pub stem: Bits,
    #[serde(with = "bits_string")]
    pub cycle: Bits,
}

mod bits_string {
    use super::Bits;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(b: &Bits, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&b.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Bits, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl BranchWitness {
    pub fn new(stem: Bits, cycle: Bits) -> BranchWitness {
        BranchWitness { stem, cycle }
    }

    /// Bit at position `i` of `stem · cycle^ω`.
    pub fn bit(&self, i: usize) -> u8 {
        if i < self.stem.len() {
            self.stem.0[i]
        } else {
            self.cycle.0[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Checks that the cycle contains a 1 and that the whole branch stays in
    /// the tree presented by `a`.
    pub fn is_valid_for(&self, a: &TreeAutomaton) -> bool {
        if self.cycle.is_empty() || !self.cycle.contains_one() {
            return false;
        }
        let Some(q) = a.run(self.stem.iter()) else {
            return false;
        };
        // States after each repetition of the cycle repeat within
        // `state_count` steps, so that many repetitions decide the whole branch.
        let mut cur = Some(q);
        for _ in 0..=a.state_count() {
            cur = cur.and_then(|s| a.run_from(s, self.cycle.iter()));
        }
        cur.is_some()
    }
}

impl TreeAutomaton {
    pub fn run_from(&self, q: usize, s: impl IntoIterator<Item = u8>) -> Option<usize> {
        s.into_iter().try_fold(q, |q, b| self.step(q, b))
    }
}

pub fn branch_prefix(w: &BranchWitness, n: usize) -> Bits {
    Bits((0..n).map(|i| w.bit(i)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FDecision {
    InF,
    NotInF(BranchWitness),
}

impl FDecision {
    pub fn witness(&self) -> Option<&BranchWitness> {
        match self {
            FDecision::InF => None,
            FDecision::NotInF(w) => Some(w),
        }
    }

    pub fn in_f(&self) -> bool {
        matches!(self, FDecision::InF)
    }

    /// `{"kind":"in_f"}` or `{"kind":"not_in_f","stem":..,"cycle":..}`.
    pub fn to_json(&self) -> String {
        match self {
            FDecision::InF => r#"{"kind":"in_f"}"#.to_string(),
            FDecision::NotInF(w) => format!(
                r#"{{"kind":"not_in_f","stem":"{}","cycle":"{}"}}"#,
                w.stem, w.cycle
            ),
        }
    }
}

/// Lexicographically least shortest words from `start` to every state of the
/// product of the automaton with a "read a 1" flag.
fn shortest_words<const FLAGGED: bool>(
    a: &TreeAutomaton,
    start: usize,
) -> HashMap<(usize, bool), Bits> {
    let mut words: HashMap<(usize, bool), Bits> = HashMap::new();
    let mut queue = VecDeque::new();
    words.insert((start, false), Bits::new());
    queue.push_back((start, false));
    while let Some((q, flag)) = queue.pop_front() {
        let w = words[&(q, flag)].clone();
        for bit in 0..2u8 {
            if let Some(t) = a.step(q, bit) {
                let next = (t, FLAGGED && (flag || bit == 1));
                if let std::collections::hash_map::Entry::Vacant(e) = words.entry(next) {
                    e.insert(w.pushed(bit));
                    queue.push_back(next);
                }
            }
        }
    }
    words
}

/// Decides membership in F. A `NotInF` witness has the shortest stem, then
/// the shortest cycle, ties broken lexicographically (stem first).
pub fn decide_f(a: &TreeAutomaton) -> FDecision {
    let stems = shortest_words::<false>(a, a.initial);
    let mut best: Option<(usize, usize, Bits, Bits)> = None;
    for q in 0..a.state_count() {
        let Some(stem) = stems.get(&(q, false)) else {
            continue;
        };
        // A nonempty cycle through q reading a 1: first step out of q, then a
        // flagged path back.
        let mut cycle: Option<Bits> = None;
        for bit in 0..2u8 {
            let Some(t) = a.step(q, bit) else { continue };
            let back = shortest_words::<true>(a, t);
            let target = if bit == 1 {
                back.get(&(q, false))
                    .into_iter()
                    .chain(back.get(&(q, true)))
                    .min_by(|x, y| (x.len(), *x).cmp(&(y.len(), *y)))
            } else {
                back.get(&(q, true))
            };
            if let Some(rest) = target {
                let mut c = Bits(vec![bit]);
                c.0.extend_from_slice(&rest.0);
                if cycle
                    .as_ref()
                    .is_none_or(|cur| (c.len(), &c) < (cur.len(), cur))
                {
                    cycle = Some(c);
                }
            }
        }
        if let Some(cycle) = cycle {
            let cand = (stem.len(), cycle.len(), stem.clone(), cycle);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    match best {
        None => FDecision::InF,
        Some((_, _, stem, cycle)) => FDecision::NotInF(BranchWitness { stem, cycle }),
    }
}

/// All pruned automata with at most `max_states` states, every state
/// reachable, one representative per renaming class, ordered by state count
/// and then by transition table.
pub fn enumerate_automata(max_states: usize) -> Result<Vec<TreeAutomaton>, AutomatonError> {
    if max_states > 3 {
        return Err(AutomatonError::CorpusTooLarge(max_states));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 1..=max_states {
        let slots = 2 * n;
        let choices = n + 1;
        let total = choices.pow(slots as u32);
        for code in 0..total {
            let mut rest = code;
            let mut delta = vec![[None, None]; n];
            for slot in 0..slots {
                let c = rest % choices;
                rest /= choices;
                delta[slot / 2][slot % 2] = (c > 0).then(|| c - 1);
            }
            let a = TreeAutomaton::from_table(0, delta);
            if a.reachable().iter().any(|r| !r) || a.validate_pruned().is_err() {
                continue;
            }
            let canon = a.canonical();
            if seen.insert(canon.table_key()) {
                out.push(canon);
            }
        }
    }
    out.sort_by_key(TreeAutomaton::table_key);
    Ok(out)
}

impl fmt::Display for TreeAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}
