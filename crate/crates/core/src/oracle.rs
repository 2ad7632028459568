//! Brute-force pattern embedding: plain backtracking along the pattern.
//!
//! Deliberately unclever, since it serves as ground truth for the embedder.
//! A negative answer certifies non-containment only when `exhausted` is false.

use serde::Serialize;

use crate::digraph::{OrientedGraph, Vertex};
use crate::path::{verify_embedding, Dir, Embedding, PathPattern, TwoBlockSpec};
use crate::search::{Meter, SearchBudget};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub pattern: PathPattern,
    pub found: bool,
    pub embedding: Option<Embedding>,
    pub nodes_explored: u64,
    /// The budget ran out; `found = false` is then inconclusive.
    pub exhausted: bool,
}

impl OracleReport {
    /// Non-containment proven by a completed search.
    pub fn certified_absent(&self) -> bool {
        !self.found && !self.exhausted
    }
}

struct Backtrack<'a> {
    g: &'a OrientedGraph,
    dirs: &'a [Dir],
    used: Vec<bool>,
    stack: Vec<Vertex>,
    meter: Meter,
    exhausted: bool,
}

impl Backtrack<'_> {
    fn step_neighbors(&self, v: Vertex, d: Dir) -> &[Vertex] {
        match d {
            Dir::F => self.g.out_neighbors(v),
            Dir::B => self.g.in_neighbors(v),
        }
    }

    fn extend(&mut self) -> bool {
        if !self.meter.tick() {
            self.exhausted = true;
            return false;
        }
        let pos = self.stack.len() - 1;
        if pos == self.dirs.len() {
            return true;
        }
        let v = self.stack[pos];
        let g = self.g;
        let nbrs = match self.dirs[pos] {
            Dir::F => g.out_neighbors(v),
            Dir::B => g.in_neighbors(v),
        };
        for &w in nbrs {
            if self.used[w] {
                continue;
            }
            self.used[w] = true;
            self.stack.push(w);
            if self.extend() {
                return true;
            }
            self.stack.pop();
            self.used[w] = false;
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

/// Searches for an embedding of `pattern` in `g` by assigning pattern
/// positions left to right.
pub fn find_pattern_embedding(
    g: &OrientedGraph,
    pattern: &PathPattern,
    budget: &SearchBudget,
) -> OracleReport {
    let dirs = pattern.dirs();
    let mut bt = Backtrack {
        g,
        dirs,
        used: vec![false; g.n()],
        stack: Vec::with_capacity(dirs.len() + 1),
        meter: budget.meter(),
        exhausted: false,
    };
    // fail fast: try starts with many options for the first step
    let mut starts: Vec<Vertex> = g.vertices().collect();
    starts.sort_by_key(|&v| std::cmp::Reverse(bt.step_neighbors(v, dirs[0]).len()));
    let mut embedding = None;
    for s in starts {
        bt.used[s] = true;
        bt.stack.push(s);
        if bt.extend() {
            embedding = Some(Embedding {
                pattern: pattern.clone(),
                vertices: bt.stack.clone(),
            });
            break;
        }
        bt.stack.pop();
        bt.used[s] = false;
        if bt.exhausted {
            break;
        }
    }
    if let Some(e) = &embedding {
        debug_assert_eq!(verify_embedding(g, &e.pattern, &e.vertices), Ok(()));
    }
    OracleReport {
        pattern: pattern.clone(),
        found: embedding.is_some(),
        embedding,
        nodes_explored: bt.meter.nodes,
        exhausted: bt.exhausted,
    }
}

pub fn contains_two_block(
    g: &OrientedGraph,
    spec: TwoBlockSpec,
    budget: &SearchBudget,
) -> OracleReport {
    find_pattern_embedding(g, &spec.to_pattern(), budget)
}

/// Every k-arc direction sequence, one per class of the read-backwards
/// symmetry, in lexicographic order of the canonical representative.
pub fn orientation_classes(k: usize) -> Vec<PathPattern> {
    assert!(
        (1..=20).contains(&k),
        "orientation classes need 1 <= k <= 20"
    );
    let mut out: Vec<PathPattern> = (0u32..1 << k)
        .map(|bits| {
            let dirs = (0..k)
                .map(|i| {
                    if bits >> (k - 1 - i) & 1 == 0 {
                        Dir::B
                    } else {
                        Dir::F
                    }
                })
                .collect();
            PathPattern::new(dirs).expect("k >= 1")
        })
        .filter(|p| p.canonical() == *p)
        .collect();
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientationCheck {
    pub antidirected: bool,
    #[serde(flatten)]
    pub report: OracleReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AllOrientationsReport {
    pub k: usize,
    pub classes: Vec<OrientationCheck>,
    /// Classes certified absent.
    pub missing: Vec<PathPattern>,
    pub missing_non_antidirected: Vec<PathPattern>,
    /// Classes whose search ran out of budget.
    pub inconclusive: Vec<PathPattern>,
}

impl AllOrientationsReport {
    pub fn all_present(&self) -> bool {
        self.missing.is_empty() && self.inconclusive.is_empty()
    }
}

/// Runs the oracle on one representative of every k-arc orientation class,
/// each with its own budget.
pub fn contains_all_orientations(
    g: &OrientedGraph,
    k: usize,
    budget: &SearchBudget,
) -> AllOrientationsReport {
    let classes: Vec<OrientationCheck> = orientation_classes(k)
        .into_iter()
        .map(|p| OrientationCheck {
            antidirected: p.is_antidirected(),
            report: find_pattern_embedding(g, &p, budget),
        })
        .collect();
    let pick = |f: &dyn Fn(&OrientationCheck) -> bool| {
        classes
            .iter()
            .filter(|c| f(c))
            .map(|c| c.report.pattern.clone())
            .collect::<Vec<_>>()
    };
    AllOrientationsReport {
        k,
        missing: pick(&|c| c.report.certified_absent()),
        missing_non_antidirected: pick(&|c| c.report.certified_absent() && !c.antidirected),
        inconclusive: pick(&|c| c.report.exhausted),
        classes,
    }
}
