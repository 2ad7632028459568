//! Exact longest directed path search for desk-scale oriented graphs.
//!
//! Depth-first branch and bound over simple paths. Visited sets are `u128`
//! bitmasks, so exact search is limited to graphs with at most 128 vertices.
//! A branch is cut when the vertices still reachable from the endpoint
//! through unvisited vertices cannot lift it strictly above the incumbent.
//!
//! Starts and neighbors are tried in ascending order and the incumbent only
//! changes on strict improvement, so the returned path is the
//! lexicographically smallest among all maximum paths.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{OrientedGraph, Vertex};
use crate::path::HostPath;

pub const MAX_EXACT_VERTICES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub node_limit: u64,
    pub time_limit: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            node_limit: 200_000_000,
            time_limit: Duration::from_secs(120),
        }
    }
}

impl SearchBudget {
    pub fn new(node_limit: u64, time_limit: Duration) -> Self {
        assert!(node_limit > 0, "node limit must be positive");
        assert!(!time_limit.is_zero(), "time limit must be positive");
        SearchBudget {
            node_limit,
            time_limit,
        }
    }

    pub(crate) fn meter(&self) -> Meter {
        Meter {
            nodes: 0,
            node_limit: self.node_limit,
            deadline: Instant::now() + self.time_limit,
        }
    }
}

/// Node and clock accounting for one search invocation.
#[derive(Debug)]
pub(crate) struct Meter {
    pub nodes: u64,
    node_limit: u64,
    deadline: Instant,
}

impl Meter {
    /// Counts one node; false once either limit is hit.
    pub fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return false;
        }
        if self.nodes.is_multiple_of(4096) && Instant::now() > self.deadline {
            return false;
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted {
        /// Best path found so far: a lower bound, not certified.
        best: Option<HostPath>,
        nodes: u64,
    },
    #[error("exact search supports at most {MAX_EXACT_VERTICES} vertices, graph has {0}")]
    GraphTooLarge(usize),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("start vertex {0} is not in the allowed set")]
    StartNotAllowed(Vertex),
}

/// A certified maximum path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongestPath {
    pub path: HostPath,
    pub nodes: u64,
}

type Mask = u128;

fn bit(v: Vertex) -> Mask {
    1 << v
}

struct Searcher<'a> {
    g: &'a OrientedGraph,
    out_masks: Vec<Mask>,
    allowed: Mask,
    stack: Vec<Vertex>,
    best: Option<Vec<Vertex>>,
    /// Length at which no longer path can exist; reaching it ends the search.
    ceiling: usize,
    meter: Meter,
    exhausted: bool,
    done: bool,
}

impl<'a> Searcher<'a> {
    fn new(g: &'a OrientedGraph, allowed: Mask, ceiling: usize, budget: &SearchBudget) -> Self {
        let out_masks = g
            .vertices()
            .map(|v| g.out_neighbors(v).iter().fold(0, |m, &w| m | bit(w)))
            .collect();
        Searcher {
            g,
            out_masks,
            allowed,
            stack: Vec::new(),
            best: None,
            ceiling,
            meter: budget.meter(),
            exhausted: false,
            done: false,
        }
    }

    fn best_len(&self) -> Option<usize> {
        self.best.as_ref().map(|b| b.len() - 1)
    }

    /// Vertices reachable from `v` using only vertices of `avail`.
    fn reach(&self, v: Vertex, avail: Mask) -> u32 {
        let mut seen = self.out_masks[v] & avail;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let u = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.out_masks[u];
            }
            next &= avail & !seen;
            seen |= next;
            frontier = next;
        }
        seen.count_ones()
    }

    fn run_from(&mut self, start: Vertex) {
        self.stack.clear();
        self.stack.push(start);
        self.dfs(start, bit(start));
    }

    fn dfs(&mut self, v: Vertex, visited: Mask) {
        if !self.meter.tick() {
            self.exhausted = true;
            self.done = true;
            return;
        }
        let len = self.stack.len() - 1;
        if self.best_len().is_none_or(|b| len > b) {
            self.best = Some(self.stack.clone());
            if len >= self.ceiling {
                self.done = true;
                return;
            }
        }
        let avail = self.allowed & !visited;
        let candidates = self.out_masks[v] & avail;
        if candidates == 0 {
            return;
        }
        if let Some(b) = self.best_len() {
            if len + self.reach(v, avail) as usize <= b {
                return;
            }
        }
        for &w in self.g.out_neighbors(v) {
            if candidates & bit(w) == 0 {
                continue;
            }
            self.stack.push(w);
            self.dfs(w, visited | bit(w));
            self.stack.pop();
            if self.done {
                return;
            }
        }
    }

    fn finish(self) -> Result<LongestPath, SearchError> {
        let best = self
            .best
            .map(|b| HostPath::new(b).expect("search paths are simple"));
        if self.exhausted {
            return Err(SearchError::BudgetExhausted {
                best,
                nodes: self.meter.nodes,
            });
        }
        Ok(LongestPath {
            path: best.expect("search from a vertex always records a path"),
            nodes: self.meter.nodes,
        })
    }
}

fn check_size(g: &OrientedGraph) -> Result<(), SearchError> {
    if g.n() == 0 {
        return Err(SearchError::EmptyGraph);
    }
    if g.n() > MAX_EXACT_VERTICES {
        return Err(SearchError::GraphTooLarge(g.n()));
    }
    Ok(())
}

/// A maximum-length directed path of `g`, certified exact.
pub fn longest_directed_path(
    g: &OrientedGraph,
    budget: &SearchBudget,
) -> Result<LongestPath, SearchError> {
    check_size(g)?;
    let all: Mask = if g.n() == MAX_EXACT_VERTICES {
        Mask::MAX
    } else {
        bit(g.n()) - 1
    };
    let mut s = Searcher::new(g, all, g.n() - 1, budget);
    for start in g.vertices() {
        s.run_from(start);
        if s.done {
            break;
        }
    }
    s.finish()
}

/// A maximum-length directed path of `G[allowed]` starting at `start`.
pub fn longest_path_from(
    g: &OrientedGraph,
    allowed: &[Vertex],
    start: Vertex,
    budget: &SearchBudget,
) -> Result<LongestPath, SearchError> {
    check_size(g)?;
    let mask = allowed
        .iter()
        .filter(|&&v| v < g.n())
        .fold(0, |m, &v| m | bit(v));
    if start >= g.n() || mask & bit(start) == 0 {
        return Err(SearchError::StartNotAllowed(start));
    }
    let mut s = Searcher::new(g, mask, 0, budget);
    s.ceiling = s.reach(start, mask & !bit(start)) as usize;
    s.run_from(start);
    s.finish()
}

/// Greedily grows `path` at both ends until N⁻(first) and N⁺(last) lie on
/// it. The result is maximal, not necessarily maximum.
pub fn maximal_extension(g: &OrientedGraph, path: &HostPath) -> HostPath {
    let mut on_path = vec![false; g.n()];
    for &v in path.vertices() {
        on_path[v] = true;
    }
    let mut verts: std::collections::VecDeque<Vertex> = path.vertices().iter().copied().collect();
    loop {
        let last = *verts.back().expect("non-empty");
        if let Some(&w) = g.out_neighbors(last).iter().find(|&&w| !on_path[w]) {
            on_path[w] = true;
            verts.push_back(w);
            continue;
        }
        let first = *verts.front().expect("non-empty");
        if let Some(&u) = g.in_neighbors(first).iter().find(|&&u| !on_path[u]) {
            on_path[u] = true;
            verts.push_front(u);
            continue;
        }
        break;
    }
    HostPath::new(verts.into_iter().collect()).expect("extension keeps the path simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> OrientedGraph {
        OrientedGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn dipath(n: usize) -> OrientedGraph {
        let arcs: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        OrientedGraph::new(n, &arcs).unwrap()
    }

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn triangle_longest_is_two_arcs() {
        let p = longest_directed_path(&triangle(), &budget()).unwrap().path;
        assert_eq!(p.vertices(), &[0, 1, 2]);
    }

    #[test]
    fn arcless_graph_gives_single_vertex() {
        let p = longest_directed_path(&OrientedGraph::empty(4), &budget())
            .unwrap()
            .path;
        assert_eq!(p.vertices(), &[0]);
        assert_eq!(
            longest_directed_path(&OrientedGraph::empty(0), &budget()),
            Err(SearchError::EmptyGraph)
        );
    }

    #[test]
    fn lexicographic_tie_break() {
        // two maximum paths: 1 -> 2 -> 3 and 0 -> 2 -> 3; expect the smaller one
        let g = OrientedGraph::new(4, &[(1, 2), (0, 2), (2, 3)]).unwrap();
        let p = longest_directed_path(&g, &budget()).unwrap().path;
        assert_eq!(p.vertices(), &[0, 2, 3]);
    }

    #[test]
    fn restricted_search_from_start() {
        let p = longest_path_from(&triangle(), &[0, 1], 0, &budget())
            .unwrap()
            .path;
        assert_eq!(p.vertices(), &[0, 1]);
        let p = longest_path_from(&triangle(), &[2], 2, &budget())
            .unwrap()
            .path;
        assert_eq!(p.vertices(), &[2]);
        let p = longest_path_from(&dipath(4), &[0, 1, 2, 3], 1, &budget())
            .unwrap()
            .path;
        assert_eq!(p.vertices(), &[1, 2, 3]);
        assert_eq!(
            longest_path_from(&triangle(), &[0, 1], 2, &budget()),
            Err(SearchError::StartNotAllowed(2))
        );
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let arcs: Vec<_> = (0..12)
            .flat_map(|i| (1..=5).map(move |s| (i, (i + s) % 12)))
            .collect();
        // a non-Hamiltonian host keeps the search from stopping early
        let mut g_arcs = arcs.clone();
        g_arcs.retain(|&(u, v)| u != 11 && v != 11);
        let g = OrientedGraph::new(12, &g_arcs).unwrap();
        let tiny = SearchBudget::new(5, Duration::from_secs(10));
        match longest_directed_path(&g, &tiny) {
            Err(SearchError::BudgetExhausted { best, nodes }) => {
                assert!(best.is_some());
                assert!(nodes > 5);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn maximal_extension_cases() {
        let p = maximal_extension(&triangle(), &HostPath::single(0));
        assert_eq!(p.length(), 2);
        let full = HostPath::new(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(maximal_extension(&dipath(4), &full), full);
        let mid = HostPath::new(vec![1, 2]).unwrap();
        assert_eq!(maximal_extension(&dipath(4), &mid), full);
    }
}
