//! Oriented graphs: loop-free digraphs without anti-parallel arcs.
//!
//! Vertices are the dense integers `0..n`. Both adjacency directions are kept
//! sorted so that in-neighborhoods are as cheap to scan as out-neighborhoods.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop arc ({0}, {0})")]
    LoopArc(Vertex),
    #[error("arcs ({0}, {1}) and ({1}, {0}) form a directed 2-cycle")]
    TwoCycle(Vertex, Vertex),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(Vertex, Vertex),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

impl GraphError {
    /// Stable machine-readable code, used in CLI error output.
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::LoopArc(_) => "loop_arc",
            GraphError::TwoCycle(..) => "two_cycle",
            GraphError::DuplicateArc(..) => "duplicate_arc",
            GraphError::VertexOutOfRange { .. } => "vertex_out_of_range",
            GraphError::Json(_) => "malformed_json",
        }
    }
}

/// An immutable oriented graph with sorted out- and in-adjacency lists.
#[derive(Debug, Clone)]
pub struct OrientedGraph {
    n: usize,
    out_adj: Vec<Vec<Vertex>>,
    in_adj: Vec<Vec<Vertex>>,
    arc_count: usize,
}

impl PartialEq for OrientedGraph {
    fn eq(&self, other: &Self) -> bool {
        // adjacency lists are sorted, so list equality is arc-set equality
        self.n == other.n && self.out_adj == other.out_adj
    }
}

impl Eq for OrientedGraph {}

impl OrientedGraph {
    /// Validates and builds a graph on `n` vertices.
    pub fn new(n: usize, arcs: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for &(u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopArc(u));
            }
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateArc(u, v));
            }
            if seen.contains(&(v, u)) {
                return Err(GraphError::TwoCycle(v, u));
            }
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        // sorted (u, v) iteration keeps both list families sorted
        for &(u, v) in &seen {
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        Ok(OrientedGraph {
            n,
            out_adj,
            in_adj,
            arc_count: seen.len(),
        })
    }

    /// The graph on `n` vertices with no arcs.
    pub fn empty(n: usize) -> Self {
        OrientedGraph {
            n,
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            arc_count: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    /// N⁺(v), sorted ascending.
    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out_adj[v]
    }

    /// N⁻(v), sorted ascending.
    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.in_adj[v].len()
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.out_adj[u].binary_search(&v).is_ok()
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn arc_list(&self) -> Vec<(Vertex, Vertex)> {
        self.arcs().collect()
    }

    /// Minimum semidegree δ⁰; zero for the empty vertex set.
    pub fn min_semidegree(&self) -> usize {
        self.degree_summary().delta_zero
    }

    pub fn degree_summary(&self) -> DegreeSummary {
        let deg_out: Vec<usize> = self.out_adj.iter().map(Vec::len).collect();
        let deg_in: Vec<usize> = self.in_adj.iter().map(Vec::len).collect();
        let delta_plus = deg_out.iter().copied().min().unwrap_or(0);
        let delta_minus = deg_in.iter().copied().min().unwrap_or(0);
        DegreeSummary {
            delta_zero: delta_plus.min(delta_minus),
            deg_out,
            deg_in,
            delta_plus,
            delta_minus,
        }
    }

    /// The transpose: every arc `(u, v)` becomes `(v, u)`.
    pub fn reverse(&self) -> Self {
        OrientedGraph {
            n: self.n,
            out_adj: self.in_adj.clone(),
            in_adj: self.out_adj.clone(),
            arc_count: self.arc_count,
        }
    }

    /// G[S]. Returns the induced graph and the old-to-new label map; new
    /// labels follow the ascending order of `subset`.
    pub fn induced_subgraph(
        &self,
        subset: &[Vertex],
    ) -> Result<(OrientedGraph, Vec<Option<Vertex>>), GraphError> {
        let mut relabel = vec![None; self.n];
        let mut members: Vec<Vertex> = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        for (new, &old) in members.iter().enumerate() {
            if old >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: old,
                    n: self.n,
                });
            }
            relabel[old] = Some(new);
        }
        let arcs: Vec<(Vertex, Vertex)> = self
            .arcs()
            .filter_map(|(u, v)| Some((relabel[u]?, relabel[v]?)))
            .collect();
        let sub = OrientedGraph::new(members.len(), &arcs)?;
        Ok((sub, relabel))
    }

    pub fn to_json_value(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            arcs: self.arcs().map(|(u, v)| [u, v]).collect(),
        }
    }

    /// `{"n": .., "arcs": [[u, v], ..]}` with arcs sorted.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("graph JSON serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let raw: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        raw.into_graph()
    }

    /// Graphviz DOT with numeric ids and lexicographically sorted arcs.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph {\n");
        for v in self.vertices() {
            if self.out_degree(v) == 0 && self.in_degree(v) == 0 {
                let _ = writeln!(out, "    {v};");
            }
        }
        for (u, v) in self.arcs() {
            let _ = writeln!(out, "    {u} -> {v};");
        }
        out.push('}');
        out.push('\n');
        out
    }
}

/// Serialized form of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub arcs: Vec<[Vertex; 2]>,
}

impl GraphJson {
    pub fn into_graph(self) -> Result<OrientedGraph, GraphError> {
        let arcs: Vec<(Vertex, Vertex)> = self.arcs.iter().map(|a| (a[0], a[1])).collect();
        OrientedGraph::new(self.n, &arcs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSummary {
    pub deg_out: Vec<usize>,
    pub deg_in: Vec<usize>,
    pub delta_plus: usize,
    pub delta_minus: usize,
    pub delta_zero: usize,
}
