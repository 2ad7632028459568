//! Counterexample hunting: every orientation of the k-arc path in small
//! oriented graphs of high minimum semidegree.

use std::collections::BTreeMap;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{derive_seed, rows_to_csv, thread_pool, ExperimentError};
use crate::digraph::{OrientedGraph, Vertex};
use crate::generators::random_with_min_semidegree;
use crate::oracle::contains_all_orientations;
use crate::path::PathPattern;
use crate::search::SearchBudget;

/// Which semidegree condition a host must meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaRule {
    /// δ⁰ > k/2.
    Conjecture,
    /// δ⁰ ≥ k/2.
    Question,
    AtLeast(usize),
}

impl DeltaRule {
    pub fn min_delta(self, k: usize) -> usize {
        match self {
            DeltaRule::Conjecture => k / 2 + 1,
            DeltaRule::Question => k.div_ceil(2),
            DeltaRule::AtLeast(d) => d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum HuntMode {
    /// All labeled oriented graphs on 1..=n_max vertices.
    Exhaustive,
    /// `samples` random hosts on `n_max` vertices.
    Random { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuntConfig {
    pub n_max: usize,
    pub k: usize,
    pub rule: DeltaRule,
    pub mode: HuntMode,
    pub node_limit: u64,
    pub time_limit_secs: u64,
    pub jobs: usize,
}

impl HuntConfig {
    pub fn exhaustive(n_max: usize, k: usize, rule: DeltaRule) -> Self {
        HuntConfig {
            n_max,
            k,
            rule,
            mode: HuntMode::Exhaustive,
            node_limit: 10_000_000,
            time_limit_secs: 60,
            jobs: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HuntRow {
    pub graph_id: String,
    pub n: usize,
    pub delta_zero: usize,
    /// Space separated `u>v` arcs.
    pub arcs: String,
    pub missing: String,
    pub missing_non_antidirected: String,
    pub inconclusive: String,
    pub conjecture_candidate: bool,
    pub question_candidate: bool,
}

pub const HUNT_HEADER: [&str; 9] = [
    "graph_id",
    "n",
    "delta_zero",
    "arcs",
    "missing",
    "missing_non_antidirected",
    "inconclusive",
    "conjecture_candidate",
    "question_candidate",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HuntReport {
    pub k: usize,
    pub rule: DeltaRule,
    pub min_delta: usize,
    /// Hosts meeting the rule, per order.
    pub per_n: BTreeMap<usize, usize>,
    /// Orders skipped because 2·min_delta > n − 1.
    pub infeasible_n: Vec<usize>,
    pub graphs_checked: usize,
    pub conjecture_counterexamples: Vec<HuntRow>,
    pub question_candidates: Vec<HuntRow>,
    pub inconclusive: Vec<HuntRow>,
    #[serde(skip)]
    pub rows: Vec<HuntRow>,
}

impl HuntReport {
    pub fn to_csv(&self) -> Result<String, ExperimentError> {
        rows_to_csv(&self.rows, &HUNT_HEADER)
    }
}

/// Calls `visit` on every labeled oriented graph on `n` vertices with
/// δ⁰ ≥ `min_delta`, each exactly once. Pairs are decided in lexicographic
/// order (absent, forward, backward) and a branch is cut as soon as some
/// vertex cannot reach the bound with its undecided pairs. Returns the
/// number of graphs visited.
pub fn enumerate_oriented_graphs(
    n: usize,
    min_delta: usize,
    mut visit: impl FnMut(&OrientedGraph),
) -> usize {
    if n > 0 && 2 * min_delta > n - 1 {
        return 0;
    }
    let pairs: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    struct State {
        out: Vec<usize>,
        inn: Vec<usize>,
        undecided: Vec<usize>,
        arcs: Vec<(Vertex, Vertex)>,
        count: usize,
    }
    fn feasible(s: &State, v: Vertex, d: usize) -> bool {
        s.out[v] + s.undecided[v] >= d && s.inn[v] + s.undecided[v] >= d
    }
    fn go(
        s: &mut State,
        pairs: &[(Vertex, Vertex)],
        idx: usize,
        n: usize,
        d: usize,
        visit: &mut dyn FnMut(&OrientedGraph),
    ) {
        if idx == pairs.len() {
            s.count += 1;
            visit(&OrientedGraph::new(n, &s.arcs).expect("one arc per pair at most"));
            return;
        }
        let (u, v) = pairs[idx];
        s.undecided[u] -= 1;
        s.undecided[v] -= 1;
        for choice in 0..3 {
            let arc = match choice {
                0 => None,
                1 => Some((u, v)),
                _ => Some((v, u)),
            };
            if let Some((a, b)) = arc {
                s.out[a] += 1;
                s.inn[b] += 1;
                s.arcs.push((a, b));
            }
            if feasible(s, u, d) && feasible(s, v, d) {
                go(s, pairs, idx + 1, n, d, visit);
            }
            if let Some((a, b)) = arc {
                s.out[a] -= 1;
                s.inn[b] -= 1;
                s.arcs.pop();
            }
        }
        s.undecided[u] += 1;
        s.undecided[v] += 1;
    }
    let mut s = State {
        out: vec![0; n],
        inn: vec![0; n],
        undecided: vec![n.saturating_sub(1); n],
        arcs: Vec::new(),
        count: 0,
    };
    if (0..n).all(|v| feasible(&s, v, min_delta)) {
        go(&mut s, &pairs, 0, n, min_delta, &mut visit);
    }
    s.count
}

fn join(ps: &[PathPattern]) -> String {
    ps.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn check(g: &OrientedGraph, graph_id: String, k: usize, budget: &SearchBudget) -> HuntRow {
    let rep = contains_all_orientations(g, k, budget);
    let delta = g.min_semidegree();
    HuntRow {
        graph_id,
        n: g.n(),
        delta_zero: delta,
        arcs: g
            .arcs()
            .map(|(u, v)| format!("{u}>{v}"))
            .collect::<Vec<_>>()
            .join(" "),
        missing: join(&rep.missing),
        missing_non_antidirected: join(&rep.missing_non_antidirected),
        inconclusive: join(&rep.inconclusive),
        conjecture_candidate: 2 * delta > k && !rep.missing.is_empty(),
        question_candidate: 2 * delta >= k && !rep.missing_non_antidirected.is_empty(),
    }
}

/// Searches for hosts meeting the semidegree rule that miss some k-arc
/// orientation. Empty candidate lists mean nothing was found at this scale.
pub fn hunt(cfg: &HuntConfig) -> Result<HuntReport, ExperimentError> {
    if cfg.k == 0 || cfg.k > 16 {
        return Err(ExperimentError::Config(format!(
            "k = {} outside 1..=16",
            cfg.k
        )));
    }
    let d = cfg.rule.min_delta(cfg.k);
    let budget = SearchBudget::new(
        cfg.node_limit.max(1),
        Duration::from_secs(cfg.time_limit_secs.max(1)),
    );
    let pool = thread_pool(cfg.jobs)?;
    let mut per_n = BTreeMap::new();
    let mut infeasible_n = Vec::new();
    let mut rows = Vec::new();
    let orders: Vec<usize> = match cfg.mode {
        HuntMode::Exhaustive => {
            if cfg.n_max > 6 {
                return Err(ExperimentError::Config(
                    "exhaustive hunting is limited to n <= 6".into(),
                ));
            }
            (1..=cfg.n_max).collect()
        }
        HuntMode::Random { .. } => vec![cfg.n_max],
    };
    for n in orders {
        if 2 * d > n - 1 {
            infeasible_n.push(n);
            continue;
        }
        let graphs: Vec<OrientedGraph> = match cfg.mode {
            HuntMode::Exhaustive => {
                let mut gs = Vec::new();
                enumerate_oriented_graphs(n, d, |g| gs.push(g.clone()));
                gs
            }
            HuntMode::Random { samples, seed } => (0..samples)
                .map(|i| {
                    random_with_min_semidegree(n, d, derive_seed(seed, &[n as u64, i as u64]), 50)
                        .map_err(|e| ExperimentError::Config(e.to_string()))
                })
                .collect::<Result<_, _>>()?,
        };
        per_n.insert(n, graphs.len());
        let checked: Vec<HuntRow> = pool.install(|| {
            graphs
                .par_iter()
                .enumerate()
                .map(|(i, g)| check(g, format!("n{n}-{i:08}"), cfg.k, &budget))
                .collect()
        });
        rows.extend(checked);
    }
    let pick =
        |f: &dyn Fn(&HuntRow) -> bool| rows.iter().filter(|r| f(r)).cloned().collect::<Vec<_>>();
    Ok(HuntReport {
        k: cfg.k,
        rule: cfg.rule,
        min_delta: d,
        per_n,
        infeasible_n,
        graphs_checked: rows.len(),
        conjecture_counterexamples: pick(&|r| r.conjecture_candidate),
        question_candidates: pick(&|r| r.question_candidate),
        inconclusive: pick(&|r| !r.inconclusive.is_empty()),
        rows,
    })
}
