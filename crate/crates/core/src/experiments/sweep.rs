//! Embedder sweep over generated hosts, with oracle cross-checks.
//!
//! Every instance runs the embedder for both orientations. Rows are sorted
//! before emission, and the only nondeterministic column is `embed_micros`,
//! which is written last.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{derive_seed, rows_to_csv, thread_pool, write_file, ExperimentError};
use crate::digraph::OrientedGraph;
use crate::embed::{
    embed_two_block, is_small_ell, normalize_spec, threshold, threshold_ceil, validate_trace,
    CaseLabel, EmbedError, EmbedOptions,
};
use crate::generators::{GeneratorSpec, PlantTarget};
use crate::oracle::contains_two_block;
use crate::path::{verify_embedding, Orientation, TwoBlockSpec};
use crate::search::SearchBudget;

/// Planted hosts steered towards the deeper small-ℓ cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedBatch {
    pub k: usize,
    pub ell: usize,
    pub count: usize,
    /// Extra vertices above 2d + 1, cycled over instances.
    #[serde(default = "default_slack")]
    pub slack: Vec<usize>,
    #[serde(default = "default_planted_prune")]
    pub prune: f64,
}

fn default_slack() -> Vec<usize> {
    vec![0, 1, 2]
}

fn default_planted_prune() -> f64 {
    0.5
}

/// An explicitly specified host, run for one (k, ℓ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtraInstance {
    pub id: String,
    pub k: usize,
    pub ell: usize,
    pub graph: GeneratorSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub k_values: Vec<usize>,
    /// Explicit ℓ list; when absent every ℓ in [⌈k/2⌉, k−1] is used.
    pub ells: Option<Vec<usize>>,
    pub instances_per_pair: usize,
    /// Hosts have at most `max_n_factor · k` vertices.
    pub max_n_factor: usize,
    /// Arc-pruning probabilities for the random hosts, cycled over instances.
    pub prune_levels: Vec<f64>,
    pub planted: Vec<PlantedBatch>,
    pub extra: Vec<ExtraInstance>,
    pub seed: u64,
    pub node_limit: u64,
    pub time_limit_secs: u64,
    /// Worker threads; 0 picks the number of cores.
    pub jobs: usize,
    /// Hosts up to this order are always oracle-checked.
    pub oracle_n_cutoff: usize,
    /// Fraction of larger hosts that are oracle-checked.
    pub oracle_fraction_above: f64,
    pub csv_out: Option<PathBuf>,
    pub json_out: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            k_values: (4..=8).collect(),
            ells: None,
            instances_per_pair: 50,
            max_n_factor: 3,
            prune_levels: vec![0.0, 0.5, 1.0],
            planted: Vec::new(),
            extra: Vec::new(),
            seed: 0,
            node_limit: 200_000_000,
            time_limit_secs: 120,
            jobs: 0,
            oracle_n_cutoff: 12,
            oracle_fraction_above: 0.1,
            csv_out: None,
            json_out: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        for &k in &self.k_values {
            if k < 2 {
                return bad(format!("k = {k} is below 2"));
            }
            for ell in self.ells_for(k) {
                let spec = TwoBlockSpec::back_first(k, ell);
                if spec.is_err() || normalize_spec(spec.unwrap()).is_err() {
                    return bad(format!("(k, ell) = ({k}, {ell}) is out of range"));
                }
            }
        }
        if !self.k_values.is_empty() && self.instances_per_pair == 0 {
            return bad("instances_per_pair must be positive".into());
        }
        if self.max_n_factor == 0 || self.prune_levels.is_empty() {
            return bad("max_n_factor and prune_levels must be non-empty".into());
        }
        for b in &self.planted {
            if b.count == 0 || b.slack.is_empty() {
                return bad(format!(
                    "planted batch ({}, {}) needs count and slack",
                    b.k, b.ell
                ));
            }
        }
        if self.node_limit == 0 || self.time_limit_secs == 0 {
            return bad("budget limits must be positive".into());
        }
        Ok(())
    }

    fn ells_for(&self, k: usize) -> Vec<usize> {
        match &self.ells {
            Some(list) => list.iter().copied().filter(|&l| l < k).collect(),
            None => (k.div_ceil(2)..k).collect(),
        }
    }

    pub fn budget(&self) -> SearchBudget {
        SearchBudget::new(self.node_limit, Duration::from_secs(self.time_limit_secs))
    }
}

/// One embedder run: a host, a spec and an orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub graph_id: String,
    pub family: String,
    pub n: usize,
    pub arcs: usize,
    pub delta_zero: usize,
    pub threshold: String,
    pub k: usize,
    pub ell: usize,
    pub orientation: Orientation,
    /// embedded, threshold_not_met, theorem_violation, budget_exhausted,
    /// heuristic_failed, spec_out_of_range or generator_error.
    pub outcome: String,
    /// pass, fail or n/a.
    pub verified: String,
    pub trace: String,
    pub case_fired: String,
    pub restarts: Option<usize>,
    pub path_length: Option<usize>,
    /// Longest path length against 2δ⁰: pass, fail or n/a.
    pub jackson: String,
    /// confirmed or disagree for embedded rows; found, absent or
    /// inconclusive otherwise; skipped when not sampled.
    pub oracle: String,
    pub embed_micros: u64,
}

pub const SWEEP_HEADER: [&str; 18] = [
    "graph_id",
    "family",
    "n",
    "arcs",
    "delta_zero",
    "threshold",
    "k",
    "ell",
    "orientation",
    "outcome",
    "verified",
    "trace",
    "case_fired",
    "restarts",
    "path_length",
    "jackson",
    "oracle",
    "embed_micros",
];

impl SweepRow {
    pub fn is_violation(&self) -> bool {
        self.outcome == "theorem_violation"
            || (self.outcome == "embedded"
                && (self.verified != "pass" || self.trace != "pass" || self.oracle == "disagree"))
            || self.jackson == "fail"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdEntry {
    pub k: usize,
    pub ell: usize,
    pub threshold: String,
    pub value: f64,
    pub over_k: f64,
    pub branch: &'static str,
}

/// Exact threshold per (k, ℓ), for re-plotting the threshold curve.
pub fn threshold_table(k_values: &[usize]) -> Vec<ThresholdEntry> {
    let mut out = Vec::new();
    for &k in k_values {
        for ell in k.div_ceil(2)..k {
            let r = threshold(k, ell).expect("ell in range");
            let value = *r.numer() as f64 / *r.denom() as f64;
            out.push(ThresholdEntry {
                k,
                ell,
                threshold: r.to_string(),
                value,
                over_k: value / k as f64,
                branch: if is_small_ell(k, ell) {
                    "small-ell"
                } else {
                    "large-ell"
                },
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub rows: usize,
    pub embedded: usize,
    pub threshold_not_met: usize,
    pub theorem_violations: usize,
    pub budget_exhausted: usize,
    pub generator_errors: usize,
    pub oracle_checked: usize,
    pub oracle_disagreements: usize,
    pub trace_failures: usize,
    pub jackson_violations: usize,
    pub case_histogram: BTreeMap<String, usize>,
    pub threshold_table: Vec<ThresholdEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

impl SweepResult {
    pub fn to_csv(&self) -> Result<String, ExperimentError> {
        rows_to_csv(&self.rows, &SWEEP_HEADER)
    }

    pub fn summary_json(&self) -> Result<String, ExperimentError> {
        Ok(serde_json::to_string_pretty(&self.summary)?)
    }
}

struct WorkItem {
    graph_id: String,
    family: &'static str,
    k: usize,
    ell: usize,
    graph: GeneratorSpec,
    seed: u64,
}

fn random_items(cfg: &SweepConfig) -> Vec<WorkItem> {
    let mut items = Vec::new();
    for &k in &cfg.k_values {
        for ell in cfg.ells_for(k) {
            let norm = normalize_spec(TwoBlockSpec::back_first(k, ell).expect("validated"))
                .expect("validated")
                .0;
            let d = threshold_ceil(norm.k, norm.ell).expect("validated");
            let n_min = 2 * d + 1;
            let n_max = (cfg.max_n_factor * k).max(n_min);
            for i in 0..cfg.instances_per_pair {
                let seed = derive_seed(cfg.seed, &[k as u64, ell as u64, i as u64]);
                let n = n_min + (seed % (n_max - n_min + 1) as u64) as usize;
                let prune = cfg.prune_levels[i % cfg.prune_levels.len()];
                items.push(WorkItem {
                    graph_id: format!("k{k:02}-l{ell:02}-rand-{i:04}"),
                    family: "random-min-semidegree",
                    k,
                    ell,
                    graph: GeneratorSpec::RandomMinSemidegree {
                        n,
                        d,
                        prune,
                        seed: derive_seed(seed, &[1]),
                    },
                    seed,
                });
            }
        }
    }
    items
}

fn planted_items(cfg: &SweepConfig) -> Vec<WorkItem> {
    let mut items = Vec::new();
    for b in &cfg.planted {
        let d = match threshold_ceil(b.k, b.ell) {
            Ok(d) => d,
            Err(_) => continue,
        };
        let i_star_max = (b.k as isize - (3 * b.ell).div_ceil(2) as isize).max(0) as usize;
        let targets: Vec<PlantTarget> = PlantTarget::ALL
            .into_iter()
            .filter(|t| i_star_max >= 1 || matches!(t, PlantTarget::Back | PlantTarget::Hamilton))
            .collect();
        for i in 0..b.count {
            let seed = derive_seed(cfg.seed, &[b.k as u64, b.ell as u64, 1 << 20 | i as u64]);
            let target = targets[i % targets.len()];
            let i_star = if i_star_max == 0 {
                0
            } else {
                1 + (i / targets.len()) % i_star_max
            };
            let n = (2 * d + 1 + b.slack[i % b.slack.len()]).max(2 * b.k - b.ell + 1);
            items.push(WorkItem {
                graph_id: format!("k{:02}-l{:02}-plant-{i:04}", b.k, b.ell),
                family: "planted",
                k: b.k,
                ell: b.ell,
                graph: GeneratorSpec::Planted {
                    n,
                    k: b.k,
                    ell: b.ell,
                    d,
                    target,
                    i_star,
                    prune: b.prune,
                    seed: derive_seed(seed, &[1]),
                },
                seed,
            });
        }
    }
    items
}

fn extra_items(cfg: &SweepConfig) -> Vec<WorkItem> {
    cfg.extra
        .iter()
        .enumerate()
        .map(|(i, e)| WorkItem {
            graph_id: format!("extra-{i:04}-{}", e.id),
            family: "explicit",
            k: e.k,
            ell: e.ell,
            graph: e.graph.clone(),
            seed: derive_seed(cfg.seed, &[u64::MAX, i as u64]),
        })
        .collect()
}

fn na() -> String {
    "n/a".into()
}

fn oracle_sampled(cfg: &SweepConfig, n: usize, seed: u64) -> bool {
    n <= cfg.oracle_n_cutoff
        || (derive_seed(seed, &[2]) as f64 / u64::MAX as f64) < cfg.oracle_fraction_above
}

fn run_item(cfg: &SweepConfig, item: &WorkItem, budget: &SearchBudget) -> Vec<SweepRow> {
    let base = |g: Option<&OrientedGraph>, orientation| SweepRow {
        graph_id: item.graph_id.clone(),
        family: item.family.to_string(),
        n: g.map_or(0, |g| g.n()),
        arcs: g.map_or(0, |g| g.arc_count()),
        delta_zero: g.map_or(0, |g| g.min_semidegree()),
        threshold: normalize_spec(TwoBlockSpec {
            k: item.k,
            ell: item.ell,
            orientation,
        })
        .ok()
        .and_then(|(s, _)| threshold(s.k, s.ell).ok())
        .map_or_else(na, |t| t.to_string()),
        k: item.k,
        ell: item.ell,
        orientation,
        outcome: String::new(),
        verified: na(),
        trace: na(),
        case_fired: na(),
        restarts: None,
        path_length: None,
        jackson: na(),
        oracle: "skipped".into(),
        embed_micros: 0,
    };
    let orientations = [Orientation::BackFirst, Orientation::ForwardFirst];
    let g = match item.graph.build() {
        Ok(g) => g,
        Err(e) => {
            return orientations
                .into_iter()
                .map(|o| SweepRow {
                    outcome: "generator_error".into(),
                    case_fired: e.to_string(),
                    ..base(None, o)
                })
                .collect()
        }
    };
    let options = EmbedOptions {
        budget: *budget,
        heuristic: false,
    };
    let check_oracle = oracle_sampled(cfg, g.n(), item.seed);
    orientations
        .into_iter()
        .map(|o| {
            let mut row = base(Some(&g), o);
            let spec = match TwoBlockSpec::new(item.k, item.ell, o) {
                Ok(s) => s,
                Err(_) => {
                    row.outcome = "spec_out_of_range".into();
                    return row;
                }
            };
            let started = Instant::now();
            let res = embed_two_block(&g, spec, &options);
            row.embed_micros = started.elapsed().as_micros() as u64;
            match res {
                Ok(out) => {
                    row.outcome = "embedded".into();
                    let ok = verify_embedding(&g, &out.embedding.pattern, &out.embedding.vertices);
                    row.verified = if ok.is_ok() { "pass" } else { "fail" }.into();
                    row.trace = if validate_trace(&g, &out.trace).is_ok() {
                        "pass"
                    } else {
                        "fail"
                    }
                    .into();
                    row.case_fired = out.trace.case.to_string();
                    row.restarts = Some(out.trace.restarts);
                    row.path_length = Some(out.trace.t);
                    row.jackson = if out.trace.t >= 2 * row.delta_zero {
                        "pass"
                    } else {
                        "fail"
                    }
                    .into();
                }
                Err(e) => {
                    row.outcome = match &e {
                        EmbedError::CaseAnalysisExhausted(_) => "theorem_violation",
                        other => other.code(),
                    }
                    .into();
                    if matches!(e, EmbedError::CaseAnalysisExhausted(_)) {
                        row.case_fired = e.to_string();
                    }
                }
            }
            if check_oracle {
                let r = contains_two_block(&g, spec, budget);
                row.oracle = match (row.outcome.as_str(), r.found, r.exhausted) {
                    ("embedded", true, _) => "confirmed",
                    ("embedded", false, false) => "disagree",
                    (_, _, true) if !r.found => "inconclusive",
                    (_, true, _) => "found",
                    _ => "absent",
                }
                .into();
            }
            row
        })
        .collect()
}

fn summarize(cfg: &SweepConfig, instances: usize, rows: &[SweepRow]) -> SweepSummary {
    let count = |f: &dyn Fn(&SweepRow) -> bool| rows.iter().filter(|r| f(r)).count();
    let mut case_histogram: BTreeMap<String, usize> =
        CaseLabel::ALL.iter().map(|c| (c.to_string(), 0)).collect();
    for r in rows.iter().filter(|r| r.outcome == "embedded") {
        *case_histogram.entry(r.case_fired.clone()).or_default() += 1;
    }
    let mut ks: Vec<usize> = cfg
        .k_values
        .iter()
        .copied()
        .chain(cfg.planted.iter().map(|b| b.k))
        .collect();
    ks.sort_unstable();
    ks.dedup();
    SweepSummary {
        instances,
        rows: rows.len(),
        embedded: count(&|r| r.outcome == "embedded"),
        threshold_not_met: count(&|r| r.outcome == "threshold_not_met"),
        theorem_violations: count(&|r| r.is_violation()),
        budget_exhausted: count(&|r| r.outcome == "budget_exhausted"),
        generator_errors: count(&|r| r.outcome == "generator_error"),
        oracle_checked: count(&|r| r.oracle != "skipped"),
        oracle_disagreements: count(&|r| r.oracle == "disagree"),
        trace_failures: count(&|r| r.trace == "fail"),
        jackson_violations: count(&|r| r.jackson == "fail"),
        case_histogram,
        threshold_table: threshold_table(&ks),
    }
}

/// Runs the sweep described by `cfg` and writes the configured outputs.
/// Per-row failures are recorded, never raised.
pub fn verify_theorem(cfg: &SweepConfig) -> Result<SweepResult, ExperimentError> {
    cfg.validate()?;
    let budget = cfg.budget();
    let mut items = random_items(cfg);
    items.extend(planted_items(cfg));
    items.extend(extra_items(cfg));
    let pool = thread_pool(cfg.jobs)?;
    let mut rows: Vec<SweepRow> = pool.install(|| {
        items
            .par_iter()
            .flat_map_iter(|it| run_item(cfg, it, &budget))
            .collect()
    });
    rows.sort_by(|a, b| (&a.graph_id, a.orientation).cmp(&(&b.graph_id, b.orientation)));
    let result = SweepResult {
        summary: summarize(cfg, items.len(), &rows),
        rows,
    };
    if let Some(p) = &cfg.csv_out {
        write_file(p, &result.to_csv()?)?;
    }
    if let Some(p) = &cfg.json_out {
        write_file(p, &result.summary_json()?)?;
    }
    Ok(result)
}

/// Drops the named column from CSV text, for comparisons that must ignore
/// timings.
pub fn strip_csv_column(csv_text: &str, column: &str) -> Result<String, ExperimentError> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = r.headers()?.clone();
    let keep: Vec<usize> = (0..headers.len())
        .filter(|&i| &headers[i] != column)
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(keep.iter().map(|&i| &headers[i]))?;
    for rec in r.records() {
        let rec = rec?;
        w.write_record(keep.iter().map(|&i| &rec[i]))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| ExperimentError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SweepConfig {
        SweepConfig {
            k_values: vec![4, 5],
            instances_per_pair: 3,
            jobs: 2,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn empty_sweep_is_empty() {
        let cfg = SweepConfig {
            k_values: vec![],
            ..SweepConfig::default()
        };
        let res = verify_theorem(&cfg).unwrap();
        assert!(res.rows.is_empty());
        assert_eq!(res.summary.theorem_violations, 0);
        assert!(res.to_csv().unwrap().starts_with("graph_id,family,n,"));
    }

    #[test]
    fn small_sweep_is_clean_and_deterministic() {
        let a = verify_theorem(&small_config()).unwrap();
        // (4: ell 2,3) + (5: ell 3,4) = 4 pairs, 3 instances, 2 orientations
        assert_eq!(a.rows.len(), 24);
        assert_eq!(a.summary.embedded, 24);
        assert_eq!(a.summary.theorem_violations, 0);
        let b = verify_theorem(&SweepConfig {
            jobs: 1,
            ..small_config()
        })
        .unwrap();
        assert_eq!(
            strip_csv_column(&a.to_csv().unwrap(), "embed_micros").unwrap(),
            strip_csv_column(&b.to_csv().unwrap(), "embed_micros").unwrap()
        );
    }

    #[test]
    fn below_threshold_instance_is_not_a_violation() {
        let cfg = SweepConfig {
            k_values: vec![],
            extra: vec![ExtraInstance {
                id: "sparse".into(),
                k: 6,
                ell: 3,
                graph: GeneratorSpec::RandomOriented {
                    n: 8,
                    arc_prob: 0.3,
                    seed: 5,
                },
            }],
            ..SweepConfig::default()
        };
        let res = verify_theorem(&cfg).unwrap();
        assert_eq!(res.rows.len(), 2);
        assert!(res.rows.iter().all(|r| r.outcome == "threshold_not_met"));
        assert_eq!(res.summary.theorem_violations, 0);
    }

    #[test]
    fn threshold_table_anchors() {
        let t = threshold_table(&[6]);
        let at = |ell| t.iter().find(|e| e.ell == ell).unwrap().threshold.clone();
        assert_eq!(at(3), "9/2");
        assert_eq!(at(4), "4");
        assert_eq!(at(5), "4");
    }

    #[test]
    fn invalid_configs_rejected() {
        let cfg = SweepConfig {
            k_values: vec![1],
            ..SweepConfig::default()
        };
        assert!(verify_theorem(&cfg).is_err());
        let cfg = SweepConfig {
            instances_per_pair: 0,
            ..SweepConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
