//! Constructive embedding of two-block paths above the semidegree threshold.
//!
//! The embedder normalizes the request to P(←ℓ, →k−ℓ) with k/2 ≤ ℓ < k,
//! reversing the host when the request is forward-first, finds a maximum
//! directed path, and runs the case dispatch in [`cases`]. Every returned
//! embedding has been verified against the original host.

pub mod cases;
pub mod trace;

use std::borrow::Cow;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::digraph::OrientedGraph;
use crate::path::{
    concat_reverse, extract_two_block, pattern_reverse_symmetry, verify_embedding, Embedding,
    HostPath, Orientation, PathError, TwoBlockSpec,
};
use crate::search::{longest_directed_path, maximal_extension, SearchBudget, SearchError};

pub use cases::{closed_path_case, end_neighbor_case, tail_into_x_case, CaseIiOutcome, CaseResult};
use cases::{large_ell_branch, small_ell_branch, Dispatch, Frame, Stuck};
pub use trace::{validate_trace, CaseLabel, IndexRange, ProofTrace, Windows, Witnesses};

/// Whether ℓ lies in the ℓ ≤ 2k/3 branch.
pub fn is_small_ell(k: usize, ell: usize) -> bool {
    3 * ell <= 2 * k
}

fn check_normalized(k: usize, ell: usize) -> Result<(), EmbedError> {
    if 2 * ell < k || ell >= k {
        return Err(EmbedError::SpecOutOfRange { k, ell });
    }
    Ok(())
}

/// The semidegree bound as an exact rational: k − ℓ/2 for ℓ ≤ 2k/3 and
/// 2k/3 above. Requires k/2 ≤ ℓ < k.
pub fn threshold(k: usize, ell: usize) -> Result<Ratio<i64>, EmbedError> {
    check_normalized(k, ell)?;
    let (k, ell) = (k as i64, ell as i64);
    Ok(if 3 * ell <= 2 * k {
        Ratio::new(2 * k - ell, 2)
    } else {
        Ratio::new(2 * k, 3)
    })
}

/// Smallest integer semidegree meeting [`threshold`].
pub fn threshold_ceil(k: usize, ell: usize) -> Result<usize, EmbedError> {
    Ok(threshold(k, ell)?.ceil().to_integer() as usize)
}

/// Integer form of `delta >= threshold(k, ell)`.
pub fn meets_threshold(k: usize, ell: usize, delta: usize) -> Result<bool, EmbedError> {
    check_normalized(k, ell)?;
    Ok(if is_small_ell(k, ell) {
        2 * delta + ell >= 2 * k
    } else {
        3 * delta >= 2 * k
    })
}

/// Block-swaps specs with ℓ < k/2 and flags forward-first specs for host
/// reversal. The returned spec is always back-first.
pub fn normalize_spec(spec: TwoBlockSpec) -> Result<(TwoBlockSpec, bool), EmbedError> {
    spec.check().map_err(|_| EmbedError::SpecOutOfRange {
        k: spec.k,
        ell: spec.ell,
    })?;
    let swapped = if 2 * spec.ell < spec.k {
        pattern_reverse_symmetry(spec)
    } else {
        spec
    };
    let needs_reversal = spec.orientation == Orientation::ForwardFirst;
    Ok((
        TwoBlockSpec {
            orientation: Orientation::BackFirst,
            ..swapped
        },
        needs_reversal,
    ))
}

/// State attached to a theorem-violation report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationReport {
    pub reason: String,
    pub spec: TwoBlockSpec,
    pub graph: crate::digraph::GraphJson,
    pub path: Vec<usize>,
    pub delta_zero: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("spec out of range: need 1 <= ell < k (k/2 <= ell after normalization), got k = {k}, ell = {ell}")]
    SpecOutOfRange { k: usize, ell: usize },
    #[error("minimum semidegree {delta_zero} is below the threshold {threshold}")]
    ThresholdNotMet {
        delta_zero: usize,
        threshold: Ratio<i64>,
    },
    #[error("THEOREM-VIOLATION: no proof case fired ({})", .0.reason)]
    CaseAnalysisExhausted(Box<ViolationReport>),
    #[error("heuristic path too weak for the case analysis: {0}")]
    HeuristicFailed(String),
    #[error("search budget exhausted")]
    BudgetExhausted,
}

impl EmbedError {
    pub fn code(&self) -> &'static str {
        match self {
            EmbedError::SpecOutOfRange { .. } => "spec_out_of_range",
            EmbedError::ThresholdNotMet { .. } => "threshold_not_met",
            EmbedError::CaseAnalysisExhausted(_) => "theorem_violation",
            EmbedError::HeuristicFailed(_) => "heuristic_failed",
            EmbedError::BudgetExhausted => "budget_exhausted",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EmbedOptions {
    pub budget: SearchBudget,
    /// Use a greedy maximal path instead of a certified maximum one.
    pub heuristic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedOutcome {
    pub embedding: Embedding,
    pub trace: ProofTrace,
}

/// Embeds `spec` into `g`, which must meet the semidegree threshold.
pub fn embed_two_block(
    g: &OrientedGraph,
    spec: TwoBlockSpec,
    options: &EmbedOptions,
) -> Result<EmbedOutcome, EmbedError> {
    let (norm, reverse) = normalize_spec(spec)?;
    let delta_zero = g.min_semidegree();
    if !meets_threshold(norm.k, norm.ell, delta_zero)? {
        return Err(EmbedError::ThresholdNotMet {
            delta_zero,
            threshold: threshold(norm.k, norm.ell)?,
        });
    }
    let work: Cow<'_, OrientedGraph> = if reverse {
        Cow::Owned(g.reverse())
    } else {
        Cow::Borrowed(g)
    };
    let work = work.as_ref();

    let mut path = if options.heuristic {
        maximal_extension(work, &HostPath::single(0)).into_vertices()
    } else {
        match longest_directed_path(work, &options.budget) {
            Ok(lp) => lp.path.into_vertices(),
            Err(SearchError::BudgetExhausted { .. }) => return Err(EmbedError::BudgetExhausted),
            Err(e) => return Err(EmbedError::HeuristicFailed(e.to_string())),
        }
    };
    let certified = !options.heuristic;
    let stuck = |reason: String, path: &[usize]| {
        if certified {
            EmbedError::CaseAnalysisExhausted(Box::new(ViolationReport {
                reason,
                spec,
                graph: g.to_json_value(),
                path: path.to_vec(),
                delta_zero,
            }))
        } else {
            EmbedError::HeuristicFailed(reason)
        }
    };

    let mut restarts = 0;
    let mut result = loop {
        let frame = Frame::new(work, path.clone(), norm.k, norm.ell, certified);
        let step = if is_small_ell(norm.k, norm.ell) {
            small_ell_branch(&frame, &options.budget)
        } else {
            large_ell_branch(&frame).map(Dispatch::Done)
        };
        match step {
            Ok(Dispatch::Done(res)) => break res,
            Ok(Dispatch::Restart { path: longer, .. }) => {
                restarts += 1;
                if restarts > g.n() {
                    return Err(stuck("restart bound exceeded".into(), &path));
                }
                let longer = HostPath::new(longer).expect("extension paths are simple");
                path = maximal_extension(work, &longer).into_vertices();
            }
            Err(Stuck::Budget(_)) => return Err(EmbedError::BudgetExhausted),
            Err(Stuck::Gate(reason)) => return Err(stuck(reason, &path)),
        }
    };

    let embedded = carve(work, &result, norm).map_err(|reason| stuck(reason, &path))?;
    let mut vertices = embedded.vertices;
    let blocks_swapped = norm.ell != spec.ell;
    if blocks_swapped {
        vertices.reverse();
    }
    let embedding = Embedding {
        pattern: spec.to_pattern(),
        vertices,
    };
    if let Err(v) = verify_embedding(g, &embedding.pattern, &embedding.vertices) {
        return Err(stuck(
            format!("mapped embedding fails verification: {v:?}"),
            &path,
        ));
    }
    let trace = &mut result.trace;
    trace.orientation = spec.orientation;
    trace.graph_reversed = reverse;
    trace.blocks_swapped = blocks_swapped;
    trace.restarts = restarts;
    debug_assert_eq!(validate_trace(g, trace), Ok(()));
    Ok(EmbedOutcome {
        embedding,
        trace: result.trace,
    })
}

fn carve(work: &OrientedGraph, res: &CaseResult, norm: TwoBlockSpec) -> Result<Embedding, String> {
    let as_path = |v: &[usize]| HostPath::new(v.to_vec()).map_err(|e: PathError| e.to_string());
    let walk = concat_reverse(&as_path(&res.p1)?, &as_path(&res.p2)?).map_err(|e| e.to_string())?;
    let emb = extract_two_block(&walk, norm).map_err(|e| e.to_string())?;
    verify_embedding(work, &emb.pattern, &emb.vertices)
        .map_err(|v| format!("carved embedding fails verification: {v:?}"))?;
    Ok(emb)
}
