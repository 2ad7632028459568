//! Hosts shared by the integration tests.
#![allow(dead_code)]

use twoblock::digraph::OrientedGraph;
use twoblock::embed::cases::Frame;
use twoblock::embed::{tail_into_x_case, CaseIiOutcome, CaseLabel, ProofTrace};
use twoblock::generators::{constrained_min_semidegree, ArcConstraints};
use twoblock::search::SearchBudget;

/// A tail-into-X case instance: host, the path P = 0 → 1 → … → t, the spec and
/// the pivot index i with v_t → v_i.
pub struct CaseIiFixture {
    pub g: OrientedGraph,
    pub path: Vec<usize>,
    pub k: usize,
    pub ell: usize,
    pub i: usize,
    pub expected: CaseLabel,
}

impl CaseIiFixture {
    /// Runs tail-into-X case on an uncertified frame and returns the label and trace.
    pub fn run(&self) -> (CaseLabel, ProofTrace, Option<Vec<usize>>) {
        let frame = Frame::new(&self.g, self.path.clone(), self.k, self.ell, false);
        match tail_into_x_case(&frame, self.i, &SearchBudget::default()) {
            Ok(Some(CaseIiOutcome::Paths(r))) => (r.trace.case, r.trace, None),
            Ok(Some(CaseIiOutcome::Extension { path, trace })) => (trace.case, trace, Some(path)),
            other => panic!("tail-into-X case did not fire: {other:?}"),
        }
    }
}

fn path_arcs(t: usize) -> Vec<(usize, usize)> {
    (0..t).map(|i| (i, i + 1)).collect()
}

fn build(
    n: usize,
    d: usize,
    forced: Vec<(usize, usize)>,
    forbidden: Vec<(usize, usize)>,
) -> OrientedGraph {
    let c = ArcConstraints { forced, forbidden };
    constrained_min_semidegree(n, d, &c, 0.3, 7, 500).expect("fixture constraints are satisfiable")
}

/// k = 4, ℓ = 2, i = 1: v₀ leaves P into the path 5 → 6, so P′ has an arc.
pub fn long_pprime() -> CaseIiFixture {
    let t = 4;
    let mut forced = path_arcs(t);
    forced.extend([(t, 1), (0, 5), (5, 6)]);
    CaseIiFixture {
        g: build(7, 2, forced, vec![]),
        path: (0..=t).collect(),
        k: 4,
        ell: 2,
        i: 1,
        expected: CaseLabel::PropIILongPprime,
    }
}

/// k = 4, ℓ = 2, i = 1: v₀'s only exit 5 has no way out of V(P) ∪ {5}, and
/// lands back on the cycle v₁ → v_t → v₁, which lengthens P.
pub fn extension_guard() -> CaseIiFixture {
    let t = 4;
    let mut forced = path_arcs(t);
    forced.extend([(t, 1), (0, 5)]);
    CaseIiFixture {
        g: build(7, 2, forced, vec![(5, 6), (0, 6)]),
        path: (0..=t).collect(),
        k: 4,
        ell: 2,
        i: 1,
        expected: CaseLabel::PropIICycleExtensionGuard,
    }
}

/// k = 8, ℓ = 4, i = 3: v₂ exits into the triangle 9 → 10 → 11 → 9, whose
/// far end returns only to v₀, v₁, v₂ and 9.
pub fn short_pprime() -> CaseIiFixture {
    let t = 8;
    let (w0, w1, w2) = (9, 10, 11);
    let mut forced = path_arcs(t);
    forced.extend([
        (t, 3),
        (2, w0),
        (w0, w1),
        (w1, w2),
        (w2, w0),
        (w2, 0),
        (w2, 1),
        (w2, 2),
    ]);
    let forbidden: Vec<(usize, usize)> = (3..=t).map(|j| (w2, j)).collect();
    CaseIiFixture {
        g: build(12, 4, forced, forbidden),
        path: (0..=t).collect(),
        k: 8,
        ell: 4,
        i: 3,
        expected: CaseLabel::PropIIShortPprime,
    }
}

pub fn case_ii_fixtures() -> Vec<CaseIiFixture> {
    vec![long_pprime(), short_pprime(), extension_guard()]
}
