//! The case analysis that turns a maximum directed path into a pair of
//! directed paths P₁, P₂ with a common start, such that ←P₁P₂ contains the
//! back-first two-block path.
//!
//! Every function here works on the normalized spec P(←ℓ, →k−ℓ) with
//! k/2 ≤ ℓ < k. Paths are listed by vertex, and all witness choices take
//! the smallest admissible index.

use crate::digraph::{OrientedGraph, Vertex};
use crate::search::{longest_path_from, SearchBudget, SearchError};

use super::trace::{CaseLabel, IndexRange, ProofTrace, Windows, Witnesses};

/// A proof step could not proceed. With a certified maximum path this is a
/// theorem violation; otherwise the heuristic path was too weak.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stuck {
    Gate(String),
    Budget(SearchError),
}

impl Stuck {
    fn gate(msg: impl Into<String>) -> Self {
        Stuck::Gate(msg.into())
    }
}

pub type Step<T> = Result<T, Stuck>;

/// Output of a successful case: P₁, P₂ and the trace describing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub p1: Vec<Vertex>,
    pub p2: Vec<Vertex>,
    pub trace: ProofTrace,
}

/// Outcome of the case where v_t has an out-neighbor in X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseIiOutcome {
    Paths(CaseResult),
    /// A directed path strictly longer than P. Only possible when P is not a
    /// maximum path; the caller restarts from it.
    Extension {
        path: Vec<Vertex>,
        trace: ProofTrace,
    },
}

/// The maximum path P = v₀ … v_t together with the spec and host.
pub struct Frame<'a> {
    pub g: &'a OrientedGraph,
    pub path: Vec<Vertex>,
    pos: Vec<Option<usize>>,
    pub k: usize,
    pub ell: usize,
    pub delta: usize,
    pub certified: bool,
}

impl<'a> Frame<'a> {
    pub fn new(
        g: &'a OrientedGraph,
        path: Vec<Vertex>,
        k: usize,
        ell: usize,
        certified: bool,
    ) -> Self {
        let mut pos = vec![None; g.n()];
        for (i, &v) in path.iter().enumerate() {
            pos[v] = Some(i);
        }
        Frame {
            g,
            path,
            pos,
            k,
            ell,
            delta: g.min_semidegree(),
            certified,
        }
    }

    fn relabeled(&self, path: Vec<Vertex>) -> Frame<'a> {
        Frame::new(self.g, path, self.k, self.ell, self.certified)
    }

    pub fn t(&self) -> usize {
        self.path.len() - 1
    }

    /// k − ℓ, the size of X and Z.
    fn a(&self) -> usize {
        self.k - self.ell
    }

    fn v(&self, i: usize) -> Vertex {
        self.path[i]
    }

    fn x(&self) -> IndexRange {
        IndexRange::new(0, self.a() - 1)
    }

    fn y(&self) -> IndexRange {
        IndexRange::new(self.a(), self.t() - self.a())
    }

    fn z(&self) -> IndexRange {
        IndexRange::new(self.t() - self.a() + 1, self.t())
    }

    fn seg(&self, from: usize, to: usize) -> &[Vertex] {
        &self.path[from..=to]
    }

    /// Path indices of `verts`, ascending; off-path vertices are dropped.
    fn indices(&self, verts: &[Vertex]) -> Vec<usize> {
        let mut idx: Vec<usize> = verts.iter().filter_map(|&v| self.pos[v]).collect();
        idx.sort_unstable();
        idx
    }

    fn in_v0(&self) -> Vec<usize> {
        self.indices(self.g.in_neighbors(self.v(0)))
    }

    fn out_vt(&self) -> Vec<usize> {
        self.indices(self.g.out_neighbors(self.v(self.t())))
    }

    fn small_windows(&self) -> Windows {
        Windows::SmallEll {
            x: self.x(),
            y: self.y(),
            z: self.z(),
        }
    }

    fn trace(
        &self,
        case: CaseLabel,
        windows: Windows,
        witnesses: Witnesses,
        p1: &[Vertex],
        p2: &[Vertex],
    ) -> ProofTrace {
        ProofTrace {
            case,
            k: self.k,
            ell: self.ell,
            orientation: crate::path::Orientation::BackFirst,
            graph_reversed: false,
            blocks_swapped: false,
            certified: self.certified,
            restarts: 0,
            delta_zero: self.delta,
            path: self.path.clone(),
            t: self.t(),
            windows,
            witnesses,
            p1: p1.to_vec(),
            p2: p2.to_vec(),
        }
    }

    fn result(
        &self,
        case: CaseLabel,
        witnesses: Witnesses,
        p1: Vec<Vertex>,
        p2: Vec<Vertex>,
    ) -> CaseResult {
        let trace = self.trace(case, self.small_windows(), witnesses, &p1, &p2);
        CaseResult { p1, p2, trace }
    }

    fn fits(&self, l1: usize, l2: usize) -> bool {
        let (ell, a) = (self.ell, self.a());
        (l1 >= ell && l2 >= a) || (l1 >= a && l2 >= ell)
    }

    /// Preconditions shared by the three path-splitting cases.
    fn check_prop_preconditions(&self) -> Step<()> {
        if self.t() < 2 * self.ell {
            return Err(Stuck::gate(format!(
                "split lemma needs t >= 2ell, got t = {}, ell = {}",
                self.t(),
                self.ell
            )));
        }
        if self.delta < self.a() {
            return Err(Stuck::gate("split lemma needs δ⁰ >= k - ell"));
        }
        Ok(())
    }
}

/// The front construction for a given `v_i ∈ N⁻(v₀) ∩ Y`:
/// P₁ = v_i v₀ → v_{i−1}, P₂ = v_i → v_t.
fn front_paths(f: &Frame<'_>, i: usize) -> (Vec<Vertex>, Vec<Vertex>) {
    let mut p1 = vec![f.v(i)];
    p1.extend_from_slice(f.seg(0, i - 1));
    (p1, f.seg(i, f.t()).to_vec())
}

/// Front/back case: N⁻(v₀) ∩ Y ≠ ∅ or N⁺(v_t) ∩ Y ≠ ∅.
pub fn end_neighbor_case(f: &Frame<'_>) -> Step<Option<CaseResult>> {
    f.check_prop_preconditions()?;
    let (y, z, t) = (f.y(), f.z(), f.t());
    let in0 = f.in_v0();
    if let Some(&i) = in0.iter().find(|&&i| y.contains(i)) {
        let (p1, p2) = front_paths(f, i);
        let w = Witnesses {
            i: Some(i),
            ..Witnesses::default()
        };
        return Ok(Some(f.result(CaseLabel::PropIFront, w, p1, p2)));
    }
    let Some(&j) = f.out_vt().iter().find(|&&j| y.contains(j)) else {
        return Ok(None);
    };
    // N⁻(v₀) ⊆ (X∖{v₀}) ∪ Z and δ⁰ ≥ |X| force an in-neighbor in Z
    let Some(&i) = in0.iter().find(|&&i| z.contains(i)) else {
        return Err(Stuck::gate("back case: N⁻(v0) ∩ Z is empty"));
    };
    let mut p1 = vec![f.v(i)];
    p1.extend_from_slice(f.seg(0, j - 1));
    let mut p2 = f.seg(i, t).to_vec();
    p2.extend_from_slice(f.seg(j, i - 1));
    let w = Witnesses {
        i: Some(i),
        j: Some(j),
        ..Witnesses::default()
    };
    Ok(Some(f.result(CaseLabel::PropIBack, w, p1, p2)))
}

/// Case for a given `v_i ∈ N⁺(v_t) ∩ (X∖{v₀})`. Returns
/// `None` when N⁺(v_{i−1}) ⊆ V(P).
pub fn tail_into_x_case(
    f: &Frame<'_>,
    i: usize,
    budget: &SearchBudget,
) -> Step<Option<CaseIiOutcome>> {
    f.check_prop_preconditions()?;
    let (t, a) = (f.t(), f.a());
    if i == 0 || i >= a || !f.g.has_arc(f.v(t), f.v(i)) {
        return Err(Stuck::gate(format!(
            "tail-into-X case: v_{i} not in N⁺(v_t) ∩ (X∖{{v0}})"
        )));
    }
    let prev = f.v(i - 1);
    let Some(&w0) =
        f.g.out_neighbors(prev)
            .iter()
            .find(|&&w| f.pos[w].is_none())
    else {
        return Ok(None);
    };
    let outside: Vec<Vertex> = f.g.vertices().filter(|&v| f.pos[v].is_none()).collect();
    let p_prime = longest_path_from(f.g, &outside, w0, budget)
        .map_err(Stuck::Budget)?
        .path
        .into_vertices();
    let m = p_prime.len() - 1;
    let wm = p_prime[m];
    let mut w = Witnesses {
        i: Some(i),
        m: Some(m),
        p_prime: Some(p_prime.clone()),
        ..Witnesses::default()
    };
    let p2 = f.seg(i - 1, t).to_vec();
    let mut p1 = vec![prev];
    p1.extend_from_slice(&p_prime);

    if m + 1 >= a {
        return Ok(Some(CaseIiOutcome::Paths(f.result(
            CaseLabel::PropIILongPprime,
            w,
            p1,
            p2,
        ))));
    }
    // N⁺(w_m) ⊆ V(P) ∪ V(P′) by maximality of P′; look for a landing on C = v_i → v_t v_i
    let on_cycle = f
        .indices(f.g.out_neighbors(wm))
        .into_iter()
        .find(|&r| r >= i);
    if let Some(r) = on_cycle {
        let mut longer: Vec<Vertex> = f.seg(0, i - 1).to_vec();
        longer.extend_from_slice(&p_prime);
        longer.extend_from_slice(f.seg(r, t));
        if r != i {
            longer.extend_from_slice(f.seg(i, r - 1));
        }
        if f.certified {
            return Err(Stuck::gate(format!(
                "tail-into-X case: w_m -> v_{r} extends a certified maximum path"
            )));
        }
        w.r = Some(r);
        let trace = f.trace(
            CaseLabel::PropIICycleExtensionGuard,
            f.small_windows(),
            w,
            &p1,
            &p2,
        );
        return Ok(Some(CaseIiOutcome::Extension {
            path: longer,
            trace,
        }));
    }
    let Some(j) = f
        .indices(f.g.out_neighbors(wm))
        .into_iter()
        .find(|&j| j + 2 <= i)
    else {
        return Err(Stuck::gate(
            "tail-into-X case: w_m has no out-neighbor in v0..v_(i-2)",
        ));
    };
    p1.extend_from_slice(f.seg(j, i - 2));
    w.j = Some(j);
    Ok(Some(CaseIiOutcome::Paths(f.result(
        CaseLabel::PropIIShortPprime,
        w,
        p1,
        p2,
    ))))
}

/// Split index with the two paths P₁ and P₂.
pub type Split = (usize, Vec<Vertex>, Vec<Vertex>);

/// Closed-path case on a path whose closing arc (v_t, v₀) is present,
/// i.e. whose listing is a Hamilton cycle of G[V(P)].
///
/// Candidates `v_i ∈ (N⁺(v₀) ∪ N⁻(v₀)) ∩ Y` are tried in index order; an
/// in-neighbor uses the front construction, an out-neighbor the
/// split P₁ = v₀ → v_{i−1}, P₂ = v₀ v_i → v_t. The first candidate whose two
/// lengths cover the blocks is taken.
pub fn closed_path_case(f: &Frame<'_>) -> Step<Option<Split>> {
    f.check_prop_preconditions()?;
    let t = f.t();
    if !f.g.has_arc(f.v(t), f.v(0)) {
        return Ok(None);
    }
    let y = f.y();
    let mut candidates: Vec<(usize, bool)> = f
        .indices(f.g.in_neighbors(f.v(0)))
        .into_iter()
        .map(|i| (i, true))
        .chain(
            f.indices(f.g.out_neighbors(f.v(0)))
                .into_iter()
                .map(|i| (i, false)),
        )
        .filter(|&(i, _)| y.contains(i))
        .collect();
    candidates.sort_unstable();
    for (i, incoming) in candidates {
        let (p1, p2) = if incoming {
            front_paths(f, i)
        } else {
            let mut p2 = vec![f.v(0)];
            p2.extend_from_slice(f.seg(i, t));
            (f.seg(0, i - 1).to_vec(), p2)
        };
        if f.fits(p1.len() - 1, p2.len() - 1) {
            return Ok(Some((i, p1, p2)));
        }
    }
    Err(Stuck::gate(
        "closed-path case: no neighbor of v0 in Y yields a split",
    ))
}

/// Result of the full dispatch on one maximum path.
pub enum Dispatch {
    Done(CaseResult),
    Restart {
        path: Vec<Vertex>,
        trace: ProofTrace,
    },
}

/// The ℓ ≤ 2k/3 branch.
pub fn small_ell_branch(f: &Frame<'_>, budget: &SearchBudget) -> Step<Dispatch> {
    let (k, ell, t) = (f.k, f.ell, f.t());
    let a = f.a();
    if 2 * f.delta < 2 * k - ell {
        return Err(Stuck::gate("small-ell branch needs δ⁰ >= k - ell/2"));
    }
    // δ⁰ > k − ℓ and t − ℓ ≥ ℓ
    if f.delta <= a || t < 2 * ell {
        return Err(Stuck::gate(format!(
            "small-ell preconditions fail: δ⁰ = {}, t = {t}",
            f.delta
        )));
    }
    if let Some(res) = end_neighbor_case(f)? {
        return Ok(Dispatch::Done(res));
    }
    if let Some((i, p1, p2)) = closed_path_case(f)? {
        let w = Witnesses {
            i: Some(i),
            cycle: Some(f.path.clone()),
            ..Witnesses::default()
        };
        return Ok(Dispatch::Done(f.result(CaseLabel::PropIII, w, p1, p2)));
    }
    let (x, z) = (f.x(), f.z());
    let in0 = f.in_v0();
    let out_t = f.out_vt();
    // both end neighborhoods now avoid Y, and lie on P unless P is only maximal
    if in0.len() != f.g.in_degree(f.v(0)) || out_t.len() != f.g.out_degree(f.v(t)) {
        return Err(Stuck::gate(
            "end neighborhoods leave V(P); path is not maximal",
        ));
    }
    let in_regions = in0
        .iter()
        .all(|&i| x.contains(i) || (z.contains(i) && i != t));
    let out_regions = out_t
        .iter()
        .all(|&i| (x.contains(i) && i != 0) || z.contains(i));
    if !in_regions || !out_regions {
        return Err(Stuck::gate("end neighborhoods escape X ∪ Z"));
    }

    let i_star_max = k as isize - (3 * ell).div_ceil(2) as isize;
    let Some(&i_star) = out_t
        .iter()
        .find(|&&i| i >= 1 && (i as isize) <= i_star_max)
    else {
        return Err(Stuck::gate(format!(
            "no i* in 1..={i_star_max}: deg⁺(v_t) would be below δ⁰"
        )));
    };

    match tail_into_x_case(f, i_star, budget)? {
        Some(CaseIiOutcome::Paths(mut res)) => {
            res.trace.witnesses.i_star = Some(i_star);
            return Ok(Dispatch::Done(res));
        }
        Some(CaseIiOutcome::Extension { path, trace }) => {
            return Ok(Dispatch::Restart { path, trace });
        }
        None => {}
    }

    let anchor = f.v(i_star - 1);
    let out_anchor = f.indices(f.g.out_neighbors(anchor));
    let y = f.y();
    match out_anchor.iter().copied().find(|&p| y.contains(p)) {
        None => {
            let s_set: Vec<usize> = in0
                .iter()
                .filter(|&&i| z.contains(i) && i < t)
                .map(|&i| i + 1)
                .collect();
            let Some(p) = out_anchor
                .iter()
                .copied()
                .find(|p| z.contains(*p) && s_set.contains(p))
            else {
                return Err(Stuck::gate("S ∩ N⁺(v_i*-1) ∩ Z is empty"));
            };
            let mut cycle: Vec<Vertex> = f.seg(0, i_star - 1).to_vec();
            cycle.extend_from_slice(f.seg(p, t));
            cycle.extend_from_slice(f.seg(i_star, p - 1));
            let around = f.relabeled(cycle.clone());
            let Some((i, p1, p2)) = closed_path_case(&around)? else {
                return Err(Stuck::gate("S-cycle is not closed"));
            };
            let w = Witnesses {
                i: Some(i),
                i_star: Some(i_star),
                p: Some(p),
                cycle: Some(cycle),
                s_set: Some(s_set),
                ..Witnesses::default()
            };
            Ok(Dispatch::Done(f.result(
                CaseLabel::ThmSmallEllHamiltonS,
                w,
                p1,
                p2,
            )))
        }
        Some(p) if p >= ell + i_star => {
            let mut p1 = vec![anchor];
            p1.extend_from_slice(f.seg(p, t));
            let p2 = f.seg(i_star - 1, p - 1).to_vec();
            let w = Witnesses {
                i_star: Some(i_star),
                p: Some(p),
                ..Witnesses::default()
            };
            Ok(Dispatch::Done(f.result(
                CaseLabel::ThmSmallEllYFar,
                w,
                p1,
                p2,
            )))
        }
        Some(p) => {
            let j_hi = t - ell / 2;
            let Some(&j_star) = in0.iter().find(|&&j| j > t - a && j <= j_hi) else {
                return Err(Stuck::gate(format!(
                    "no j* in {}..={j_hi}: deg⁻(v0) would be below δ⁰",
                    t - a + 1
                )));
            };
            let mut p1 = f.seg(j_star, t).to_vec();
            p1.extend_from_slice(f.seg(i_star, p - 1));
            let mut p2 = vec![f.v(j_star)];
            p2.extend_from_slice(f.seg(0, i_star - 1));
            p2.extend_from_slice(f.seg(p, j_star - 1));
            let w = Witnesses {
                i_star: Some(i_star),
                j_star: Some(j_star),
                p: Some(p),
                ..Witnesses::default()
            };
            Ok(Dispatch::Done(f.result(
                CaseLabel::ThmSmallEllYNear,
                w,
                p1,
                p2,
            )))
        }
    }
}

/// The ℓ > 2k/3 branch.
pub fn large_ell_branch(f: &Frame<'_>) -> Step<CaseResult> {
    let (k, ell, t) = (f.k, f.ell, f.t());
    let a = f.a();
    if 3 * f.delta < 2 * k {
        return Err(Stuck::gate("large-ell branch needs δ⁰ >= 2k/3"));
    }
    if t < k {
        return Err(Stuck::gate(format!(
            "large-ell branch needs t >= 4k/3, got t = {t}"
        )));
    }
    let q = IndexRange::new(a, t - ell);
    let r = IndexRange::new(ell, t - a);
    let Some(i) = f
        .in_v0()
        .into_iter()
        .find(|&i| q.contains(i) || r.contains(i))
    else {
        return Err(Stuck::gate(
            "N⁻(v0) ∩ (Q ∪ R) is empty: deg⁻(v0) below 2k/3",
        ));
    };
    let (p1, p2) = front_paths(f, i);
    let case = if r.contains(i) {
        CaseLabel::ThmLargeEllR
    } else {
        CaseLabel::ThmLargeEllQ
    };
    let w = Witnesses {
        i: Some(i),
        ..Witnesses::default()
    };
    let trace = f.trace(case, Windows::LargeEll { q, r }, w, &p1, &p2);
    Ok(CaseResult { p1, p2, trace })
}
