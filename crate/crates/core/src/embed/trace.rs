//! Proof traces: which case produced an embedding, and with which witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::{OrientedGraph, Vertex};
use crate::path::{HostPath, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "PropI-front")]
    PropIFront,
    #[serde(rename = "PropI-back")]
    PropIBack,
    #[serde(rename = "PropII-long-Pprime")]
    PropIILongPprime,
    #[serde(rename = "PropII-cycle-extension-contradiction-guard")]
    PropIICycleExtensionGuard,
    #[serde(rename = "PropII-short-Pprime")]
    PropIIShortPprime,
    #[serde(rename = "PropIII")]
    PropIII,
    #[serde(rename = "Thm-small-ell-hamilton-S")]
    ThmSmallEllHamiltonS,
    #[serde(rename = "Thm-small-ell-Y-far")]
    ThmSmallEllYFar,
    #[serde(rename = "Thm-small-ell-Y-near")]
    ThmSmallEllYNear,
    #[serde(rename = "Thm-large-ell-Q")]
    ThmLargeEllQ,
    #[serde(rename = "Thm-large-ell-R")]
    ThmLargeEllR,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 11] = [
        CaseLabel::PropIFront,
        CaseLabel::PropIBack,
        CaseLabel::PropIILongPprime,
        CaseLabel::PropIICycleExtensionGuard,
        CaseLabel::PropIIShortPprime,
        CaseLabel::PropIII,
        CaseLabel::ThmSmallEllHamiltonS,
        CaseLabel::ThmSmallEllYFar,
        CaseLabel::ThmSmallEllYNear,
        CaseLabel::ThmLargeEllQ,
        CaseLabel::ThmLargeEllR,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::PropIFront => "PropI-front",
            CaseLabel::PropIBack => "PropI-back",
            CaseLabel::PropIILongPprime => "PropII-long-Pprime",
            CaseLabel::PropIICycleExtensionGuard => "PropII-cycle-extension-contradiction-guard",
            CaseLabel::PropIIShortPprime => "PropII-short-Pprime",
            CaseLabel::PropIII => "PropIII",
            CaseLabel::ThmSmallEllHamiltonS => "Thm-small-ell-hamilton-S",
            CaseLabel::ThmSmallEllYFar => "Thm-small-ell-Y-far",
            CaseLabel::ThmSmallEllYNear => "Thm-small-ell-Y-near",
            CaseLabel::ThmLargeEllQ => "Thm-large-ell-Q",
            CaseLabel::ThmLargeEllR => "Thm-large-ell-R",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Inclusive index range `lo..=hi` along the maximum path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRange {
    pub lo: usize,
    pub hi: usize,
}

impl IndexRange {
    pub fn new(lo: usize, hi: usize) -> Self {
        IndexRange { lo, hi }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn len(&self) -> usize {
        if self.hi < self.lo {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum Windows {
    /// ℓ ≤ 2k/3: X, Y, Z partition the path.
    SmallEll {
        x: IndexRange,
        y: IndexRange,
        z: IndexRange,
    },
    /// ℓ > 2k/3.
    LargeEll { q: IndexRange, r: IndexRange },
}

/// Witness indices. Indices refer to the maximum path, except `i` in the
/// Hamilton-cycle cases, which indexes the `cycle` listing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_star: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_star: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Hamilton cycle of G[V(P)], listed from its chosen start.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<Vertex>>,
    /// P′ = w₀ … w_m outside V(P).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_prime: Option<Vec<Vertex>>,
    /// Indices of S = {v_j : v_{j−1} ∈ N⁻(v₀) ∩ Z}.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_set: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub case: CaseLabel,
    /// Normalized spec actually embedded (always back-first, k/2 ≤ ℓ).
    pub k: usize,
    pub ell: usize,
    /// Original request orientation.
    pub orientation: Orientation,
    pub graph_reversed: bool,
    pub blocks_swapped: bool,
    /// Whether `path` was certified maximum.
    pub certified: bool,
    pub restarts: usize,
    pub delta_zero: usize,
    pub path: Vec<Vertex>,
    pub t: usize,
    pub windows: Windows,
    pub witnesses: Witnesses,
    pub p1: Vec<Vertex>,
    pub p2: Vec<Vertex>,
}

impl ProofTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace JSON serialization")
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, String> {
    v.ok_or_else(|| format!("missing witness {name}"))
}

fn check_split(
    g: &OrientedGraph,
    p1: &[Vertex],
    p2: &[Vertex],
    ell: usize,
    second: usize,
) -> Result<(usize, usize), String> {
    let a = HostPath::new(p1.to_vec()).map_err(|e| format!("P1: {e}"))?;
    let b = HostPath::new(p2.to_vec()).map_err(|e| format!("P2: {e}"))?;
    ensure!(a.is_directed_in(g), "P1 is not a directed path of the host");
    ensure!(b.is_directed_in(g), "P2 is not a directed path of the host");
    ensure!(
        a.first() == b.first(),
        "P1 and P2 start at different vertices"
    );
    ensure!(
        !p2[1..].iter().any(|v| p1.contains(v)),
        "P1 and P2 share more than their start"
    );
    let (l1, l2) = (a.length(), b.length());
    ensure!(
        (l1 >= ell && l2 >= second) || (l1 >= second && l2 >= ell),
        "block lengths ({l1}, {l2}) cannot host ({ell}, {second})"
    );
    Ok((l1, l2))
}

/// Re-checks every witness membership and length claim recorded in `trace`
/// against the original (unreversed) host graph.
pub fn validate_trace(g: &OrientedGraph, trace: &ProofTrace) -> Result<(), String> {
    let reversed;
    let work = if trace.graph_reversed {
        reversed = g.reverse();
        &reversed
    } else {
        g
    };
    let (k, ell) = (trace.k, trace.ell);
    ensure!(
        2 * ell >= k && ell < k,
        "trace spec ({k}, {ell}) is not normalized"
    );
    let a = k - ell;
    let path = &trace.path;
    let t = trace.t;
    ensure!(path.len() == t + 1, "path length does not match t");
    let host_path = HostPath::new(path.clone()).map_err(|e| format!("path: {e}"))?;
    ensure!(host_path.is_directed_in(work), "P is not a directed path");
    ensure!(
        trace.delta_zero == work.min_semidegree(),
        "recorded semidegree is wrong"
    );
    if trace.certified {
        ensure!(t >= 2 * trace.delta_zero, "maximum path shorter than 2δ⁰");
    }
    let v = |i: usize| path[i];
    let on_path = |x: Vertex| path.contains(&x);
    let in0 = |x: Vertex| work.has_arc(x, path[0]);
    let out_t = |x: Vertex| work.has_arc(path[t], x);

    // the guard records the partial split it abandoned, so only the others
    // must carry the blocks
    let (l1, l2) = if trace.case == CaseLabel::PropIICycleExtensionGuard {
        (
            trace.p1.len().saturating_sub(1),
            trace.p2.len().saturating_sub(1),
        )
    } else {
        check_split(work, &trace.p1, &trace.p2, ell, a)?
    };
    let w = &trace.witnesses;
    let small_cases = !matches!(
        trace.case,
        CaseLabel::ThmLargeEllQ | CaseLabel::ThmLargeEllR
    );

    match trace.windows {
        Windows::SmallEll { x, y, z } => {
            ensure!(small_cases, "large-ell case with small-ell windows");
            ensure!(t >= 2 * ell, "split lemma needs t >= 2ell");
            ensure!(
                x == IndexRange::new(0, a - 1)
                    && y == IndexRange::new(a, t - a)
                    && z == IndexRange::new(t - a + 1, t),
                "X/Y/Z windows are wrong"
            );
            ensure!(
                x.len() == a && z.len() == a,
                "|X| or |Z| differs from k-ell"
            );
            if trace.certified && 3 * ell <= 2 * k {
                ensure!(y.len() > ell, "|Y| < ell + 1");
            }
            ensure!(trace.delta_zero >= a, "δ⁰ < k - ell");
            let i_star_max = k as isize - (3 * ell).div_ceil(2) as isize;
            let check_i_star = || -> Result<usize, String> {
                let i_star = need(w.i_star, "i*")?;
                ensure!(
                    i_star >= 1 && (i_star as isize) <= i_star_max,
                    "i* = {i_star} outside 1..={i_star_max}"
                );
                ensure!(out_t(v(i_star)), "v_i* not an out-neighbor of v_t");
                Ok(i_star)
            };
            match trace.case {
                CaseLabel::PropIFront => {
                    let i = need(w.i, "i")?;
                    ensure!(y.contains(i) && in0(v(i)), "v_i not in N⁻(v0) ∩ Y");
                    ensure!(l1 == i && l2 == t - i, "front lengths differ from (i, t-i)");
                }
                CaseLabel::PropIBack => {
                    let (i, j) = (need(w.i, "i")?, need(w.j, "j")?);
                    ensure!(y.contains(j) && out_t(v(j)), "v_j not in N⁺(v_t) ∩ Y");
                    ensure!(z.contains(i) && in0(v(i)), "v_i not in N⁻(v0) ∩ Z");
                    ensure!(l1 == j && l2 == t - j, "back lengths differ from (j, t-j)");
                }
                CaseLabel::PropIII | CaseLabel::ThmSmallEllHamiltonS => {
                    let cycle = w.cycle.as_ref().ok_or("missing cycle")?;
                    ensure!(cycle.len() == t + 1, "cycle does not span V(P)");
                    let mut sorted_c = cycle.clone();
                    sorted_c.sort_unstable();
                    let mut sorted_p = path.clone();
                    sorted_p.sort_unstable();
                    ensure!(sorted_c == sorted_p, "cycle vertex set differs from V(P)");
                    ensure!(
                        cycle.windows(2).all(|e| work.has_arc(e[0], e[1]))
                            && work.has_arc(cycle[t], cycle[0]),
                        "cycle is not a directed Hamilton cycle of G[V(P)]"
                    );
                    let i = need(w.i, "i")?;
                    ensure!(y.contains(i), "cycle split index outside Y");
                    ensure!(
                        work.has_arc(cycle[0], cycle[i]) || work.has_arc(cycle[i], cycle[0]),
                        "split vertex not adjacent to the cycle start"
                    );
                    if trace.case == CaseLabel::PropIII {
                        ensure!(out_t(v(0)), "PropIII fired without arc (v_t, v0)");
                    } else {
                        let i_star = check_i_star()?;
                        let p = need(w.p, "p")?;
                        ensure!(z.contains(p) && z.contains(p - 1), "p or p-1 outside Z");
                        ensure!(work.has_arc(v(i_star - 1), v(p)), "v_p not in N⁺(v_i*-1)");
                        ensure!(in0(v(p - 1)), "v_(p-1) not in N⁻(v0)");
                        let s = w.s_set.as_ref().ok_or("missing S")?;
                        ensure!(s.contains(&p), "p not in S");
                        ensure!(
                            s.iter().all(|&j| z.contains(j) && in0(v(j - 1))),
                            "S has a member outside its definition"
                        );
                    }
                }
                CaseLabel::ThmSmallEllYFar | CaseLabel::ThmSmallEllYNear => {
                    let i_star = check_i_star()?;
                    let p = need(w.p, "p")?;
                    ensure!(
                        y.contains(p) && work.has_arc(v(i_star - 1), v(p)),
                        "v_p not in N⁺(v_i*-1) ∩ Y"
                    );
                    if trace.case == CaseLabel::ThmSmallEllYFar {
                        ensure!(p >= ell + i_star, "Y-far needs p >= ell + i*");
                        ensure!(l1 == t - p + 1 && l2 == p - i_star, "Y-far lengths");
                        ensure!(l1 > a && l2 >= ell, "Y-far length bounds");
                    } else {
                        ensure!(p < ell + i_star, "Y-near needs p <= ell + i* - 1");
                        let j_star = need(w.j_star, "j*")?;
                        ensure!(
                            j_star > t - a && j_star <= t - ell / 2,
                            "j* outside t-k+ell+1..=t-floor(ell/2)"
                        );
                        ensure!(in0(v(j_star)), "v_j* not in N⁻(v0)");
                        ensure!(l1 == t - j_star + p - i_star, "Y-near P1 length");
                        ensure!(l2 == i_star + j_star - p, "Y-near P2 length");
                        ensure!(l1 >= ell, "Y-near P1 shorter than ell");
                        if trace.certified {
                            ensure!(l2 >= a + 2, "Y-near P2 shorter than k-ell+2");
                        }
                    }
                }
                CaseLabel::PropIILongPprime
                | CaseLabel::PropIIShortPprime
                | CaseLabel::PropIICycleExtensionGuard => {
                    let i = need(w.i, "i")?;
                    ensure!(
                        i >= 1 && i < a && out_t(v(i)),
                        "v_i not in N⁺(v_t) ∩ (X∖{{v0}})"
                    );
                    let pp = w.p_prime.as_ref().ok_or("missing P′")?;
                    let pp_path = HostPath::new(pp.clone()).map_err(|e| format!("P′: {e}"))?;
                    ensure!(pp_path.is_directed_in(work), "P′ not directed");
                    ensure!(!pp.iter().any(|&x| on_path(x)), "P′ meets V(P)");
                    ensure!(work.has_arc(v(i - 1), pp[0]), "w0 not in N⁺(v_(i-1))");
                    let m = need(w.m, "m")?;
                    ensure!(m == pp.len() - 1, "m differs from length(P′)");
                    ensure!(l2 == t - i + 1 && l2 > ell, "length(P2) must be |C| > ell");
                    if trace.case == CaseLabel::PropIILongPprime {
                        ensure!(m + 1 >= a && l1 == m + 1, "long-P′ P1 length");
                    } else if trace.case == CaseLabel::PropIIShortPprime {
                        ensure!(m + 2 <= a, "short-P′ branch needs m <= k-ell-2");
                        let j = need(w.j, "j")?;
                        ensure!(j + 2 <= i, "j outside 0..=i-2");
                        let wm = pp[m];
                        ensure!(work.has_arc(wm, v(j)), "v_j not in N⁺(w_m)");
                        ensure!(
                            work.out_neighbors(wm).iter().all(|x| trace.p1.contains(x)),
                            "N⁺(w_m) not inside V(P1)"
                        );
                        ensure!(l1 >= trace.delta_zero, "length(P1) < δ⁰");
                    } else {
                        ensure!(
                            !trace.certified,
                            "extension guard fired on a certified maximum path"
                        );
                        ensure!(m + 2 <= a, "guard needs m <= k-ell-2");
                        let r = need(w.r, "r")?;
                        ensure!(r >= i && r <= t, "r outside i..=t");
                        ensure!(work.has_arc(pp[m], v(r)), "v_r not in N⁺(w_m)");
                    }
                }
                CaseLabel::ThmLargeEllQ | CaseLabel::ThmLargeEllR => unreachable!(),
            }
        }
        Windows::LargeEll { q, r } => {
            ensure!(!small_cases, "small-ell case with large-ell windows");
            ensure!(3 * ell > 2 * k, "large-ell branch needs ell > 2k/3");
            ensure!(
                q == IndexRange::new(a, t - ell) && r == IndexRange::new(ell, t - a),
                "Q/R windows are wrong"
            );
            ensure!(
                q.len() == t - k + 1 && r.len() == t - k + 1,
                "|Q| or |R| != t-k+1"
            );
            let i = need(w.i, "i")?;
            ensure!(in0(v(i)), "v_i not in N⁻(v0)");
            ensure!(
                l1 == i && l2 == t - i,
                "large-ell lengths differ from (i, t-i)"
            );
            if trace.case == CaseLabel::ThmLargeEllQ {
                ensure!(
                    q.contains(i) && l1 >= a && l2 >= ell,
                    "v_i ∈ Q length claims"
                );
            } else {
                ensure!(
                    r.contains(i) && l1 >= ell && l2 >= a,
                    "v_i ∈ R length claims"
                );
            }
        }
    }
    Ok(())
}
