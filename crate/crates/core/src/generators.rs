//! Instance generators: the extremal constructions, random oriented graphs,
//! and random graphs with a guaranteed minimum semidegree.
//!
//! All randomness goes through a seeded `ChaCha8Rng`, so outputs are
//! reproducible across platforms for a fixed seed.

use std::collections::VecDeque;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{OrientedGraph, Vertex};
use crate::embed::is_small_ell;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("regular tournaments need an odd order >= 3, got {0}")]
    EvenOrder(usize),
    #[error("no oriented graph on {n} vertices has minimum semidegree {d}")]
    Unsatisfiable { n: usize, d: usize },
    #[error("gave up after {0} attempts")]
    AttemptsExhausted(usize),
    #[error("invalid generator parameters: {0}")]
    Invalid(String),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Circulant oriented graph: `i -> i + s (mod n)` for every offset `s`.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<OrientedGraph, GenError> {
    let mut arcs = Vec::new();
    for i in 0..n {
        for &s in offsets {
            if s % n == 0 {
                return Err(GenError::Invalid(format!("offset {s} is 0 mod {n}")));
            }
            arcs.push((i, (i + s) % n));
        }
    }
    OrientedGraph::new(n, &arcs).map_err(|e| GenError::Invalid(e.to_string()))
}

/// The circulant regular tournament: `i -> i+1, .., i+(n-1)/2 (mod n)`.
pub fn regular_tournament(n: usize) -> Result<OrientedGraph, GenError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(GenError::EvenOrder(n));
    }
    let offsets: Vec<usize> = (1..=(n - 1) / 2).collect();
    circulant(n, &offsets)
}

pub fn directed_triangle() -> OrientedGraph {
    regular_tournament(3).expect("3 is odd")
}

/// Replaces every vertex by `m` independent copies; each arc becomes the
/// `m²` arcs between the copy sets. Copy `c` of vertex `v` is `v * m + c`.
pub fn blowup(g: &OrientedGraph, m: usize) -> Result<OrientedGraph, GenError> {
    if m == 0 {
        return Err(GenError::Invalid("blowup part size must be >= 1".into()));
    }
    let mut arcs = Vec::with_capacity(g.arc_count() * m * m);
    for (u, v) in g.arcs() {
        for a in 0..m {
            for b in 0..m {
                arcs.push((u * m + a, v * m + b));
            }
        }
    }
    OrientedGraph::new(g.n() * m, &arcs).map_err(|e| GenError::Invalid(e.to_string()))
}

/// Each unordered pair gets an arc with probability `arc_prob`, oriented by
/// a fair coin.
pub fn random_oriented_graph(n: usize, arc_prob: f64, seed: u64) -> OrientedGraph {
    let p = arc_prob.clamp(0.0, 1.0);
    let mut r = rng(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random_bool(p) {
                arcs.push(if r.random_bool(0.5) { (u, v) } else { (v, u) });
            }
        }
    }
    OrientedGraph::new(n, &arcs).expect("one arc per pair")
}

pub fn random_tournament(n: usize, seed: u64) -> OrientedGraph {
    random_oriented_graph(n, 1.0, seed)
}

/// Restrictions on a random orientation: arcs that must be present and
/// arcs that must be absent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcConstraints {
    pub forced: Vec<(Vertex, Vertex)>,
    pub forbidden: Vec<(Vertex, Vertex)>,
}

/// Mutable orientation state used by the constrained sampler.
struct Orientation {
    n: usize,
    arc: Vec<Vec<bool>>,
    allowed: Vec<Vec<bool>>,
    forced: Vec<Vec<bool>>,
    out: Vec<usize>,
    inn: Vec<usize>,
}

impl Orientation {
    fn set(&mut self, u: Vertex, v: Vertex) {
        debug_assert!(!self.arc[u][v] && !self.arc[v][u]);
        self.arc[u][v] = true;
        self.out[u] += 1;
        self.inn[v] += 1;
    }

    fn unset(&mut self, u: Vertex, v: Vertex) {
        debug_assert!(self.arc[u][v]);
        self.arc[u][v] = false;
        self.out[u] -= 1;
        self.inn[v] -= 1;
    }

    fn flippable(&self, u: Vertex, v: Vertex) -> bool {
        self.arc[u][v] && !self.forced[u][v] && self.allowed[v][u]
    }

    fn deficit(&self, d: usize) -> usize {
        (0..self.n)
            .map(|v| d.saturating_sub(self.out[v]) + d.saturating_sub(self.inn[v]))
            .sum()
    }

    /// Raises out(v) by one: adds an arc from an empty pair, or reverses a
    /// directed path `w ⇝ v` whose start has out-degree to spare.
    fn raise_out(&mut self, v: Vertex, d: usize, r: &mut ChaCha8Rng) -> bool {
        let free: Vec<Vertex> = (0..self.n)
            .filter(|&u| u != v && !self.arc[u][v] && !self.arc[v][u] && self.allowed[v][u])
            .collect();
        if let Some(&u) = free.choose(r) {
            self.set(v, u);
            return true;
        }
        if self.inn[v] <= d {
            return false;
        }
        // BFS backwards over flippable arcs x -> y
        let mut parent = vec![usize::MAX; self.n];
        parent[v] = v;
        let mut queue = VecDeque::from([v]);
        let mut order: Vec<Vertex> = (0..self.n).collect();
        while let Some(y) = queue.pop_front() {
            order.shuffle(r);
            for &x in &order {
                if parent[x] != usize::MAX || !self.flippable(x, y) {
                    continue;
                }
                parent[x] = y;
                if self.out[x] > d {
                    let mut cur = x;
                    while cur != v {
                        let next = parent[cur];
                        self.unset(cur, next);
                        self.set(next, cur);
                        cur = next;
                    }
                    return true;
                }
                queue.push_back(x);
            }
        }
        false
    }

    fn transpose(&mut self) {
        for u in 0..self.n {
            for v in u + 1..self.n {
                let t = self.arc[u][v];
                self.arc[u][v] = self.arc[v][u];
                self.arc[v][u] = t;
                let t = self.allowed[u][v];
                self.allowed[u][v] = self.allowed[v][u];
                self.allowed[v][u] = t;
                let t = self.forced[u][v];
                self.forced[u][v] = self.forced[v][u];
                self.forced[v][u] = t;
            }
        }
        std::mem::swap(&mut self.out, &mut self.inn);
    }

    fn to_graph(&self) -> OrientedGraph {
        let mut arcs = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if self.arc[u][v] {
                    arcs.push((u, v));
                }
            }
        }
        OrientedGraph::new(self.n, &arcs).expect("orientation state is oriented")
    }
}

/// Random orientation meeting `constraints` with minimum semidegree at least
/// `d`. Starts from a random orientation of every pair that allows an arc,
/// repairs degree deficits by path reversal, then removes each removable
/// unforced arc with probability `prune`.
pub fn constrained_min_semidegree(
    n: usize,
    d: usize,
    constraints: &ArcConstraints,
    prune: f64,
    seed: u64,
    max_attempts: usize,
) -> Result<OrientedGraph, GenError> {
    if n == 0 || 2 * d > n - 1 {
        return Err(GenError::Unsatisfiable { n, d });
    }
    let mut r = rng(seed);
    for _ in 0..max_attempts.max(1) {
        let mut st = Orientation {
            n,
            arc: vec![vec![false; n]; n],
            allowed: vec![vec![true; n]; n],
            forced: vec![vec![false; n]; n],
            out: vec![0; n],
            inn: vec![0; n],
        };
        for v in 0..n {
            st.allowed[v][v] = false;
        }
        for &(u, v) in &constraints.forbidden {
            if u < n && v < n {
                st.allowed[u][v] = false;
            }
        }
        for &(u, v) in &constraints.forced {
            if u >= n || v >= n || u == v || !st.allowed[u][v] {
                return Err(GenError::Invalid(format!("cannot force arc ({u}, {v})")));
            }
            st.forced[u][v] = true;
            st.allowed[v][u] = false;
        }
        for u in 0..n {
            for v in u + 1..n {
                let (fwd, bwd) = (st.allowed[u][v], st.allowed[v][u]);
                if st.forced[u][v] || (fwd && (!bwd || r.random_bool(0.5))) {
                    st.set(u, v);
                } else if bwd {
                    st.set(v, u);
                }
            }
        }
        let mut stalled = false;
        while st.deficit(d) > 0 && !stalled {
            stalled = true;
            let mut order: Vec<Vertex> = (0..n).collect();
            order.shuffle(&mut r);
            for &v in &order {
                if st.out[v] < d && st.raise_out(v, d, &mut r) {
                    stalled = false;
                }
                if st.inn[v] < d {
                    st.transpose();
                    if st.raise_out(v, d, &mut r) {
                        stalled = false;
                    }
                    st.transpose();
                }
            }
        }
        if stalled {
            continue;
        }
        if prune > 0.0 {
            let mut arcs: Vec<(Vertex, Vertex)> = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| st.arc[u][v] && !st.forced[u][v])
                .collect();
            arcs.shuffle(&mut r);
            for (u, v) in arcs {
                if st.out[u] > d && st.inn[v] > d && r.random_bool(prune.min(1.0)) {
                    st.unset(u, v);
                }
            }
        }
        let g = st.to_graph();
        debug_assert!(g.min_semidegree() >= d);
        return Ok(g);
    }
    Err(GenError::AttemptsExhausted(max_attempts))
}

/// Random oriented graph with δ⁰ ≥ d: a repaired random tournament pruned
/// arc by arc, in random order, while every degree stays at least `d`.
pub fn random_with_min_semidegree(
    n: usize,
    d: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<OrientedGraph, GenError> {
    constrained_min_semidegree(n, d, &ArcConstraints::default(), 1.0, seed, max_attempts)
}

/// Which dispatch branch a planted instance is steered towards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlantTarget {
    /// N⁻(v₀) avoids Y, N⁺(v_t) meets Y.
    Back,
    /// End neighborhoods avoid Y and the closing arc (v_t, v₀) exists.
    Hamilton,
    /// Forces the i* branch with N⁺(v_{i*−1}) ∩ Y = ∅.
    SCycle,
    /// Forces the i* branch with a far landing p ≥ ℓ + i*.
    YFar,
    /// Forces the i* branch with a near landing p ≤ ℓ + i* − 1.
    YNear,
}

impl PlantTarget {
    pub const ALL: [PlantTarget; 5] = [
        PlantTarget::Back,
        PlantTarget::Hamilton,
        PlantTarget::SCycle,
        PlantTarget::YFar,
        PlantTarget::YNear,
    ];
}

/// Constraints for a host whose Hamilton path `0 -> 1 -> .. -> n-1` is the
/// lexicographically first maximum path, with end neighborhoods arranged so
/// the ℓ ≤ 2k/3 dispatch gets past the front case.
pub fn planted_constraints(
    n: usize,
    k: usize,
    ell: usize,
    target: PlantTarget,
    i_star: usize,
) -> Result<ArcConstraints, GenError> {
    if !(2 * ell >= k && ell < k && is_small_ell(k, ell)) {
        return Err(GenError::Invalid(format!(
            "({k}, {ell}) is not in the small-ell branch"
        )));
    }
    let t = n.saturating_sub(1);
    let a = k - ell;
    if t < 2 * k - ell {
        return Err(GenError::Invalid(format!("n = {n} too small for k = {k}")));
    }
    let y = a..=t - a;
    let mut c = ArcConstraints::default();
    c.forced.extend((0..t).map(|i| (i, i + 1)));
    // N⁻(v₀) ∩ Y = ∅
    c.forbidden.extend(y.clone().map(|i| (i, 0)));
    let i_star_max = k as isize - (3 * ell).div_ceil(2) as isize;
    match target {
        PlantTarget::Back => {
            c.forced.push((t, a + (t - 2 * a) / 2));
        }
        PlantTarget::Hamilton => {
            c.forbidden.extend(y.clone().map(|i| (t, i)));
            c.forced.push((t, 0));
        }
        PlantTarget::SCycle | PlantTarget::YFar | PlantTarget::YNear => {
            if i_star < 1 || i_star as isize > i_star_max {
                return Err(GenError::Invalid(format!(
                    "i* = {i_star} outside 1..={i_star_max}"
                )));
            }
            c.forbidden.extend(y.clone().map(|i| (t, i)));
            c.forbidden.push((t, 0));
            c.forbidden.extend((1..i_star).map(|i| (t, i)));
            c.forced.push((t, i_star));
            let anchor = i_star - 1;
            let landing = match target {
                PlantTarget::SCycle => None,
                PlantTarget::YFar => Some(ell + i_star),
                _ => Some(a),
            };
            match landing {
                None => c.forbidden.extend(y.clone().map(|i| (anchor, i))),
                Some(p) => {
                    if !y.contains(&p) {
                        return Err(GenError::Invalid(format!("landing {p} outside Y")));
                    }
                    c.forbidden.extend((a..p).map(|i| (anchor, i)));
                    if anchor + 1 != p {
                        c.forced.push((anchor, p));
                    }
                }
            }
        }
    }
    c.forced.sort_unstable();
    c.forced.dedup();
    c.forbidden.sort_unstable();
    c.forbidden.dedup();
    Ok(c)
}

/// Host families used by the sweep configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    Circulant {
        n: usize,
        offsets: Vec<usize>,
    },
    RegularTournament {
        n: usize,
    },
    Blowup {
        base: Box<GeneratorSpec>,
        m: usize,
    },
    RandomOriented {
        n: usize,
        arc_prob: f64,
        seed: u64,
    },
    RandomTournament {
        n: usize,
        seed: u64,
    },
    /// Random graph with δ⁰ ≥ d; `prune` is the per-arc removal probability.
    RandomMinSemidegree {
        n: usize,
        d: usize,
        prune: f64,
        seed: u64,
    },
    Planted {
        n: usize,
        k: usize,
        ell: usize,
        d: usize,
        target: PlantTarget,
        i_star: usize,
        prune: f64,
        seed: u64,
    },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<OrientedGraph, GenError> {
        match self {
            GeneratorSpec::Circulant { n, offsets } => circulant(*n, offsets),
            GeneratorSpec::RegularTournament { n } => regular_tournament(*n),
            GeneratorSpec::Blowup { base, m } => blowup(&base.build()?, *m),
            GeneratorSpec::RandomOriented { n, arc_prob, seed } => {
                Ok(random_oriented_graph(*n, *arc_prob, *seed))
            }
            GeneratorSpec::RandomTournament { n, seed } => Ok(random_tournament(*n, *seed)),
            GeneratorSpec::RandomMinSemidegree { n, d, prune, seed } => {
                constrained_min_semidegree(*n, *d, &ArcConstraints::default(), *prune, *seed, 50)
            }
            GeneratorSpec::Planted {
                n,
                k,
                ell,
                d,
                target,
                i_star,
                prune,
                seed,
            } => {
                let c = planted_constraints(*n, *k, *ell, *target, *i_star)?;
                constrained_min_semidegree(*n, *d, &c, *prune, *seed, 200)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_tournament_small_cases() {
        assert_eq!(regular_tournament(3).unwrap(), directed_triangle());
        assert_eq!(directed_triangle().arc_list(), vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(regular_tournament(5).unwrap().min_semidegree(), 2);
        let t7 = regular_tournament(7).unwrap();
        assert_eq!(t7.arc_count(), 21);
        let s = t7.degree_summary();
        assert!(s.deg_out.iter().chain(&s.deg_in).all(|&d| d == 3));
        assert_eq!(regular_tournament(4), Err(GenError::EvenOrder(4)));
    }

    #[test]
    fn blowup_counts() {
        let tri = directed_triangle();
        assert_eq!(blowup(&tri, 1).unwrap(), tri);
        let b2 = blowup(&tri, 2).unwrap();
        assert_eq!((b2.n(), b2.arc_count(), b2.min_semidegree()), (6, 12, 2));
        assert!(blowup(&tri, 0).is_err());
    }

    #[test]
    fn random_oriented_extremes() {
        assert_eq!(random_oriented_graph(6, 0.0, 1).arc_count(), 0);
        assert_eq!(random_oriented_graph(6, 1.0, 1).arc_count(), 15);
        assert_eq!(
            random_oriented_graph(9, 0.4, 7),
            random_oriented_graph(9, 0.4, 7)
        );
    }

    #[test]
    fn min_semidegree_sampler() {
        for seed in 0..20 {
            let g = random_with_min_semidegree(5, 2, seed, 10).unwrap();
            assert!(g.min_semidegree() >= 2);
            // only regular tournaments qualify on 5 vertices
            assert_eq!(g.arc_count(), 10);
        }
        assert_eq!(
            random_with_min_semidegree(4, 2, 0, 10),
            Err(GenError::Unsatisfiable { n: 4, d: 2 })
        );
        let g = random_with_min_semidegree(20, 6, 3, 10).unwrap();
        assert!(g.min_semidegree() >= 6);
        assert_eq!(g, random_with_min_semidegree(20, 6, 3, 10).unwrap());
    }

    #[test]
    fn planted_constraints_hold() {
        let (n, k, ell, d) = (37, 16, 8, 12);
        for target in PlantTarget::ALL {
            let c = planted_constraints(n, k, ell, target, 2).unwrap();
            let spec = GeneratorSpec::Planted {
                n,
                k,
                ell,
                d,
                target,
                i_star: 2,
                prune: 0.5,
                seed: 11,
            };
            let g = spec.build().unwrap();
            assert!(g.min_semidegree() >= d);
            for &(u, v) in &c.forced {
                assert!(g.has_arc(u, v), "{target:?}: forced ({u}, {v}) missing");
            }
            for &(u, v) in &c.forbidden {
                assert!(!g.has_arc(u, v), "{target:?}: forbidden ({u}, {v}) present");
            }
        }
    }
}
