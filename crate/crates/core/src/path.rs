//! Path orientations, host paths, and embedding checks.
//!
//! A [`PathPattern`] is read left to right over positions `0..=k`: an `F` at
//! index `i` is the arc `i -> i+1`, a `B` is the arc `i+1 -> i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{OrientedGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("pattern must have at least one arc")]
    EmptyPattern,
    #[error("invalid pattern character {0:?}, expected F or B")]
    BadSymbol(char),
    #[error("two-block spec needs 1 <= ell < k, got k = {k}, ell = {ell}")]
    SpecOutOfRange { k: usize, ell: usize },
    #[error("path repeats vertex {0}")]
    RepeatedVertex(Vertex),
    #[error("paths start at different vertices {0} and {1}")]
    DifferentStart(Vertex, Vertex),
    #[error("paths share vertex {0} beyond their common start")]
    SharedInterior(Vertex),
    #[error("walk has blocks ({back}, {forward}) but spec needs ({need_back}, {need_forward}) in some reading")]
    InsufficientBlocks {
        back: usize,
        forward: usize,
        need_back: usize,
        need_forward: usize,
    },
    #[error("only back-first specs can be carved from a back-then-forward walk")]
    OrientationMismatch,
    #[error("empty host path")]
    EmptyPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    F,
    B,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::F => Dir::B,
            Dir::B => Dir::F,
        }
    }

    fn symbol(self) -> char {
        match self {
            Dir::F => 'F',
            Dir::B => 'B',
        }
    }
}

/// An orientation of the k-arc path as a direction sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathPattern {
    dirs: Vec<Dir>,
}

impl PathPattern {
    pub fn new(dirs: Vec<Dir>) -> Result<Self, PathError> {
        if dirs.is_empty() {
            return Err(PathError::EmptyPattern);
        }
        Ok(PathPattern { dirs })
    }

    /// `B^back F^forward`; either count may be zero but not both.
    pub fn back_forward(back: usize, forward: usize) -> Result<Self, PathError> {
        let mut dirs = vec![Dir::B; back];
        dirs.extend(std::iter::repeat_n(Dir::F, forward));
        PathPattern::new(dirs)
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.dirs
    }

    /// Number of arcs k.
    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    /// Maximal constant runs as `(direction, size)`.
    pub fn blocks(&self) -> Vec<(Dir, usize)> {
        let mut out: Vec<(Dir, usize)> = Vec::new();
        for &d in &self.dirs {
            match out.last_mut() {
                Some((last, size)) if *last == d => *size += 1,
                _ => out.push((d, 1)),
            }
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks().into_iter().map(|(_, s)| s).collect()
    }

    pub fn is_antidirected(&self) -> bool {
        self.dirs.windows(2).all(|w| w[0] != w[1])
    }

    /// The same path read from its other end: reversed and with every
    /// direction swapped. Embeddings correspond by reversing the vertex list.
    pub fn read_backwards(&self) -> PathPattern {
        PathPattern {
            dirs: self.dirs.iter().rev().map(|d| d.flip()).collect(),
        }
    }

    /// The pattern with every arc reversed (position order kept). Embeds in
    /// `G` exactly when `self` embeds in the transpose of `G`.
    pub fn flipped(&self) -> PathPattern {
        PathPattern {
            dirs: self.dirs.iter().map(|d| d.flip()).collect(),
        }
    }

    /// Canonical representative of `{self, self.read_backwards()}`.
    pub fn canonical(&self) -> PathPattern {
        let other = self.read_backwards();
        if other < *self {
            other
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for PathPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.dirs {
            write!(f, "{}", d.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PathPattern {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let dirs = s
            .trim()
            .chars()
            .map(|c| match c {
                'F' | 'f' => Ok(Dir::F),
                'B' | 'b' => Ok(Dir::B),
                other => Err(PathError::BadSymbol(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        PathPattern::new(dirs)
    }
}

impl Serialize for PathPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PathPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// P(←ℓ, →k−ℓ): ℓ backward arcs, then k−ℓ forward arcs.
    BackFirst,
    /// P(→ℓ, ←k−ℓ).
    ForwardFirst,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::BackFirst => "back-first",
            Orientation::ForwardFirst => "forward-first",
        }
    }
}

/// The k-arc path with two blocks of sizes `ell` and `k - ell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TwoBlockSpec {
    pub k: usize,
    pub ell: usize,
    pub orientation: Orientation,
}

impl TwoBlockSpec {
    pub fn new(k: usize, ell: usize, orientation: Orientation) -> Result<Self, PathError> {
        let spec = TwoBlockSpec {
            k,
            ell,
            orientation,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn back_first(k: usize, ell: usize) -> Result<Self, PathError> {
        Self::new(k, ell, Orientation::BackFirst)
    }

    pub fn check(&self) -> Result<(), PathError> {
        if self.ell == 0 || self.ell >= self.k {
            return Err(PathError::SpecOutOfRange {
                k: self.k,
                ell: self.ell,
            });
        }
        Ok(())
    }

    pub fn second_block(&self) -> usize {
        self.k - self.ell
    }

    pub fn to_pattern(&self) -> PathPattern {
        let (first, second) = match self.orientation {
            Orientation::BackFirst => (Dir::B, Dir::F),
            Orientation::ForwardFirst => (Dir::F, Dir::B),
        };
        let mut dirs = vec![first; self.ell];
        dirs.extend(std::iter::repeat_n(second, self.k - self.ell));
        PathPattern { dirs }
    }
}

/// Swaps the two block sizes, keeping the orientation flag: P(←a, →b) read
/// from its far end is P(←b, →a), so both have the same embeddability.
pub fn pattern_reverse_symmetry(spec: TwoBlockSpec) -> TwoBlockSpec {
    TwoBlockSpec {
        ell: spec.k - spec.ell,
        ..spec
    }
}

/// A sequence of distinct host vertices `v0 .. vt`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HostPath {
    verts: Vec<Vertex>,
}

impl HostPath {
    pub fn new(verts: Vec<Vertex>) -> Result<Self, PathError> {
        if verts.is_empty() {
            return Err(PathError::EmptyPath);
        }
        let mut sorted = verts.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(PathError::RepeatedVertex(w[0]));
        }
        Ok(HostPath { verts })
    }

    pub fn single(v: Vertex) -> Self {
        HostPath { verts: vec![v] }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.verts
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.verts
    }

    /// Number of arcs t.
    pub fn length(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn first(&self) -> Vertex {
        self.verts[0]
    }

    pub fn last(&self) -> Vertex {
        *self.verts.last().expect("host paths are non-empty")
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.verts.contains(&v)
    }

    /// True when every consecutive pair is an arc of `g`.
    pub fn is_directed_in(&self, g: &OrientedGraph) -> bool {
        self.verts.iter().all(|&v| v < g.n())
            && self.verts.windows(2).all(|w| g.has_arc(w[0], w[1]))
    }
}

/// ←P: the same vertices listed from the other end.
pub fn reverse_path(path: &HostPath) -> HostPath {
    let mut verts = path.verts.clone();
    verts.reverse();
    HostPath { verts }
}

/// The oriented path ←P₁P₂: `B^|P₁| F^|P₂|` laid over
/// `last(P₁) .. first(P₁) = first(P₂) .. last(P₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoBlockWalk {
    pub pattern: PathPattern,
    pub vertices: Vec<Vertex>,
    /// Backward arcs before the turning vertex.
    pub back: usize,
    /// Forward arcs after it.
    pub forward: usize,
}

impl TwoBlockWalk {
    /// Index of the shared start vertex of P₁ and P₂.
    pub fn turn(&self) -> usize {
        self.back
    }
}

pub fn concat_reverse(p1: &HostPath, p2: &HostPath) -> Result<TwoBlockWalk, PathError> {
    if p1.first() != p2.first() {
        return Err(PathError::DifferentStart(p1.first(), p2.first()));
    }
    if let Some(&v) = p2.verts[1..].iter().find(|v| p1.verts.contains(v)) {
        return Err(PathError::SharedInterior(v));
    }
    let mut vertices: Vec<Vertex> = p1.verts.iter().rev().copied().collect();
    vertices.extend_from_slice(&p2.verts[1..]);
    let (back, forward) = (p1.length(), p2.length());
    let pattern = PathPattern::back_forward(back, forward)?;
    Ok(TwoBlockWalk {
        pattern,
        vertices,
        back,
        forward,
    })
}

/// An injective assignment of host vertices to pattern positions `0..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub pattern: PathPattern,
    pub vertices: Vec<Vertex>,
}

impl Embedding {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("embedding JSON serialization")
    }
}

/// Carves the back-first spec out of a walk, using the window around the
/// turning vertex. When the walk only fits the mirrored block sizes
/// (`B^(k-ell) F^ell`), that window is taken and read from its far end.
pub fn extract_two_block(walk: &TwoBlockWalk, spec: TwoBlockSpec) -> Result<Embedding, PathError> {
    spec.check()?;
    if spec.orientation != Orientation::BackFirst {
        return Err(PathError::OrientationMismatch);
    }
    let (need_back, need_forward) = (spec.ell, spec.second_block());
    let turn = walk.turn();
    let window = |back: usize, forward: usize| walk.vertices[turn - back..=turn + forward].to_vec();
    let vertices = if walk.back >= need_back && walk.forward >= need_forward {
        window(need_back, need_forward)
    } else if walk.back >= need_forward && walk.forward >= need_back {
        let mut w = window(need_forward, need_back);
        w.reverse();
        w
    } else {
        return Err(PathError::InsufficientBlocks {
            back: walk.back,
            forward: walk.forward,
            need_back,
            need_forward,
        });
    };
    Ok(Embedding {
        pattern: spec.to_pattern(),
        vertices,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Wrong number of vertices for the pattern.
    Length {
        expected: usize,
        got: usize,
    },
    VertexOutOfRange {
        position: usize,
        vertex: Vertex,
    },
    /// Positions `first < second` map to the same vertex.
    Injectivity {
        first: usize,
        second: usize,
    },
    /// Pattern arc `position` needs host arc `(from, to)`, which is missing.
    MissingArc {
        position: usize,
        from: Vertex,
        to: Vertex,
    },
}

/// Checks that `vertices` is an embedding of `pattern` into `g`, reporting
/// the first violation found.
pub fn verify_embedding(
    g: &OrientedGraph,
    pattern: &PathPattern,
    vertices: &[Vertex],
) -> Result<(), Violation> {
    if vertices.len() != pattern.len() + 1 {
        return Err(Violation::Length {
            expected: pattern.len() + 1,
            got: vertices.len(),
        });
    }
    let mut owner = vec![None; g.n()];
    for (position, &v) in vertices.iter().enumerate() {
        if v >= g.n() {
            return Err(Violation::VertexOutOfRange {
                position,
                vertex: v,
            });
        }
        if let Some(first) = owner[v] {
            return Err(Violation::Injectivity {
                first,
                second: position,
            });
        }
        owner[v] = Some(position);
    }
    for (position, d) in pattern.dirs().iter().enumerate() {
        let (a, b) = (vertices[position], vertices[position + 1]);
        let (from, to) = match d {
            Dir::F => (a, b),
            Dir::B => (b, a),
        };
        if !g.has_arc(from, to) {
            return Err(Violation::MissingArc { position, from, to });
        }
    }
    Ok(())
}
