//! Extremal checks for even k: the regular tournament on k + 1 vertices and
//! the k/2-blowup of the directed triangle.

use serde::Serialize;

use super::ExperimentError;
use crate::generators::{blowup, directed_triangle, regular_tournament};
use crate::oracle::{contains_all_orientations, find_pattern_embedding};
use crate::path::{Dir, PathPattern};
use crate::search::SearchBudget;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternStatus {
    pub pattern: PathPattern,
    pub found: bool,
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TournamentCheck {
    pub n: usize,
    pub delta_zero: usize,
    pub orientation_classes: usize,
    /// Classes certified absent; only antidirected ones are expected.
    pub missing: Vec<PathPattern>,
    pub missing_non_antidirected: Vec<PathPattern>,
    pub inconclusive: Vec<PathPattern>,
    pub two_block: Vec<PatternStatus>,
    pub two_block_all_present: bool,
    /// A (k+1)-arc path needs k + 2 vertices; the host has k + 1.
    pub longer_paths_absent: bool,
    pub longer_paths_certificate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupCheck {
    pub part_size: usize,
    pub n: usize,
    pub delta_zero: usize,
    pub antidirected: Vec<PatternStatus>,
    pub antidirected_absent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TightnessReport {
    pub k: usize,
    pub tournament: TournamentCheck,
    pub blowup: BlowupCheck,
}

fn status(
    g: &crate::digraph::OrientedGraph,
    p: PathPattern,
    budget: &SearchBudget,
) -> PatternStatus {
    let r = find_pattern_embedding(g, &p, budget);
    PatternStatus {
        pattern: p,
        found: r.found,
        exhausted: r.exhausted,
    }
}

fn alternating(k: usize, first: Dir) -> PathPattern {
    let dirs = (0..k)
        .map(|i| if i % 2 == 0 { first } else { first.flip() })
        .collect();
    PathPattern::new(dirs).expect("k >= 1")
}

pub fn tightness_report(
    k: usize,
    budget: &SearchBudget,
) -> Result<TightnessReport, ExperimentError> {
    if k < 2 || k % 2 == 1 {
        return Err(ExperimentError::Config(format!(
            "tightness needs an even k >= 2, got {k}"
        )));
    }
    let t = regular_tournament(k + 1).expect("k + 1 is odd");
    let all = contains_all_orientations(&t, k, budget);
    let mut two_block = Vec::new();
    for ell in 1..k {
        for p in [
            PathPattern::back_forward(ell, k - ell),
            PathPattern::back_forward(ell, k - ell).map(|p| p.flipped()),
        ] {
            two_block.push(status(&t, p.expect("1 <= ell < k"), budget));
        }
    }
    let tournament = TournamentCheck {
        n: t.n(),
        delta_zero: t.min_semidegree(),
        orientation_classes: all.classes.len(),
        missing: all.missing.clone(),
        missing_non_antidirected: all.missing_non_antidirected.clone(),
        inconclusive: all.inconclusive.clone(),
        two_block_all_present: two_block.iter().all(|s| s.found),
        two_block,
        longer_paths_absent: t.n() < k + 2,
        longer_paths_certificate: format!(
            "a {}-arc path has {} vertices, the host has {}",
            k + 1,
            k + 2,
            t.n()
        ),
    };
    let b = blowup(&directed_triangle(), k / 2).expect("part size >= 1");
    let antidirected: Vec<PatternStatus> = [Dir::F, Dir::B]
        .into_iter()
        .map(|d| status(&b, alternating(k, d), budget))
        .collect();
    let blowup = BlowupCheck {
        part_size: k / 2,
        n: b.n(),
        delta_zero: b.min_semidegree(),
        antidirected_absent: antidirected.iter().all(|s| !s.found && !s.exhausted),
        antidirected,
    };
    Ok(TightnessReport {
        k,
        tournament,
        blowup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_report() {
        let r = tightness_report(4, &SearchBudget::default()).unwrap();
        assert_eq!(r.tournament.delta_zero, 2);
        assert!(r.tournament.two_block_all_present);
        assert_eq!(r.tournament.two_block.len(), 6);
        assert!(r.tournament.missing_non_antidirected.is_empty());
        assert!(r.tournament.longer_paths_absent);
        assert_eq!((r.blowup.n, r.blowup.delta_zero), (6, 2));
        assert!(r.blowup.antidirected_absent);
    }

    #[test]
    fn odd_k_rejected() {
        assert!(tightness_report(5, &SearchBudget::default()).is_err());
    }
}
