use proptest::prelude::*;

use twoblock::digraph::OrientedGraph;
use twoblock::embed::{embed_two_block, threshold, validate_trace, EmbedError, EmbedOptions};
use twoblock::generators::{
    blowup, constrained_min_semidegree, random_oriented_graph, regular_tournament, ArcConstraints,
    GeneratorSpec,
};
use twoblock::oracle::find_pattern_embedding;
use twoblock::path::{verify_embedding, Dir, Orientation, PathPattern, TwoBlockSpec};
use twoblock::search::{longest_directed_path, longest_path_from, SearchBudget};

fn arb_graph(max_n: usize) -> impl Strategy<Value = OrientedGraph> {
    (1..=max_n, 0.0..=1.0f64, any::<u64>()).prop_map(|(n, p, s)| random_oriented_graph(n, p, s))
}

/// Hosts with δ⁰ = ⌊(n−1)/2⌋ or close to it.
fn arb_dense(max_n: usize) -> impl Strategy<Value = OrientedGraph> {
    (
        3..=max_n,
        0usize..=1,
        prop::sample::select(vec![0.0, 0.5, 1.0]),
        any::<u64>(),
    )
        .prop_map(|(n, drop, prune, s)| {
            let d = ((n - 1) / 2).saturating_sub(drop);
            constrained_min_semidegree(n, d, &ArcConstraints::default(), prune, s, 50).unwrap()
        })
}

fn arb_pattern(max_k: usize) -> impl Strategy<Value = PathPattern> {
    prop::collection::vec(prop::bool::ANY, 1..=max_k).prop_map(|bits| {
        PathPattern::new(
            bits.into_iter()
                .map(|b| if b { Dir::F } else { Dir::B })
                .collect(),
        )
        .unwrap()
    })
}

fn arb_spec(max_k: usize) -> impl Strategy<Value = TwoBlockSpec> {
    (2..=max_k)
        .prop_flat_map(|k| (Just(k), 1..k, prop::bool::ANY))
        .prop_map(|(k, ell, fwd)| {
            let o = if fwd {
                Orientation::ForwardFirst
            } else {
                Orientation::BackFirst
            };
            TwoBlockSpec::new(k, ell, o).unwrap()
        })
}

/// Longest path of a DAG whose arcs all go from smaller to larger labels.
fn dag_longest(g: &OrientedGraph) -> usize {
    let mut best = vec![0usize; g.n()];
    for v in (0..g.n()).rev() {
        best[v] = g
            .out_neighbors(v)
            .iter()
            .map(|&w| best[w] + 1)
            .max()
            .unwrap_or(0);
    }
    best.into_iter().max().unwrap_or(0)
}

/// Exhaustive simple-path enumeration without pruning.
fn naive_longest(g: &OrientedGraph) -> usize {
    fn go(g: &OrientedGraph, v: usize, used: &mut Vec<bool>, len: usize, best: &mut usize) {
        *best = (*best).max(len);
        for &w in g.out_neighbors(v) {
            if !used[w] {
                used[w] = true;
                go(g, w, used, len + 1, best);
                used[w] = false;
            }
        }
    }
    let mut best = 0;
    for s in g.vertices() {
        let mut used = vec![false; g.n()];
        used[s] = true;
        go(g, s, &mut used, 0, &mut best);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn degree_sums_match_arc_count(g in arb_graph(20)) {
        let s = g.degree_summary();
        prop_assert_eq!(s.deg_out.iter().sum::<usize>(), g.arc_count());
        prop_assert_eq!(s.deg_in.iter().sum::<usize>(), g.arc_count());
        prop_assert_eq!(s.delta_zero, s.delta_plus.min(s.delta_minus));
    }

    #[test]
    fn reverse_is_an_involution(g in arb_graph(20)) {
        let r = g.reverse();
        prop_assert_eq!(r.reverse(), g.clone());
        for v in g.vertices() {
            prop_assert_eq!(r.out_degree(v), g.in_degree(v));
        }
        prop_assert_eq!(r.min_semidegree(), g.min_semidegree());
    }

    #[test]
    fn induced_subgraph_keeps_adjacency(g in arb_graph(14), keep in prop::collection::vec(prop::bool::ANY, 14)) {
        let verts: Vec<usize> = g.vertices().filter(|&v| keep[v]).collect();
        let (h, map) = g.induced_subgraph(&verts).unwrap();
        prop_assert_eq!(h.n(), verts.len());
        for &u in &verts {
            for &v in &verts {
                prop_assert_eq!(g.has_arc(u, v), h.has_arc(map[u].unwrap(), map[v].unwrap()));
            }
        }
    }

    #[test]
    fn json_round_trip(g in arb_graph(20)) {
        prop_assert_eq!(OrientedGraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn pattern_symmetries(p in arb_pattern(12)) {
        prop_assert_eq!(p.read_backwards().read_backwards(), p.clone());
        prop_assert_eq!(p.flipped().flipped(), p.clone());
        prop_assert_eq!(p.canonical().canonical(), p.canonical());
        prop_assert_eq!(p.to_string().parse::<PathPattern>().unwrap(), p);
    }

    #[test]
    fn longest_path_matches_naive_search(g in arb_graph(8)) {
        let lp = longest_directed_path(&g, &SearchBudget::default()).unwrap();
        prop_assert!(lp.path.is_directed_in(&g));
        prop_assert_eq!(lp.path.length(), naive_longest(&g));
    }

    #[test]
    fn longest_path_matches_dag_dp(n in 1usize..40, p in 0.0..=1.0f64, seed in any::<u64>()) {
        let base = random_oriented_graph(n, p, seed);
        let arcs: Vec<_> = base.arcs().map(|(u, v)| (u.min(v), u.max(v))).collect();
        let dag = OrientedGraph::new(n, &arcs).unwrap();
        let lp = longest_directed_path(&dag, &SearchBudget::default()).unwrap();
        prop_assert_eq!(lp.path.length(), dag_longest(&dag));
    }

    #[test]
    fn restricted_longest_path_stays_inside(g in arb_graph(10), keep in prop::collection::vec(prop::bool::ANY, 10)) {
        let allowed: Vec<usize> = g.vertices().filter(|&v| keep[v]).collect();
        if let Some(&start) = allowed.first() {
            let lp = longest_path_from(&g, &allowed, start, &SearchBudget::default()).unwrap();
            prop_assert_eq!(lp.path.first(), start);
            prop_assert!(lp.path.vertices().iter().all(|v| allowed.contains(v)));
            let (h, map) = g.induced_subgraph(&allowed).unwrap();
            let from_start = {
                let lh = longest_path_from(&h, &h.vertices().collect::<Vec<_>>(), map[start].unwrap(), &SearchBudget::default()).unwrap();
                lh.path.length()
            };
            prop_assert_eq!(lp.path.length(), from_start);
        }
    }

    #[test]
    fn jackson_bound(g in arb_dense(16)) {
        let lp = longest_directed_path(&g, &SearchBudget::default()).unwrap();
        prop_assert!(lp.path.length() >= 2 * g.min_semidegree());
    }

    #[test]
    fn oracle_results_verify(g in arb_graph(9), p in arb_pattern(6)) {
        let r = find_pattern_embedding(&g, &p, &SearchBudget::default());
        prop_assert!(!r.exhausted);
        if let Some(e) = &r.embedding {
            prop_assert!(r.found);
            prop_assert_eq!(verify_embedding(&g, &p, &e.vertices), Ok(()));
        }
    }

    #[test]
    fn oracle_is_reversal_consistent(g in arb_graph(9), p in arb_pattern(6)) {
        let b = SearchBudget::default();
        let here = find_pattern_embedding(&g, &p, &b).found;
        prop_assert_eq!(here, find_pattern_embedding(&g.reverse(), &p.flipped(), &b).found);
        prop_assert_eq!(here, find_pattern_embedding(&g, &p.read_backwards(), &b).found);
    }

    #[test]
    fn embedder_is_sound_and_agrees_with_oracle(g in arb_dense(13), spec in arb_spec(8)) {
        match embed_two_block(&g, spec, &EmbedOptions::default()) {
            Ok(out) => {
                prop_assert_eq!(&out.embedding.pattern, &spec.to_pattern());
                prop_assert_eq!(verify_embedding(&g, &out.embedding.pattern, &out.embedding.vertices), Ok(()));
                prop_assert_eq!(validate_trace(&g, &out.trace), Ok(()));
                prop_assert!(find_pattern_embedding(&g, &spec.to_pattern(), &SearchBudget::default()).found);
            }
            Err(EmbedError::ThresholdNotMet { delta_zero, .. }) => {
                let norm_ell = spec.ell.max(spec.k - spec.ell);
                prop_assert!(threshold(spec.k, norm_ell).unwrap() > num_rational::Ratio::from_integer(delta_zero as i64));
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn embedder_reversal_and_block_swap(g in arb_dense(13), spec in arb_spec(8)) {
        let opts = EmbedOptions::default();
        let mirror = TwoBlockSpec {
            orientation: match spec.orientation {
                Orientation::BackFirst => Orientation::ForwardFirst,
                Orientation::ForwardFirst => Orientation::BackFirst,
            },
            ..spec
        };
        let here = embed_two_block(&g, spec, &opts);
        let there = embed_two_block(&g.reverse(), mirror, &opts);
        prop_assert_eq!(here.is_ok(), there.is_ok());
        if let Ok(out) = &here {
            // the same vertex sequence embeds the flipped pattern in the reverse
            prop_assert_eq!(
                verify_embedding(&g.reverse(), &out.embedding.pattern.flipped(), &out.embedding.vertices),
                Ok(())
            );
        }
        let swapped = TwoBlockSpec { ell: spec.k - spec.ell, ..spec };
        prop_assert_eq!(here.is_ok(), embed_two_block(&g, swapped, &opts).is_ok());
    }

    #[test]
    fn heuristic_mode_never_reports_a_violation(g in arb_dense(16), spec in arb_spec(8)) {
        let opts = EmbedOptions { heuristic: true, ..EmbedOptions::default() };
        match embed_two_block(&g, spec, &opts) {
            Ok(out) => {
                prop_assert!(!out.trace.certified);
                prop_assert_eq!(verify_embedding(&g, &out.embedding.pattern, &out.embedding.vertices), Ok(()));
                prop_assert_eq!(validate_trace(&g, &out.trace), Ok(()));
            }
            Err(EmbedError::ThresholdNotMet { .. } | EmbedError::HeuristicFailed(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn blowup_scales_semidegree(g in arb_graph(6), m in 1usize..4) {
        let b = blowup(&g, m).unwrap();
        prop_assert_eq!(b.n(), g.n() * m);
        prop_assert_eq!(b.arc_count(), g.arc_count() * m * m);
        prop_assert_eq!(b.min_semidegree(), m * g.min_semidegree());
    }

    #[test]
    fn generator_specs_are_deterministic(n in 3usize..20, seed in any::<u64>(), prune in 0.0..=1.0f64) {
        let spec = GeneratorSpec::RandomMinSemidegree { n, d: (n - 1) / 2, prune, seed };
        let a = spec.build().unwrap();
        prop_assert!(a.min_semidegree() >= (n - 1) / 2);
        prop_assert_eq!(a.to_json(), spec.build().unwrap().to_json());
    }

    #[test]
    fn constrained_sampler_respects_constraints(n in 7usize..16, seed in any::<u64>()) {
        let d = (n - 1) / 2 - 1;
        let c = ArcConstraints { forced: vec![(0, 1), (1, 2)], forbidden: vec![(3, 0), (2, 4)] };
        let g = constrained_min_semidegree(n, d, &c, 0.5, seed, 100).unwrap();
        prop_assert!(g.min_semidegree() >= d);
        prop_assert!(g.has_arc(0, 1) && g.has_arc(1, 2));
        prop_assert!(!g.has_arc(3, 0) && !g.has_arc(2, 4));
    }
}

#[test]
fn regular_tournaments_are_regular() {
    for n in (3..=25).step_by(2) {
        let t = regular_tournament(n).unwrap();
        let s = t.degree_summary();
        assert!(s.deg_out.iter().chain(&s.deg_in).all(|&d| d == (n - 1) / 2));
        assert_eq!(t.arc_count(), n * (n - 1) / 2);
    }
}
