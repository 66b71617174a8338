//! Randomized invariants over graphs, models, metrics, and measures.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use aggsim::*;

fn arb_edges(max_id: u64, max_e: usize) -> impl Strategy<Value = Vec<(NodeId, NodeId)>> {
    prop::collection::vec(
        (0..max_id, 0..max_id).prop_filter("self loop", |(a, b)| a != b),
        1..max_e,
    )
    .prop_map(|v| v.into_iter().map(|(a, b)| (NodeId(a), NodeId(b))).collect())
}

fn arb_graph(max_id: u64, max_e: usize) -> impl Strategy<Value = DirectedGraph> {
    arb_edges(max_id, max_e)
        .prop_map(|e| DirectedGraph::from_edges(std::iter::empty(), &e).0)
}

fn unit() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

proptest! {
    #[test]
    fn adjacency_is_transpose_consistent(g in arb_graph(12, 40)) {
        for u in 0..g.node_count() {
            for &v in g.out_idx(u) {
                prop_assert!(g.in_idx(v).contains(&u));
            }
            for &v in g.in_idx(u) {
                prop_assert!(g.out_idx(v).contains(&u));
            }
        }
    }

    #[test]
    fn jaccard_is_symmetric(g in arb_graph(10, 30), a in 0usize..10, b in 0usize..10) {
        let n = g.node_count();
        let (i, j) = (g.id_of(a % n), g.id_of(b % n));
        prop_assert_eq!(
            g.jaccard_weight(i, j).unwrap().to_bits(),
            g.jaccard_weight(j, i).unwrap().to_bits()
        );
    }

    #[test]
    fn power_scores_stay_in_unit_range(g in arb_graph(16, 60)) {
        for id in g.nodes() {
            let p = g.power_score(id).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn largest_scc_matches_reachability_brute_force(g in arb_graph(8, 24)) {
        let want = brute_force_largest_scc(&g);
        let got: BTreeSet<u64> = g.largest_scc().unwrap().nodes().map(|n| n.0).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn centrality_vectors_are_unit_and_non_negative(g in arb_graph(12, 40)) {
        let t = node_features(&g);
        let (mut h, mut a, mut e) = (0.0, 0.0, 0.0);
        for (_, f) in &t.rows {
            prop_assert!(f.hub >= 0.0 && f.authority >= 0.0 && f.eigenvector >= 0.0);
            h += f.hub * f.hub;
            a += f.authority * f.authority;
            e += f.eigenvector * f.eigenvector;
        }
        for norm in [h, a, e] {
            prop_assert!((norm - 1.0).abs() < 1e-9, "norm² = {}", norm);
        }
    }

    #[test]
    fn seeding_is_binary(g in arb_graph(10, 30), raw in prop::collection::vec((0u64..10, prop::bool::ANY), 0..10)) {
        let labels: BTreeMap<NodeId, Label> = raw
            .into_iter()
            .map(|(n, agg)| (NodeId(n), if agg { Label::Aggressive } else { Label::Normal }))
            .collect();
        for s in seed_states(&g, &labels) {
            prop_assert!(s.score == 0.0 || s.score == 1.0);
            prop_assert_eq!(s.score.to_bits(), s.initial_score.to_bits());
        }
    }

    #[test]
    fn every_model_maps_unit_inputs_to_unit_outputs(
        score_self in unit(), score_other in unit(), initial in unit(),
        w in unit(), ps in unit(), po in unit(),
        raw_nbrs in prop::collection::vec((unit(), unit(), unit()), 1..6)
    ) {
        let neighbors: Vec<NeighborView> = raw_nbrs
            .iter()
            .enumerate()
            .map(|(k, &(s, wt, p))| NeighborView { id: NodeId(k as u64 + 2), score: s, weight: wt, power: p })
            .collect();
        let ctx = UpdateContext {
            influenced: NodeId(0),
            influencer: NodeId(2),
            score_self, score_other, initial_self: initial,
            edge_weight: w, power_self: ps, power_other: po,
            neighbors: &neighbors,
        };
        for spec in model_catalog() {
            let u = apply_model(spec, &ctx);
            prop_assert!((0.0..=1.0).contains(&u.score), "{} gave {}", spec.name, u.score);
        }
    }

    #[test]
    fn plain_voter_preserves_binary_states(bit_self in prop::bool::ANY, bit_other in prop::bool::ANY) {
        let ctx = UpdateContext {
            influenced: NodeId(0),
            influencer: NodeId(1),
            score_self: bit_self as u8 as f64,
            score_other: bit_other as u8 as f64,
            initial_self: bit_self as u8 as f64,
            edge_weight: 0.3, power_self: 0.7, power_other: 0.2,
            neighbors: &[],
        };
        let u = apply_model(find_model("Voter").unwrap(), &ctx);
        prop_assert!(u.score == 0.0 || u.score == 1.0);
    }

    #[test]
    fn deffuant_is_monotone_in_both_scores(
        s_i in unit(), s_j in unit(), bump_i in unit(), bump_j in unit(),
        w in unit(), ps in unit(), po in unit()
    ) {
        let base = UpdateContext {
            influenced: NodeId(0), influencer: NodeId(1),
            score_self: s_i, score_other: s_j, initial_self: 0.0,
            edge_weight: w, power_self: ps, power_other: po,
            neighbors: &[],
        };
        let mut bumped = base;
        bumped.score_self = (s_i + bump_i).min(1.0);
        bumped.score_other = (s_j + bump_j).min(1.0);
        for name in ["Deffuant_W", "Deffuant_P", "Deffuant_WP"] {
            let spec = find_model(name).unwrap();
            let a = models::deffuant_update(spec, &base);
            let b = models::deffuant_update(spec, &bumped);
            prop_assert!(b >= a, "{name}: {b} < {a}");
        }
    }

    #[test]
    fn neighborhood_models_stay_within_entering_scores(
        score_self in unit(), initial in unit(),
        w in unit(), ps in unit(), po in unit(),
        raw_nbrs in prop::collection::vec((unit(), unit(), unit()), 1..6)
    ) {
        let neighbors: Vec<NeighborView> = raw_nbrs
            .iter()
            .enumerate()
            .map(|(k, &(s, wt, p))| NeighborView { id: NodeId(k as u64 + 2), score: s, weight: wt, power: p })
            .collect();
        let ctx = UpdateContext {
            influenced: NodeId(0), influencer: NodeId(2),
            score_self, score_other: neighbors[0].score, initial_self: initial,
            edge_weight: w, power_self: ps, power_other: po,
            neighbors: &neighbors,
        };
        let nbr_lo = neighbors.iter().map(|n| n.score).fold(f64::INFINITY, f64::min);
        let nbr_hi = neighbors.iter().map(|n| n.score).fold(0.0, f64::max);
        for name in ["DeGroot", "DeGroot_W", "DeGroot_P", "DeGroot_WP"] {
            let got = models::degroot_update(find_model(name).unwrap(), &ctx);
            prop_assert!(got >= nbr_lo.min(score_self) && got <= nbr_hi.max(score_self), "{name}");
        }
        for name in ["FJ_W", "FJ_P", "FJ_WP"] {
            let got = models::fj_update(find_model(name).unwrap(), &ctx);
            let lo = nbr_lo.min(score_self).min(initial);
            let hi = nbr_hi.max(score_self).max(initial);
            prop_assert!(got >= lo && got <= hi, "{name}");
        }
    }

    #[test]
    fn hk_firing_is_nested_in_the_bound(
        s_i in unit(), s_j in unit(), w in unit(), ps in unit(), po in unit()
    ) {
        let ctx = UpdateContext {
            influenced: NodeId(0), influencer: NodeId(1),
            score_self: s_i, score_other: s_j, initial_self: 0.0,
            edge_weight: w, power_self: ps, power_other: po,
            neighbors: &[],
        };
        for (tight, loose) in [("HK_0.5_W", "HK_1.0_W"), ("HK_0.5_P", "HK_1.0_P"), ("HK_0.5_WP", "HK_1.0_WP")] {
            let t = models::hk_update(find_model(tight).unwrap(), &ctx);
            let l = models::hk_update(find_model(loose).unwrap(), &ctx);
            if t.applied {
                prop_assert!(l.applied, "{tight} fired but {loose} did not");
            }
        }
    }

    #[test]
    fn orderings_permute_the_schedule(g in arb_graph(10, 30), seed in any::<u64>()) {
        let schedule = select_edges(&g, 1.0, seed).unwrap();
        let mut want = schedule.edges.clone();
        want.sort_unstable();
        for kind in OrderingKind::ALL {
            let mut got = order_edges(&schedule.edges, kind, &g, seed).unwrap();
            prop_assert_eq!(got.len(), want.len(), "{}", kind.as_str());
            got.sort_unstable();
            prop_assert_eq!(&got, &want, "{}", kind.as_str());
        }
    }

    #[test]
    fn snapshots_progress_and_stay_in_range(
        g in arb_graph(10, 40),
        seed in any::<u64>(),
        aggressive in prop::collection::btree_set(0u64..10, 0..5)
    ) {
        let labels: BTreeMap<NodeId, Label> =
            aggressive.into_iter().map(|n| (NodeId(n), Label::Aggressive)).collect();
        let states = seed_states(&g, &labels);
        let schedule = select_edges(&g, 1.0, seed).unwrap();
        let m = schedule.edges.len();
        let count = m.min(4).max(1);
        let stride = m.div_ceil(count);
        let expected: Vec<usize> = std::iter::once(0)
            .chain((1..=count).map(|k| (k * stride).min(m)))
            .collect();
        for name in ["Voter_WP", "HK_0.5_P", "avgFJ_W"] {
            let run = run_simulation(
                &g, &states, find_model(name).unwrap(), &schedule, OrderingKind::Random, count,
            ).unwrap();
            let got: Vec<usize> = run.snapshots.iter().map(|s| s.interactions_done).collect();
            prop_assert_eq!(&got, &expected, "{}", name);
            prop_assert_eq!(run.snapshots.last().unwrap().interactions_done, m);
            for snap in &run.snapshots {
                for &s in &snap.scores {
                    prop_assert!((0.0..=1.0).contains(&s));
                }
            }
        }
    }

    #[test]
    fn metric_identities_hold_on_random_labelings(
        g in arb_graph(10, 40),
        flips in prop::collection::vec((prop::bool::ANY, prop::bool::ANY), 10)
    ) {
        let before: BTreeMap<NodeId, Label> = g.nodes()
            .map(|id| (id, label_of(flips[(id.0 as usize) % flips.len()].0)))
            .collect();
        let after: BTreeMap<NodeId, Label> = g.nodes()
            .map(|id| (id, label_of(flips[(id.0 as usize) % flips.len()].1)))
            .collect();
        let mv = metric_vector(&g, &before, &after).unwrap();
        check_conservation(&mv)?;
    }

    #[test]
    fn identical_labelings_produce_no_movement(
        g in arb_graph(10, 40),
        bits in prop::collection::vec(prop::bool::ANY, 10)
    ) {
        let l: BTreeMap<NodeId, Label> = g.nodes()
            .map(|id| (id, label_of(bits[(id.0 as usize) % bits.len()])))
            .collect();
        let mv = metric_vector(&g, &l, &l).unwrap();
        for from in 0..2 {
            for to in 0..2 {
                if from != to {
                    prop_assert_eq!(mv.node_transition[from][to], 0.0);
                }
            }
        }
        for from in 0..4 {
            for to in 0..4 {
                if from != to {
                    prop_assert_eq!(mv.edge_transition[from][to], 0.0);
                }
            }
        }
    }

    #[test]
    fn metrics_ignore_node_identities(
        edges in arb_edges(10, 30),
        bits in prop::collection::vec((prop::bool::ANY, prop::bool::ANY), 10)
    ) {
        let (g, _) = DirectedGraph::from_edges(std::iter::empty(), &edges);
        // order-scrambling injective relabeling
        let rename = |id: NodeId| NodeId((37 * (id.0 + 3)) % 101 + 200);
        let renamed_edges: Vec<(NodeId, NodeId)> =
            edges.iter().map(|&(u, v)| (rename(u), rename(v))).collect();
        let (g2, _) = DirectedGraph::from_edges(std::iter::empty(), &renamed_edges);

        let lab = |id: NodeId, which: usize| {
            let (a, b) = bits[(id.0 as usize) % bits.len()];
            label_of(if which == 0 { a } else { b })
        };
        let b1: BTreeMap<NodeId, Label> = g.nodes().map(|id| (id, lab(id, 0))).collect();
        let a1: BTreeMap<NodeId, Label> = g.nodes().map(|id| (id, lab(id, 1))).collect();
        let b2: BTreeMap<NodeId, Label> = g.nodes().map(|id| (rename(id), lab(id, 0))).collect();
        let a2: BTreeMap<NodeId, Label> = g.nodes().map(|id| (rename(id), lab(id, 1))).collect();

        let mv1 = metric_vector(&g, &b1, &a1).unwrap();
        let mv2 = metric_vector(&g2, &b2, &a2).unwrap();
        for (x, y) in mv1.values().iter().zip(mv2.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn higher_thresholds_shrink_the_aggressive_set(
        g in arb_graph(10, 30),
        scores_raw in prop::collection::vec(unit(), 10),
        lo in 0.05f64..0.9, hi_bump in 0.01f64..0.09
    ) {
        let scores: Vec<f64> = (0..g.node_count()).map(|i| scores_raw[i % scores_raw.len()]).collect();
        let hi = (lo + hi_bump).min(0.99);
        let set = |t: f64| -> BTreeSet<NodeId> {
            binarize(&g, &scores, t).unwrap()
                .into_iter()
                .filter(|&(_, l)| l == Label::Aggressive)
                .map(|(n, _)| n)
                .collect()
        };
        let at_lo = set(lo);
        let at_hi = set(hi);
        prop_assert!(at_hi.is_subset(&at_lo));
    }

    #[test]
    fn similarity_bounds_and_identity(
        u in prop::collection::vec(-5.0f64..5.0, 3..12),
        v_raw in prop::collection::vec(-5.0f64..5.0, 3..12)
    ) {
        let v: Vec<f64> = v_raw.iter().cycle().take(u.len()).copied().collect();
        let s = measure(&u, &v).unwrap();
        prop_assert!((-1.0..=1.0).contains(&s.cosine));
        prop_assert!((-1.0..=1.0).contains(&s.pearson));
        prop_assert!((-1.0..=1.0).contains(&s.spearman));
        prop_assert!(s.euclidean >= 0.0);
        let self_dist = euclidean(&u, &u).unwrap();
        prop_assert!(self_dist < 1e-12);
        if s.euclidean < 1e-12 {
            for (a, b) in u.iter().zip(&v) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn spearman_ignores_monotone_transforms(
        u in prop::collection::vec(0.0f64..1.0, 4..12),
        v in prop::collection::vec(0.0f64..1.0, 12)
    ) {
        let v = &v[..u.len()];
        let stretched: Vec<f64> = v.iter().map(|&x| (3.0 * x).exp() + 2.0).collect();
        let a = spearman(&u, v).unwrap();
        let b = spearman(&u, &stretched).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn pearson_ignores_positive_affine_transforms(
        u in prop::collection::vec(0.0f64..1.0, 4..12),
        v in prop::collection::vec(0.0f64..1.0, 12),
        a in 0.1f64..10.0, b in -5.0f64..5.0
    ) {
        let v = &v[..u.len()];
        let mapped: Vec<f64> = v.iter().map(|&x| a * x + b).collect();
        let r1 = pearson(&u, v).unwrap();
        let r2 = pearson(&u, &mapped).unwrap();
        prop_assert!((r1 - r2).abs() < 1e-9);
    }

    #[test]
    fn auc_symmetries_and_oracle(
        scores in prop::collection::vec(0.0f64..1.0, 4..60),
        bits in prop::collection::vec(prop::bool::ANY, 60)
    ) {
        let labels: Vec<Label> = (0..scores.len()).map(|i| label_of(bits[i])).collect();
        let n_pos = labels.iter().filter(|&&l| l == Label::Aggressive).count();
        prop_assume!(n_pos > 0 && n_pos < labels.len());

        let a = auc(&scores, &labels).unwrap();
        // brute-force pair counting
        prop_assert!((a - pair_counting_auc(&scores, &labels)).abs() < 1e-12);
        // complement symmetry
        let flipped: Vec<f64> = scores.iter().map(|s| 1.0 - s).collect();
        prop_assert!((a + auc(&flipped, &labels).unwrap() - 1.0).abs() < 1e-12);
        // invariance under strictly increasing transforms
        let warped: Vec<f64> = scores.iter().map(|s| (2.0 * s).exp()).collect();
        prop_assert!((a - auc(&warped, &labels).unwrap()).abs() < 1e-12);
    }
}

fn label_of(aggressive: bool) -> Label {
    if aggressive {
        Label::Aggressive
    } else {
        Label::Normal
    }
}

fn check_conservation(mv: &MetricVector) -> std::result::Result<(), TestCaseError> {
    let tol = 1e-12;
    prop_assert!((mv.node_state[0] + mv.node_state[1] - 1.0).abs() < tol);
    prop_assert!((mv.edge_state.iter().sum::<f64>() - 1.0).abs() < tol);
    for s in 0..2 {
        let row: f64 = mv.node_transition[s].iter().sum();
        prop_assert!((row - mv.node_state[s]).abs() < tol);
    }
    for s in 0..4 {
        let row: f64 = mv.edge_transition[s].iter().sum();
        prop_assert!((row - mv.edge_state[s]).abs() < tol);
    }
    Ok(())
}

fn brute_force_largest_scc(g: &DirectedGraph) -> BTreeSet<u64> {
    let n = g.node_count();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
        for &j in g.out_idx(i) {
            row[j] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut seen = vec![false; n];
    let mut best: Option<(usize, u64, BTreeSet<u64>)> = None;
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let mut comp = BTreeSet::new();
        for j in 0..n {
            if reach[i][j] && reach[j][i] {
                comp.insert(g.id_of(j).0);
                seen[j] = true;
            }
        }
        let size = comp.len();
        let min_id = *comp.iter().next().unwrap();
        let better = match &best {
            None => true,
            Some((bs, bm, _)) => size > *bs || (size == *bs && min_id < *bm),
        };
        if better {
            best = Some((size, min_id, comp));
        }
    }
    best.unwrap().2
}

fn pair_counting_auc(scores: &[f64], labels: &[Label]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &li) in labels.iter().enumerate() {
        if li != Label::Aggressive {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj != Label::Normal {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Deterministic restatement of the "normal users resist" observation:
/// big normal neighborhoods with a single aggressive contact cap how far
/// one DeGroot pass can push any normal node.
#[test]
fn normal_users_resist_single_aggressive_contact() {
    // 100 sources x_k, each following 9 distinct normal sinks and one
    // shared aggressive hub; sinks and hub have no outgoing edges.
    let hub = NodeId(0);
    let mut edges = Vec::new();
    for k in 0..100u64 {
        let x = NodeId(1 + k);
        for s in 0..9u64 {
            edges.push((x, NodeId(200 + 9 * k + s)));
        }
        edges.push((x, hub));
    }
    let (g, _) = DirectedGraph::from_edges(std::iter::empty(), &edges);
    let labels: BTreeMap<NodeId, Label> = [(hub, Label::Aggressive)].into();
    let states = seed_states(&g, &labels);
    let schedule = Schedule {
        edges: edges.clone(),
        selection_fraction: 1.0,
        rng_seed: 11,
    };
    let run = run_simulation(
        &g,
        &states,
        find_model("DeGroot").unwrap(),
        &schedule,
        OrderingKind::Random,
        10,
    )
    .unwrap();
    let last = run.snapshots.last().unwrap();
    for (idx, id) in g.nodes().enumerate() {
        if labels.get(&id).copied() == Some(Label::Aggressive) {
            continue;
        }
        assert!(
            last.scores[idx] < 2.0 / 11.0,
            "normal node {} reached {}",
            id,
            last.scores[idx]
        );
    }
}
