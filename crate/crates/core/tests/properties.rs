use oblivious_stacking::analysis::{expected_cut_ratio, p_sc_given_ov};
use oblivious_stacking::graph::{count_overlapping_pairs_naive, evaluate_cut_naive, overlaps_by_distance};
use oblivious_stacking::{
    build_overlap_graph, count_overlapping_pairs, evaluate_cut, generate_scheinerman, greedy_kcut, max_kcut_exact,
    overlaps, random_coloring, ColorRule, Coloring, Interval, ModelParams,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn interval() -> impl Strategy<Value = Interval<f64>> {
    (0.0..=1.0f64, 0.0..=0.5f64).prop_map(|(c, l)| Interval::new(c, l).unwrap())
}

// small integer endpoints to force ties
fn tied_interval() -> impl Strategy<Value = Interval<f64>> {
    (0i32..12, 0i32..6).prop_map(|(lo, len)| Interval::from_endpoints(lo as f64, (lo + len) as f64).unwrap())
}

proptest! {
    #[test]
    fn overlap_symmetric_irreflexive(a in interval(), b in interval()) {
        prop_assert_eq!(overlaps(&a, &b), overlaps(&b, &a));
        prop_assert!(!overlaps(&a, &a));
    }

    #[test]
    fn distance_form_agrees_on_integers(a in tied_interval(), b in tied_interval()) {
        // exact arithmetic on small dyadic values
        let d = (a.center - b.center).abs();
        prop_assert_eq!(overlaps(&a, &b), overlaps_by_distance(&d, &a.length, &b.length));
    }

    #[test]
    fn sweep_matches_naive_with_ties(ivs in prop::collection::vec(tied_interval(), 0..40)) {
        prop_assert_eq!(count_overlapping_pairs(&ivs), count_overlapping_pairs_naive(&ivs));
    }

    #[test]
    fn cut_eval_matches_naive(
        ivs in prop::collection::vec(interval(), 0..60),
        seed in any::<u64>(),
        k in 2u32..6,
    ) {
        let coloring = random_coloring(ivs.len(), k, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(evaluate_cut(&ivs, &coloring).unwrap(), evaluate_cut_naive(&ivs, &coloring).unwrap());
    }

    #[test]
    fn coloring_is_oblivious(ivs in prop::collection::vec(interval(), 1..30), rot in 0usize..30) {
        let rule = ColorRule::new(4, 0.25).unwrap();
        let colors = rule.color_instance(&ivs).unwrap();
        let mut rotated = ivs.clone();
        let r = rot % ivs.len();
        rotated.rotate_left(r);
        let mut expected = colors.colors().to_vec();
        expected.rotate_left(r);
        prop_assert_eq!(rule.color_instance(&rotated).unwrap().into_colors(), expected);
    }

    #[test]
    fn same_color_distinct_cells_never_overlap(ivs in prop::collection::vec(interval(), 2..40), k in 3u32..8, j in 2i64..6) {
        let len = (k as f64 - 1.0) / (j as f64 * k as f64);
        let rule = ColorRule::new(k, len).unwrap();
        let ivs: Vec<_> = ivs.into_iter().map(|iv| Interval::new(iv.center, iv.length.min(len)).unwrap()).collect();
        for a in &ivs {
            for b in &ivs {
                let (ja, jb) = (rule.j_index(&a.center).unwrap(), rule.j_index(&b.center).unwrap());
                if ja != jb && rule.color_of_j(ja) == rule.color_of_j(jb) {
                    prop_assert!(!overlaps(a, b));
                }
            }
        }
    }

    #[test]
    fn cells_share_colors(c1 in 0.0..1.0f64, c2 in 0.0..1.0f64) {
        let rule = ColorRule::new(5, 0.16).unwrap();
        let a = Interval::new(c1, 0.0).unwrap();
        let b = Interval::new(c2, 0.0).unwrap();
        if rule.j_index(&c1).unwrap() == rule.j_index(&c2).unwrap() {
            prop_assert_eq!(rule.assign_color(&a).unwrap(), rule.assign_color(&b).unwrap());
        }
    }

    #[test]
    fn exact_dominates_any_coloring(ivs in prop::collection::vec(interval(), 1..11), seed in any::<u64>(), k in 2u32..4) {
        let graph = build_overlap_graph(&ivs);
        let (best, best_coloring) = max_kcut_exact(&graph, k).unwrap();
        prop_assert_eq!(graph.cut_size(best_coloring.colors()), best);
        let coloring = random_coloring(ivs.len(), k, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(evaluate_cut(&ivs, &coloring).unwrap().cut <= best);
        let (greedy, _) = greedy_kcut(&graph, k).unwrap();
        prop_assert!(greedy <= best);
        prop_assert!(u64::from(k) * greedy >= u64::from(k - 1) * graph.num_edges() as u64);
    }
}

#[test]
fn exact_solver_brute_force_agreement() {
    // full k^n enumeration as an independent oracle
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..30 {
        let params = ModelParams::new(8, 3, 0.6, rand::Rng::gen(&mut rng)).unwrap();
        let ivs = generate_scheinerman(&params, &mut params.rng()).unwrap();
        let graph = build_overlap_graph(&ivs);
        for k in 2..=3u32 {
            let mut best = 0;
            let total = (k as usize).pow(8);
            for code in 0..total {
                let mut c = code;
                let colors: Vec<u32> = (0..8)
                    .map(|_| {
                        let v = (c % k as usize) as u32 + 1;
                        c /= k as usize;
                        v
                    })
                    .collect();
                best = best.max(graph.cut_size(&colors));
            }
            assert_eq!(max_kcut_exact(&graph, k).unwrap().0, best);
        }
    }
}

#[test]
fn exact_solver_full_size_is_fast() {
    let params = ModelParams::new(16, 3, 0.8, 5).unwrap();
    let graph = build_overlap_graph(&generate_scheinerman(&params, &mut params.rng()).unwrap());
    let start = std::time::Instant::now();
    let (best, coloring) = max_kcut_exact(&graph, 4).unwrap();
    assert!(start.elapsed().as_secs_f64() < 5.0);
    assert_eq!(coloring.len(), 16);
    assert!(best as usize <= graph.num_edges());
}

#[test]
fn oblivious_beats_random_on_average() {
    let k = 5;
    let rule = ColorRule::new(k, 0.16).unwrap();
    let (mut diffs, trials) = (Vec::new(), 100u64);
    for seed in 0..trials {
        let params = ModelParams::new(1000, k, 0.16, seed).unwrap();
        let ivs = generate_scheinerman(&params, &mut params.rng()).unwrap();
        let ours = evaluate_cut(&ivs, &rule.color_instance(&ivs).unwrap()).unwrap();
        let random = random_coloring(ivs.len(), k, &mut ChaCha8Rng::seed_from_u64(seed ^ 0xABCD)).unwrap();
        let theirs = evaluate_cut(&ivs, &random).unwrap();
        diffs.push(ours.cut as f64 - theirs.cut as f64);
    }
    let mean = diffs.iter().sum::<f64>() / trials as f64;
    let sd = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (trials - 1) as f64).sqrt();
    assert!(mean > 3.0 * sd / (trials as f64).sqrt(), "mean {mean} sd {sd}");
}

#[test]
fn oblivious_cut_ratio_tracks_closed_form() {
    let k = 10;
    let params = ModelParams::<f64>::with_standard_len(100_000, k, 77).unwrap();
    let ivs = generate_scheinerman(&params, &mut params.rng()).unwrap();
    let rule = ColorRule::new(k, params.max_len).unwrap();
    let stats = evaluate_cut(&ivs, &rule.color_instance(&ivs).unwrap()).unwrap();
    let expected = expected_cut_ratio(k, &params.max_len).unwrap();
    assert!((stats.ratio().unwrap() - expected).abs() < 0.002);
    assert!(p_sc_given_ov(k, &params.max_len).unwrap() < 1.0 / k as f64);
}

#[test]
fn rate_is_quadratic_in_colors() {
    let scaled: Vec<f64> = [5u32, 10, 20, 40, 80, 160, 320]
        .iter()
        .map(|&k| {
            let len = oblivious_stacking::standard_max_len::<f64>(k);
            (k * k) as f64 * p_sc_given_ov(k, &len).unwrap()
        })
        .collect();
    // converges to 12 / (8 - 3/5) * 4/3 = 160/74
    let limit = 160.0 / 74.0;
    assert!((scaled.last().unwrap() - limit).abs() < 0.02);
    assert!(scaled.windows(2).all(|w| (w[1] - limit).abs() < (w[0] - limit).abs()));
}

#[test]
fn coloring_rejects_mismatch() {
    let ivs = vec![Interval::new(0.5, 0.1).unwrap()];
    let coloring = Coloring::new(vec![1, 2], 2).unwrap();
    assert!(evaluate_cut(&ivs, &coloring).is_err());
}
