mod common;

use common::{naive_matches, random_instance, Instance, ORDERS, SMALL, VARIANTS};
use elbmatch::{
    lp_distance, process_stream, sequential_scan, ElbVariant, LpOrder, MatchPlan, MatcherConfig,
    Pattern,
};
use proptest::prelude::*;

fn config(inst: &Instance) -> MatcherConfig {
    MatcherConfig::new(inst.pattern.clone(), inst.p, inst.variant, inst.w).unwrap()
}

#[test]
fn oracle_agrees_with_naive_scan() {
    let mut with_matches = 0;
    for seed in 0..1000 {
        let inst = random_instance(seed, &SMALL);
        let pattern = &inst.pattern;
        let expected = naive_matches(
            pattern.values(),
            pattern.boundaries(),
            pattern.thresholds(),
            &inst.stream,
            inst.p,
        );
        let got = sequential_scan(pattern, &inst.stream, inst.p).unwrap();
        assert_eq!(got.matches, expected, "seed {seed}");
        with_matches += usize::from(!expected.is_empty());
    }
    // the generator must actually produce matches for this to mean much
    assert!(
        with_matches > 300,
        "only {with_matches} instances had matches"
    );
}

#[test]
fn embedded_pattern_found_at_eleven() {
    let values = vec![1.0, 2.0, 3.0, 4.0];
    let mut stream = vec![100.0; 30];
    stream[10..14].copy_from_slice(&values);
    // brute force over all 27 windows
    let expected: Vec<u64> = (0..=stream.len() - 4)
        .filter(|&t| lp_distance(&values, &stream[t..t + 4], LpOrder::L2).unwrap() <= 0.1)
        .map(|t| t as u64 + 1)
        .collect();
    assert_eq!(expected, vec![11]);
    let pattern = Pattern::single(values, 0.1).unwrap();
    for variant in VARIANTS {
        let config = MatcherConfig::new(pattern.clone(), LpOrder::L2, variant, 2).unwrap();
        assert_eq!(
            process_stream(&config, stream.clone()).unwrap().matches,
            expected
        );
    }
}

#[test]
fn matcher_equals_oracle_on_small_instances() {
    for seed in 0..2000 {
        let inst = random_instance(10_000 + seed, &SMALL);
        let report = process_stream(&config(&inst), inst.stream.iter().copied()).unwrap();
        let oracle = sequential_scan(&inst.pattern, &inst.stream, inst.p).unwrap();
        assert_eq!(report.matches, oracle.matches, "seed {seed}: {inst:?}");
        let s = report.stats;
        assert_eq!(s.windows_pruned + s.candidates_verified, s.windows_total);
        assert_eq!(s.windows_total, oracle.windows_total);
    }
}

#[test]
fn pruned_groups_never_hold_a_match() {
    for seed in 0..300 {
        let inst = random_instance(50_000 + seed, &SMALL);
        let n = inst.pattern.len();
        let truth = sequential_scan(&inst.pattern, &inst.stream, inst.p)
            .unwrap()
            .matches;
        let mut matcher = MatchPlan::new(config(&inst)).unwrap().matcher();
        for &v in &inst.stream {
            matcher.push(v).unwrap();
            if matcher.seen() >= n as u64 {
                let start = matcher.seen() - n as u64 + 1;
                if truth.binary_search(&start).is_ok() {
                    assert!(
                        !matcher.group_pruned(),
                        "seed {seed}: window {start} pruned"
                    );
                }
            }
        }
    }
}

#[test]
fn features_align_across_anchors() {
    for seed in 0..100 {
        let inst = random_instance(70_000 + seed, &SMALL);
        let (n, w) = (inst.pattern.len(), inst.w);
        let mut matcher = MatchPlan::new(config(&inst)).unwrap().matcher();
        let mut previous: Option<Vec<f64>> = None;
        for (i, &v) in inst.stream.iter().enumerate() {
            matcher.push(v).unwrap();
            let seen = i + 1;
            if seen < n || (seen - n) % w != 0 {
                continue;
            }
            let anchor = seen - n; // 0-based anchor start
            let feats: Vec<f64> = matcher.features().collect();
            let fresh: Vec<f64> = (0..n / w)
                .map(|j| {
                    let block = &inst.stream[anchor + j * w..anchor + (j + 1) * w];
                    match inst.variant {
                        ElbVariant::Ele => block[w - 1],
                        ElbVariant::Seq => block.iter().sum::<f64>() / w as f64,
                    }
                })
                .collect();
            let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(&feats), bits(&fresh), "seed {seed}, anchor {anchor}");
            if let Some(prev) = previous {
                assert_eq!(bits(&prev[1..]), bits(&feats[..feats.len() - 1]));
            }
            previous = Some(feats);
        }
    }
}

#[test]
fn runs_are_deterministic() {
    for seed in 0..50 {
        let inst = random_instance(90_000 + seed, &SMALL);
        let a = process_stream(&config(&inst), inst.stream.clone()).unwrap();
        let b = process_stream(&config(&inst), inst.stream.clone()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn shared_plan_across_threads() {
    let inst = random_instance(7, &SMALL);
    let plan = MatchPlan::new(config(&inst)).unwrap();
    let expected = plan.run(inst.stream.iter().copied()).unwrap();
    std::thread::scope(|s| {
        for _ in 0..4 {
            let plan = plan.clone();
            let stream = &inst.stream;
            let expected = &expected;
            s.spawn(move || assert_eq!(&plan.run(stream.iter().copied()).unwrap(), expected));
        }
    });
}

#[test]
fn stream_tail_counts_only_complete_windows() {
    let pattern = Pattern::single((0..10).map(f64::from).collect(), 1e9).unwrap();
    for len in 0..30 {
        for variant in VARIANTS {
            let config = MatcherConfig::new(pattern.clone(), LpOrder::L1, variant, 4).unwrap();
            let r = process_stream(&config, vec![0.0; len]).unwrap();
            let windows = len.saturating_sub(9) as u64;
            assert_eq!(r.stats.windows_total, windows);
            assert_eq!(r.matches.len() as u64, windows);
        }
    }
}

#[test]
fn single_block_seq_never_prunes() {
    let pattern = Pattern::single(vec![0.0; 8], 0.01).unwrap();
    let config = MatcherConfig::new(pattern, LpOrder::L2, ElbVariant::Seq, 5).unwrap();
    let r = process_stream(&config, vec![1e6; 100]).unwrap();
    assert_eq!(r.stats.windows_pruned, 0);
    assert_eq!(r.stats.block_checks, 0);
    assert_eq!(r.stats.candidates_verified, r.stats.windows_total);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn matcher_matches_oracle(
        seed in any::<u64>(),
        p_idx in 0usize..4,
        seq in any::<bool>(),
        w_pct in 1u32..=50,
    ) {
        let mut inst = random_instance(seed, &SMALL);
        inst.p = ORDERS[p_idx];
        inst.variant = if seq { ElbVariant::Seq } else { ElbVariant::Ele };
        inst.w = ((w_pct as usize * inst.pattern.len()) / 100).max(1);
        let report = process_stream(&config(&inst), inst.stream.clone()).unwrap();
        let oracle = sequential_scan(&inst.pattern, &inst.stream, inst.p).unwrap();
        prop_assert_eq!(report.matches, oracle.matches);
    }
}
