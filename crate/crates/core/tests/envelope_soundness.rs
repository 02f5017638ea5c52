mod common;

use common::{perturbation, random_boundaries, rng, ORDERS, VARIANTS};
use elbmatch::datagen::reference_shape;
use elbmatch::{
    block_bounds, build_envelope_ele, build_envelope_seq, exact_match, theta_seq, BlockBounds,
    ElbVariant, LpOrder, Pattern, WindowView,
};
use rand::Rng;

fn random_pattern(r: &mut rand_chacha::ChaCha8Rng, n_max: usize) -> Pattern {
    let n = r.gen_range(1..=n_max);
    let b = r.gen_range(1..=n.min(6));
    let boundaries = random_boundaries(r, n, b);
    let (values, _) = reference_shape(n, 1, r.gen());
    let thresholds = (0..b)
        .map(|_| {
            if r.gen_bool(0.1) {
                0.0
            } else {
                r.gen_range(0.0..2.0)
            }
        })
        .collect();
    Pattern::new(values, boundaries, thresholds).unwrap()
}

#[test]
fn ele_envelope_contains_every_admissible_value() {
    let mut r = rng(1);
    for _ in 0..500 {
        let pattern = random_pattern(&mut r, 30);
        let env = build_envelope_ele(&pattern);
        for (i, u, l) in env.iter() {
            let (p, eps) = (pattern.values()[i - 1], pattern.threshold_at(i - 1));
            for v in [p - eps, p + eps, p + r.gen_range(-eps..=eps)] {
                assert!(l <= v && v <= u);
            }
        }
    }
}

#[test]
fn seq_envelope_contains_admissible_means() {
    // randomized search for a counterexample: segments whose p-th power
    // distance stays within the summed budgets of the overlapped subpatterns
    let mut r = rng(2);
    for _ in 0..3000 {
        let pattern = random_pattern(&mut r, 30);
        let n = pattern.len();
        let w = r.gen_range(1..=n);
        let p = ORDERS[r.gen_range(0..4)];
        let env = build_envelope_seq(&pattern, w, p).unwrap();
        let i = r.gen_range(w..=n);
        let seg = &pattern.values()[i - w..i];
        let index = pattern.index();
        let (kl, kr) = (index.subpattern_of(i - w), index.subpattern_of(i - 1));
        let d: Vec<f64> = match p {
            LpOrder::Finite(q) => {
                let budget: f64 = pattern.thresholds()[kl..=kr]
                    .iter()
                    .map(|e| e.powi(q as i32))
                    .sum::<f64>()
                    .powf(1.0 / f64::from(q));
                perturbation(&mut r, w, budget * (1.0 - 1e-12), p)
            }
            LpOrder::Infinity => (i - w..i)
                .map(|j| pattern.threshold_at(j) * r.gen_range(-1.0..=1.0))
                .collect(),
        };
        let mean = seg.iter().zip(&d).map(|(a, b)| a + b).sum::<f64>() / w as f64;
        let (u, l) = (env.upper(i).unwrap(), env.lower(i).unwrap());
        let slack = 1e-12 * (1.0 + mean.abs());
        assert!(l - slack <= mean && mean <= u + slack, "{l} ≤ {mean} ≤ {u}");
    }
}

#[test]
fn block_bounds_are_exact_max_min() {
    let mut r = rng(3);
    for _ in 0..500 {
        let pattern = random_pattern(&mut r, 60);
        let n = pattern.len();
        let w = r.gen_range(1..=n);
        for variant in VARIANTS {
            let p = ORDERS[r.gen_range(0..4)];
            let env = match variant {
                ElbVariant::Ele => build_envelope_ele(&pattern),
                ElbVariant::Seq => build_envelope_seq(&pattern, w, p).unwrap(),
            };
            let bb = block_bounds(&env, w, n).unwrap();
            assert_eq!(bb.block_count(), n / w);
            for j in 1..=n / w {
                let idx: Vec<usize> = (0..w)
                    .map(|o| j * w - o)
                    .filter(|&i| i >= env.valid_from())
                    .collect();
                let hi = idx
                    .iter()
                    .map(|&i| env.upper(i).unwrap())
                    .fold(f64::MIN, f64::max);
                let lo = idx
                    .iter()
                    .map(|&i| env.lower(i).unwrap())
                    .fold(f64::MAX, f64::min);
                assert_eq!(bb.interval(j), (lo, hi));
                if j >= bb.active_from() {
                    assert!(lo <= hi);
                }
            }
        }
    }
}

#[test]
fn theta_matches_direct_sum() {
    let mut r = rng(4);
    for _ in 0..500 {
        let pattern = random_pattern(&mut r, 40);
        let n = pattern.len();
        let w = r.gen_range(1..=n);
        let i = r.gen_range(w..=n);
        let eps_at: Vec<f64> = (i - w..i).map(|j| pattern.threshold_at(j)).collect();
        let mut ks: Vec<usize> = (i - w..i)
            .map(|j| pattern.index().subpattern_of(j))
            .collect();
        ks.dedup();
        for p in ORDERS {
            let expected = match p {
                LpOrder::Finite(q) => {
                    let s: f64 = ks
                        .iter()
                        .map(|&k| pattern.thresholds()[k].powf(f64::from(q)))
                        .sum();
                    (s / w as f64).powf(1.0 / f64::from(q))
                }
                LpOrder::Infinity => eps_at.iter().sum::<f64>() / w as f64,
            };
            let got = theta_seq(&pattern, i, w, p).unwrap();
            assert!(
                (got - expected).abs() <= 1e-12 * (1.0 + expected),
                "{got} vs {expected}"
            );
        }
    }
}

/// The group property end to end: a matching window `W_{t+i}` forces every
/// active block feature of the anchor `W_t` inside its interval.
#[test]
fn matching_window_keeps_anchor_features_in_bounds() {
    let mut r = rng(5);
    let mut checked = 0;
    for _ in 0..4000 {
        let pattern = random_pattern(&mut r, 40);
        let n = pattern.len();
        let w = r.gen_range(1..=n);
        let p = ORDERS[r.gen_range(0..4)];
        let shift = r.gen_range(0..w);
        let mut seg: Vec<f64> = (0..n + w - 1).map(|_| r.gen_range(-5.0..5.0)).collect();
        for k in 0..pattern.subpattern_count() {
            let range = pattern.index().range(k);
            let d = perturbation(&mut r, range.len(), pattern.thresholds()[k], p);
            for (o, i) in range.enumerate() {
                seg[shift + i] = pattern.values()[i] + d[o];
            }
        }
        let window = WindowView::new(1, &seg[shift..shift + n]);
        if !exact_match(&pattern, &window, p).unwrap() {
            continue;
        }
        checked += 1;
        for variant in VARIANTS {
            let bb = BlockBounds::for_pattern(&pattern, variant, w, p).unwrap();
            for j in bb.active_from()..=bb.block_count() {
                let block = &seg[(j - 1) * w..j * w];
                let f = match variant {
                    ElbVariant::Ele => block[w - 1],
                    ElbVariant::Seq => block.iter().sum::<f64>() / w as f64,
                };
                let (lo, hi) = bb.interval(j);
                let slack =
                    1e-9 * (f.abs() + pattern.values().iter().fold(0.0_f64, |m, v| m.max(v.abs())));
                assert!(lo - slack <= f && f <= hi + slack);
            }
        }
    }
    assert!(checked > 3000);
}
