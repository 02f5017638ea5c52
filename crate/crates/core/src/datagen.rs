//! Synthetic workloads: random-walk streams with embedded pattern copies and
//! thresholds derived from a threshold ratio.
//!
//! All randomness comes from `ChaCha8Rng` seeded with `seed_from_u64`; the
//! walk uses ChaCha stream 0 and embedding uses stream 1, so the two can be
//! regenerated independently. Uniforms are 53-bit floats in `[0, 1)`.

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distance::value_range;
use crate::error::{Error, Result};
use crate::pattern::{LpOrder, Pattern};

/// Identity of the generator, recorded in output metadata.
pub const RNG_NAME: &str =
    "ChaCha8Rng(rand_chacha 0.3, seed_from_u64; walk stream 0, embed stream 1)";

/// Embedding gives up once rejected overlapping sites outnumber placed ones
/// by this factor.
pub const MAX_REJECTION_RATIO: usize = 2;
const MIN_REJECTIONS_FOR_SATURATION: usize = 16;

pub const DEFAULT_THRESHOLD_RATIO: f64 = 0.2;
pub const DEFAULT_PROBABILITY: f64 = 1e-4;
pub const DEFAULT_PATTERN_LEN: usize = 235;
pub const DEFAULT_SUBPATTERNS: usize = 5;
pub const DEFAULT_PATTERN_SEED: u64 = 0x5eed;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `s_i = base + Σ_{j≤i} (μ_j - 0.5)` with `μ_j ~ U[0, 1)`.
pub fn random_walk(length: usize, seed: u64, base: f64) -> Vec<f64> {
    let mut rng = rng(seed, 0);
    let mut acc = base;
    (0..length)
        .map(|_| {
            acc += rng.gen::<f64>() - 0.5;
            acc
        })
        .collect()
}

/// 1-based start timestamps of embedded pattern copies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmbedLog {
    pub starts: Vec<u64>,
}

/// Embed exact copies of `values` into `stream`.
///
/// Every timestamp that leaves room for a full copy becomes a start with
/// `probability`; a start overlapping the previous copy is rejected.
pub fn embed(
    stream: Vec<f64>,
    values: &[f64],
    probability: f64,
    seed: u64,
) -> Result<(Vec<f64>, EmbedLog)> {
    embed_noisy(stream, values, probability, seed, 0.0)
}

/// Like [`embed`], adding `U[-noise, noise]` to every copied value.
pub fn embed_noisy(
    mut stream: Vec<f64>,
    values: &[f64],
    probability: f64,
    seed: u64,
    noise: f64,
) -> Result<(Vec<f64>, EmbedLog)> {
    let n = values.len();
    if n == 0 || n > stream.len() {
        return Err(Error::usage(format!(
            "pattern of length {n} does not fit a stream of length {}",
            stream.len()
        )));
    }
    if !(0.0..=1.0).contains(&probability) {
        return Err(Error::usage(format!(
            "occurrence probability {probability} outside [0, 1]"
        )));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Error::usage(format!("noise amplitude {noise} must be ≥ 0")));
    }
    let mut log = EmbedLog::default();
    if probability == 0.0 {
        return Ok((stream, log));
    }
    if probability * n as f64 > 1.0 {
        warn!(
            "occurrence probability {probability} × pattern length {n} > 1: \
             embeddings will saturate the stream"
        );
    }
    let mut rng = rng(seed, 1);
    let mut next_free = 0usize;
    let mut rejected = 0usize;
    for start in 0..=stream.len() - n {
        if rng.gen::<f64>() >= probability {
            continue;
        }
        if start < next_free {
            rejected += 1;
            if rejected >= MIN_REJECTIONS_FOR_SATURATION
                && rejected > MAX_REJECTION_RATIO * log.starts.len()
            {
                return Err(Error::Saturated {
                    accepted: log.starts.len(),
                    rejected,
                    probability,
                    pattern_len: n,
                });
            }
            continue;
        }
        for (dst, &v) in stream[start..start + n].iter_mut().zip(values) {
            *dst = if noise > 0.0 {
                v + rng.gen_range(-noise..=noise)
            } else {
                v
            };
        }
        log.starts.push(start as u64 + 1);
        next_free = start + n;
    }
    Ok((stream, log))
}

/// `ε_k = |P_k|^{1/p} × ratio × value_range(P_k)`; `|P_k|^{1/∞}` is 1.
pub fn derive_thresholds(
    values: &[f64],
    boundaries: &[usize],
    ratio: f64,
    p: LpOrder,
) -> Result<Vec<f64>> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::usage(format!("threshold ratio {ratio} must be > 0")));
    }
    if boundaries.iter().sum::<usize>() != values.len() || boundaries.contains(&0) {
        return Err(Error::usage(format!(
            "boundaries {boundaries:?} do not partition {} values",
            values.len()
        )));
    }
    let mut start = 0;
    boundaries
        .iter()
        .enumerate()
        .map(|(k, &len)| {
            let seg = &values[start..start + len];
            start += len;
            let range = value_range(seg)?;
            if range == 0.0 {
                warn!("subpattern k={} is constant; its threshold is 0", k + 1);
            }
            let scale = match p {
                LpOrder::Finite(1) => len as f64,
                LpOrder::Finite(q) => (len as f64).powf(1.0 / f64::from(q)),
                LpOrder::Infinity => 1.0,
            };
            Ok(scale * ratio * range)
        })
        .collect()
}

/// Pattern with thresholds from [`derive_thresholds`].
pub fn pattern_with_ratio(
    values: Vec<f64>,
    boundaries: Vec<usize>,
    ratio: f64,
    p: LpOrder,
) -> Result<Pattern> {
    let thresholds = derive_thresholds(&values, &boundaries, ratio, p)?;
    Pattern::new(values, boundaries, thresholds)
}

/// `b` near-equal subpattern lengths summing to `n`.
pub fn even_boundaries(n: usize, b: usize) -> Vec<usize> {
    let b = b.clamp(1, n.max(1));
    (0..b).map(|k| n / b + usize::from(k < n % b)).collect()
}

/// A smooth random shape rescaled to `[-3, 3]`, split into `b` near-equal
/// subpatterns. Stands in for a benchmark archive series.
pub fn reference_shape(n: usize, b: usize, seed: u64) -> (Vec<f64>, Vec<usize>) {
    let raw = random_walk(n, seed, 0.0);
    let half = (n / 40).max(1);
    let smooth: Vec<f64> = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            raw[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect();
    let (lo, hi) = smooth
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let values = smooth.iter().map(|v| (v - lo) / span * 6.0 - 3.0).collect();
    (values, even_boundaries(n, b))
}

/// Extreme operating gust profile of amplitude `amplitude`: a slight dip, a
/// steep rise and drop, and a recovery, as three subpatterns.
pub fn gust_shape(n: usize, amplitude: f64) -> (Vec<f64>, Vec<usize>) {
    use std::f64::consts::PI;
    let values = (0..n)
        .map(|i| {
            let x = i as f64 / (n.max(2) - 1) as f64;
            -0.37 * amplitude * (3.0 * PI * x).sin() * (1.0 - (2.0 * PI * x).cos())
        })
        .collect();
    let third = n / 3;
    (values, vec![third, n - 2 * third, third])
}

/// Parameters of a synthetic workload.
#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub length: usize,
    pub seed: u64,
    /// Random-walk base `R`.
    pub base: f64,
    pub occurrence_probability: f64,
    pub threshold_ratio: f64,
    pub p: LpOrder,
    pub noise: f64,
    pub values: Vec<f64>,
    pub boundaries: Vec<usize>,
}

impl GenConfig {
    /// Default workload over the built-in reference shape.
    pub fn with_defaults(length: usize, seed: u64) -> Self {
        let (values, boundaries) = reference_shape(
            DEFAULT_PATTERN_LEN,
            DEFAULT_SUBPATTERNS,
            DEFAULT_PATTERN_SEED,
        );
        Self {
            length,
            seed,
            base: 0.0,
            occurrence_probability: DEFAULT_PROBABILITY,
            threshold_ratio: DEFAULT_THRESHOLD_RATIO,
            p: LpOrder::L2,
            noise: 0.0,
            values,
            boundaries,
        }
    }

    pub fn generate(&self) -> Result<Workload> {
        if self.length == 0 {
            return Err(Error::usage("stream length must be ≥ 1"));
        }
        let pattern = pattern_with_ratio(
            self.values.clone(),
            self.boundaries.clone(),
            self.threshold_ratio,
            self.p,
        )?;
        let walk = random_walk(self.length, self.seed, self.base);
        let (stream, log) = embed_noisy(
            walk,
            pattern.values(),
            self.occurrence_probability,
            self.seed,
            self.noise,
        )?;
        Ok(Workload {
            pattern,
            stream,
            log,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Workload {
    pub pattern: Pattern,
    pub stream: Vec<f64>,
    pub log: EmbedLog,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn walk_steps_are_bounded() {
        let s = random_walk(1000, 3, 0.0);
        assert!(s[0].abs() <= 0.5);
        assert!(s.windows(2).all(|w| (w[1] - w[0]).abs() <= 0.5));
        assert_eq!(s, random_walk(1000, 3, 0.0));
        assert_ne!(s, random_walk(1000, 4, 0.0));
        let shifted = random_walk(1000, 3, 10.0);
        assert_relative_eq!(shifted[999] - s[999], 10.0, max_relative = 1e-9);
    }

    #[test]
    fn walk_first_step_has_zero_mean() {
        let mean = (0..10_000u64)
            .map(|seed| random_walk(1, seed, 0.0)[0])
            .sum::<f64>()
            / 10_000.0;
        assert!(mean.abs() < 0.02, "{mean}");
    }

    #[test]
    fn zero_probability_leaves_stream() {
        let s = random_walk(100, 1, 0.0);
        let (out, log) = embed(s.clone(), &[1.0, 2.0], 0.0, 1).unwrap();
        assert_eq!(out, s);
        assert!(log.starts.is_empty());
    }

    #[test]
    fn embedding_count_tracks_probability() {
        let values = vec![0.0; 100];
        for seed in 0..5 {
            let (_, log) = embed(vec![1.0; 1_000_000], &values, 1e-4, seed).unwrap();
            let c = log.starts.len() as f64;
            assert!((70.0..=130.0).contains(&c), "seed {seed}: {c}");
        }
    }

    #[test]
    fn embeddings_do_not_overlap() {
        let values: Vec<f64> = (0..50).map(f64::from).collect();
        let (s, log) = embed(vec![-1.0; 20_000], &values, 5e-3, 9).unwrap();
        assert!(log.starts.len() > 10);
        for w in log.starts.windows(2) {
            assert!(w[1] - w[0] >= 50);
        }
        for &t in &log.starts {
            let t = t as usize - 1;
            assert_eq!(&s[t..t + 50], values.as_slice());
        }
    }

    #[test]
    fn saturation_is_an_error() {
        let values = vec![0.0; 200];
        let err = embed(vec![0.0; 100_000], &values, 0.9, 1).unwrap_err();
        assert!(matches!(err, Error::Saturated { .. }));
    }

    #[test]
    fn embed_is_deterministic() {
        let values = vec![3.0; 10];
        let a = embed_noisy(random_walk(5000, 2, 0.0), &values, 1e-2, 2, 0.1).unwrap();
        let b = embed_noisy(random_walk(5000, 2, 0.0), &values, 1e-2, 2, 0.1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn threshold_examples() {
        let values = [0.0, 2.0, 1.0, 1.0];
        let eps = |p| derive_thresholds(&values, &[4], 0.2, p).unwrap()[0];
        assert_relative_eq!(eps(LpOrder::L2), 0.8, max_relative = 1e-12);
        assert_relative_eq!(eps(LpOrder::L1), 1.6, max_relative = 1e-12);
        assert_relative_eq!(eps(LpOrder::Infinity), 0.4, max_relative = 1e-12);
    }

    #[test]
    fn constant_subpattern_gets_zero_threshold() {
        let eps = derive_thresholds(&[1.0, 1.0, 0.0, 3.0], &[2, 2], 0.1, LpOrder::L2).unwrap();
        assert_eq!(eps[0], 0.0);
        assert!(eps[1] > 0.0);
        assert!(derive_thresholds(&[1.0], &[1], 0.0, LpOrder::L2).is_err());
        assert!(derive_thresholds(&[1.0, 2.0], &[3], 0.1, LpOrder::L2).is_err());
    }

    #[test]
    fn shapes() {
        let (v, b) = reference_shape(235, 5, 1);
        assert_eq!(v.len(), 235);
        assert_eq!(b.iter().sum::<usize>(), 235);
        assert_eq!(b.len(), 5);
        let (lo, hi) = v
            .iter()
            .fold((9.0f64, -9.0f64), |(a, c), &x| (a.min(x), c.max(x)));
        assert_relative_eq!(lo, -3.0, epsilon = 1e-12);
        assert_relative_eq!(hi, 3.0, epsilon = 1e-12);

        let (g, gb) = gust_shape(90, 10.0);
        assert_eq!(gb, vec![30, 30, 30]);
        let peak = g.iter().cloned().fold(f64::MIN, f64::max);
        assert!(peak > 5.0 && g[10] < 0.0);
        assert_eq!(even_boundaries(10, 3), vec![4, 3, 3]);
    }

    #[test]
    fn default_workload_embeds_exact_copies() {
        let w = GenConfig::with_defaults(200_000, 11).generate().unwrap();
        assert_eq!(w.stream.len(), 200_000);
        for &t in &w.log.starts {
            let t = t as usize - 1;
            assert_eq!(&w.stream[t..t + w.pattern.len()], w.pattern.values());
        }
    }
}
