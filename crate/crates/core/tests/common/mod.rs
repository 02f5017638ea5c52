#![allow(dead_code)]

use elbmatch::datagen::{derive_thresholds, embed, embed_noisy, random_walk, reference_shape};
use elbmatch::{ElbVariant, LpOrder, Pattern};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ORDERS: [LpOrder; 4] = [
    LpOrder::L1,
    LpOrder::L2,
    LpOrder::Finite(3),
    LpOrder::Infinity,
];

pub const VARIANTS: [ElbVariant; 2] = [ElbVariant::Ele, ElbVariant::Seq];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Brute-force matcher sharing no code with the library: every window,
/// every subpattern, no early exit.
pub fn naive_matches(
    values: &[f64],
    boundaries: &[usize],
    thresholds: &[f64],
    stream: &[f64],
    p: LpOrder,
) -> Vec<u64> {
    let n = values.len();
    if stream.len() < n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for t in 0..=stream.len() - n {
        let mut ok = true;
        let mut start = 0;
        for (k, &len) in boundaries.iter().enumerate() {
            let diffs = (start..start + len).map(|i| (values[i] - stream[t + i]).abs());
            let dist = match p {
                LpOrder::Infinity => diffs.fold(0.0, f64::max),
                LpOrder::Finite(q) => {
                    let q = f64::from(q);
                    diffs.map(|d| d.powf(q)).sum::<f64>().powf(1.0 / q)
                }
            };
            ok &= dist <= thresholds[k];
            start += len;
        }
        if ok {
            out.push(t as u64 + 1);
        }
    }
    out
}

/// Random partition of `n` into `b` positive lengths.
pub fn random_boundaries(rng: &mut ChaCha8Rng, n: usize, b: usize) -> Vec<usize> {
    let b = b.clamp(1, n);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(b - 1).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut out = Vec::with_capacity(b);
    for c in cuts.into_iter().chain(std::iter::once(n)) {
        out.push(c - prev);
        prev = c;
    }
    out
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub pattern: Pattern,
    pub stream: Vec<f64>,
    pub p: LpOrder,
    pub variant: ElbVariant,
    pub w: usize,
    pub threshold_ratio: f64,
}

pub struct InstanceShape {
    pub n: (usize, usize),
    pub b: (usize, usize),
    pub block_percent: (f64, f64),
    pub ratio: (f64, f64),
    pub length: (usize, usize),
}

pub const SMALL: InstanceShape = InstanceShape {
    n: (2, 40),
    b: (1, 5),
    block_percent: (1.0, 50.0),
    ratio: (0.05, 0.6),
    length: (0, 400),
};

/// A pattern plus a stream that contains exact copies, noisy copies and
/// random-walk background, so instances have both matches and near misses.
pub fn random_instance(seed: u64, shape: &InstanceShape) -> Instance {
    let mut r = rng(seed);
    let n = r.gen_range(shape.n.0..=shape.n.1);
    let b = r.gen_range(shape.b.0..=shape.b.1.min(n));
    let boundaries = random_boundaries(&mut r, n, b);
    let (values, _) = reference_shape(n, 1, r.gen());
    let p = ORDERS[r.gen_range(0..4)];
    let variant = VARIANTS[r.gen_range(0..2)];
    let percent = r.gen_range(shape.block_percent.0..=shape.block_percent.1);
    let w = ((percent * n as f64 / 100.0) as usize).clamp(1, n);
    let ratio = r.gen_range(shape.ratio.0..=shape.ratio.1);
    let thresholds = derive_thresholds(&values, &boundaries, ratio, p).unwrap();
    let pattern = Pattern::new(values, boundaries, thresholds).unwrap();

    let length = r.gen_range(shape.length.0..=shape.length.1);
    let mut stream = random_walk(length, r.gen(), r.gen_range(-3.0..3.0));
    if length >= n {
        let prob = (4.0 / length as f64).min(0.5 / n as f64);
        stream = embed(stream, pattern.values(), prob, r.gen()).unwrap().0;
        let noise = ratio * 6.0 * r.gen_range(0.05..0.6);
        stream = embed_noisy(stream, pattern.values(), prob * 2.0, r.gen(), noise)
            .unwrap()
            .0;
    }
    Instance {
        pattern,
        stream,
        p,
        variant,
        w,
        threshold_ratio: ratio,
    }
}

fn lp_norm(d: &[f64], p: LpOrder) -> f64 {
    match p {
        LpOrder::Infinity => d.iter().fold(0.0, |m, x| m.max(x.abs())),
        LpOrder::Finite(q) => {
            let q = f64::from(q);
            d.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q)
        }
    }
}

/// A perturbation of length `len` whose L_p norm is at most `budget`.
/// Mixes random directions, same-sign shifts and single spikes, with a
/// good share exactly on the budget.
pub fn perturbation(r: &mut ChaCha8Rng, len: usize, budget: f64, p: LpOrder) -> Vec<f64> {
    let scale = if r.gen_bool(0.4) { 1.0 } else { r.gen::<f64>() };
    let sign = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
    let mut d: Vec<f64> = match r.gen_range(0..3) {
        0 => (0..len).map(|_| r.gen_range(-1.0..=1.0)).collect(),
        1 => vec![sign; len],
        _ => {
            let mut v = vec![0.0; len];
            v[r.gen_range(0..len)] = sign;
            v
        }
    };
    let norm = lp_norm(&d, p);
    if norm > 0.0 {
        let k = scale * budget / norm;
        d.iter_mut().for_each(|x| *x *= k);
    }
    d
}
