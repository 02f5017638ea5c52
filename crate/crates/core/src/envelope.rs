//! Pattern envelopes and per-block bounds for the two block representations.
//!
//! Both variants split the pattern into `N = ⌊n/w⌋` disjoint blocks of width
//! `w` (the trailing `n mod w` positions belong to no block) and give each
//! block an interval `[lower, upper]`. A window block's feature must fall
//! inside that interval whenever any of the `w` windows starting at the
//! group anchor matches the pattern, so a feature outside it prunes all `w`
//! windows at once.
//!
//! * [`ElbVariant::Ele`]: envelope `p_i ± ε_{k(i)}`; feature is the last
//!   element of the window block.
//! * [`ElbVariant::Seq`]: envelope `mean(P[i-w+1..=i]) ± θ(i)`; feature is
//!   the mean of the window block. The first block has no envelope support
//!   and never prunes.
//!
//! Positions in this module's public functions are 1-based, matching the
//! exported CSV.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pattern::{LpOrder, Pattern};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElbVariant {
    /// Element-based: last element of each window block.
    Ele,
    /// Subsequence-based: mean of each window block.
    Seq,
}

impl fmt::Display for ElbVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Self::Ele => "ele",
            Self::Seq => "seq",
        })
    }
}

impl FromStr for ElbVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ele" | "elb-ele" => Ok(Self::Ele),
            "seq" | "elb-seq" => Ok(Self::Seq),
            other => Err(Error::usage(format!("unknown ELB variant `{other}`"))),
        }
    }
}

/// Prefix sums of the pattern values for O(1) segment means.
#[derive(Clone, Debug)]
pub struct PrefixMeans {
    prefix: Vec<f64>,
}

impl PrefixMeans {
    pub fn new(values: &[f64]) -> Self {
        let mut prefix = Vec::with_capacity(values.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for v in values {
            acc += v;
            prefix.push(acc);
        }
        Self { prefix }
    }

    /// Mean of positions `start..=end` (1-based, inclusive).
    pub fn mean(&self, start: usize, end: usize) -> f64 {
        debug_assert!(1 <= start && start <= end && end < self.prefix.len());
        (self.prefix[end] - self.prefix[start - 1]) / (end - start + 1) as f64
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }
}

/// Upper and lower envelope lines `U`, `L` of a pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    upper: Vec<f64>,
    lower: Vec<f64>,
    valid_from: usize,
    variant: ElbVariant,
    w: Option<usize>,
}

impl Envelope {
    pub fn variant(&self) -> ElbVariant {
        self.variant
    }

    /// Block width the envelope was built for (SEQ only).
    pub fn block_width(&self) -> Option<usize> {
        self.w
    }

    /// First 1-based position with an envelope value: 1 for ELE, `w` for SEQ.
    pub fn valid_from(&self) -> usize {
        self.valid_from
    }

    /// Pattern length `n`.
    pub fn pattern_len(&self) -> usize {
        self.valid_from - 1 + self.upper.len()
    }

    pub fn upper(&self, i: usize) -> Option<f64> {
        i.checked_sub(self.valid_from)
            .and_then(|o| self.upper.get(o).copied())
    }

    pub fn lower(&self, i: usize) -> Option<f64> {
        i.checked_sub(self.valid_from)
            .and_then(|o| self.lower.get(o).copied())
    }

    /// `(i, U_i, L_i)` over valid positions.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.upper
            .iter()
            .zip(&self.lower)
            .enumerate()
            .map(move |(o, (&u, &l))| (o + self.valid_from, u, l))
    }
}

/// Element envelope: `U_i = p_i + ε_{k(i)}`, `L_i = p_i - ε_{k(i)}`.
///
/// A match forces `|s_i - p_i| ≤ ε_k` under every L_p order, so one
/// envelope serves all of them.
pub fn build_envelope_ele(pattern: &Pattern) -> Envelope {
    let (upper, lower) = pattern
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let eps = pattern.threshold_at(i);
            (v + eps, v - eps)
        })
        .unzip();
    Envelope {
        upper,
        lower,
        valid_from: 1,
        variant: ElbVariant::Ele,
        w: None,
    }
}

/// Slack `θ(i)` between the mean of `P[i-w+1..=i]` and the mean of any
/// aligned window segment that could still belong to a match.
///
/// For finite `p` this is `((1/w) Σ ε_k^p)^{1/p}` over the subpatterns
/// overlapping the segment. For the max norm the per-element bound gives
/// `(1/w) Σ_j ε_{k(j)}` over the segment's positions.
pub fn theta_seq(pattern: &Pattern, i: usize, w: usize, p: LpOrder) -> Result<f64> {
    if w == 0 || i < w || i > pattern.len() {
        return Err(Error::usage(format!(
            "theta_seq needs 1 ≤ w ≤ i ≤ n (w={w}, i={i}, n={})",
            pattern.len()
        )));
    }
    Ok(theta_unchecked(pattern, i, w, p))
}

fn theta_unchecked(pattern: &Pattern, i: usize, w: usize, p: LpOrder) -> f64 {
    let index = pattern.index();
    let eps = pattern.thresholds();
    // 0-based half-open segment
    let (a, b) = (i - w, i);
    let (k_l, k_r) = (index.subpattern_of(a), index.subpattern_of(b - 1));
    match p {
        LpOrder::Finite(order) => {
            let e = order as i32;
            let sum: f64 = eps[k_l..=k_r].iter().map(|x| x.powi(e)).sum();
            let scaled = sum / w as f64;
            match order {
                1 => scaled,
                2 => scaled.sqrt(),
                _ => scaled.powf(1.0 / f64::from(order)),
            }
        }
        LpOrder::Infinity => {
            let sum: f64 = (k_l..=k_r)
                .map(|k| {
                    let r = index.range(k);
                    let overlap = r.end.min(b) - r.start.max(a);
                    eps[k] * overlap as f64
                })
                .sum();
            sum / w as f64
        }
    }
}

/// Mean envelope: `U_i = mean(P[i-w+1..=i]) + θ(i)`, `L_i = … - θ(i)` for
/// `w ≤ i ≤ n`.
pub fn build_envelope_seq(pattern: &Pattern, w: usize, p: LpOrder) -> Result<Envelope> {
    let n = pattern.len();
    if w == 0 || w > n {
        return Err(Error::usage(format!("block width {w} outside [1, n={n}]")));
    }
    let means = PrefixMeans::new(pattern.values());
    let (upper, lower) = (w..=n)
        .map(|i| {
            let mu = means.mean(i - w + 1, i);
            let theta = theta_unchecked(pattern, i, w, p);
            (mu + theta, mu - theta)
        })
        .unzip();
    Ok(Envelope {
        upper,
        lower,
        valid_from: w,
        variant: ElbVariant::Seq,
        w: Some(w),
    })
}

/// Per-block intervals `[P̂_j^l, P̂_j^u]` for blocks `1..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockBounds {
    upper: Vec<f64>,
    lower: Vec<f64>,
    w: usize,
    variant: ElbVariant,
    active_from: usize,
}

impl BlockBounds {
    /// Envelope and bounds for `pattern` in one step.
    pub fn for_pattern(
        pattern: &Pattern,
        variant: ElbVariant,
        w: usize,
        p: LpOrder,
    ) -> Result<Self> {
        let envelope = match variant {
            ElbVariant::Ele => build_envelope_ele(pattern),
            ElbVariant::Seq => build_envelope_seq(pattern, w, p)?,
        };
        block_bounds(&envelope, w, pattern.len())
    }

    /// Block count `N`.
    pub fn block_count(&self) -> usize {
        self.upper.len()
    }

    pub fn block_width(&self) -> usize {
        self.w
    }

    pub fn variant(&self) -> ElbVariant {
        self.variant
    }

    /// First 1-based block that takes part in pruning.
    pub fn active_from(&self) -> usize {
        self.active_from
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// Interval of 1-based block `j`.
    pub fn interval(&self, j: usize) -> (f64, f64) {
        (self.lower[j - 1], self.upper[j - 1])
    }

    /// Bounds pushed outward by `rel · (|bound| + scale)`.
    ///
    /// Features and bounds are computed along different floating-point
    /// paths; the margin absorbs that rounding so a window at exactly the
    /// threshold is never pruned.
    pub fn widened(&self, rel: f64, scale: f64) -> Self {
        let grow = |b: f64| rel * (b.abs() + scale);
        Self {
            upper: self.upper.iter().map(|&u| u + grow(u)).collect(),
            lower: self.lower.iter().map(|&l| l - grow(l)).collect(),
            ..self.clone()
        }
    }
}

/// `P̂_j^u = max_{0≤i<w} U_{jw-i}` and `P̂_j^l = min_{0≤i<w} L_{jw-i}`.
pub fn block_bounds(envelope: &Envelope, w: usize, n: usize) -> Result<BlockBounds> {
    if w == 0 || w > n {
        return Err(Error::usage(format!("block width {w} outside [1, n={n}]")));
    }
    if envelope.pattern_len() != n {
        return Err(Error::usage(format!(
            "envelope covers {} positions, pattern has {n}",
            envelope.pattern_len()
        )));
    }
    if let Some(ew) = envelope.block_width() {
        if ew != w {
            return Err(Error::usage(format!(
                "envelope built for w={ew}, bounds requested for w={w}"
            )));
        }
    }
    let blocks = n / w;
    let mut upper = Vec::with_capacity(blocks);
    let mut lower = Vec::with_capacity(blocks);
    for j in 1..=blocks {
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in (j - 1) * w + 1..=j * w {
            if let (Some(u), Some(l)) = (envelope.upper(i), envelope.lower(i)) {
                hi = hi.max(u);
                lo = lo.min(l);
            }
        }
        upper.push(hi);
        lower.push(lo);
    }
    let active_from = match envelope.variant() {
        ElbVariant::Ele => 1,
        ElbVariant::Seq => 2,
    };
    Ok(BlockBounds {
        upper,
        lower,
        w,
        variant: envelope.variant(),
        active_from,
    })
}
