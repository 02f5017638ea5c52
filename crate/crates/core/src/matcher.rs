//! Streaming matcher with equal-length block pruning.
//!
//! Windows are processed in groups of `w` consecutive start timestamps
//! anchored at `t = 1, 1 + w, 1 + 2w, …`. Because anchors move by exactly
//! one block width, the stream splits into fixed, disjoint blocks and each
//! block's feature is computed once and reused by the `N` anchors that see
//! it. When the anchor window `W_t` is complete its `N` block features are
//! checked against the pattern's block bounds: any failure prunes all `w`
//! windows of the group, otherwise each of them is verified exactly as it
//! completes.
//!
//! Memory is `O(n + N)` regardless of stream length.

use std::sync::Arc;

use crate::distance::exact_match_counted;
use crate::envelope::{BlockBounds, ElbVariant};
use crate::error::{Error, Result};
use crate::pattern::{LpOrder, Pattern};

/// Default block width as a percentage of the pattern length.
pub const DEFAULT_BLOCK_PERCENT: f64 = 5.0;

/// Relative widening applied to block bounds before pruning.
pub const ROUNDING_MARGIN: f64 = 1e-9;

/// `w = max(1, ⌊percent · n / 100⌋)`.
pub fn block_width_for_percent(n: usize, percent: f64) -> usize {
    ((percent * n as f64 / 100.0).floor() as usize).max(1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatcherConfig {
    pub pattern: Pattern,
    pub p: LpOrder,
    pub variant: ElbVariant,
    /// Block width `w`, `1 ≤ w ≤ n`.
    pub w: usize,
}

impl MatcherConfig {
    pub fn new(pattern: Pattern, p: LpOrder, variant: ElbVariant, w: usize) -> Result<Self> {
        if w == 0 || w > pattern.len() {
            return Err(Error::usage(format!(
                "block width {w} outside [1, n={}]",
                pattern.len()
            )));
        }
        Ok(Self {
            pattern,
            p,
            variant,
            w,
        })
    }

    /// Block width derived from a percentage of the pattern length.
    pub fn with_block_percent(
        pattern: Pattern,
        p: LpOrder,
        variant: ElbVariant,
        percent: f64,
    ) -> Result<Self> {
        if !(percent > 0.0 && percent <= 100.0) {
            return Err(Error::usage(format!(
                "block ratio {percent}% outside (0, 100]"
            )));
        }
        let w = block_width_for_percent(pattern.len(), percent);
        Self::new(pattern, p, variant, w)
    }

    /// Block count `N = ⌊n / w⌋`.
    pub fn block_count(&self) -> usize {
        self.pattern.len() / self.w
    }
}

/// Counters describing one matching run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MatchStats {
    pub windows_total: u64,
    pub windows_pruned: u64,
    pub candidates_verified: u64,
    /// Block interval comparisons performed while pruning.
    pub block_checks: u64,
    /// Stream elements read to compute block features.
    pub element_touches_pruning: u64,
    /// Element pairs compared during exact verification.
    pub element_touches_verify: u64,
}

impl MatchStats {
    /// Fraction of windows pruned; `None` when no window was seen.
    pub fn pruning_power(&self) -> Option<f64> {
        (self.windows_total > 0).then(|| self.windows_pruned as f64 / self.windows_total as f64)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MatchReport {
    /// 1-based start timestamps of matching windows, ascending.
    pub matches: Vec<u64>,
    pub stats: MatchStats,
}

pub fn pruning_power(report: &MatchReport) -> Option<f64> {
    report.stats.pruning_power()
}

fn check_block(values: &[f64], w: usize) -> Result<()> {
    if values.len() != w || w == 0 {
        return Err(Error::usage(format!(
            "block has {} values, expected w={w}",
            values.len()
        )));
    }
    Ok(())
}

/// ELE feature: the last value of the block.
pub fn feature_ele(block: &[f64], w: usize) -> Result<f64> {
    check_block(block, w)?;
    Ok(block[w - 1])
}

/// SEQ feature: the arithmetic mean of the block.
pub fn feature_seq(block: &[f64], w: usize) -> Result<f64> {
    check_block(block, w)?;
    Ok(block.iter().sum::<f64>() / w as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneOutcome {
    Pass,
    /// 1-based id of the first active block whose feature fell outside.
    Fail {
        block: usize,
    },
}

impl PruneOutcome {
    pub fn is_pass(self) -> bool {
        matches!(self, Self::Pass)
    }
}

/// Check the `N` features of a group anchor against the block bounds.
///
/// Inactive blocks (block 1 under SEQ) are skipped. Checks run in ascending
/// block order and stop at the first failure.
pub fn prune_group(features: &[f64], bounds: &BlockBounds) -> PruneOutcome {
    prune_counted(features.iter().copied(), bounds).0
}

#[inline]
fn prune_counted(features: impl Iterator<Item = f64>, bounds: &BlockBounds) -> (PruneOutcome, u64) {
    let skip = bounds.active_from() - 1;
    let mut checks = 0;
    for (j, ((f, &lo), &hi)) in features
        .zip(bounds.lower())
        .zip(bounds.upper())
        .enumerate()
        .skip(skip)
    {
        checks += 1;
        if !(lo <= f && f <= hi) {
            return (PruneOutcome::Fail { block: j + 1 }, checks);
        }
    }
    (PruneOutcome::Pass, checks)
}

/// The `N` most recent block features plus the partially filled block.
#[derive(Clone, Debug)]
struct FeatureQueue {
    ring: Vec<f64>,
    head: usize,
    len: usize,
    w: usize,
    variant: ElbVariant,
    fill: usize,
    acc: f64,
}

impl FeatureQueue {
    fn new(capacity: usize, w: usize, variant: ElbVariant) -> Self {
        Self {
            ring: vec![0.0; capacity],
            head: 0,
            len: 0,
            w,
            variant,
            fill: 0,
            acc: 0.0,
        }
    }

    /// Feed one element; returns the number of elements read for features.
    #[inline]
    fn feed(&mut self, v: f64) -> u64 {
        self.fill += 1;
        match self.variant {
            ElbVariant::Ele => {
                if self.fill == self.w {
                    self.fill = 0;
                    self.push(v);
                    1
                } else {
                    0
                }
            }
            ElbVariant::Seq => {
                self.acc += v;
                if self.fill == self.w {
                    let mean = self.acc / self.w as f64;
                    self.fill = 0;
                    self.acc = 0.0;
                    self.push(mean);
                }
                1
            }
        }
    }

    #[inline]
    fn push(&mut self, f: f64) {
        let cap = self.ring.len();
        let slot = (self.head + self.len) % cap;
        self.ring[slot] = f;
        if self.len == cap {
            self.head = (self.head + 1) % cap;
        } else {
            self.len += 1;
        }
    }

    /// Features oldest first: block 1 of the current anchor comes first.
    fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        let cap = self.ring.len();
        (0..self.len).map(move |o| self.ring[(self.head + o) % cap])
    }
}

#[derive(Debug)]
struct PlanInner {
    config: MatcherConfig,
    bounds: BlockBounds,
}

/// Immutable, shareable matching plan: configuration plus block bounds.
///
/// Cloning is cheap; one plan can drive any number of [`Matcher`]s on
/// different threads.
#[derive(Clone, Debug)]
pub struct MatchPlan(Arc<PlanInner>);

impl MatchPlan {
    pub fn new(config: MatcherConfig) -> Result<Self> {
        // re-check in case fields were mutated after construction
        let config = MatcherConfig::new(config.pattern, config.p, config.variant, config.w)?;
        let bounds = BlockBounds::for_pattern(&config.pattern, config.variant, config.w, config.p)?
            .widened(ROUNDING_MARGIN, config.pattern.magnitude());
        Ok(Self(Arc::new(PlanInner { config, bounds })))
    }

    pub fn config(&self) -> &MatcherConfig {
        &self.0.config
    }

    /// Bounds as used for pruning, including the rounding margin.
    pub fn bounds(&self) -> &BlockBounds {
        &self.0.bounds
    }

    pub fn matcher(&self) -> Matcher {
        Matcher::from_plan(self.clone(), true)
    }

    pub fn run(&self, stream: impl IntoIterator<Item = f64>) -> Result<MatchReport> {
        drive(self.matcher(), stream)
    }
}

/// Push-based matcher over one stream.
#[derive(Clone, Debug)]
pub struct Matcher {
    plan: MatchPlan,
    buf: Vec<f64>,
    queue: FeatureQueue,
    seen: u64,
    // windows left in the current group; 0 means the next window is an anchor
    group_left: usize,
    group_pruned: bool,
    verify: bool,
    stats: MatchStats,
}

impl Matcher {
    pub fn new(config: MatcherConfig) -> Result<Self> {
        Ok(MatchPlan::new(config)?.matcher())
    }

    fn from_plan(plan: MatchPlan, verify: bool) -> Self {
        let n = plan.config().pattern.len();
        let blocks = plan.config().block_count();
        let queue = FeatureQueue::new(blocks, plan.config().w, plan.config().variant);
        Self {
            buf: Vec::with_capacity((2 * n).max(n + 1024)),
            queue,
            seen: 0,
            group_left: 0,
            group_pruned: false,
            verify,
            stats: MatchStats::default(),
            plan,
        }
    }

    pub fn plan(&self) -> &MatchPlan {
        &self.plan
    }

    pub fn stats(&self) -> &MatchStats {
        &self.stats
    }

    /// Elements consumed so far.
    pub fn seen(&self) -> u64 {
        self.seen
    }

    /// Whether the group of the most recently completed window was pruned.
    pub fn group_pruned(&self) -> bool {
        self.group_pruned
    }

    /// Stored block features, oldest first. Right after the anchor window
    /// `W_t` completes these are its `N` block features in order.
    pub fn features(&self) -> impl Iterator<Item = f64> + '_ {
        self.queue.iter()
    }

    /// Consume the next stream element.
    ///
    /// Returns the start timestamp of the window ending at this element if
    /// that window matches.
    #[inline]
    pub fn push(&mut self, value: f64) -> Result<Option<u64>> {
        if !value.is_finite() {
            return Err(Error::NonFinite {
                timestamp: self.seen + 1,
                value,
            });
        }
        self.seen += 1;
        let config = &self.plan.0.config;
        let n = config.pattern.len();

        if self.buf.len() == self.buf.capacity() {
            let keep = self.buf.len() - (n - 1);
            self.buf.drain(..keep);
        }
        self.buf.push(value);
        self.stats.element_touches_pruning += self.queue.feed(value);

        if self.seen < n as u64 {
            return Ok(None);
        }
        if self.group_left == 0 {
            let (outcome, checks) = prune_counted(self.queue.iter(), &self.plan.0.bounds);
            self.stats.block_checks += checks;
            self.group_pruned = !outcome.is_pass();
            self.group_left = config.w;
        }
        self.group_left -= 1;
        self.stats.windows_total += 1;
        if self.group_pruned {
            self.stats.windows_pruned += 1;
            return Ok(None);
        }
        self.stats.candidates_verified += 1;
        if !self.verify {
            return Ok(None);
        }
        let window = &self.buf[self.buf.len() - n..];
        let (ok, touched) = exact_match_counted(&config.pattern, window, config.p);
        self.stats.element_touches_verify += touched;
        Ok(ok.then_some(self.seen - n as u64 + 1))
    }
}

fn drive(mut matcher: Matcher, stream: impl IntoIterator<Item = f64>) -> Result<MatchReport> {
    let mut matches = Vec::new();
    for v in stream {
        if let Some(t) = matcher.push(v)? {
            matches.push(t);
        }
    }
    Ok(MatchReport {
        matches,
        stats: matcher.stats,
    })
}

/// Match a whole stream and collect every matching window.
pub fn process_stream(
    config: &MatcherConfig,
    stream: impl IntoIterator<Item = f64>,
) -> Result<MatchReport> {
    MatchPlan::new(config.clone())?.run(stream)
}

/// Pruning phase only: candidates are counted but not verified, so the
/// report has no matches. Used to time pruning separately.
pub fn prune_scan(plan: &MatchPlan, stream: impl IntoIterator<Item = f64>) -> Result<MatchReport> {
    drive(Matcher::from_plan(plan.clone(), false), stream)
}
