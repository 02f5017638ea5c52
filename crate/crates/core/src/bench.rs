//! Benchmark sweeps comparing sequential scanning with both block variants.
//!
//! One sweep varies a single parameter (L_p order, threshold ratio,
//! occurrence probability or block ratio) and keeps the others at their
//! defaults. Each (value, algorithm) cell runs one warm-up repetition and
//! then `reps` timed ones; the median is reported. Stream generation is not
//! timed.

use std::fmt::{self, Write as _};
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::datagen::{GenConfig, Workload, RNG_NAME};
use crate::envelope::ElbVariant;
use crate::error::{Error, Result};
use crate::matcher::{prune_scan, MatchPlan, MatchStats, MatcherConfig, DEFAULT_BLOCK_PERCENT};
use crate::oracle::sequential_scan;
use crate::pattern::LpOrder;

/// Block ratios above this leave a single block.
pub const MAX_BLOCK_PERCENT: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ss,
    ElbEle,
    ElbSeq,
}

impl Algorithm {
    pub const ALL: [Self; 3] = [Self::Ss, Self::ElbEle, Self::ElbSeq];

    pub fn variant(self) -> Option<ElbVariant> {
        match self {
            Self::Ss => None,
            Self::ElbEle => Some(ElbVariant::Ele),
            Self::ElbSeq => Some(ElbVariant::Seq),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Self::Ss => "SS",
            Self::ElbEle => "ELB-ELE",
            Self::ElbSeq => "ELB-SEQ",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ss" => Ok(Self::Ss),
            "elb-ele" | "ele" => Ok(Self::ElbEle),
            "elb-seq" | "seq" => Ok(Self::ElbSeq),
            other => Err(Error::usage(format!(
                "unknown algorithm `{other}` (expected ss, elb-ele or elb-seq)"
            ))),
        }
    }
}

/// The parameter a sweep varies, with the values to visit.
#[derive(Clone, Debug, PartialEq)]
pub enum Sweep {
    P(Vec<LpOrder>),
    /// Fractions, e.g. `0.2` for 20%.
    ThresholdRatio(Vec<f64>),
    Probability(Vec<f64>),
    /// Percentages of the pattern length.
    BlockPercent(Vec<f64>),
}

impl Sweep {
    pub fn default_p() -> Self {
        Self::P(vec![
            LpOrder::L1,
            LpOrder::L2,
            LpOrder::Finite(3),
            LpOrder::Infinity,
        ])
    }

    pub fn default_threshold_ratio() -> Self {
        Self::ThresholdRatio(vec![0.05, 0.10, 0.15, 0.20, 0.25, 0.30])
    }

    pub fn default_probability() -> Self {
        Self::Probability(vec![1e-3, 5e-4, 1e-4, 5e-5, 1e-5])
    }

    pub fn default_block_percent() -> Self {
        Self::BlockPercent(vec![1.0, 5.0, 10.0, 20.0, 40.0])
    }

    pub fn axis_name(&self) -> &'static str {
        match self {
            Self::P(_) => "p",
            Self::ThresholdRatio(_) => "threshold_ratio",
            Self::Probability(_) => "probability",
            Self::BlockPercent(_) => "block_ratio",
        }
    }

    fn len(&self) -> usize {
        match self {
            Self::P(v) => v.len(),
            Self::ThresholdRatio(v) | Self::Probability(v) | Self::BlockPercent(v) => v.len(),
        }
    }

    fn apply(&self, idx: usize, base: &CellParams) -> (String, CellParams) {
        let mut cell = base.clone();
        let label = match self {
            Self::P(v) => {
                cell.p = v[idx];
                v[idx].to_string()
            }
            Self::ThresholdRatio(v) => {
                cell.threshold_ratio = v[idx];
                v[idx].to_string()
            }
            Self::Probability(v) => {
                cell.probability = v[idx];
                v[idx].to_string()
            }
            Self::BlockPercent(v) => {
                cell.block_percent = v[idx];
                v[idx].to_string()
            }
        };
        (label, cell)
    }
}

/// Parameters of one bench cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellParams {
    pub p: LpOrder,
    pub threshold_ratio: f64,
    pub probability: f64,
    pub block_percent: f64,
    pub base: f64,
    pub noise: f64,
}

impl Default for CellParams {
    fn default() -> Self {
        Self {
            p: LpOrder::L2,
            threshold_ratio: crate::datagen::DEFAULT_THRESHOLD_RATIO,
            probability: crate::datagen::DEFAULT_PROBABILITY,
            block_percent: DEFAULT_BLOCK_PERCENT,
            base: 0.0,
            noise: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSpec {
    pub sweep: Sweep,
    pub defaults: CellParams,
    pub reps: usize,
    pub length: usize,
    pub seed: u64,
    /// Concurrent cells; each cell itself is single-threaded.
    pub threads: usize,
    /// Pattern values and subpattern lengths; `None` uses the built-in
    /// reference shape.
    pub pattern: Option<(Vec<f64>, Vec<usize>)>,
}

impl BenchSpec {
    pub fn new(sweep: Sweep) -> Self {
        Self {
            sweep,
            defaults: CellParams::default(),
            reps: 3,
            length: 1_000_000,
            seed: 1,
            threads: 1,
            pattern: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::usage("--reps must be ≥ 1"));
        }
        if self.length == 0 {
            return Err(Error::usage("--length must be ≥ 1"));
        }
        let mut blocks = vec![self.defaults.block_percent];
        if let Sweep::BlockPercent(v) = &self.sweep {
            blocks.extend(v);
        }
        for b in blocks {
            check_block_percent(b)?;
        }
        if self.sweep.len() == 0 {
            return Err(Error::usage("sweep has no values"));
        }
        Ok(())
    }

    fn gen_config(&self, cell: &CellParams) -> GenConfig {
        let mut config = GenConfig::with_defaults(self.length, self.seed);
        if let Some((values, boundaries)) = &self.pattern {
            config.values = values.clone();
            config.boundaries = boundaries.clone();
        }
        config.base = cell.base;
        config.noise = cell.noise;
        config.occurrence_probability = cell.probability;
        config.threshold_ratio = cell.threshold_ratio;
        config.p = cell.p;
        config
    }
}

/// Block ratios must lie in `(0, 50]` percent.
pub fn check_block_percent(percent: f64) -> Result<()> {
    if !(percent > 0.0 && percent <= MAX_BLOCK_PERCENT) {
        return Err(Error::usage(format!(
            "block ratio {percent}% outside (0, {MAX_BLOCK_PERCENT}]"
        )));
    }
    Ok(())
}

/// Timing and counters of one algorithm on one workload.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub algorithm: Algorithm,
    pub median: Duration,
    /// Median of the pruning-only runs (ELB only).
    pub pruning_median: Option<Duration>,
    pub matches: Vec<u64>,
    pub stats: MatchStats,
}

impl Measurement {
    pub fn ns_per_window(&self) -> f64 {
        per_window(self.median, self.stats.windows_total)
    }
}

fn per_window(d: Duration, windows: u64) -> f64 {
    if windows == 0 {
        0.0
    } else {
        d.as_nanos() as f64 / windows as f64
    }
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort();
    samples[samples.len() / 2]
}

fn timed<T>(reps: usize, mut f: impl FnMut() -> Result<T>) -> Result<(Duration, T)> {
    let mut out = f()?; // warm-up
    let mut samples = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        out = f()?;
        samples.push(start.elapsed());
    }
    Ok((median(samples), out))
}

/// Run `algorithm` over `workload` with one warm-up and `reps` timed runs.
pub fn measure(
    algorithm: Algorithm,
    workload: &Workload,
    p: LpOrder,
    block_percent: f64,
    reps: usize,
) -> Result<Measurement> {
    let Some(variant) = algorithm.variant() else {
        let (median, report) = timed(reps, || {
            sequential_scan(&workload.pattern, &workload.stream, p)
        })?;
        let stats = MatchStats {
            windows_total: report.windows_total,
            candidates_verified: report.windows_total,
            element_touches_verify: report.element_touches,
            ..MatchStats::default()
        };
        return Ok(Measurement {
            algorithm,
            median,
            pruning_median: None,
            matches: report.matches,
            stats,
        });
    };
    let config =
        MatcherConfig::with_block_percent(workload.pattern.clone(), p, variant, block_percent)?;
    let plan = MatchPlan::new(config)?;
    let (median, report) = timed(reps, || plan.run(workload.stream.iter().copied()))?;
    let (pruning, _) = timed(reps, || prune_scan(&plan, workload.stream.iter().copied()))?;
    Ok(Measurement {
        algorithm,
        median,
        pruning_median: Some(pruning),
        matches: report.matches,
        stats: report.stats,
    })
}

/// One line of the bench CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub axis: &'static str,
    pub axis_value: String,
    pub algorithm: Algorithm,
    pub total_ns_per_window: f64,
    pub pruning_ns_per_window: Option<f64>,
    pub pruning_power: Option<f64>,
    pub speedup: f64,
    pub match_count: usize,
    pub stats: MatchStats,
    pub params: CellParams,
    pub embedded: usize,
}

fn run_cell(spec: &BenchSpec, idx: usize) -> Result<Vec<BenchRow>> {
    let (label, cell) = spec.sweep.apply(idx, &spec.defaults);
    let workload = spec.gen_config(&cell).generate()?;
    let results = Algorithm::ALL
        .iter()
        .map(|&a| measure(a, &workload, cell.p, cell.block_percent, spec.reps))
        .collect::<Result<Vec<_>>>()?;
    let ss = &results[0];
    for m in &results[1..] {
        if m.matches != ss.matches {
            return Err(Error::Invariant(format!(
                "{} matches differ from SS at {}={label}",
                m.algorithm,
                spec.sweep.axis_name()
            )));
        }
    }
    let ss_time = ss.median.as_secs_f64();
    Ok(results
        .iter()
        .map(|m| BenchRow {
            axis: spec.sweep.axis_name(),
            axis_value: label.clone(),
            algorithm: m.algorithm,
            total_ns_per_window: m.ns_per_window(),
            pruning_ns_per_window: m
                .pruning_median
                .map(|d| per_window(d, m.stats.windows_total)),
            pruning_power: m.algorithm.variant().and(m.stats.pruning_power()),
            speedup: if m.algorithm == Algorithm::Ss {
                1.0
            } else {
                ss_time / m.median.as_secs_f64().max(f64::MIN_POSITIVE)
            },
            match_count: m.matches.len(),
            stats: m.stats,
            params: cell.clone(),
            embedded: workload.log.starts.len(),
        })
        .collect())
}

/// Run every cell of the sweep; rows come back in sweep order.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    spec.validate()?;
    let cells = spec.sweep.len();
    let threads = spec.threads.clamp(1, cells);
    let mut slots: Vec<Option<Result<Vec<BenchRow>>>> = (0..cells).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (worker, chunk) in slots.chunks_mut(cells.div_ceil(threads)).enumerate() {
            let first = worker * cells.div_ceil(threads);
            scope.spawn(move || {
                for (o, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(run_cell(spec, first + o));
                }
            });
        }
    });
    let mut rows = Vec::with_capacity(cells * Algorithm::ALL.len());
    for slot in slots {
        rows.extend(slot.expect("every cell ran")?);
    }
    Ok(rows)
}

pub const BENCH_HEADER: &str = "axis,axis_value,algorithm,total_ns_per_window,\
pruning_ns_per_window,pruning_power,speedup,matches,windows_total,windows_pruned,\
candidates_verified,block_checks,element_touches_pruning,element_touches_verify,\
embedded,p,threshold_ratio,probability,block_ratio,base,noise,seed,length,rng";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x:.4}"))
}

pub fn write_bench_csv(mut out: impl Write, spec: &BenchSpec, rows: &[BenchRow]) -> Result<()> {
    writeln!(out, "{BENCH_HEADER}")?;
    for r in rows {
        let s = &r.stats;
        let c = &r.params;
        writeln!(
            out,
            "{},{},{},{:.4},{},{},{:.4},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},\"{}\"",
            r.axis,
            r.axis_value,
            r.algorithm,
            r.total_ns_per_window,
            opt(r.pruning_ns_per_window),
            opt(r.pruning_power),
            r.speedup,
            r.match_count,
            s.windows_total,
            s.windows_pruned,
            s.candidates_verified,
            s.block_checks,
            s.element_touches_pruning,
            s.element_touches_verify,
            r.embedded,
            c.p,
            c.threshold_ratio,
            c.probability,
            c.block_percent,
            c.base,
            c.noise,
            spec.seed,
            spec.length,
            RNG_NAME
        )?;
    }
    Ok(())
}

/// Human-readable table of the main columns.
pub fn summary_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let axis = rows.first().map_or("value", |r| r.axis);
    let _ = writeln!(
        out,
        "{:<16} {:<8} {:>12} {:>12} {:>9} {:>9} {:>8}",
        axis, "algo", "total ns/w", "prune ns/w", "pruned %", "speedup", "matches"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<16} {:<8} {:>12.2} {:>12} {:>9} {:>9.2} {:>8}",
            r.axis_value,
            r.algorithm,
            r.total_ns_per_window,
            r.pruning_ns_per_window
                .map_or_else(|| "-".to_string(), |v| format!("{v:.2}")),
            r.pruning_power
                .map_or_else(|| "-".to_string(), |v| format!("{:.2}", v * 100.0)),
            r.speedup,
            r.match_count
        );
    }
    out
}
