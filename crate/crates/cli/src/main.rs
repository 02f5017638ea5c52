use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use elbmatch::bench::{
    check_block_percent, run_bench, summary_table, write_bench_csv, BenchSpec, CellParams, Sweep,
};
use elbmatch::datagen::{
    self, gust_shape, reference_shape, GenConfig, DEFAULT_PROBABILITY, DEFAULT_THRESHOLD_RATIO,
};
use elbmatch::io::{
    read_pattern_file, read_stream_file, write_embed_log, write_envelope, write_matches,
    write_metadata, write_pattern_file, write_stats, write_stream_file, GenMetadata,
};
use elbmatch::matcher::DEFAULT_BLOCK_PERCENT;
use elbmatch::{
    build_envelope_ele, build_envelope_seq, sequential_scan, ElbVariant, Error, LpOrder, MatchPlan,
    MatchStats, MatcherConfig, Pattern, Result,
};

#[derive(Parser)]
#[command(
    name = "elb",
    version,
    about = "Consecutive-subpattern matching over streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random-walk stream with embedded pattern copies.
    Gen(GenArgs),
    /// Find every window of a stream that matches a pattern.
    Match(MatchArgs),
    /// Sweep one parameter and time SS against both block variants.
    Bench(BenchArgs),
    /// Dump a pattern envelope as CSV.
    Envelope(EnvelopeArgs),
    /// Write a built-in pattern shape to a pattern file.
    Pattern(PatternArgs),
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long)]
    length: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Per-timestamp embedding probability.
    #[arg(long, default_value_t = DEFAULT_PROBABILITY)]
    probability: f64,
    /// Pattern values and subpattern lengths; thresholds are re-derived.
    #[arg(long)]
    pattern_file: PathBuf,
    /// Fraction of each subpattern's value range, e.g. 0.2.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD_RATIO)]
    threshold_ratio: f64,
    #[arg(long, default_value = "2")]
    p: LpOrder,
    /// Random-walk base value.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    base: f64,
    /// Half-width of uniform noise added to embedded copies.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Ss,
    ElbEle,
    ElbSeq,
}

#[derive(clap::Args)]
struct MatchArgs {
    #[arg(long)]
    pattern_file: PathBuf,
    #[arg(long)]
    stream_file: PathBuf,
    #[arg(long, value_enum, default_value = "elb-seq")]
    algo: Algo,
    #[arg(long, default_value = "2")]
    p: LpOrder,
    /// Block width as a percentage of the pattern length, at most 50.
    #[arg(long, default_value_t = DEFAULT_BLOCK_PERCENT)]
    block_ratio: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    P,
    ThresholdRatio,
    Probability,
    BlockRatio,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    axis: Axis,
    /// Comma-separated axis values; defaults to the standard sweep.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<String>>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 1_000_000)]
    length: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Pattern values and subpattern lengths; the built-in shape otherwise.
    #[arg(long)]
    pattern_file: Option<PathBuf>,
    #[arg(long, default_value = "2")]
    p: LpOrder,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD_RATIO)]
    threshold_ratio: f64,
    #[arg(long, default_value_t = DEFAULT_PROBABILITY)]
    probability: f64,
    #[arg(long, default_value_t = DEFAULT_BLOCK_PERCENT)]
    block_ratio: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    base: f64,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Bench CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct EnvelopeArgs {
    #[arg(long)]
    pattern_file: PathBuf,
    #[arg(long, default_value = "seq")]
    variant: ElbVariant,
    #[arg(long, default_value = "2")]
    p: LpOrder,
    #[arg(long, default_value_t = DEFAULT_BLOCK_PERCENT)]
    block_ratio: f64,
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Reference,
    Gust,
}

#[derive(clap::Args)]
struct PatternArgs {
    #[arg(long, value_enum, default_value = "reference")]
    shape: Shape,
    #[arg(long, default_value_t = datagen::DEFAULT_PATTERN_LEN)]
    length: usize,
    /// Subpattern count (reference shape only).
    #[arg(long, default_value_t = datagen::DEFAULT_SUBPATTERNS)]
    subpatterns: usize,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD_RATIO)]
    threshold_ratio: f64,
    #[arg(long, default_value = "2")]
    p: LpOrder,
    #[arg(long)]
    out: PathBuf,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn out_dir(dir: &Path) -> Result<&Path> {
    fs::create_dir_all(dir)?;
    Ok(dir)
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let template = read_pattern_file(&a.pattern_file)?;
    let config = GenConfig {
        length: a.length,
        seed: a.seed,
        base: a.base,
        occurrence_probability: a.probability,
        threshold_ratio: a.threshold_ratio,
        p: a.p,
        noise: a.noise,
        values: template.values().to_vec(),
        boundaries: template.boundaries().to_vec(),
    };
    let workload = config.generate()?;
    let dir = out_dir(&a.out)?;
    write_stream_file(dir.join("stream.txt"), &workload.stream)?;
    let mut log = create(&dir.join("embed.csv"))?;
    write_embed_log(&mut log, &workload.log)?;
    log.flush()?;
    write_pattern_file(dir.join("pattern.txt"), &workload.pattern)?;
    let meta = GenMetadata {
        generator: datagen::RNG_NAME.to_string(),
        seed: a.seed,
        length: a.length,
        base: a.base,
        probability: a.probability,
        threshold_ratio: a.threshold_ratio,
        p: a.p.to_string(),
        noise: a.noise,
        pattern_length: workload.pattern.len(),
        subpatterns: workload.pattern.subpattern_count(),
        embedded: workload.log.starts.len(),
    };
    let mut sidecar = create(&dir.join("meta.json"))?;
    write_metadata(&mut sidecar, &meta)?;
    sidecar.flush()?;
    eprintln!(
        "wrote {} values with {} embedded copies to {}",
        a.length,
        meta.embedded,
        dir.display()
    );
    Ok(())
}

fn cmd_match(a: MatchArgs) -> Result<()> {
    check_block_percent(a.block_ratio)?;
    let pattern = read_pattern_file(&a.pattern_file)?;
    let stream = read_stream_file(&a.stream_file)?;
    let variant = match a.algo {
        Algo::Ss => None,
        Algo::ElbEle => Some(ElbVariant::Ele),
        Algo::ElbSeq => Some(ElbVariant::Seq),
    };
    let (matches, stats) = match variant {
        None => {
            let r = sequential_scan(&pattern, &stream, a.p)?;
            let stats = MatchStats {
                windows_total: r.windows_total,
                candidates_verified: r.windows_total,
                element_touches_verify: r.element_touches,
                ..MatchStats::default()
            };
            (r.matches, stats)
        }
        Some(variant) => {
            let config = MatcherConfig::with_block_percent(pattern, a.p, variant, a.block_ratio)?;
            let r = MatchPlan::new(config)?.run(stream)?;
            (r.matches, r.stats)
        }
    };
    let dir = out_dir(&a.out)?;
    let mut out = create(&dir.join("matches.csv"))?;
    write_matches(&mut out, &matches)?;
    out.flush()?;
    let mut out = create(&dir.join("stats.csv"))?;
    write_stats(&mut out, &stats)?;
    out.flush()?;
    eprintln!(
        "{} matches in {} windows ({} pruned)",
        matches.len(),
        stats.windows_total,
        stats.windows_pruned
    );
    Ok(())
}

fn parse_values<T>(raw: &[String], what: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    raw.iter()
        .map(|s| f(s.trim()).ok_or_else(|| Error::usage(format!("invalid {what} `{s}`"))))
        .collect()
}

fn sweep(axis: Axis, values: Option<&[String]>) -> Result<Sweep> {
    let float = |s: &str| s.parse::<f64>().ok();
    Ok(match (axis, values) {
        (Axis::P, None) => Sweep::default_p(),
        (Axis::ThresholdRatio, None) => Sweep::default_threshold_ratio(),
        (Axis::Probability, None) => Sweep::default_probability(),
        (Axis::BlockRatio, None) => Sweep::default_block_percent(),
        (Axis::P, Some(v)) => Sweep::P(parse_values(v, "p", |s| s.parse().ok())?),
        (Axis::ThresholdRatio, Some(v)) => {
            Sweep::ThresholdRatio(parse_values(v, "threshold ratio", float)?)
        }
        (Axis::Probability, Some(v)) => Sweep::Probability(parse_values(v, "probability", float)?),
        (Axis::BlockRatio, Some(v)) => Sweep::BlockPercent(parse_values(v, "block ratio", float)?),
    })
}

fn bench_threads() -> Result<usize> {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var("ELB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n.min(available)),
            _ => Err(Error::usage(format!(
                "ELB_THREADS must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(available),
    }
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let mut spec = BenchSpec::new(sweep(a.axis, a.values.as_deref())?);
    spec.defaults = CellParams {
        p: a.p,
        threshold_ratio: a.threshold_ratio,
        probability: a.probability,
        block_percent: a.block_ratio,
        base: a.base,
        noise: a.noise,
    };
    spec.reps = a.reps;
    spec.length = a.length;
    spec.seed = a.seed;
    spec.threads = bench_threads()?;
    if let Some(path) = &a.pattern_file {
        let p = read_pattern_file(path)?;
        spec.pattern = Some((p.values().to_vec(), p.boundaries().to_vec()));
    }
    spec.validate()?;
    let rows = run_bench(&spec)?;
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let mut out = create(&a.out)?;
    write_bench_csv(&mut out, &spec, &rows)?;
    out.flush()?;
    print!("{}", summary_table(&rows));
    Ok(())
}

fn cmd_envelope(a: EnvelopeArgs) -> Result<()> {
    check_block_percent(a.block_ratio)?;
    let pattern = read_pattern_file(&a.pattern_file)?;
    let config = MatcherConfig::with_block_percent(pattern, a.p, a.variant, a.block_ratio)?;
    let envelope = match a.variant {
        ElbVariant::Ele => build_envelope_ele(&config.pattern),
        ElbVariant::Seq => build_envelope_seq(&config.pattern, config.w, a.p)?,
    };
    match &a.out {
        Some(path) => {
            let mut out = create(path)?;
            write_envelope(&mut out, &envelope)?;
            out.flush()?;
        }
        None => write_envelope(std::io::stdout().lock(), &envelope)?,
    }
    Ok(())
}

fn cmd_pattern(a: PatternArgs) -> Result<()> {
    if a.length == 0 {
        return Err(Error::usage("--length must be ≥ 1"));
    }
    let (values, boundaries) = match a.shape {
        Shape::Reference => {
            if a.subpatterns == 0 || a.subpatterns > a.length {
                return Err(Error::usage("--subpatterns must lie in [1, length]"));
            }
            reference_shape(a.length, a.subpatterns, datagen::DEFAULT_PATTERN_SEED)
        }
        Shape::Gust => {
            if a.length < 3 {
                return Err(Error::usage("gust shape needs --length ≥ 3"));
            }
            gust_shape(a.length, 3.0)
        }
    };
    let pattern: Pattern = datagen::pattern_with_ratio(values, boundaries, a.threshold_ratio, a.p)?;
    write_pattern_file(&a.out, &pattern)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Match(a) => cmd_match(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Envelope(a) => cmd_envelope(a),
        Command::Pattern(a) => cmd_pattern(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
