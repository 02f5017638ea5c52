//! Generate a random-walk stream with embedded pattern copies and write it
//! in the on-disk formats the `elb` binary reads.
//!
//! cargo run -p elbmatch --example synthetic_workload [out-dir]

use std::fs::File;
use std::path::PathBuf;

use elbmatch::datagen::{GenConfig, RNG_NAME};
use elbmatch::io::{
    write_embed_log, write_metadata, write_pattern_file, write_stream_file, GenMetadata,
};
use elbmatch::{sequential_scan, Result};

fn main() -> Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("elb-workload"));
    std::fs::create_dir_all(&dir)?;

    let mut config = GenConfig::with_defaults(200_000, 3);
    config.occurrence_probability = 5e-5;
    let workload = config.generate()?;
    println!(
        "pattern n={} b={} thresholds {:?}",
        workload.pattern.len(),
        workload.pattern.subpattern_count(),
        workload.pattern.thresholds()
    );
    println!("embedded at {:?}", workload.log.starts);

    let found = sequential_scan(&workload.pattern, &workload.stream, config.p)?;
    let exact = workload
        .log
        .starts
        .iter()
        .filter(|s| found.matches.binary_search(s).is_ok())
        .count();
    println!(
        "{} matching windows, {exact} of them at embedding sites",
        found.matches.len()
    );

    write_stream_file(dir.join("stream.txt"), &workload.stream)?;
    write_pattern_file(dir.join("pattern.txt"), &workload.pattern)?;
    write_embed_log(File::create(dir.join("embed.csv"))?, &workload.log)?;
    let meta = GenMetadata {
        generator: RNG_NAME.to_string(),
        seed: config.seed,
        length: config.length,
        base: config.base,
        probability: config.occurrence_probability,
        threshold_ratio: config.threshold_ratio,
        p: config.p.to_string(),
        noise: config.noise,
        pattern_length: workload.pattern.len(),
        subpatterns: workload.pattern.subpattern_count(),
        embedded: workload.log.starts.len(),
    };
    write_metadata(File::create(dir.join("meta.json"))?, &meta)?;
    println!("wrote {}", dir.display());
    Ok(())
}
