//! Text file formats: patterns, streams, and CSV/JSON outputs.
//!
//! Pattern file:
//!
//! ```text
//! n b
//! |P_1| … |P_b|
//! ε_1 … ε_b
//! p_1
//! …
//! p_n
//! ```
//!
//! Stream file: one value per line; line number is the 1-based timestamp.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::datagen::EmbedLog;
use crate::envelope::Envelope;
use crate::error::{Error, Result};
use crate::matcher::MatchStats;
use crate::pattern::Pattern;

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_pattern(text: &str) -> Result<Pattern> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::parse(0, format!("missing {what} line")))
    };

    let (ln, header) = next("header")?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let [n, b] = head.as_slice() else {
        return Err(Error::parse(ln, "header must be `n b`"));
    };
    let n: usize = parse_num(n, ln, "pattern length")?;
    let b: usize = parse_num(b, ln, "subpattern count")?;

    let (ln, line) = next("subpattern length")?;
    let boundaries = line
        .split_whitespace()
        .map(|t| parse_num::<usize>(t, ln, "subpattern length"))
        .collect::<Result<Vec<_>>>()?;
    if boundaries.len() != b {
        return Err(Error::parse(
            ln,
            format!(
                "expected {b} subpattern lengths, found {}",
                boundaries.len()
            ),
        ));
    }

    let (ln, line) = next("threshold")?;
    let thresholds = line
        .split_whitespace()
        .map(|t| parse_num::<f64>(t, ln, "threshold"))
        .collect::<Result<Vec<_>>>()?;
    if thresholds.len() != b {
        return Err(Error::parse(
            ln,
            format!("expected {b} thresholds, found {}", thresholds.len()),
        ));
    }

    let mut values = Vec::with_capacity(n);
    let mut last = 3;
    for (ln, line) in lines {
        last = ln;
        if line.is_empty() {
            continue;
        }
        if values.len() == n {
            return Err(Error::parse(ln, format!("more than n={n} values")));
        }
        values.push(parse_num::<f64>(line, ln, "pattern value")?);
    }
    if values.len() != n {
        return Err(Error::parse(
            last,
            format!("expected n={n} values, found {}", values.len()),
        ));
    }
    Pattern::new(values, boundaries, thresholds)
}

pub fn format_pattern(pattern: &Pattern) -> String {
    let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
    let mut out = format!("{} {}\n", pattern.len(), pattern.subpattern_count());
    out += &join(&mut pattern.boundaries().iter().map(|b| b.to_string()));
    out.push('\n');
    out += &join(&mut pattern.thresholds().iter().map(|e| e.to_string()));
    out.push('\n');
    for v in pattern.values() {
        out += &format!("{v}\n");
    }
    out
}

pub fn read_pattern_file(path: impl AsRef<Path>) -> Result<Pattern> {
    parse_pattern(&std::fs::read_to_string(path)?)
}

pub fn write_pattern_file(path: impl AsRef<Path>, pattern: &Pattern) -> Result<()> {
    std::fs::write(path, format_pattern(pattern))?;
    Ok(())
}

/// Parse a stream; blank lines are only allowed at the end.
pub fn read_stream(reader: impl BufRead) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    let mut blank_at = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            blank_at.get_or_insert(i + 1);
            continue;
        }
        if let Some(b) = blank_at {
            return Err(Error::parse(b, "blank line inside stream"));
        }
        values.push(parse_num::<f64>(line, i + 1, "stream value")?);
    }
    Ok(values)
}

pub fn read_stream_file(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    read_stream(BufReader::new(File::open(path)?))
}

pub fn write_stream(mut out: impl Write, values: &[f64]) -> Result<()> {
    for v in values {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

pub fn write_stream_file(path: impl AsRef<Path>, values: &[f64]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_stream(&mut out, values)?;
    out.flush()?;
    Ok(())
}

fn write_column(mut out: impl Write, header: &str, values: &[u64]) -> Result<()> {
    writeln!(out, "{header}")?;
    for v in values {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

/// `match_start` CSV.
pub fn write_matches(out: impl Write, matches: &[u64]) -> Result<()> {
    write_column(out, "match_start", matches)
}

/// `embed_start` CSV.
pub fn write_embed_log(out: impl Write, log: &EmbedLog) -> Result<()> {
    write_column(out, "embed_start", &log.starts)
}

pub const STATS_HEADER: &str = "windows_total,windows_pruned,candidates_verified,block_checks,\
element_touches_pruning,element_touches_verify,pruning_power";

/// Single-row stats CSV; `pruning_power` is `NA` without windows.
pub fn write_stats(mut out: impl Write, stats: &MatchStats) -> Result<()> {
    let power = stats
        .pruning_power()
        .map_or_else(|| "NA".to_string(), |p| p.to_string());
    writeln!(out, "{STATS_HEADER}")?;
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        stats.windows_total,
        stats.windows_pruned,
        stats.candidates_verified,
        stats.block_checks,
        stats.element_touches_pruning,
        stats.element_touches_verify,
        power
    )?;
    Ok(())
}

/// `index,upper,lower` CSV over the envelope's valid positions.
pub fn write_envelope(mut out: impl Write, envelope: &Envelope) -> Result<()> {
    writeln!(out, "index,upper,lower")?;
    for (i, u, l) in envelope.iter() {
        writeln!(out, "{i},{u},{l}")?;
    }
    Ok(())
}

/// Sidecar describing how a stream was generated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenMetadata {
    pub generator: String,
    pub seed: u64,
    pub length: usize,
    pub base: f64,
    pub probability: f64,
    pub threshold_ratio: f64,
    pub p: String,
    pub noise: f64,
    pub pattern_length: usize,
    pub subpatterns: usize,
    pub embedded: usize,
}

pub fn write_metadata(out: impl Write, meta: &GenMetadata) -> Result<()> {
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, meta)?;
    writeln!(out)?;
    Ok(())
}

pub fn read_metadata(path: impl AsRef<Path>) -> Result<GenMetadata> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}
