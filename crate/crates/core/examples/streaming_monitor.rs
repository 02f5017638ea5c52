//! Feed a sensor-like stream one value at a time and react to matches as
//! soon as their window completes.
//!
//! cargo run -p elbmatch --example streaming_monitor

use elbmatch::datagen::{gust_shape, pattern_with_ratio, random_walk};
use elbmatch::{ElbVariant, LpOrder, MatchPlan, MatcherConfig, Result};

fn main() -> Result<()> {
    let (values, boundaries) = gust_shape(60, 3.0);
    let p = LpOrder::L2;
    let pattern = pattern_with_ratio(values.clone(), boundaries, 0.2, p)?;
    let config = MatcherConfig::with_block_percent(pattern, p, ElbVariant::Seq, 10.0)?;
    let plan = MatchPlan::new(config)?;

    // slow drift with two gusts spliced in
    let mut feed = random_walk(20_000, 11, 0.0);
    for at in [4_000, 15_500] {
        feed[at..at + values.len()].copy_from_slice(&values);
    }

    let mut monitor = plan.matcher();
    for v in feed {
        if let Some(start) = monitor.push(v)? {
            println!(
                "gust detected: window starting at t={start} (now t={})",
                monitor.seen()
            );
        }
    }
    let s = monitor.stats();
    println!(
        "{} windows, {:.2}% pruned, {} exact checks",
        s.windows_total,
        100.0 * s.pruning_power().unwrap_or(0.0),
        s.candidates_verified
    );
    Ok(())
}
