//! Print the per-position envelopes and the per-block intervals that the
//! matcher prunes with.
//!
//! cargo run -p elbmatch --example envelopes

use elbmatch::datagen::pattern_with_ratio;
use elbmatch::{block_bounds, build_envelope_ele, build_envelope_seq, LpOrder, Result};

fn main() -> Result<()> {
    let values: Vec<f64> = (0..12).map(|i| (i as f64 * 0.6).sin() * 2.0).collect();
    let p = LpOrder::L2;
    let pattern = pattern_with_ratio(values, vec![6, 6], 0.2, p)?;
    let w = 3;
    println!("thresholds {:?}", pattern.thresholds());

    let ele = build_envelope_ele(&pattern);
    let seq = build_envelope_seq(&pattern, w, p)?;
    println!(
        "{:>3} {:>8} {:>8} {:>8} {:>8}",
        "i", "ele lo", "ele hi", "seq lo", "seq hi"
    );
    for (i, u, l) in ele.iter() {
        let seq_cells = match (seq.lower(i), seq.upper(i)) {
            (Some(sl), Some(su)) => format!("{sl:>8.3} {su:>8.3}"),
            _ => format!("{:>8} {:>8}", "-", "-"),
        };
        println!("{i:>3} {l:>8.3} {u:>8.3} {seq_cells}");
    }

    for env in [&ele, &seq] {
        let bounds = block_bounds(env, w, pattern.len())?;
        println!(
            "{} blocks (active from {}):",
            env.variant(),
            bounds.active_from()
        );
        for j in 1..=bounds.block_count() {
            let (lo, hi) = bounds.interval(j);
            println!("  block {j}: [{lo:.3}, {hi:.3}]");
        }
    }
    Ok(())
}
