//! Parse a pattern file, report validation problems, and rederive
//! thresholds for another L_p order.
//!
//! cargo run -p elbmatch --example pattern_files

use elbmatch::datagen::derive_thresholds;
use elbmatch::io::{format_pattern, parse_pattern};
use elbmatch::{validate_pattern, Error, LpOrder, Result};

const TEXT: &str = "6 2
3 3
0.5 0.25
0.0
1.5
3.0
2.0
2.0
2.5
";

fn main() -> Result<()> {
    let pattern = parse_pattern(TEXT)?;
    println!(
        "parsed n={} with subpatterns {:?}",
        pattern.len(),
        pattern.boundaries()
    );

    for p in [LpOrder::L1, LpOrder::L2, LpOrder::Infinity] {
        let eps = derive_thresholds(pattern.values(), pattern.boundaries(), 0.2, p)?;
        println!("ratio 20%, p={p}: thresholds {eps:?}");
    }

    let broken = "6 2\n3 2\n0.5 -1\n0\n1\n2\n3\n4\n5\n";
    match parse_pattern(broken) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("rejected: {e}"),
    }
    if let Err(Error::InvalidPattern(problems)) =
        validate_pattern(vec![0.0, f64::NAN], vec![1, 2], vec![0.1])
    {
        for v in problems {
            println!("  violation: {v}");
        }
    }

    print!("round trip:\n{}", format_pattern(&pattern));
    Ok(())
}
