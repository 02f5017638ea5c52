//! Sweep the L_p order and time SS against both block variants.
//!
//! cargo run --release -p elbmatch --example benchmark_sweep [length]

use elbmatch::bench::{run_bench, summary_table, write_bench_csv, BenchSpec, Sweep};
use elbmatch::{LpOrder, Result};

fn main() -> Result<()> {
    let length = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(300_000);
    let mut spec = BenchSpec::new(Sweep::P(vec![LpOrder::L1, LpOrder::L2, LpOrder::Infinity]));
    spec.length = length;
    spec.reps = 3;
    spec.threads = std::thread::available_parallelism().map_or(1, |n| n.get());

    let rows = run_bench(&spec)?;
    print!("{}", summary_table(&rows));

    let path = std::env::temp_dir().join("elb-bench-p.csv");
    write_bench_csv(std::fs::File::create(&path)?, &spec, &rows)?;
    println!("csv: {}", path.display());
    Ok(())
}
