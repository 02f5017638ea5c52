//! Match a two-part pattern against a short stream with both block
//! variants and compare with the brute-force scan.
//!
//! cargo run -p elbmatch --example basic_matching

use elbmatch::{
    process_stream, sequential_scan, ElbVariant, LpOrder, MatcherConfig, Pattern, Result,
};

fn main() -> Result<()> {
    // a ramp followed by a plateau; the plateau tolerates more deviation
    let values = vec![0.0, 1.0, 2.0, 3.0, 4.0, 4.0, 4.0, 4.0];
    let pattern = Pattern::new(values.clone(), vec![4, 4], vec![0.3, 0.8])?;

    let mut stream: Vec<f64> = (0..200).map(|i| 10.0 + (i as f64 * 0.37).sin()).collect();
    stream[20..28].copy_from_slice(&values);
    let noisy: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, v)| v + 0.1 * (i % 2) as f64)
        .collect();
    stream[120..128].copy_from_slice(&noisy);

    let p = LpOrder::L2;
    let oracle = sequential_scan(&pattern, &stream, p)?;
    println!("sequential scan: {:?}", oracle.matches);

    for variant in [ElbVariant::Ele, ElbVariant::Seq] {
        let config = MatcherConfig::new(pattern.clone(), p, variant, 2)?;
        let report = process_stream(&config, stream.iter().copied())?;
        let s = report.stats;
        println!(
            "{variant}: matches {:?}, {} of {} windows pruned, {} verified",
            report.matches, s.windows_pruned, s.windows_total, s.candidates_verified
        );
        assert_eq!(report.matches, oracle.matches);
    }
    Ok(())
}
