//! Sequential scanning: verify every sliding window, no pruning.
//!
//! This is both the correctness reference for the block-pruning matcher and
//! the baseline its speedup is measured against.

use crate::distance::exact_match_counted;
use crate::error::{Error, Result};
use crate::pattern::{LpOrder, Pattern};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    /// 1-based start timestamps of matching windows, ascending.
    pub matches: Vec<u64>,
    /// Element pairs compared.
    pub element_touches: u64,
    pub windows_total: u64,
}

pub fn sequential_scan(pattern: &Pattern, stream: &[f64], p: LpOrder) -> Result<OracleReport> {
    if let Some(i) = stream.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            timestamp: i as u64 + 1,
            value: stream[i],
        });
    }
    let mut report = OracleReport::default();
    for (start, window) in stream.windows(pattern.len()).enumerate() {
        let (ok, touched) = exact_match_counted(pattern, window, p);
        report.element_touches += touched;
        report.windows_total += 1;
        if ok {
            report.matches.push(start as u64 + 1);
        }
    }
    Ok(report)
}
