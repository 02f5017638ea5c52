//! L_p distances and exact consecutive-subpattern verification.

use crate::error::{Error, Result};
use crate::pattern::{LpOrder, Pattern, WindowView};

/// L_p distance between two equal-length sequences.
///
/// Finite orders accumulate `|x_i - y_i|^p` left to right and take the
/// p-th root; `LpOrder::Infinity` is the maximum absolute difference.
pub fn lp_distance(x: &[f64], y: &[f64], p: LpOrder) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::usage(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(Error::usage("distance of empty sequences"));
    }
    if let Some(i) = x.iter().chain(y).position(|v| !v.is_finite()) {
        return Err(Error::usage(format!(
            "non-finite input at position {}",
            i % x.len() + 1
        )));
    }
    Ok(lp_distance_unchecked(x, y, p))
}

#[inline]
pub(crate) fn lp_distance_unchecked(x: &[f64], y: &[f64], p: LpOrder) -> f64 {
    match p {
        LpOrder::Infinity => x
            .iter()
            .zip(y)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())),
        LpOrder::Finite(1) => x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum(),
        LpOrder::Finite(2) => x
            .iter()
            .zip(y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt(),
        LpOrder::Finite(k) => {
            let e = k as i32;
            let sum: f64 = x.iter().zip(y).map(|(a, b)| (a - b).abs().powi(e)).sum();
            sum.powf(1.0 / f64::from(k))
        }
    }
}

/// Whether window `W_t` matches: `L_p(P_k, W_{t,k}) ≤ ε_k` for every `k`.
pub fn exact_match(pattern: &Pattern, window: &WindowView<'_>, p: LpOrder) -> Result<bool> {
    if window.values.len() != pattern.len() {
        return Err(Error::usage(format!(
            "window length {} ≠ pattern length {}",
            window.values.len(),
            pattern.len()
        )));
    }
    Ok(exact_match_counted(pattern, window.values, p).0)
}

/// Subpatterns in order, stopping at the first violation. Also returns the
/// number of element pairs compared.
#[inline]
pub(crate) fn exact_match_counted(pattern: &Pattern, window: &[f64], p: LpOrder) -> (bool, u64) {
    debug_assert_eq!(window.len(), pattern.len());
    let values = pattern.values();
    let index = pattern.index();
    let mut touched = 0u64;
    for (k, &eps) in pattern.thresholds().iter().enumerate() {
        let r = index.range(k);
        touched += r.len() as u64;
        let d = lp_distance_unchecked(&values[r.clone()], &window[r], p);
        if d > eps {
            return (false, touched);
        }
    }
    (true, touched)
}

/// `max - min` of a non-empty segment.
pub fn value_range(segment: &[f64]) -> Result<f64> {
    if segment.is_empty() {
        return Err(Error::usage("value range of empty segment"));
    }
    let (lo, hi) = segment
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    Ok(hi - lo)
}
