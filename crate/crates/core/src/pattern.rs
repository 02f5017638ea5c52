//! Patterns made of consecutive subpatterns, each with its own threshold.
//!
//! Positions are 0-based in the API below. Timestamps that leave the
//! library (match lists, CSV files) are 1-based.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, PatternViolation, Result};

/// Order of the L_p norm used for distances and bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpOrder {
    Finite(u32),
    Infinity,
}

impl LpOrder {
    pub const L1: Self = Self::Finite(1);
    pub const L2: Self = Self::Finite(2);

    pub fn finite(p: u32) -> Result<Self> {
        if p == 0 {
            return Err(Error::usage("L_p order must be ≥ 1"));
        }
        Ok(Self::Finite(p))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinity)
    }

    /// `p` as a float; `f64::INFINITY` for the max norm.
    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(p) => f64::from(p),
            Self::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for LpOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => f.pad(&p.to_string()),
            Self::Infinity => f.pad("inf"),
        }
    }
}

impl FromStr for LpOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" | "max" => Ok(Self::Infinity),
            other => other
                .parse::<u32>()
                .map_err(|_| Error::usage(format!("invalid L_p order `{s}`")))
                .and_then(Self::finite),
        }
    }
}

/// Alignment of pattern positions to subpattern ids.
#[derive(Clone, Debug, PartialEq)]
pub struct SubpatternIndex {
    // offsets[k]..offsets[k + 1] is subpattern k; offsets has b + 1 entries.
    offsets: Vec<usize>,
    pos_to_subpattern: Vec<usize>,
}

impl SubpatternIndex {
    fn new(boundaries: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(boundaries.len() + 1);
        offsets.push(0);
        let mut pos_to_subpattern = Vec::new();
        for (k, &len) in boundaries.iter().enumerate() {
            offsets.push(offsets[k] + len);
            pos_to_subpattern.extend(std::iter::repeat_n(k, len));
        }
        Self {
            offsets,
            pos_to_subpattern,
        }
    }

    /// Subpattern id `k(i)` of position `i`.
    #[inline]
    pub fn subpattern_of(&self, i: usize) -> usize {
        self.pos_to_subpattern[i]
    }

    /// Half-open position range of subpattern `k`.
    #[inline]
    pub fn range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A pattern `P = P_1 ‖ … ‖ P_b` with thresholds `ε_1 … ε_b`.
///
/// Construction goes through [`validate_pattern`], so every `Pattern` in
/// circulation satisfies its invariants and is immutable afterwards.
#[derive(Clone, Debug, PartialEq)]
pub struct Pattern {
    values: Vec<f64>,
    boundaries: Vec<usize>,
    thresholds: Vec<f64>,
    index: SubpatternIndex,
}

impl Pattern {
    pub fn new(values: Vec<f64>, boundaries: Vec<usize>, thresholds: Vec<f64>) -> Result<Self> {
        validate_pattern(values, boundaries, thresholds)
    }

    /// A pattern with a single subpattern spanning all values.
    pub fn single(values: Vec<f64>, threshold: f64) -> Result<Self> {
        let n = values.len();
        Self::new(values, vec![n], vec![threshold])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn index(&self) -> &SubpatternIndex {
        &self.index
    }

    /// Pattern length `n`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of subpatterns `b`.
    pub fn subpattern_count(&self) -> usize {
        self.boundaries.len()
    }

    pub fn subpattern(&self, k: usize) -> &[f64] {
        &self.values[self.index.range(k)]
    }

    /// Threshold of the subpattern containing position `i`.
    #[inline]
    pub fn threshold_at(&self, i: usize) -> f64 {
        self.thresholds[self.index.subpattern_of(i)]
    }

    /// Same values and boundaries, new thresholds.
    pub fn with_thresholds(&self, thresholds: Vec<f64>) -> Result<Self> {
        Self::new(self.values.clone(), self.boundaries.clone(), thresholds)
    }

    /// Largest absolute pattern value plus largest threshold; a scale for
    /// rounding margins.
    pub(crate) fn magnitude(&self) -> f64 {
        let v = self.values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let e = self.thresholds.iter().fold(0.0_f64, |m, x| m.max(*x));
        v + e
    }
}

/// Check every pattern invariant and report all violations at once.
pub fn validate_pattern(
    values: Vec<f64>,
    boundaries: Vec<usize>,
    thresholds: Vec<f64>,
) -> Result<Pattern> {
    let mut violations = Vec::new();
    if values.is_empty() {
        violations.push(PatternViolation::EmptyValues);
    }
    if boundaries.is_empty() {
        violations.push(PatternViolation::NoSubpatterns);
    }
    for (k, &len) in boundaries.iter().enumerate() {
        if len == 0 {
            violations.push(PatternViolation::EmptySubpattern { k: k + 1 });
        }
    }
    let sum: usize = boundaries.iter().sum();
    if !boundaries.is_empty() && sum != values.len() {
        violations.push(PatternViolation::BoundarySum {
            sum,
            n: values.len(),
        });
    }
    if thresholds.len() != boundaries.len() {
        violations.push(PatternViolation::ThresholdCount {
            thresholds: thresholds.len(),
            subpatterns: boundaries.len(),
        });
    }
    for (k, &eps) in thresholds.iter().enumerate() {
        if !eps.is_finite() {
            violations.push(PatternViolation::NonFiniteThreshold { k: k + 1 });
        } else if eps < 0.0 {
            violations.push(PatternViolation::NegativeThreshold {
                k: k + 1,
                value: eps,
            });
        }
    }
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            violations.push(PatternViolation::NonFiniteValue { index: i + 1 });
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidPattern(violations));
    }
    let index = SubpatternIndex::new(&boundaries);
    Ok(Pattern {
        values,
        boundaries,
        thresholds,
        index,
    })
}

/// The `n` stream elements of window `W_t`.
#[derive(Clone, Copy, Debug)]
pub struct WindowView<'a> {
    /// 1-based timestamp of the first element.
    pub start: u64,
    pub values: &'a [f64],
}

impl<'a> WindowView<'a> {
    pub fn new(start: u64, values: &'a [f64]) -> Self {
        Self { start, values }
    }

    /// Window starting at 1-based timestamp `start` of `stream`, if it fits.
    pub fn of(stream: &'a [f64], start: u64, n: usize) -> Option<Self> {
        let from = usize::try_from(start).ok()?.checked_sub(1)?;
        stream
            .get(from..from.checked_add(n)?)
            .map(|values| Self { start, values })
    }
}
