//! Streaming time-series matching for patterns made of consecutive
//! subpatterns, each with its own L_p threshold.
//!
//! A window `W_t` of the stream matches when every aligned segment is within
//! its subpattern's threshold. Instead of testing every window,
//! [`matcher`] splits the pattern into equal-length blocks, derives an
//! interval per block from a pattern envelope ([`envelope`]), and discards
//! `w` consecutive windows at once whenever one block feature of the group's
//! first window falls outside its interval. The bounds never discard a true
//! match; [`oracle::sequential_scan`] is the brute-force reference.
//!
//! ```
//! use elbmatch::{process_stream, ElbVariant, LpOrder, MatcherConfig, Pattern};
//!
//! let pattern = Pattern::new(vec![1.0, 2.0, 3.0, 4.0], vec![2, 2], vec![0.1, 0.2]).unwrap();
//! let config = MatcherConfig::new(pattern, LpOrder::L2, ElbVariant::Seq, 2).unwrap();
//! let mut stream = vec![100.0; 30];
//! stream[10..14].copy_from_slice(&[1.0, 2.0, 3.0, 4.0]);
//! let report = process_stream(&config, stream).unwrap();
//! assert_eq!(report.matches, vec![11]);
//! ```

pub mod bench;
pub mod datagen;
pub mod distance;
pub mod envelope;
pub mod error;
pub mod io;
pub mod matcher;
pub mod oracle;
pub mod pattern;

pub use crate::distance::{exact_match, lp_distance, value_range};
pub use crate::envelope::{
    block_bounds, build_envelope_ele, build_envelope_seq, theta_seq, BlockBounds, ElbVariant,
    Envelope, PrefixMeans,
};
pub use crate::error::{Error, PatternViolation, Result};
pub use crate::matcher::{
    feature_ele, feature_seq, process_stream, prune_group, pruning_power, MatchPlan, MatchReport,
    MatchStats, Matcher, MatcherConfig, PruneOutcome,
};
pub use crate::oracle::{sequential_scan, OracleReport};
pub use crate::pattern::{validate_pattern, LpOrder, Pattern, SubpatternIndex, WindowView};
