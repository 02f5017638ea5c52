use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One broken pattern invariant, with enough context to locate it.
#[derive(Clone, Debug, PartialEq)]
pub enum PatternViolation {
    NoSubpatterns,
    EmptyValues,
    EmptySubpattern {
        k: usize,
    },
    BoundarySum {
        sum: usize,
        n: usize,
    },
    ThresholdCount {
        thresholds: usize,
        subpatterns: usize,
    },
    NegativeThreshold {
        k: usize,
        value: f64,
    },
    NonFiniteThreshold {
        k: usize,
    },
    NonFiniteValue {
        index: usize,
    },
}

impl fmt::Display for PatternViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoSubpatterns => write!(f, "pattern has no subpatterns (b = 0)"),
            Self::EmptyValues => write!(f, "pattern has no values"),
            Self::EmptySubpattern { k } => write!(f, "subpattern k={k} has length 0"),
            Self::BoundarySum { sum, n } => write!(f, "boundaries sum {sum} ≠ n={n}"),
            Self::ThresholdCount {
                thresholds,
                subpatterns,
            } => write!(
                f,
                "{thresholds} thresholds given for {subpatterns} subpatterns"
            ),
            Self::NegativeThreshold { k, value } => {
                write!(f, "negative threshold at k={k} ({value})")
            }
            Self::NonFiniteThreshold { k } => write!(f, "non-finite threshold at k={k}"),
            Self::NonFiniteValue { index } => write!(f, "non-finite pattern value at i={index}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid pattern: {}", join(.0))]
    InvalidPattern(Vec<PatternViolation>),

    /// Caller passed arguments that violate an operation's preconditions.
    #[error("{0}")]
    Usage(String),

    #[error("non-finite stream value {value} at timestamp {timestamp}")]
    NonFinite { timestamp: u64, value: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(
        "embedding saturated: {rejected} overlapping sites rejected against {accepted} placed \
         (probability {probability} with pattern length {pattern_len})"
    )]
    Saturated {
        accepted: usize,
        rejected: usize,
        probability: f64,
        pattern_len: usize,
    },

    /// An internal consistency check failed.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Self::Parse {
            line,
            message: msg.into(),
        }
    }

    /// Process exit code: 2 for usage errors, 1 for data and runtime errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn join(violations: &[PatternViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
