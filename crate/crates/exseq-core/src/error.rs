use thiserror::Error;

use crate::variety::LineBundle;

/// Errors raised by the library. Variants that signal an internal bug carry
/// the offending data so a failing run can be diagnosed from the message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid variety spec: {0}")]
    InvalidSpec(String),
    #[error("sublattice generators are linearly dependent")]
    SingularLattice,
    #[error("duplicate line bundle {0}")]
    Duplicate(LineBundle),
    #[error("not exceptional: {0}")]
    NotExceptional(String),
    #[error("relation contains the cycle {0:?}")]
    Cycle(Vec<usize>),
    #[error("reverse of the forced pair ({0}, {1}) is already present")]
    ReversedPair(usize, usize),
    #[error("{0} and {1} are not mutually orthogonal")]
    NotOrthogonal(LineBundle, LineBundle),
    #[error("no rewrite pattern matches at position {0}")]
    PatternMismatch(usize),
    #[error("position {0} is out of range")]
    OutOfRange(usize),
    #[error("unsupported for {0}")]
    Unsupported(String),
    #[error("{0} lies outside the oracle window")]
    OutOfWindow(LineBundle),
    #[error("set is not of layered shape: {0}")]
    NotLayered(String),
    #[error("admissible-set rule violated: {0}")]
    Inadmissible(String),
    #[error("set matches no classification template")]
    Unclassified,
    #[error("element with non-unit constant term is not invertible")]
    NonUnit,
    #[error("sequence is not strongly exceptional")]
    NotStrong,
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
