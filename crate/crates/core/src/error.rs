use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input word is not a bijection of `{1..n}`.
    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    /// A position, adjacent-transposition index, or variable index is out of
    /// range for the ambient rank.
    #[error("index out of range: {what} = {got} (rank {n})")]
    IndexOutOfRange {
        what: &'static str,
        got: usize,
        n: usize,
    },

    /// Two values living in different ambient ranks were combined.
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    /// A box was addressed that is not part of the diagram in question.
    #[error("box ({row},{col}) not in diagram")]
    BoxNotInDiagram { row: usize, col: usize },

    /// A structural precondition failed (e.g. transferring a subdiagram of the
    /// wrong shape, or asking for the last descent of the identity).
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// A permutation string could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
