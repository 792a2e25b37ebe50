//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The model document is not valid JSON or does not match the format.
    /// The message carries serde_json's line/column information.
    #[error("model parse error: {0}")]
    ModelParse(String),

    #[error("unknown sort `{name}` referenced by {context}")]
    UnknownSort { name: String, context: String },

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("unknown cycle `{0}`")]
    UnknownCycle(String),

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("state {state} out of range for sort `{sort}` (carrier size {size}) in {context}")]
    StateOutOfRange {
        sort: String,
        size: usize,
        state: usize,
        context: String,
    },

    #[error("width mismatch in {context}: expected {expected}, found {found}")]
    WidthMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("sort mismatch in {context}: expected `{expected}`, found `{found}`")]
    SortMismatch {
        context: String,
        expected: String,
        found: String,
    },

    #[error("relation is not endogenous: from `{from}`, to `{to}`")]
    NotEndogenous { from: String, to: String },

    #[error("empty predicate in family: {0}")]
    EmptyPredicateInFamily(String),

    #[error("ill-typed belief cycle: {0}")]
    IllTypedCycle(String),

    #[error("syntax error at byte {pos}: {message}")]
    FormulaSyntax { pos: usize, message: String },

    #[error("sort conflict: {0}")]
    SortConflict(String),

    #[error("formula sort is ambiguous; supply a sort hint")]
    AmbiguousSort,

    #[error("precondition not met: {0}")]
    PreconditionFailed(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("carrier at level {level} would have {attempted} elements, over the cap of {cap}")]
    ResourceCap {
        level: usize,
        attempted: u128,
        cap: usize,
    },

    /// Like [`Error::ResourceCap`], but raised by whole-sequence construction
    /// and carrying the stages completed before the cap was hit.
    #[error("terminal sequence capped at level {level}: next carrier would have {attempted} elements (cap {cap})")]
    SequenceCapped {
        level: usize,
        attempted: u128,
        cap: usize,
        partial: Box<crate::coalgebra::TerminalSequence>,
    },

    #[error("needs stages through level {needed}, but the sequence has levels 0..={have}")]
    InsufficientDepth { needed: usize, have: usize },

    #[error("invalid strategy profile: {0}")]
    InvalidProfile(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
