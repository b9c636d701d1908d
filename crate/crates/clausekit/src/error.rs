use std::io;

use thiserror::Error;

use crate::encoding::{BalanceViolation, ClauseSpan};

/// Errors produced by corpus I/O, tag parsing and the pipeline operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A corpus line did not match the declared column layout.
    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    /// The input contained no sentences.
    #[error("empty corpus: input contains no token lines")]
    EmptyCorpus,

    /// A column layout problem: duplicate/missing roles, or a role the
    /// corpus does not carry.
    #[error("layout error: {0}")]
    Layout(String),

    /// An annotation string that is not a well-formed clause tag.
    #[error("tag syntax error: {text:?} is not a valid {expected} tag")]
    TagSyntax {
        text: String,
        expected: &'static str,
    },

    /// A bracket-tag sequence that is not balanced.
    #[error("unbalanced clause tags: {0}")]
    Unbalanced(BalanceViolation),

    /// Two clause spans that overlap without nesting.
    #[error("nesting error: spans ({},{}) and ({},{}) cross", a.begin, a.end, b.begin, b.end)]
    Nesting { a: ClauseSpan, b: ClauseSpan },

    /// A span that does not fit the sentence it is attached to.
    #[error("span ({},{}) out of range for sentence of length {len}", span.begin, span.end)]
    SpanOutOfRange { span: ClauseSpan, len: usize },

    /// A span whose end precedes its begin.
    #[error("invalid span: begin {begin} exceeds end {end}")]
    InvalidSpan { begin: usize, end: usize },

    /// Gold and prediction inputs that do not line up token for token.
    #[error("alignment error at sentence {sentence}: {message}")]
    Alignment { sentence: usize, message: String },

    /// Boundary columns of unequal length handed to the assembler.
    #[error("input error: start column has {starts} tokens but end column has {ends}")]
    ColumnLengthMismatch { starts: usize, ends: usize },

    /// A malformed treebank S-expression.
    #[error("parse error at offset {offset}: {message}")]
    TreeSyntax { offset: usize, message: String },

    /// A parse tree whose leaves are all empty elements.
    #[error("empty sentence: tree has no non-empty leaves")]
    EmptySentence,

    /// A model file that does not follow the expected line format.
    #[error("model format error at line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
