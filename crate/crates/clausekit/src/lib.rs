//! Toolkit for clause identification over shallow-parsed text: reading and
//! writing clause-annotated corpora, converting between the task's three
//! clause encodings, assembling complete embedded clauses from boundary
//! flags, a whole-sentence baseline, a small trainable boundary predictor,
//! span-level scoring, and a seeded corpus generator for testing.
//!
//! The task splits clause identification into three parts — flagging clause
//! starts, flagging clause ends, and producing the full embedded bracketing
//! — and this crate follows that structure module by module:
//!
//! * [`corpus`] — the column file format and in-memory model;
//! * [`treebank`] — extracting gold clauses from bracketed parse trees;
//! * [`encoding`] — the tag algebra and span conversions;
//! * [`assembly`] — boundary flags to balanced clause sets;
//! * [`baseline`] — one whole-sentence clause per sentence;
//! * [`predictor`] — a POS-trigram reference model for the flag columns;
//! * [`scoring`] — precision/recall/F-beta over spans and flags;
//! * [`synth`] — seeded random corpora with controllable nesting.

pub mod assembly;
pub mod baseline;
pub mod corpus;
pub mod encoding;
pub mod error;
pub mod predictor;
pub mod scoring;
pub mod synth;
pub mod treebank;

pub use assembly::{assemble, AssemblyPolicy, ClosurePolicy};
pub use baseline::{baseline_predict, BaselinePrediction};
pub use corpus::{
    corpus_to_string, read_corpus, write_corpus, ColumnLayout, ColumnRole, Corpus, Sentence, Token,
};
pub use encoding::{
    derive_boundaries, format_bracket_tag, parse_boundary_column, parse_bracket_tag,
    parse_clause_column, spans_from_tags, spans_to_tags, validate, BalanceViolation, BoundaryKind,
    BoundaryTag, BracketTag, ClauseSet, ClauseSpan, TaskPart,
};
pub use error::{Error, Result};
pub use predictor::{predict, train, ContextModel};
pub use scoring::{f_measure, score_boundaries, score_clauses, PartCounts, Score};
pub use synth::{generate, GenerateConfig};
pub use treebank::{extract_clauses, parse_trees, ParseNode};
