//! The published reference system: every sentence is exactly one clause
//! covering the whole sentence.

use crate::corpus::Sentence;
use crate::encoding::{BoundaryTag, ClauseSet, ClauseSpan};

/// The baseline's output for one sentence: one full-sentence clause, a start
/// flag on the first token and an end flag on the last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselinePrediction {
    pub clauses: ClauseSet,
    pub starts: Vec<BoundaryTag>,
    pub ends: Vec<BoundaryTag>,
}

pub fn baseline_predict(sentence: &Sentence) -> BaselinePrediction {
    let length = sentence.len();
    let mut starts = vec![BoundaryTag::NoMark; length];
    let mut ends = vec![BoundaryTag::NoMark; length];
    starts[0] = BoundaryTag::Mark;
    ends[length - 1] = BoundaryTag::Mark;
    BaselinePrediction {
        clauses: ClauseSet::try_from_spans(vec![ClauseSpan::new(0, length - 1)])
            .expect("a single full-sentence span is always valid"),
        starts,
        ends,
    }
}
