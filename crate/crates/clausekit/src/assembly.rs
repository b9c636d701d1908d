//! Turning part-1 start flags and part-2 end flags into a balanced clause
//! multiset.
//!
//! The core is a LIFO pass: starts push their token index, each end flag
//! pops the most recent open and emits a span, an end flag with nothing open
//! is ignored. What happens to opens still pending at the end of the
//! sentence is the policy's business. Binary flags cannot express double
//! opens or closes, so no policy can recover every gold bracketing; see the
//! exact-recovery property in the tests for the regime where recovery is
//! lossless.

use std::fmt;
use std::str::FromStr;

use crate::encoding::{BoundaryTag, ClauseSet, ClauseSpan};
use crate::error::{Error, Result};

/// How unmatched opens are resolved after the LIFO pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ClosurePolicy {
    /// Drop them.
    #[default]
    Strict,
    /// Close each at the last end-flagged token; opens past that token are
    /// dropped (a clause cannot end before it starts). No-op when the
    /// sentence has no end flag.
    CloseAtLastFlag,
    /// Close each at the final token of the sentence.
    CloseAtSentenceEnd,
}

impl ClosurePolicy {
    pub fn name(self) -> &'static str {
        match self {
            ClosurePolicy::Strict => "strict",
            ClosurePolicy::CloseAtLastFlag => "close-at-last-flag",
            ClosurePolicy::CloseAtSentenceEnd => "close-at-sentence-end",
        }
    }
}

impl fmt::Display for ClosurePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClosurePolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "strict" => Ok(ClosurePolicy::Strict),
            "close-at-last-flag" => Ok(ClosurePolicy::CloseAtLastFlag),
            "close-at-sentence-end" => Ok(ClosurePolicy::CloseAtSentenceEnd),
            _ => Err(format!(
                "unknown policy {s:?}; expected strict, close-at-last-flag or close-at-sentence-end"
            )),
        }
    }
}

/// A named strategy for balancing the flag columns.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AssemblyPolicy {
    pub closure: ClosurePolicy,
    /// Wrap the whole sentence in one clause when the result is non-empty
    /// and no produced span already covers it.
    pub add_sentence_clause: bool,
}

impl AssemblyPolicy {
    pub fn new(closure: ClosurePolicy, add_sentence_clause: bool) -> AssemblyPolicy {
        AssemblyPolicy {
            closure,
            add_sentence_clause,
        }
    }
}

/// Assembles start and end flags into a clause multiset. The output always
/// satisfies the non-crossing invariant, whatever the inputs.
pub fn assemble(
    starts: &[BoundaryTag],
    ends: &[BoundaryTag],
    policy: AssemblyPolicy,
) -> Result<ClauseSet> {
    if starts.len() != ends.len() {
        return Err(Error::ColumnLengthMismatch {
            starts: starts.len(),
            ends: ends.len(),
        });
    }
    let length = starts.len();
    let mut open: Vec<usize> = Vec::new();
    let mut spans: Vec<ClauseSpan> = Vec::new();
    let mut last_end_flag: Option<usize> = None;
    for i in 0..length {
        if starts[i].is_mark() {
            open.push(i);
        }
        if ends[i].is_mark() {
            last_end_flag = Some(i);
            if let Some(begin) = open.pop() {
                spans.push(ClauseSpan::new(begin, i));
            }
        }
    }
    match policy.closure {
        ClosurePolicy::Strict => {}
        ClosurePolicy::CloseAtLastFlag => {
            if let Some(end) = last_end_flag {
                while let Some(begin) = open.pop() {
                    if begin <= end {
                        spans.push(ClauseSpan::new(begin, end));
                    }
                }
            }
        }
        ClosurePolicy::CloseAtSentenceEnd => {
            if length > 0 {
                while let Some(begin) = open.pop() {
                    spans.push(ClauseSpan::new(begin, length - 1));
                }
            }
        }
    }
    if policy.add_sentence_clause && length > 0 && !spans.is_empty() {
        let whole = ClauseSpan::new(0, length - 1);
        if !spans.contains(&whole) {
            spans.push(whole);
        }
    }
    ClauseSet::try_from_spans(spans)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(length: usize, marked: &[usize]) -> Vec<BoundaryTag> {
        let mut col = vec![BoundaryTag::NoMark; length];
        for &i in marked {
            col[i] = BoundaryTag::Mark;
        }
        col
    }

    fn set(spans: &[(usize, usize)]) -> ClauseSet {
        ClauseSet::try_from_spans(spans.iter().map(|&(b, e)| ClauseSpan::new(b, e)).collect())
            .unwrap()
    }

    /// The worked example's boundary columns: starts {0,3,5,7}, ends
    /// {4,11,12}. Token 11 carries a double close in the gold bracketing,
    /// so binary flags cannot recover the gold multiset.
    #[test]
    fn strict_on_worked_example_flags() {
        let out = assemble(
            &flags(13, &[0, 3, 5, 7]),
            &flags(13, &[4, 11, 12]),
            AssemblyPolicy::default(),
        )
        .unwrap();
        assert_eq!(out, set(&[(3, 4), (7, 11), (5, 12)]));
    }

    #[test]
    fn close_at_sentence_end_on_worked_example_flags() {
        let out = assemble(
            &flags(13, &[0, 3, 5, 7]),
            &flags(13, &[4, 11, 12]),
            AssemblyPolicy::new(ClosurePolicy::CloseAtSentenceEnd, false),
        )
        .unwrap();
        assert_eq!(out, set(&[(3, 4), (7, 11), (5, 12), (0, 12)]));
    }

    #[test]
    fn no_flags_yield_empty_set() {
        for closure in [
            ClosurePolicy::Strict,
            ClosurePolicy::CloseAtLastFlag,
            ClosurePolicy::CloseAtSentenceEnd,
        ] {
            let out = assemble(
                &flags(5, &[]),
                &flags(5, &[]),
                AssemblyPolicy::new(closure, false),
            )
            .unwrap();
            assert!(out.is_empty(), "{closure}");
        }
    }

    #[test]
    fn single_balanced_pair_under_every_policy() {
        for closure in [
            ClosurePolicy::Strict,
            ClosurePolicy::CloseAtLastFlag,
            ClosurePolicy::CloseAtSentenceEnd,
        ] {
            for add in [false, true] {
                let out = assemble(
                    &flags(7, &[0]),
                    &flags(7, &[6]),
                    AssemblyPolicy::new(closure, add),
                )
                .unwrap();
                assert_eq!(out, set(&[(0, 6)]), "{closure} add={add}");
            }
        }
    }

    #[test]
    fn unmatched_end_flag_is_ignored() {
        let out = assemble(&flags(3, &[]), &flags(3, &[0]), AssemblyPolicy::default()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn close_at_last_flag_closes_pending_opens() {
        let out = assemble(
            &flags(8, &[0, 3]),
            &flags(8, &[5]),
            AssemblyPolicy::new(ClosurePolicy::CloseAtLastFlag, false),
        )
        .unwrap();
        assert_eq!(out, set(&[(3, 5), (0, 5)]));
    }

    #[test]
    fn close_at_last_flag_drops_opens_past_the_flag() {
        // End at 1 matched the open at 0; the open at 2 lies past the last
        // end flag and cannot be closed before it starts.
        let out = assemble(
            &flags(4, &[0, 2]),
            &flags(4, &[1]),
            AssemblyPolicy::new(ClosurePolicy::CloseAtLastFlag, false),
        )
        .unwrap();
        assert_eq!(out, set(&[(0, 1)]));
    }

    #[test]
    fn close_at_last_flag_without_any_end_flag_is_strict() {
        let out = assemble(
            &flags(4, &[1]),
            &flags(4, &[]),
            AssemblyPolicy::new(ClosurePolicy::CloseAtLastFlag, false),
        )
        .unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn sentence_clause_added_only_to_non_empty_results() {
        let policy = AssemblyPolicy::new(ClosurePolicy::Strict, true);
        let empty = assemble(&flags(5, &[]), &flags(5, &[]), policy).unwrap();
        assert!(empty.is_empty());
        let out = assemble(&flags(5, &[1]), &flags(5, &[2]), policy).unwrap();
        assert_eq!(out, set(&[(1, 2), (0, 4)]));
    }

    #[test]
    fn sentence_clause_not_duplicated() {
        let policy = AssemblyPolicy::new(ClosurePolicy::Strict, true);
        let out = assemble(&flags(5, &[0]), &flags(5, &[4]), policy).unwrap();
        assert_eq!(out, set(&[(0, 4)]));
    }

    #[test]
    fn length_mismatch_is_an_input_error() {
        let err = assemble(&flags(3, &[]), &flags(4, &[]), AssemblyPolicy::default()).unwrap_err();
        assert!(matches!(err, Error::ColumnLengthMismatch { .. }), "{err}");
    }

    #[test]
    fn strict_output_is_a_sub_multiset_of_close_at_sentence_end() {
        let starts = flags(10, &[0, 2, 4, 7]);
        let ends = flags(10, &[3, 5]);
        let strict = assemble(&starts, &ends, AssemblyPolicy::default()).unwrap();
        let closed = assemble(
            &starts,
            &ends,
            AssemblyPolicy::new(ClosurePolicy::CloseAtSentenceEnd, false),
        )
        .unwrap();
        assert!(strict.is_subset_of(&closed));
        assert_eq!(closed.len(), strict.len() + 2);
    }
}
